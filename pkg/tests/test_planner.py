import itertools
import math

import numpy as np
import pytest

from hompath import kernels, knot as kd
from hompath.coord import CoordScene, edge_signature_coord
from hompath.planar import PlanarScene
from hompath.planner import (
    AugmentedState,
    StartGoalError,
    expand,
    path_key,
    path_word,
    plan_k_classes,
    shorten,
    shorten_result,
)
from hompath.scenes import (
    TREFOIL_GOAL,
    TREFOIL_START,
    one_disk,
    square,
    three_robots,
    trefoil,
    two_obstacles,
)
from hompath.spaces import CoordSpace, GridSpace2D, GridSpace3D, InvalidRequestError
from hompath.words import Equivalence, Presentation, Word, equivalent, equivalent_encoded

from oracles import grid4_graph, k_class_costs, ray_crossings_oracle


class RingSpace:
    """Cycle of n vertices around one puncture; edge (n-1 -> 0) carries letter a."""

    def __init__(self, n, start, goal):
        self.n, self.start, self.goal = n, start, goal
        self.presentation = Presentation(["a"])

    def neighbors(self, v):
        fw = (1,) if v == self.n - 1 else ()
        bw = (-1,) if v == 0 else ()
        return [((v + 1) % self.n, 1, fw), ((v - 1) % self.n, 1, bw)]

    def heuristic(self, v):
        return 0

    def point(self, v):
        return (math.cos(2 * math.pi * v / self.n), math.sin(2 * math.pi * v / self.n))


def check_result(space, res):
    pres = space.presentation
    costs = res.costs()
    assert costs == sorted(costs)
    keys = [c.key for c in res.classes]
    assert len(set(keys)) == len(keys)
    for a, b in itertools.combinations(res.classes, 2):
        assert equivalent(a.word, b.word, pres) is Equivalence.NOT_PROVEN
    for c in res.classes:
        assert c.vertices[0] == space.start and c.vertices[-1] == space.goal
        # lift consistency: replaying the edges reproduces word, key and cost
        assert pres.decode(path_word(space, c.vertices)) == c.word
        assert path_key(space, c.vertices) == c.key
        total = 0
        for a, b in zip(c.vertices[:-1], c.vertices[1:]):
            total += next(cost for v, cost, _ in space.neighbors(a) if v == b)
        assert math.isclose(total, c.cost)


# --- search core -----------------------------------------------------------


def test_ring_costs_by_hand():
    space = RingSpace(6, 0, 2)
    res = plan_k_classes(space, 5)
    assert res.complete
    assert res.costs() == [2, 4, 8, 10, 14]
    assert [str(c.word) for c in res.classes] == ["", "a^-1", "a", "a^-1 a^-1", "a a"]
    check_result(space, res)


def test_word_cap_limits_classes():
    res = plan_k_classes(RingSpace(6, 0, 2), 5, max_word=1)
    assert not res.complete and res.word_cap_hit
    assert res.costs() == [2, 4, 8]


def test_expansion_budget_gives_partial_result():
    res = plan_k_classes(RingSpace(6, 0, 2), 5, max_expansions=10)
    assert not res.complete
    assert len(res.classes) < 5
    with pytest.raises(ValueError):
        plan_k_classes(RingSpace(6, 0, 2), 0)


def test_expand_and_start_errors():
    space = RingSpace(4, 0, 2)
    succ = expand(AugmentedState(3, ()), space)
    assert sorted((s.vertex, s.key, c) for s, c in succ) == [(0, (1,), 1), (2, (), 1)]

    class Stuck(RingSpace):
        def neighbors(self, v):
            return []

    with pytest.raises(StartGoalError):
        plan_k_classes(Stuck(4, 0, 2), 1)


# --- planar grids ----------------------------------------------------------


def test_empty_plane_single_class():
    scene = PlanarScene((), (0, 0, 9, 9))
    space = GridSpace2D(scene, 10, (0, 0), (9, 5), "4")
    res = plan_k_classes(space, 1)
    assert res.costs() == [14] and str(res.classes[0].word) == ""
    more = plan_k_classes(space, 2, max_expansions=20000)
    assert len(more.classes) == 1 and not more.complete


def test_disk_two_symmetric_classes():
    scene, start, goal = one_disk()
    space = GridSpace2D(scene, 41, start, goal, "8")
    res = plan_k_classes(space, 2)
    assert res.complete
    a, b = res.costs()
    assert math.isclose(a, b)
    assert {str(c.word) for c in res.classes} == {"", "r1"}
    check_result(space, res)


@pytest.mark.parametrize("connectivity", ["4", "8", "hex"])
def test_grid_adjacency_is_symmetric(connectivity):
    scene, start, goal = two_obstacles()
    space = GridSpace2D(scene, 20, start, goal, connectivity)
    for u in range(len(space.points)):
        for v, c, w in space.neighbors(u):
            back = [(c2, w2) for v2, c2, w2 in space.neighbors(v) if v2 == u]
            assert back == [(c, tuple(-x for x in reversed(w)))]
    res = plan_k_classes(space, 3)
    assert res.complete
    check_result(space, res)


def test_grid_edges_match_independent_oracle():
    scene, start, goal = two_obstacles()
    space = GridSpace2D(scene, 20, start, goal, "4")
    rects = [(4, 8, 8, 12), (11, 7, 15, 11)]
    adj = grid4_graph(rects, 20, 20)
    origins = [(6.0, 10.0), (13.0, 9.0)]
    assert np.allclose(space.rays.origins, origins)
    nx = space.shape[0]
    for u in range(len(space.points)):
        p = (u % nx, u // nx)
        ours = {((v % nx, v // nx), c, w) for v, c, w in space.neighbors(u)}
        theirs = {(q, c, ray_crossings_oracle(p, q, origins)) for q, c in adj[p]}
        if space.free[u]:
            assert ours == theirs
        else:
            assert not ours


def test_two_obstacle_costs_match_oracle():
    scene, start, goal = two_obstacles()
    space = GridSpace2D(scene, 20, start, goal, "4")
    res = plan_k_classes(space, 4, max_word=6)
    pres = space.presentation
    adj = grid4_graph([(4, 8, 8, 12), (11, 7, 15, 11)], 20, 20)
    origins = [(6, 10), (13, 9)]
    costs, _ = k_class_costs(adj, lambda v, u: pres.decode(ray_crossings_oracle(v, u, origins)),
                             (1, 10), (18, 10), pres, 4)
    assert res.costs() == costs
    check_result(space, res)


def test_invalid_grid_requests():
    scene, start, goal = two_obstacles()
    with pytest.raises(InvalidRequestError):
        GridSpace2D(scene, 1, start, goal)
    with pytest.raises(InvalidRequestError):
        GridSpace2D(scene, 20, start, goal, "6")


# --- 3-d -------------------------------------------------------------------


@pytest.fixture(scope="module")
def trefoil_space():
    return GridSpace3D(trefoil(), 30, TREFOIL_START, TREFOIL_GOAL)


def test_3d_edges_match_direct_signatures(trefoil_space):
    space = trefoil_space
    rng = np.random.default_rng(1)
    for u in rng.choice(len(space.points), size=400, replace=False):
        for v, c, w in space.neighbors(int(u)):
            assert c == 1
            assert w == kd.signature_codes_3d(space.points[u], space.points[v], space.surfaces)
            assert space.segment_free(space.point(int(u)), space.point(v))


def test_3d_classes_and_shortening(trefoil_space):
    space = trefoil_space
    res = plan_k_classes(space, 3)
    assert res.complete
    check_result(space, res)
    shorten_result(res, space)
    for c in res.classes:
        assert c.shortened[0] == c.points[0] and c.shortened[-1] == c.points[-1]
        assert c.shortened_length <= c.cost * space.h + 1e-9
        assert all(space.segment_free(a, b) for a, b in zip(c.shortened[:-1], c.shortened[1:]))
        acc = []
        for a, b in zip(c.shortened[:-1], c.shortened[1:]):
            acc.extend(space.segment_codes(a, b))
        assert equivalent_encoded(tuple(acc), path_word(space, c.vertices), space.presentation)


# --- shortening ------------------------------------------------------------


def test_staircase_becomes_straight():
    scene = PlanarScene((), (0, 0, 10, 10))
    space = GridSpace2D(scene, 11, (0, 0), (10, 10), "4")
    stairs = [(i // 2 + i % 2, i // 2) for i in range(21)]
    out = shorten(stairs, space)
    assert out == [(0.0, 0.0), (10.0, 10.0)]


def test_shortening_keeps_the_class():
    scene = PlanarScene((square(5, 5, 1),), (0, 0, 10, 10))
    space = GridSpace2D(scene, 11, (5, 1), (5, 9), "4")
    res = plan_k_classes(space, 2)
    shorten_result(res, space, seed=3)
    for c in res.classes:
        segs = zip(c.shortened[:-1], c.shortened[1:])
        new = kernels.free_reduce([x for a, b in segs for x in space.segment_codes(a, b)])
        assert space.presentation.decode(new) == c.word
        assert c.shortened_length < c.cost
        assert all(space.segment_free(a, b) for a, b in zip(c.shortened[:-1], c.shortened[1:]))


# --- coordination ----------------------------------------------------------


def test_coord_neighbors_and_degree():
    space = CoordSpace(three_robots())
    v = ((1, 1), (4, 1), (1, 4))
    nb = space.neighbors(v)
    assert len(nb) == 124
    for tgt, cost, w in nb[:40]:
        assert space.presentation.decode(w) == edge_signature_coord(v, tgt)
        assert cost == sum(1 for a, b in zip(v, tgt) if a != b)


def test_coord_small_costs_match_oracle():
    from oracles import coord_graph, coord_signature_oracle
    from hompath.scenes import three_robots_small

    scene = three_robots_small()
    space = CoordSpace(scene)
    res = plan_k_classes(space, 4, max_word=6)
    costs, _ = k_class_costs(coord_graph(3, scene.grid), coord_signature_oracle, scene.start, scene.goal,
                             space.presentation, 4)
    assert res.costs() == costs
    check_result(space, res)


def test_coord_three_robot_classes():
    space = CoordSpace(three_robots())
    res = plan_k_classes(space, 5)
    assert res.complete
    check_result(space, res)
    assert shorten_result(res, space) is res
    assert all(c.shortened is None for c in res.classes)
