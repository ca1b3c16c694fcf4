import numpy as np
import pytest
from hypothesis import given, strategies as st

from hompath import geometry as geo
from hompath.planar import (
    CollisionError,
    InvalidSceneError,
    PlanarScene,
    build_rays,
    edge_signature_2d,
    path_signature_2d,
    signature_codes,
)
from hompath.scenes import SIX_OBSTACLE_PATH, six_obstacles, square
from hompath.words import Word, free_reduce, invert

from oracles import ray_crossings_oracle


def test_six_obstacle_word():
    scene = six_obstacles()
    rays = build_rays(scene)
    w = path_signature_2d(SIX_OBSTACLE_PATH, rays, scene)
    assert str(w) == "r1^-1 r4 r2^-1 r4^-1 r6^-1"
    assert str(path_signature_2d(SIX_OBSTACLE_PATH[::-1], rays, scene)) == "r6 r4 r2 r4^-1 r1"


def test_loop_orientation():
    scene = PlanarScene((square(5, 5, 1),), (0, 0, 10, 10))
    rays = build_rays(scene)
    ccw = [(3, 3), (7, 3), (7, 7), (3, 7), (3, 3)]
    assert str(path_signature_2d(ccw, rays, scene)) == "r1"
    assert str(path_signature_2d(ccw[::-1], rays, scene)) == "r1^-1"
    outside = [(7.5, 1), (9, 1), (9, 9), (7.5, 9), (7.5, 1)]
    assert str(path_signature_2d(outside, rays, scene)) == ""


def test_ray_origin_is_interior_for_nonconvex_obstacle():
    u = [(0, 0), (6, 0), (6, 6), (4, 6), (4, 2), (2, 2), (2, 6), (0, 6)]
    scene = PlanarScene((u,), (-1, -1, 7, 7))
    (ray,) = build_rays(scene).rays
    assert geo.point_in_polygon(ray.origin, scene.obstacles[0])


def test_natural_ray_order():
    obs = tuple(square(2 * i + 1, 1, 0.4) for i in range(11))
    rays = build_rays(PlanarScene(obs, (0, 0, 23, 3)))
    assert rays.presentation.alphabet[-2:] == ("r10", "r11")
    assert rays.presentation.relations == ()


def test_collision_and_validation():
    scene = PlanarScene((square(5, 5, 1),), (0, 0, 10, 10))
    rays = build_rays(scene)
    with pytest.raises(CollisionError):
        edge_signature_2d((0, 5.5), (10, 5.5), rays, scene)
    assert edge_signature_2d((0, 5.5), (10, 5.5), rays) == Word.parse("r1^-1")
    with pytest.raises(InvalidSceneError):
        PlanarScene((square(5, 5, 1), square(5.5, 5, 1)), (0, 0, 10, 10))
    with pytest.raises(InvalidSceneError):
        PlanarScene(([(0, 0), (2, 2), (2, 0), (0, 2)],), (0, 0, 10, 10))
    with pytest.raises(InvalidSceneError):
        PlanarScene((square(9.8, 5, 1),), (0, 0, 10, 10))
    with pytest.raises(InvalidSceneError):
        PlanarScene((), (0, 0, 0, 1))


def test_polygons_are_normalised_ccw():
    scene = PlanarScene(([(0, 0), (0, 1), (1, 1), (1, 0)],), (-1, -1, 2, 2))
    assert geo.signed_area(scene.obstacles[0]) > 0
    assert PlanarScene.from_dict(scene.to_dict()) == scene


def test_vertical_ties_are_ordered_by_index():
    # two rays share an x coordinate; crossing both at once is ordered by index
    origins = np.array([[2.0, 0.0], [2.0, 5.0]])
    from hompath.planar import RaySet, Ray
    from hompath.words import Presentation

    rays = RaySet((Ray("r1", (2.0, 0.0)), Ray("r2", (2.0, 5.0))), Presentation(["r1", "r2"]), origins)
    assert signature_codes((0, 6), (4, 6), rays) == (-1, -2)
    assert signature_codes((4, 6), (0, 6), rays) == (2, 1)


coord = st.integers(-20, 20).map(lambda v: v / 4)


@given(coord, coord, coord, coord)
def test_signature_matches_exact_oracle(ax, ay, bx, by):
    scene = six_obstacles()
    rays = build_rays(scene)
    got = signature_codes((ax, ay), (bx, by), rays)
    assert got == ray_crossings_oracle((ax, ay), (bx, by), rays.origins.tolist())


@given(coord, coord, coord, coord)
def test_reversal_inverts(ax, ay, bx, by):
    rays = build_rays(six_obstacles())
    w = rays.presentation.decode(signature_codes((ax, ay), (bx, by), rays))
    r = rays.presentation.decode(signature_codes((bx, by), (ax, ay), rays))
    assert r == invert(w)
    assert free_reduce(w * r) == Word()
