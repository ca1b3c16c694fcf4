import numpy as np
import pytest

from hompath import geometry as geo
from hompath.knot import (
    DegenerateDiagramError,
    InvalidLinkError,
    PolygonalLink,
    build_arrangement,
    build_surfaces,
    extract_regions,
    path_signature_3d,
    project_diagram,
    signature_codes_3d,
)
from hompath.scenes import hopf, trefoil, unknot
from hompath.words import Equivalence, Word, cyclic_reduce, equivalent, invert

from oracles import crossing_count_oracle, diagram_components


def figure_eight(n=40):
    t = 2 * np.pi * np.arange(n) / n
    r = 2 + np.cos(2 * t)
    return PolygonalLink((np.stack([r * np.cos(3 * t), r * np.sin(3 * t), np.sin(4 * t)], axis=1),), 0.1)


LINKS = {"trefoil": trefoil, "hopf": hopf, "unknot": unknot, "figure_eight": figure_eight}


@pytest.fixture(scope="module", params=sorted(LINKS))
def built(request):
    link = LINKS[request.param]()
    return request.param, link, build_surfaces(link)


# --- helpers ---------------------------------------------------------------


def connector_loop(ss, ci, radius=1e-3, n=64, lift=0.1):
    """Small horizontal circle around the vertical connector of crossing ci."""
    d = ss.diagram
    c = d.crossings[ci]
    z = 0.5 * (c.z_over + c.z_under) + lift * (c.z_over - c.z_under)
    t = 2 * np.pi * np.arange(n + 1) / n
    pts = np.stack([c.point[0] + radius * np.cos(t), c.point[1] + radius * np.sin(t), np.full(n + 1, z)], axis=1)
    return d.to_world(pts)


# --- diagram ---------------------------------------------------------------


def test_crossing_count_matches_exact_oracle(built):
    name, link, ss = built
    d = ss.diagram
    assert len(d.crossings) == crossing_count_oracle(d.segments, d.owner)
    expected = {"trefoil": 3, "hopf": 2, "unknot": 0}
    if name in expected:
        assert len(d.crossings) == expected[name]


def test_bounded_face_count_from_euler(built):
    # V - E + F = 1 + C with F counting the unbounded face; each crossing adds
    # one vertex of degree 4, so bounded faces = crossings + components
    _, _, ss = built
    d = ss.diagram
    assert len(ss.surfaces) == len(d.crossings) + diagram_components(d)
    assert len(ss.presentation.alphabet) == len(ss.surfaces)


def test_one_relation_per_crossing(built):
    _, _, ss = built
    assert len(ss.presentation.relations) == len(ss.diagram.crossings)


def test_relations_and_conjugates_reduce_to_identity(built):
    _, _, ss = built
    p = ss.presentation
    gens = [Word.of([(g, s)]) for g in p.alphabet for s in (1, -1)]
    for rho in p.relations:
        assert equivalent(rho, Word(), p)
        assert equivalent(invert(rho), Word(), p)
        for g in gens:
            for h in gens:
                conj = g * h * rho * invert(g * h)
                assert equivalent(conj, Word(), p)


# --- surfaces --------------------------------------------------------------


def test_surfaces_project_onto_their_faces(built):
    _, _, ss = built
    R = ss.diagram.rotation
    for s in ss.surfaces:
        local = (s.triangles.reshape(-1, 3) @ R.T).reshape(-1, 3, 3)
        a, b, c = local[:, 0, :2], local[:, 1, :2], local[:, 2, :2]
        signed = 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
        # fins are vertical (zero shadow); everything else keeps the face's CCW orientation
        assert np.all(signed > -1e-12)
        assert abs(signed.sum() - abs(geo.signed_area(s.region))) < 1e-9 * max(1.0, abs(geo.signed_area(s.region)))
        for k in np.nonzero(signed > 1e-9)[0]:
            assert geo.point_in_polygon(local[k, :, :2].mean(axis=0), s.region)


def test_triangle_interiors_avoid_the_skeleton(built):
    _, link, ss = built
    w = np.array([[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8], [1 / 3, 1 / 3, 1 / 3], [0.45, 0.45, 0.1]])
    pts = np.einsum("kj,tjd->tkd", w, ss.tris).reshape(-1, 3)
    assert link.distance(pts).min() > 1e-7


def test_surface_boundaries_follow_link_and_connectors(built):
    _, link, ss = built
    R = ss.diagram.rotation
    for s in ss.surfaces:
        b = s.boundary
        nxt = np.roll(b, -1, axis=0)
        mid = 0.5 * (b + nxt)
        on_link = link.distance(mid) < 1e-9
        lb, ln = b @ R.T, nxt @ R.T
        vertical = np.linalg.norm(lb[:, :2] - ln[:, :2], axis=1) < 1e-9
        assert np.all(on_link | vertical)


def test_connector_loops_read_the_crossing_relation(built):
    name, _, ss = built
    p = ss.presentation
    rels = {w.letters for w in p.symmetricized}
    for ci in range(len(ss.diagram.crossings)):
        w = path_signature_3d(connector_loop(ss, ci), ss)
        core, _ = cyclic_reduce(w)
        assert core.letters in rels
        assert equivalent(w, Word(), p) is Equivalence.PROVEN_EQUAL
        if name == "trefoil":
            # loop around a connector: u_a^-1 u_b u_c^-1 over three distinct surfaces
            assert len(core) == 3 and len(core.generators()) == 3
            signs = [l.sign for l in core]
            assert sorted(signs) in ([-1, -1, 1], [-1, 1, 1])


def test_unknot_and_polygon_disks():
    ss = build_surfaces(unknot())
    assert ss.presentation.alphabet == ("u1",)
    assert ss.presentation.relations == ()
    assert len(ss.tris) == 4 - 2
    t = 2 * np.pi * np.arange(7) / 7
    hept = PolygonalLink((np.stack([np.cos(t), np.sin(t), 0.3 * np.sin(2 * t)], axis=1),), 0.05)
    assert len(build_surfaces(hept).tris) == 7 - 2


def test_piercing_counts():
    ss = build_surfaces(unknot())
    down = signature_codes_3d((1, 1, 1), (1, 1, -1), ss)
    up = signature_codes_3d((1, 1, -1), (1, 1, 1), ss)
    assert len(down) == 1 and up == (-down[0],)
    there_and_back = [(1, 1, 1), (1, 1, -1), (1.5, 1.2, -1), (1.5, 1.2, 1)]
    assert path_signature_3d(there_and_back, ss) == Word()
    assert signature_codes_3d((-1, 1, 1), (-1, 1, -1), ss) == ()


def test_hopf_meridian_is_not_trivial():
    link = hopf()
    ss = build_surfaces(link)
    t = 2 * np.pi * np.arange(33) / 32
    # small loop around the first component at (1, 0, 0)
    loop = np.stack([1 + 0.3 * np.cos(t), 0 * t, 0.3 * np.sin(t)], axis=1)
    assert link.distance(loop).min() > link.tube_radius
    w = path_signature_3d(loop, ss, link)
    assert len(w) > 0
    assert equivalent(w, Word(), ss.presentation) is Equivalence.NOT_PROVEN


# --- degenerate input ------------------------------------------------------


def test_vertical_projection_is_rotated_away():
    flat = PolygonalLink(([(0, 0, 0), (2, 0, 0), (2, 0, 2), (0, 0, 2)],), 0.1)
    d = project_diagram(flat, seed=3)
    assert not np.allclose(d.rotation, np.eye(3))
    assert len(d.crossings) == crossing_count_oracle(d.segments, d.owner) == 0
    assert len(build_surfaces(flat, seed=3).surfaces) == 1
    d2 = project_diagram(flat, seed=3)
    assert np.array_equal(d.rotation, d2.rotation)


def test_nested_components_are_rejected():
    t = 2 * np.pi * np.arange(12) / 12
    inner = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    outer = np.stack([3 * np.cos(t), 3 * np.sin(t), 0 * t + 1], axis=1)
    link = PolygonalLink((inner, outer), 0.1)
    with pytest.raises(DegenerateDiagramError):
        extract_regions(project_diagram(link))


def test_separate_components_are_free():
    t = 2 * np.pi * np.arange(8) / 8
    a = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    ss = build_surfaces(PolygonalLink((a, a + [4, 0, 0]), 0.1))
    assert len(ss.surfaces) == 2 and ss.presentation.relations == ()


def test_invalid_links():
    with pytest.raises(InvalidLinkError):
        PolygonalLink(([(0, 0, 0), (1, 0, 0)],), 0.1)
    with pytest.raises(InvalidLinkError):
        PolygonalLink(([(0, 0, 0), (2, 0, 0), (2, 2, 0)],), 0.0)
    with pytest.raises(InvalidLinkError):
        # bow tie: the two diagonals meet
        PolygonalLink(([(0, 0, 0), (2, 2, 0), (2, 0, 0), (0, 2, 0)],), 0.1)


def test_link_round_trip():
    link = trefoil()
    assert PolygonalLink.from_dict(link.to_dict()) == link


def test_arrangement_twins():
    d = project_diagram(trefoil())
    arr = build_arrangement(d)
    for h, e in enumerate(arr.halfedges):
        tw = arr.halfedges[h ^ 1]
        assert (tw.u, tw.v) == (e.v, e.u)
