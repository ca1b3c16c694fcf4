"""Dehn presentations of polygonal knot and link complements.

Pipeline: project the link to the xy-plane (after an optional small
rotation when the projection is not generic), find crossings, walk the
faces of the resulting planar arrangement, lift every bounded face to a
triangulated surface spanning the corresponding spatial boundary, and read
off one relation per crossing.

Surface layout for a face: at every crossing corner ``C`` the face boundary
jumps vertically between the two strands.  An inner point ``M`` is placed a
small distance into the face along the corner bisector, at the mean height
of the two strands.  The vertical "fin" triangle (C_in, C_out, M) carries the
jump; thin strip triangles connect the boundary to the inner polygon formed
by the ``M`` points and the non-crossing boundary vertices; the inner
polygon is ear-clipped and lifted linearly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import kernels
from .words import Presentation, Word, compose


class DegenerateDiagramError(ValueError):
    pass


class SurfaceConstructionError(RuntimeError):
    pass


class InvalidLinkError(ValueError):
    pass


class CollisionError(ValueError):
    pass


@dataclass(frozen=True)
class PolygonalLink:
    """Closed 3-d polylines (last vertex joins the first) with a tube radius."""

    components: tuple
    tube_radius: float

    def __post_init__(self):
        comps = []
        for i, c in enumerate(self.components):
            a = np.asarray(c, dtype=float)
            if a.ndim != 2 or a.shape[1] != 3 or len(a) < 3:
                raise InvalidLinkError(f"component {i}: need at least 3 3-d vertices")
            if np.allclose(a[0], a[-1]):
                a = a[:-1]
            comps.append(tuple(map(tuple, a.tolist())))
        if not self.tube_radius > 0:
            raise InvalidLinkError("tube_radius must be positive")
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "tube_radius", float(self.tube_radius))
        segs = self.segment_array()
        n = len(segs)
        owner = self.segment_owner()
        for i in range(n):
            for j in range(i + 1, n):
                if _adjacent(owner, i, j):
                    continue
                d = geo.segment_segment_distance(segs[i, 0], segs[i, 1], segs[j, 0], segs[j, 1])
                if d <= 1e-12:
                    raise InvalidLinkError(f"segments {owner[i]} and {owner[j]} intersect")

    def segment_array(self) -> np.ndarray:
        out = []
        for c in self.components:
            a = np.asarray(c)
            out.append(np.stack([a, np.roll(a, -1, axis=0)], axis=1))
        return np.concatenate(out, axis=0) if out else np.zeros((0, 2, 3))

    def segment_owner(self) -> list:
        return [(ci, k, len(c)) for ci, c in enumerate(self.components) for k in range(len(c))]

    def distance(self, pts) -> np.ndarray:
        """Distance from each point to the skeleton."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 3)
        segs = self.segment_array()
        best = np.full(len(pts), np.inf)
        for s in segs:
            best = np.minimum(best, geo.point_segment_distance(pts, s[0], s[1]))
        return best

    def segment_distance(self, a, b) -> np.ndarray:
        """Distance from each segment a[i]b[i] to the skeleton."""
        a = np.asarray(a, dtype=float).reshape(-1, 3)
        b = np.asarray(b, dtype=float).reshape(-1, 3)
        best = np.full(len(a), np.inf)
        for s in self.segment_array():
            best = np.minimum(best, geo.segment_segment_distance(a, b, s[0], s[1]))
        return best

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "tube_radius": self.tube_radius,
            "components": [[list(v) for v in c] for c in self.components],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PolygonalLink":
        return cls(tuple(d["components"]), d["tube_radius"])


def _adjacent(owner, i, j) -> bool:
    ci, ki, ni = owner[i]
    cj, kj, _ = owner[j]
    return ci == cj and ((ki + 1) % ni == kj or (kj + 1) % ni == ki)


@dataclass(frozen=True)
class Crossing:
    point: tuple
    over: tuple  # (segment index, parameter along it)
    under: tuple
    z_over: float
    z_under: float


@dataclass
class LinkDiagram:
    """Projection of a link rotated by ``rotation`` (world -> diagram frame)."""

    link: PolygonalLink
    rotation: np.ndarray
    points: list
    crossings: list
    segments: np.ndarray = field(repr=False)
    owner: list = field(repr=False)

    def to_world(self, pts) -> np.ndarray:
        return np.asarray(pts, dtype=float) @ self.rotation


def _random_rotation(rng, scale=0.15) -> np.ndarray:
    ax, ay, az = rng.uniform(-scale, scale, size=3)
    rx = np.array([[1, 0, 0], [0, math.cos(ax), -math.sin(ax)], [0, math.sin(ax), math.cos(ax)]])
    ry = np.array([[math.cos(ay), 0, math.sin(ay)], [0, 1, 0], [-math.sin(ay), 0, math.cos(ay)]])
    rz = np.array([[math.cos(az), -math.sin(az), 0], [math.sin(az), math.cos(az), 0], [0, 0, 1]])
    return rz @ ry @ rx


def _find_crossings(segs, owner, tol):
    """Crossings of projected segments; raises DegenerateDiagramError if not generic."""
    n = len(segs)
    p2 = segs[:, :, :2]
    lengths = np.linalg.norm(p2[:, 1] - p2[:, 0], axis=1)
    for i in range(n):
        if lengths[i] <= tol:
            raise DegenerateDiagramError(f"segment {owner[i][:2]} projects to a point")
    crossings = []
    for i in range(n):
        a0, a1 = p2[i]
        for j in range(i + 1, n):
            b0, b1 = p2[j]
            if _adjacent(owner, i, j):
                # shared vertex: must not fold back onto each other
                ci, ki, ni = owner[i]
                if (ki + 1) % ni == owner[j][1]:
                    u, v = a1 - a0, b1 - b0
                else:
                    u, v = b1 - b0, a1 - a0
                cr = u[0] * v[1] - u[1] * v[0]
                if abs(cr) <= tol * np.linalg.norm(u) * np.linalg.norm(v) and np.dot(u, v) < 0:
                    raise DegenerateDiagramError(f"segments {owner[i][:2]} and {owner[j][:2]} overlap")
                continue
            if min(a0[0], a1[0]) > max(b0[0], b1[0]) + tol or max(a0[0], a1[0]) < min(b0[0], b1[0]) - tol:
                continue
            if min(a0[1], a1[1]) > max(b0[1], b1[1]) + tol or max(a0[1], a1[1]) < min(b0[1], b1[1]) - tol:
                continue
            # vertices too close to the other segment
            for p, (q0, q1), tag in ((a0, (b0, b1), i), (a1, (b0, b1), i), (b0, (a0, a1), j), (b1, (a0, a1), j)):
                if geo.point_segment_distance(p[None], q0[None], q1[None])[0] <= tol:
                    raise DegenerateDiagramError(
                        f"vertex of segment {owner[tag][:2]} touches segment pair {owner[i][:2]}/{owner[j][:2]}"
                    )
            hit = geo.segment_intersection_params(a0, a1, b0, b1)
            if hit is None:
                continue
            s, t = hit
            za = segs[i, 0, 2] + s * (segs[i, 1, 2] - segs[i, 0, 2])
            zb = segs[j, 0, 2] + t * (segs[j, 1, 2] - segs[j, 0, 2])
            if abs(za - zb) <= tol:
                raise DegenerateDiagramError(f"segments {owner[i][:2]} and {owner[j][:2]} meet in space")
            pt = tuple((a0 + s * (a1 - a0)).tolist())
            if za > zb:
                crossings.append(Crossing(pt, (i, s), (j, t), float(za), float(zb)))
            else:
                crossings.append(Crossing(pt, (j, t), (i, s), float(zb), float(za)))
    pts = np.array([c.point for c in crossings]).reshape(-1, 2)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.linalg.norm(pts[i] - pts[j]) <= tol:
                raise DegenerateDiagramError("multiple crossings at one point")
    return crossings


def project_diagram(link: PolygonalLink, seed: int = 0, max_tries: int = 20) -> LinkDiagram:
    """Drop-z projection; retried under small seeded rotations if not generic."""
    segs_world = link.segment_array()
    owner = link.segment_owner()
    scale = float(np.ptp(segs_world.reshape(-1, 3), axis=0).max()) if len(segs_world) else 1.0
    tol = 1e-9 * max(scale, 1.0)
    rng = np.random.default_rng(seed)
    rot = np.eye(3)
    last = None
    for _ in range(max_tries):
        segs = segs_world @ rot.T
        try:
            crossings = _find_crossings(segs, owner, tol)
        except DegenerateDiagramError as e:
            last = e
            rot = _random_rotation(rng)
            continue
        points = [np.asarray(c, dtype=float) @ rot.T for c in link.components]
        return LinkDiagram(link, rot, points, crossings, segs, owner)
    raise DegenerateDiagramError(f"no generic projection found: {last}")


# ---------------------------------------------------------------------------
# planar arrangement


@dataclass(frozen=True)
class HalfEdge:
    u: int
    v: int
    zu: float
    zv: float
    forward: bool  # along the component's orientation


@dataclass
class Face:
    halfedges: list  # indices into Arrangement.halfedges, CCW walk
    area: float

    def nodes(self, arr) -> list:
        return [arr.halfedges[h].u for h in self.halfedges]


@dataclass
class Arrangement:
    xy: np.ndarray  # node coordinates
    is_crossing: np.ndarray
    crossing_of: dict  # node -> crossing index
    halfedges: list
    out: list  # node -> outgoing halfedge indices sorted by angle
    faces: list  # bounded faces
    outer: list  # unbounded boundary cycles
    component_of_node: np.ndarray  # connected arrangement component


def build_arrangement(d: LinkDiagram) -> Arrangement:
    xy = []
    is_cr = []
    crossing_of = {}
    # crossing nodes first
    for ci, c in enumerate(d.crossings):
        crossing_of[len(xy)] = ci
        xy.append(c.point)
        is_cr.append(True)
    per_seg = {}
    for ci, c in enumerate(d.crossings):
        for seg, s in (c.over, c.under):
            z = c.z_over if (seg, s) == c.over else c.z_under
            per_seg.setdefault(seg, []).append((s, ci, z))
    halfedges = []
    seg_idx = 0
    for comp in d.points:
        n = len(comp)
        seq = []  # (node, z)
        vert_nodes = []
        for k in range(n):
            vert_nodes.append(len(xy))
            xy.append(tuple(comp[k, :2].tolist()))
            is_cr.append(False)
        for k in range(n):
            seq.append((vert_nodes[k], comp[k, 2]))
            for s, ci, z in sorted(per_seg.get(seg_idx + k, [])):
                seq.append((ci, z))
        seg_idx += n
        m = len(seq)
        for k in range(m):
            (u, zu), (v, zv) = seq[k], seq[(k + 1) % m]
            halfedges.append(HalfEdge(u, v, float(zu), float(zv), True))
            halfedges.append(HalfEdge(v, u, float(zv), float(zu), False))
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    nn = len(xy)
    out = [[] for _ in range(nn)]
    for h, e in enumerate(halfedges):
        out[e.u].append(h)
    ang = {}
    for h, e in enumerate(halfedges):
        dx, dy = xy[e.v] - xy[e.u]
        ang[h] = math.atan2(dy, dx)
    for lst in out:
        lst.sort(key=lambda h: ang[h])
    twin = {}
    for h, e in enumerate(halfedges):
        twin[h] = h ^ 1  # paired on construction
    nxt = {}
    for h, e in enumerate(halfedges):
        lst = out[e.v]
        pos = lst.index(twin[h])
        nxt[h] = lst[(pos - 1) % len(lst)]
    seen = set()
    cycles = []
    for h in range(len(halfedges)):
        if h in seen:
            continue
        cyc = []
        g = h
        while g not in seen:
            seen.add(g)
            cyc.append(g)
            g = nxt[g]
        cycles.append(cyc)
    faces, outer = [], []
    for cyc in cycles:
        poly = xy[[halfedges[g].u for g in cyc]]
        a = geo.signed_area(poly)
        if a > 0:
            faces.append(Face(cyc, a))
        else:
            outer.append(cyc)
    # connected components of the arrangement
    comp = np.arange(nn)

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for e in halfedges:
        ra, rb = find(e.u), find(e.v)
        if ra != rb:
            comp[max(ra, rb)] = min(ra, rb)
    labels = np.array([find(i) for i in range(nn)])
    return Arrangement(xy, np.array(is_cr), crossing_of, halfedges, out, faces, outer, labels)


def extract_regions(d: LinkDiagram) -> list:
    """Bounded faces of the diagram as CCW half-edge walks."""
    arr = build_arrangement(d)
    _check_nesting(arr)
    return arr.faces


def _check_nesting(arr: Arrangement):
    if len(arr.outer) <= 1:
        return
    for cyc in arr.outer:
        node = arr.halfedges[cyc[0]].u
        lab = arr.component_of_node[node]
        pt = arr.xy[node]
        for f in arr.faces:
            fnodes = f.nodes(arr)
            if arr.component_of_node[fnodes[0]] == lab:
                continue
            if geo.point_in_polygon(pt, arr.xy[fnodes]):
                raise DegenerateDiagramError("nested diagram components give a face that is not simply connected")


# ---------------------------------------------------------------------------
# surfaces


@dataclass
class DehnSurface:
    id: str
    boundary: np.ndarray  # spatial polygon (world frame), with vertical jumps
    triangles: np.ndarray  # (T, 3, 3) world frame
    region: np.ndarray  # planar face polygon (diagram frame)


@dataclass
class SurfaceSet:
    surfaces: list
    presentation: Presentation
    diagram: LinkDiagram
    tris: np.ndarray = field(repr=False)  # all triangles, world frame
    tri_code: np.ndarray = field(repr=False)  # generator code (1-based) per triangle

    def __len__(self):
        return len(self.surfaces)


def _face_triangles(arr: Arrangement, face: Face, delta0: float, max_halvings: int = 30):
    hes = [arr.halfedges[h] for h in face.halfedges]
    L = len(hes)
    nodes = [e.u for e in hes]
    P = arr.xy[nodes]
    z_out = np.array([e.zu for e in hes])
    z_in = np.array([hes[i - 1].zv for i in range(L)])
    corner = np.array([bool(arr.is_crossing[n]) for n in nodes])
    if face.area <= 0:
        raise SurfaceConstructionError("zero-area face")
    bis = np.zeros((L, 2))
    for i in range(L):
        if corner[i]:
            a = P[i - 1] - P[i]
            b = P[(i + 1) % L] - P[i]
            v = a / np.linalg.norm(a) + b / np.linalg.norm(b)
            nv = np.linalg.norm(v)
            if nv < 1e-12:
                raise SurfaceConstructionError("straight crossing corner")
            bis[i] = v / nv
    delta = delta0
    for _ in range(max_halvings):
        inner = P.copy()
        inner[corner] = P[corner] + delta * bis[corner]
        if _inner_ok(P, inner, corner):
            break
        delta *= 0.5
    else:
        raise SurfaceConstructionError("could not place inner polygon")
    zM = 0.5 * (z_in + z_out)

    def B_out(i):
        return (P[i][0], P[i][1], z_out[i])

    def B_in(i):
        return (P[i][0], P[i][1], z_in[i])

    def I(i):
        return (inner[i][0], inner[i][1], zM[i]) if corner[i] else B_out(i)

    tris = []
    for i in range(L):
        j = (i + 1) % L
        if corner[i]:
            tris.append((B_in(i), B_out(i), I(i)))  # vertical fin
        if corner[j] and corner[i]:
            tris.append((B_out(i), B_in(j), I(j)))
            tris.append((B_out(i), I(j), I(i)))
        elif corner[j]:
            tris.append((B_out(i), B_in(j), I(j)))
        elif corner[i]:
            tris.append((B_out(i), B_out(j), I(i)))
    inner_poly = [tuple(p) for p in inner]
    for a, b, c in geo.ear_clip(inner_poly):
        tris.append((I(a), I(b), I(c)))
    boundary = []
    for i in range(L):
        if corner[i]:
            boundary.append(B_in(i))
        boundary.append(B_out(i))
    return np.array(tris, dtype=float), np.array(boundary, dtype=float), P


def _inner_ok(P, inner, corner) -> bool:
    L = len(P)
    if not geo.polygon_is_simple([tuple(p) for p in inner]):
        return False
    if geo.signed_area(inner) <= 0:
        return False
    Pl = [tuple(p) for p in P]
    for i in range(L):
        if not corner[i]:
            continue
        if not geo.point_in_polygon(inner[i], Pl):
            return False
        # the connector C -> M must not cross the boundary elsewhere
        for k in range(L):
            if k in (i, (i - 1) % L):
                continue
            if geo.segments_intersect(P[i], inner[i], P[k], P[(k + 1) % L]):
                return False
    # strip triangles must be positively oriented
    for i in range(L):
        j = (i + 1) % L
        if corner[j] and geo.orient2d(P[i], P[j], inner[j]) <= 0:
            return False
        if corner[i] and geo.orient2d(P[i], P[j], inner[i]) <= 0:
            return False
        if corner[i] and corner[j] and geo.orient2d(P[i], inner[j], inner[i]) <= 0:
            return False
    return True


def _default_delta(arr: Arrangement, face: Face) -> float:
    P = arr.xy[face.nodes(arr)]
    edges = np.linalg.norm(np.roll(P, -1, axis=0) - P, axis=1)
    return 0.25 * float(edges.min())


def lift_surfaces(d: LinkDiagram, faces=None, arr: Arrangement | None = None) -> list:
    """One triangulated surface per bounded face, in world coordinates."""
    if arr is None:
        arr = build_arrangement(d)
        _check_nesting(arr)
    if faces is None:
        faces = arr.faces
    out = []
    for k, f in enumerate(faces):
        tris, boundary, region = _face_triangles(arr, f, _default_delta(arr, f))
        out.append(
            DehnSurface(
                f"u{k + 1}",
                d.to_world(boundary),
                d.to_world(tris.reshape(-1, 3)).reshape(-1, 3, 3),
                region,
            )
        )
    return out


def crossing_words(d: LinkDiagram, arr: Arrangement, faces) -> list:
    """Per crossing, the encoded relation u_a u_b^-1 u_c u_d^-1 (unbounded face dropped)."""
    face_of = {}
    for k, f in enumerate(faces):
        for h in f.halfedges:
            face_of[h] = k + 1
    rels = []
    for node, ci in sorted(arr.crossing_of.items(), key=lambda t: t[1]):
        c = d.crossings[ci]
        rays = arr.out[node]
        if len(rays) != 4:
            raise DegenerateDiagramError("crossing without four strands")
        start = None
        for pos, h in enumerate(rays):
            e = arr.halfedges[h]
            if e.forward and e.zu == c.z_over:
                start = pos
        word = []
        for k in range(4):
            h = rays[(start + k) % 4]
            h2 = rays[(start + k + 1) % 4]
            g = face_of.get(h)
            if g is None:
                continue
            sgn = 1 if arr.halfedges[h].zu > arr.halfedges[h2].zu else -1
            word.append(sgn * g)
        rels.append(tuple(word))
    return rels


def build_surfaces(link: PolygonalLink, seed: int = 0) -> SurfaceSet:
    """Full pipeline: diagram, faces, lifted surfaces and the presentation."""
    d = project_diagram(link, seed=seed)
    arr = build_arrangement(d)
    _check_nesting(arr)
    faces = arr.faces
    surfaces = lift_surfaces(d, faces, arr)
    names = [s.id for s in surfaces]
    rels = crossing_words(d, arr, faces)
    pres = Presentation(
        names,
        [Word.of((names[abs(x) - 1], 1 if x > 0 else -1) for x in r) for r in rels if r],
    )
    # generator codes follow the presentation's (natural) order
    if surfaces:
        tris = np.concatenate([s.triangles for s in surfaces])
        codes = np.concatenate(
            [np.full(len(s.triangles), pres.index(s.id), dtype=np.int64) for s in surfaces]
        )
    else:
        tris = np.zeros((0, 3, 3))
        codes = np.zeros(0, dtype=np.int64)
    return SurfaceSet(surfaces, pres, d, tris, codes)


def crossing_relations(d: LinkDiagram, surfaces=None) -> Presentation:
    arr = build_arrangement(d)
    _check_nesting(arr)
    faces = arr.faces
    names = [f"u{k + 1}" for k in range(len(faces))]
    rels = crossing_words(d, arr, faces)
    return Presentation(
        names, [Word.of((names[abs(x) - 1], 1 if x > 0 else -1) for x in r) for r in rels if r]
    )


# ---------------------------------------------------------------------------
# signatures


def _lex_greater(a, b) -> bool:
    return tuple(a) > tuple(b)


def signature_codes_3d(a, b, ss: SurfaceSet) -> tuple:
    """Encoded crossing word of segment ab, evaluated in a canonical direction
    so that reversing the segment inverts the word exactly."""
    a = tuple(float(v) for v in a)
    b = tuple(float(v) for v in b)
    if _lex_greater(a, b):
        w = signature_codes_3d(b, a, ss)
        return tuple(-x for x in reversed(w))
    if len(ss.tris) == 0:
        return ()
    _, ti, t, sg = kernels.segment_triangle_hits(np.array([a]), np.array([b]), ss.tris)
    if len(ti) == 0:
        return ()
    order = np.lexsort((ti, t))
    return kernels.free_reduce([int(sg[k]) * int(ss.tri_code[ti[k]]) for k in order])


def batch_signature_codes_3d(A, B, ss: SurfaceSet) -> dict:
    """Signatures of many segments at once (each already in canonical direction).

    Returns {segment index: encoded word} for segments with a non-empty word.
    """
    if len(ss.tris) == 0 or len(A) == 0:
        return {}
    si, ti, t, sg = kernels.segment_triangle_hits(A, B, ss.tris)
    out = {}
    if len(si) == 0:
        return out
    order = np.lexsort((ti, t, si))
    cur, buf = None, []
    for k in order:
        s = int(si[k])
        if s != cur:
            if buf:
                w = kernels.free_reduce(buf)
                if w:
                    out[cur] = w
            cur, buf = s, []
        buf.append(int(sg[k]) * int(ss.tri_code[ti[k]]))
    if buf:
        w = kernels.free_reduce(buf)
        if w:
            out[cur] = w
    return out


def batch_signature_codes_any(A, B, ss: SurfaceSet) -> list:
    """Signatures of segments A[i]B[i] in arbitrary direction (exact reversal)."""
    A = np.asarray(A, dtype=float).reshape(-1, 3)
    B = np.asarray(B, dtype=float).reshape(-1, 3)
    flip = np.array([tuple(a) > tuple(b) for a, b in zip(A.tolist(), B.tolist())], dtype=bool)
    lo = np.where(flip[:, None], B, A)
    hi = np.where(flip[:, None], A, B)
    got = batch_signature_codes_3d(lo, hi, ss)
    out = []
    for i in range(len(A)):
        w = got.get(i, ())
        out.append(tuple(-x for x in reversed(w)) if flip[i] else w)
    return out


def edge_signature_3d(a, b, ss: SurfaceSet, link: PolygonalLink | None = None) -> Word:
    if link is not None:
        if link.segment_distance([a], [b])[0] <= link.tube_radius:
            raise CollisionError(f"segment {tuple(a)} -> {tuple(b)} enters the tube")
    return ss.presentation.decode(signature_codes_3d(a, b, ss))


def path_signature_3d(points, ss: SurfaceSet, link: PolygonalLink | None = None) -> Word:
    w = Word()
    for a, b in zip(points[:-1], points[1:]):
        w = compose(w, edge_signature_3d(a, b, ss, link))
    return w
