"""Discrete search spaces: 2-d grids with rays, 3-d grids around links, and
joint moves of robots on a grid.

Every space exposes ``start``, ``goal``, ``presentation``, ``neighbors(v)``
yielding ``(vertex, cost, encoded signature)``, ``heuristic(v)`` (consistent)
and ``point(v)`` (world coordinates used for output).  Geometric spaces also
provide ``segment_free`` and ``segment_codes`` for path shortening.
"""
from __future__ import annotations

import math
from collections import OrderedDict

import numpy as np

from . import coord as cs
from . import geometry as geo
from . import kernels
from . import knot as kd
from . import planar


class InvalidRequestError(ValueError):
    pass


def _nearest(points, free, target, what):
    d = np.linalg.norm(points - np.asarray(target, dtype=float), axis=1)
    d[~free] = np.inf
    i = int(np.argmin(d))
    if not np.isfinite(d[i]):
        raise InvalidRequestError(f"{what}: no free grid vertex")
    return i


class GridSpace2D:
    """Grid over a planar scene.

    ``res`` is the number of vertices along the longer side of the bounds.
    ``connectivity`` is ``"4"`` or ``"8"`` (square lattice, costs 1 and
    sqrt(2)) or ``"hex"`` (triangular lattice, unit costs).  Costs are in
    units of the lattice spacing.
    """

    def __init__(self, scene: planar.PlanarScene, res: int, start, goal, connectivity: str = "8"):
        if res < 2:
            raise InvalidRequestError("res must be at least 2")
        if connectivity not in ("4", "8", "hex"):
            raise InvalidRequestError(f"unknown connectivity {connectivity!r}")
        self.scene = scene
        self.connectivity = connectivity
        self.rays = planar.build_rays(scene)
        self.presentation = self.rays.presentation
        x0, y0, x1, y1 = scene.bounds
        h = max(x1 - x0, y1 - y0) / (res - 1)
        self.h = h
        if connectivity == "hex":
            dy = h * math.sqrt(3) / 2
            ny = int(math.floor((y1 - y0) / dy + 1e-9)) + 1
            nx = int(math.floor((x1 - x0) / h + 1e-9)) + 1
            pts = []
            for j in range(ny):
                off = 0.5 * h if j % 2 else 0.0
                for i in range(nx):
                    pts.append((x0 + i * h + off, y0 + j * dy))
            self.points = np.array(pts)
        else:
            nx = int(math.floor((x1 - x0) / h + 1e-9)) + 1
            ny = int(math.floor((y1 - y0) / h + 1e-9)) + 1
            gx, gy = np.meshgrid(x0 + h * np.arange(nx), y0 + h * np.arange(ny))
            self.points = np.stack([gx.ravel(), gy.ravel()], axis=1)
        self.shape = (nx, ny)
        inside_bounds = (self.points[:, 0] <= x1 + 1e-12) & (self.points[:, 1] <= y1 + 1e-12)
        self.free = inside_bounds & np.array([scene.point_free(tuple(p)) for p in self.points])
        self._build_edges()
        self.start = self.snap(start, "start")
        self.goal = self.snap(goal, "goal")

    def snap(self, pt, what="point") -> int:
        return _nearest(self.points, self.free, pt, what)

    def _offsets(self, j):
        if self.connectivity == "4":
            return [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]
        if self.connectivity == "8":
            r2 = math.sqrt(2.0)
            return [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1),
                    (1, 1, r2), (-1, 1, r2), (1, -1, r2), (-1, -1, r2)]
        # triangular lattice: odd rows are shifted right by half a spacing
        s = 0 if j % 2 == 0 else 1
        return [(1, 0, 1), (-1, 0, 1), (s - 1, 1, 1), (s, 1, 1), (s - 1, -1, 1), (s, -1, 1)]

    def _build_edges(self):
        nx, ny = self.shape
        us, vs, cs_ = [], [], []
        for j in range(ny):
            for i in range(nx):
                u = j * nx + i
                if not self.free[u]:
                    continue
                for di, dj, c in self._offsets(j):
                    i2, j2 = i + di, j + dj
                    if 0 <= i2 < nx and 0 <= j2 < ny:
                        v = j2 * nx + i2
                        if v > u and self.free[v]:
                            us.append(u)
                            vs.append(v)
                            cs_.append(c)
        us = np.array(us, dtype=np.int64)
        vs = np.array(vs, dtype=np.int64)
        A, B = self.points[us], self.points[vs]
        ok = np.ones(len(us), dtype=bool)
        for poly in self.scene.obstacles:
            ok &= ~geo.segments_hit_polygon(A, B, poly)
        us, vs, A, B = us[ok], vs[ok], A[ok], B[ok]
        cs_ = [c for c, o in zip(cs_, ok) if o]
        sig = {}
        if len(self.rays):
            seg_idx, _, _, _ = kernels.segment_ray_hits(A, B, self.rays.origins)
            for e in sorted(set(seg_idx.tolist())):
                w = planar.signature_codes(tuple(A[e]), tuple(B[e]), self.rays)
                if w:
                    sig[e] = w
        self.adj = [[] for _ in range(len(self.points))]
        for e, (u, v, c) in enumerate(zip(us.tolist(), vs.tolist(), cs_)):
            w = sig.get(e, ())
            self.adj[u].append((v, c, w))
            self.adj[v].append((u, c, tuple(-x for x in reversed(w))))
        self.n_edges = len(us)

    def neighbors(self, v):
        return self.adj[v]

    def heuristic(self, v) -> float:
        if self.connectivity == "hex":
            return float(np.hypot(*(self.points[v] - self.points[self.goal]))) / self.h
        nx = self.shape[0]
        dx = abs(v % nx - self.goal % nx)
        dy = abs(v // nx - self.goal // nx)
        if self.connectivity == "4":
            return dx + dy
        return max(dx, dy) + (math.sqrt(2.0) - 1.0) * min(dx, dy)

    def point(self, v):
        return tuple(float(c) for c in self.points[v])

    # shortening hooks
    def segment_free(self, a, b) -> bool:
        return not self.scene.collides(a, b)

    def segment_codes(self, a, b) -> tuple:
        return planar.signature_codes(a, b, self.rays)

    def segments_free(self, A, B) -> np.ndarray:
        ok = np.ones(len(A), dtype=bool)
        for poly in self.scene.obstacles:
            ok &= ~geo.segments_hit_polygon(A, B, poly)
        return ok

    def length(self, a, b) -> float:
        return float(math.dist(a, b))


# generic sub-spacing offset of the 3-d lattice; keeps grid points and
# grid edges off triangle planes/edges built from the link's vertices
_GRID_SHIFT = np.array([0.1373, 0.2711, 0.3917])


class GridSpace3D:
    """6-connected lattice around a polygonal link, unit edge costs.

    ``res`` is the number of vertices along the longest side of ``bounds``
    (default: the link's bounding box and the start/goal points, padded).
    """

    def __init__(self, link: kd.PolygonalLink, res: int, start, goal, bounds=None, seed: int = 0,
                 surfaces: kd.SurfaceSet | None = None):
        if res < 2:
            raise InvalidRequestError("res must be at least 2")
        self.link = link
        self.surfaces = surfaces if surfaces is not None else kd.build_surfaces(link, seed=seed)
        self.presentation = self.surfaces.presentation
        pts = np.concatenate([np.asarray(c) for c in link.components] + [np.array([start, goal], float)])
        if bounds is None:
            pad = 2.0 * link.tube_radius
            lo, hi = pts.min(axis=0) - pad, pts.max(axis=0) + pad
        else:
            lo, hi = np.asarray(bounds[:3], float), np.asarray(bounds[3:], float)
        h = float((hi - lo).max()) / (res - 1)
        self.h = h
        n = np.floor((hi - lo) / h + 1e-9).astype(int) + 1
        self.shape = tuple(int(v) for v in n)
        self.origin = lo + _GRID_SHIFT * h
        nx, ny, nz = self.shape
        ii, jj, kk = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing="ij")
        self.points = self.origin + h * np.stack([ii.ravel(), jj.ravel(), kk.ravel()], axis=1)
        r = link.tube_radius
        self.free = link.distance(self.points) > r
        self.strides = (ny * nz, nz, 1)
        self._build_edges()
        self.start = _nearest(self.points, self.free, start, "start")
        self.goal = _nearest(self.points, self.free, goal, "goal")
        self._goal_ijk = self.ijk(self.goal)

    def ijk(self, v):
        nx, ny, nz = self.shape
        return v // (ny * nz), (v // nz) % ny, v % nz

    def _build_edges(self):
        nx, ny, nz = self.shape
        N = nx * ny * nz
        idx = np.arange(N).reshape(nx, ny, nz)
        r = self.link.tube_radius
        self.edge_free = []
        self.edge_sig = []
        for axis in range(3):
            sl_a = [slice(None)] * 3
            sl_b = [slice(None)] * 3
            sl_a[axis] = slice(0, -1)
            sl_b[axis] = slice(1, None)
            ua = idx[tuple(sl_a)].ravel()
            ub = idx[tuple(sl_b)].ravel()
            ok = self.free[ua] & self.free[ub]
            cand = np.nonzero(ok)[0]
            A, B = self.points[ua[cand]], self.points[ub[cand]]
            # midpoint filter: far from the skeleton means free
            mid_d = self.link.distance(0.5 * (A + B))
            near = mid_d <= r + 0.5 * self.h
            if near.any():
                d = self.link.segment_distance(A[near], B[near])
                bad = np.zeros(len(cand), dtype=bool)
                bad[np.nonzero(near)[0][d <= r]] = True
                cand = cand[~bad]
            free_mask = np.zeros(N, dtype=bool)
            free_mask[ua[cand]] = True
            self.edge_free.append(free_mask)
            # edges go in +axis direction: lexicographically increasing
            sig = kd.batch_signature_codes_3d(self.points[ua[cand]], self.points[ub[cand]], self.surfaces)
            self.edge_sig.append({int(ua[cand[e]]): w for e, w in sig.items()})

    def neighbors(self, v):
        out = []
        for axis in range(3):
            st = self.strides[axis]
            c = self.ijk(v)[axis]
            if c + 1 < self.shape[axis] and self.edge_free[axis][v]:
                out.append((v + st, 1, self.edge_sig[axis].get(v, ())))
            if c > 0 and self.edge_free[axis][v - st]:
                w = self.edge_sig[axis].get(v - st, ())
                out.append((v - st, 1, tuple(-x for x in reversed(w))))
        return out

    def heuristic(self, v) -> int:
        i, j, k = self.ijk(v)
        gi, gj, gk = self._goal_ijk
        return abs(i - gi) + abs(j - gj) + abs(k - gk)

    def point(self, v):
        return tuple(float(c) for c in self.points[v])

    def segment_free(self, a, b) -> bool:
        return bool(self.link.segment_distance([a], [b])[0] > self.link.tube_radius)

    def segment_codes(self, a, b) -> tuple:
        return kd.signature_codes_3d(a, b, self.surfaces)

    def segments_free(self, A, B) -> np.ndarray:
        return self.link.segment_distance(A, B) > self.link.tube_radius

    def segments_codes(self, A, B) -> list:
        return kd.batch_signature_codes_any(A, B, self.surfaces)

    def length(self, a, b) -> float:
        return float(math.dist(a, b))


class CoordSpace:
    """Joint moves of ``scene.N`` robots; cost = number of robots that move."""

    def __init__(self, scene: cs.CoordScene, start=None, goal=None, cache_size: int = 200_000):
        self.scene = scene
        self.presentation = cs.enumerate_relations(scene.N)
        self._index = {g: i + 1 for i, g in enumerate(self.presentation.alphabet)}
        start = cs.joint_config(start if start is not None else scene.start)
        goal = cs.joint_config(goal if goal is not None else scene.goal)
        scene.validate(start, "start")
        scene.validate(goal, "goal")
        self.start, self.goal = start, goal
        self._cache = OrderedDict()
        self._cache_size = cache_size

    def neighbors(self, v):
        hit = self._cache.get(v)
        if hit is not None:
            self._cache.move_to_end(v)
            return hit
        out = [
            (tgt, cost, cs.signature_codes_coord(v, tgt, self._index))
            for tgt, cost in cs.joint_moves(v, self.scene)
        ]
        self._cache[v] = out
        if len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)
        return out

    def heuristic(self, v) -> int:
        return sum(abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in zip(v, self.goal))

    def point(self, v):
        return [list(p) for p in v]
