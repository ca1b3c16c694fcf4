"""Ray invariants for the plane punctured by polygonal obstacles.

One upward (+y) ray is shot from an interior point of every obstacle.
Walking along a path, each crossing of ray ``r_i`` appends ``r_i`` (moving
right-to-left, i.e. towards -x) or ``r_i^-1`` (moving left-to-right).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import kernels
from .words import Letter, Presentation, Word, compose


class InvalidSceneError(ValueError):
    pass


class CollisionError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarScene:
    """Disjoint simple polygons inside an axis-aligned box ``(xmin, ymin, xmax, ymax)``.

    Polygons are normalised to CCW order on construction.
    """

    obstacles: tuple = ()
    bounds: tuple = (0.0, 0.0, 1.0, 1.0)

    def __post_init__(self):
        obs = []
        for i, poly in enumerate(self.obstacles):
            p = [tuple(float(c) for c in v) for v in poly]
            if len(p) > 1 and p[0] == p[-1]:
                p = p[:-1]
            if len(p) < 3 or any(len(v) != 2 for v in p):
                raise InvalidSceneError(f"obstacle {i}: need at least 3 2-d vertices")
            if not geo.polygon_is_simple(p):
                raise InvalidSceneError(f"obstacle {i}: polygon is not simple")
            a = geo.signed_area(p)
            if a == 0:
                raise InvalidSceneError(f"obstacle {i}: zero area")
            if a < 0:
                p = p[::-1]
            obs.append(tuple(p))
        b = tuple(float(v) for v in self.bounds)
        if len(b) != 4 or not (b[0] < b[2] and b[1] < b[3]):
            raise InvalidSceneError("bounds must be [xmin, ymin, xmax, ymax] with positive extent")
        object.__setattr__(self, "obstacles", tuple(obs))
        object.__setattr__(self, "bounds", b)
        for i, p in enumerate(obs):
            for x, y in p:
                if not (b[0] <= x <= b[2] and b[1] <= y <= b[3]):
                    raise InvalidSceneError(f"obstacle {i} leaves the bounds")
        for i in range(len(obs)):
            for j in range(i + 1, len(obs)):
                if _polygons_touch(obs[i], obs[j]):
                    raise InvalidSceneError(f"obstacles {i} and {j} overlap")

    def collides(self, a, b) -> bool:
        for poly in self.obstacles:
            if geo.segment_hits_polygon(a, b, poly):
                return True
        return False

    def point_free(self, pt) -> bool:
        x, y = pt
        b = self.bounds
        if not (b[0] <= x <= b[2] and b[1] <= y <= b[3]):
            return False
        return not any(geo.point_in_polygon(pt, p) for p in self.obstacles)

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "bounds": list(self.bounds),
            "obstacles": [[list(v) for v in p] for p in self.obstacles],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlanarScene":
        return cls(obstacles=tuple(d.get("obstacles", ())), bounds=tuple(d["bounds"]))


def _polygons_touch(p, q) -> bool:
    for i in range(len(p)):
        for j in range(len(q)):
            if geo.segments_intersect(p[i], p[(i + 1) % len(p)], q[j], q[(j + 1) % len(q)]):
                return True
    return geo.point_in_polygon(p[0], q) or geo.point_in_polygon(q[0], p)


@dataclass(frozen=True)
class Ray:
    id: str
    origin: tuple
    direction: tuple = (0.0, 1.0)


@dataclass(frozen=True)
class RaySet:
    rays: tuple
    presentation: Presentation
    origins: np.ndarray = field(repr=False, compare=False, default=None)

    def __len__(self):
        return len(self.rays)


def build_rays(scene: PlanarScene) -> RaySet:
    """One +y ray per obstacle; the presentation is free (no relations)."""
    rays = []
    for i, poly in enumerate(scene.obstacles):
        rays.append(Ray(f"r{i + 1}", geo.interior_point(poly)))
    pres = Presentation([r.id for r in rays], [])
    origins = np.array([r.origin for r in rays], dtype=float).reshape(-1, 2)
    return RaySet(tuple(rays), pres, origins)


def signature_codes(a, b, rays: RaySet) -> tuple:
    """Encoded crossing word of the segment ab (ray ``i`` has code ``i + 1``).

    Rays are treated as sitting at ``x + i*eps``; coincident crossings are
    ordered by that offset along the direction of motion.  The segment is
    evaluated in lexicographic direction so reversal inverts the word exactly.
    """
    if len(rays) == 0:
        return ()
    a = (float(a[0]), float(a[1]))
    b = (float(b[0]), float(b[1]))
    if a > b:
        return tuple(-x for x in reversed(signature_codes(b, a, rays)))
    _, ridx, t, sign = kernels.segment_ray_hits(
        np.asarray(a, float)[None, :], np.asarray(b, float)[None, :], rays.origins
    )
    if len(ridx) == 0:
        return ()
    forward = b[0] > a[0]
    order = sorted(
        range(len(ridx)), key=lambda k: (t[k], ridx[k] if forward else -ridx[k])
    )
    return kernels.free_reduce([int(sign[k]) * (int(ridx[k]) + 1) for k in order])


def edge_signature_2d(a, b, rays: RaySet, scene: PlanarScene | None = None) -> Word:
    """Crossing word of the straight segment from ``a`` to ``b``."""
    if scene is not None and scene.collides(a, b):
        raise CollisionError(f"segment {tuple(a)} -> {tuple(b)} hits an obstacle")
    return rays.presentation.decode(signature_codes(a, b, rays))


def path_signature_2d(points, rays: RaySet, scene: PlanarScene | None = None) -> Word:
    w = Word()
    for a, b in zip(points[:-1], points[1:]):
        w = compose(w, edge_signature_2d(a, b, rays, scene))
    return w


__all__ = [
    "CollisionError",
    "InvalidSceneError",
    "Letter",
    "PlanarScene",
    "Ray",
    "RaySet",
    "build_rays",
    "edge_signature_2d",
    "path_signature_2d",
    "signature_codes",
]
