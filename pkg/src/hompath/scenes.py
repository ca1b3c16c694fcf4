"""Built-in example scenes (the JSON copies in ``scenes/`` are generated from these)."""
from __future__ import annotations

import numpy as np

from .coord import CoordScene
from .knot import PolygonalLink
from .planar import PlanarScene


def square(cx, cy, r=0.5):
    return [(cx - r, cy - r), (cx + r, cy - r), (cx + r, cy + r), (cx - r, cy + r)]


def regular_polygon(cx, cy, r, n=12):
    t = 2 * np.pi * np.arange(n) / n
    return [(cx + r * np.cos(a), cy + r * np.sin(a)) for a in t]


# six unit squares with a path winding between them
SIX_OBSTACLE_CENTERS = ((1, 0), (3, 4), (-2, 6), (5, 3), (10, 3), (7, 0))
SIX_OBSTACLE_PATH = (
    (0, 2), (6, 2), (6, 5), (4, 5), (4, 3), (2, 3), (2, 6), (6, 6), (6, 7), (4, 7), (4, 8), (8, 8),
)


def six_obstacles() -> PlanarScene:
    return PlanarScene(tuple(square(*c) for c in SIX_OBSTACLE_CENTERS), (-4.0, -2.0, 12.0, 10.0))


def two_obstacles() -> tuple:
    """A 20x20-vertex friendly scene with two blocks between start and goal."""
    scene = PlanarScene((square(6, 10, 2), square(13, 9, 2)), (0.0, 0.0, 19.0, 19.0))
    return scene, (1.0, 10.0), (18.0, 10.0)


def one_disk() -> tuple:
    scene = PlanarScene((regular_polygon(5, 5, 1.5),), (0.0, 0.0, 10.0, 10.0))
    return scene, (5.0, 1.0), (5.0, 9.0)


def trefoil(n: int = 24, tube_radius: float = 0.25) -> PolygonalLink:
    t = 2 * np.pi * np.arange(n) / n
    pts = np.stack([np.sin(t) + 2 * np.sin(2 * t), np.cos(t) - 2 * np.cos(2 * t), -np.sin(3 * t)], axis=1)
    return PolygonalLink((pts,), tube_radius)


def hopf(n: int = 12, tube_radius: float = 0.15) -> PolygonalLink:
    t = 2 * np.pi * np.arange(n) / n
    a = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    b = np.stack([1 + np.cos(t), 0.5 * np.sin(t), np.sin(t)], axis=1)
    return PolygonalLink((a, b), tube_radius)


def unknot(tube_radius: float = 0.2) -> PolygonalLink:
    sq = [(0, 0, 0), (2, 0, 0), (2, 2, 0), (0, 2, 0)]
    return PolygonalLink((sq,), tube_radius)


TREFOIL_START = (0.3, 0.2, 2.0)
TREFOIL_GOAL = (0.3, 0.2, -2.0)
HOPF_START = (0.6, 0.1, 1.8)
HOPF_GOAL = (0.6, 0.1, -1.8)


def three_robots() -> CoordScene:
    return CoordScene(3, (7, 7), start=((0, 3), (3, 3), (6, 3)), goal=((6, 3), (3, 3), (0, 3)))


def three_robots_small() -> CoordScene:
    # three robots in a row reverse their order
    return CoordScene(3, (4, 4), start=((0, 0), (1, 0), (2, 0)), goal=((2, 0), (1, 0), (0, 0)))
