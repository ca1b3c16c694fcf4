"""Scene loading, result serialization and OBJ export.

Every JSON document carries ``"format": 1``.  Scene files bundle the
geometry with the query endpoints:

* planar: ``{"bounds": [xmin, ymin, xmax, ymax], "obstacles": [[[x, y], ...], ...],
  "start": [x, y], "goal": [x, y], "connectivity": "8"}``
* link: ``{"tube_radius": r, "components": [[[x, y, z], ...], ...],
  "start": [x, y, z], "goal": [x, y, z], "bounds": [6 numbers] (optional)}``
* robots: ``{"N": 3, "grid": [w, h], "start": [[x, y], ...], "goal": [[x, y], ...]}``
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .coord import CoordScene, InvalidConfigError
from .knot import InvalidLinkError, PolygonalLink
from .planar import InvalidSceneError, PlanarScene

FORMAT = 1
KINDS = ("plan2d", "plan3d", "coord")


class InputError(ValueError):
    """Malformed input; the message names the offending line or field."""


def _field(d, name, kind=None):
    if name not in d:
        raise InputError(f"missing field '{name}'")
    v = d[name]
    if kind is not None and not isinstance(v, kind):
        raise InputError(f"field '{name}': expected {getattr(kind, '__name__', kind)}")
    return v


def _point(d, name, dim):
    v = _field(d, name, list)
    if len(v) != dim or not all(isinstance(c, (int, float)) and math.isfinite(c) for c in v):
        raise InputError(f"field '{name}': expected {dim} finite numbers")
    return tuple(float(c) for c in v)


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _check_format(d):
    if not isinstance(d, dict):
        raise InputError("top level must be a JSON object")
    fmt = d.get("format", FORMAT)
    if fmt != FORMAT:
        raise InputError(f"field 'format': unsupported version {fmt!r}")


@dataclass(frozen=True)
class PlanRequest:
    kind: str
    scene: object
    start: tuple
    goal: tuple
    k: int = 1
    res: int = 50
    max_word: int = 12
    max_expansions: int = 10**7
    seed: int = 0
    connectivity: str = "8"
    bounds: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown scene kind {self.kind!r}")
        if self.k < 1:
            raise InputError("k must be at least 1")


def scene_from_dict(kind: str, d: dict):
    """Returns ``(scene, start, goal, extras)`` for a scene document."""
    _check_format(d)
    try:
        if kind == "plan2d":
            bounds = _field(d, "bounds", list)
            if len(bounds) != 4:
                raise InputError("field 'bounds': expected 4 numbers")
            obstacles = d.get("obstacles", [])
            if not isinstance(obstacles, list):
                raise InputError("field 'obstacles': expected list")
            scene = PlanarScene(tuple(obstacles), tuple(bounds))
            extras = {"connectivity": str(d.get("connectivity", "8"))}
            return scene, _point(d, "start", 2), _point(d, "goal", 2), extras
        if kind == "plan3d":
            comps = _field(d, "components", list)
            scene = PolygonalLink(tuple(comps), float(_field(d, "tube_radius", (int, float))))
            extras = {}
            if "bounds" in d:
                b = _field(d, "bounds", list)
                if len(b) != 6:
                    raise InputError("field 'bounds': expected 6 numbers")
                extras["bounds"] = tuple(float(v) for v in b)
            return scene, _point(d, "start", 3), _point(d, "goal", 3), extras
        if kind == "coord":
            for name in ("N", "grid", "start", "goal"):
                _field(d, name)
            scene = CoordScene.from_dict(d)
            return scene, scene.start, scene.goal, {}
    except (InvalidSceneError, InvalidLinkError, InvalidConfigError) as e:
        raise InputError(str(e)) from None
    except (TypeError, ValueError, KeyError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed scene: {e}") from None
    raise InputError(f"unknown scene kind {kind!r}")


def scene_to_dict(kind: str, scene, start=None, goal=None, **extras) -> dict:
    d = scene.to_dict()
    d["format"] = FORMAT
    if kind == "coord":
        if start is not None:
            d["start"] = [list(p) for p in start]
        if goal is not None:
            d["goal"] = [list(p) for p in goal]
    else:
        if start is not None:
            d["start"] = list(start)
        if goal is not None:
            d["goal"] = list(goal)
    for k, v in extras.items():
        if v is not None:
            d[k] = list(v) if isinstance(v, tuple) else v
    return d


def load_request(kind: str, path, **opts) -> PlanRequest:
    text = Path(path).read_text()
    d = parse_json(text, str(path))
    scene, start, goal, extras = scene_from_dict(kind, d)
    merged = {**extras, **{k: v for k, v in opts.items() if v is not None}}
    return PlanRequest(kind, scene, start, goal, **merged)


# ---------------------------------------------------------------------------
# results


@dataclass
class ClassRecord:
    cost: float
    word: str
    key: str
    path: list
    shortened: list | None = None
    shortened_length: float | None = None

    def to_dict(self) -> dict:
        d = {"cost": self.cost, "word": self.word, "key": self.key, "path": self.path}
        if self.shortened is not None:
            d["shortened"] = self.shortened
            d["shortened_length"] = self.shortened_length
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ClassRecord":
        return cls(
            d["cost"], d["word"], d.get("key", d["word"]), d["path"], d.get("shortened"), d.get("shortened_length")
        )


@dataclass
class ResultRecord:
    kind: str
    k: int
    complete: bool
    classes: list
    presentation: dict = field(default_factory=dict)
    expansions: int = 0

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "kind": self.kind,
            "k": self.k,
            "complete": self.complete,
            "expansions": self.expansions,
            "presentation": self.presentation,
            "classes": [c.to_dict() for c in self.classes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRecord":
        _check_format(d)
        return cls(
            d["kind"],
            d["k"],
            d["complete"],
            [ClassRecord.from_dict(c) for c in d["classes"]],
            d.get("presentation", {}),
            d.get("expansions", 0),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        return cls.from_dict(parse_json(text))


def _plain(p):
    # tuples -> lists so that records compare equal after a JSON round trip
    if isinstance(p, (list, tuple)):
        return [_plain(c) for c in p]
    return p


def result_record(kind: str, result, presentation) -> ResultRecord:
    classes = []
    for c in result.classes:
        classes.append(
            ClassRecord(
                c.cost,
                str(c.word),
                str(presentation.decode(c.key)),
                _plain(c.points),
                _plain(c.shortened) if c.shortened is not None else None,
                c.shortened_length,
            )
        )
    return ResultRecord(kind, result.k, result.complete, classes, presentation.to_dict(), result.expansions)


# ---------------------------------------------------------------------------
# OBJ


def _fmt(x: float) -> str:
    return repr(float(x))


def export_obj(surfaces, paths, file) -> None:
    """Write surfaces (one object each, triangle faces) and polylines."""
    lines = ["# hompath surfaces and paths"]
    base = 0
    for s in surfaces or []:
        lines.append(f"o {s.id}")
        for tri in s.triangles:
            for v in tri:
                lines.append("v " + " ".join(_fmt(c) for c in v))
        for t in range(len(s.triangles)):
            i = base + 3 * t
            lines.append(f"f {i + 1} {i + 2} {i + 3}")
        base += 3 * len(s.triangles)
    for n, path in enumerate(paths or []):
        pts = [tuple(p) + (0.0,) * (3 - len(p)) for p in path]
        lines.append(f"o path{n + 1}")
        for p in pts:
            lines.append("v " + " ".join(_fmt(c) for c in p))
        if len(pts) >= 2:
            lines.append("l " + " ".join(str(base + i + 1) for i in range(len(pts))))
        base += len(pts)
    Path(file).write_text("\n".join(lines) + "\n")
