"""Search over the word-augmented graph for the k cheapest homotopy classes."""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np

from . import kernels
from .words import Equivalence, Presentation, Word, equivalent_encoded


class SearchSpace(Protocol):
    start: Any
    goal: Any
    presentation: Presentation

    def neighbors(self, v): ...

    def heuristic(self, v): ...

    def point(self, v): ...


@dataclass(frozen=True)
class AugmentedState:
    vertex: Any
    key: tuple = ()


@dataclass
class PathClass:
    vertices: list
    cost: float
    key: tuple
    word: Word
    points: list
    shortened: list | None = None
    shortened_length: float | None = None


@dataclass
class PlanResult:
    classes: list
    complete: bool
    k: int
    expansions: int = 0
    word_cap_hit: bool = False
    stats: dict = field(default_factory=dict)

    def costs(self) -> list:
        return [c.cost for c in self.classes]


class _Transitions:
    """Cached ``key * signature`` -> canonical key."""

    def __init__(self, presentation: Presentation):
        self.p = presentation
        self.cache = {}

    def __call__(self, key, sig):
        if not sig:
            return key
        tk = (key, sig)
        out = self.cache.get(tk)
        if out is None:
            out = self.p.key_encoded(key + sig)
            self.cache[tk] = out
        return out


def expand(state: AugmentedState, space, transitions=None):
    """Successors ``(AugmentedState, cost)`` of an augmented state."""
    tr = transitions or _Transitions(space.presentation)
    return [
        (AugmentedState(v2, tr(state.key, sig)), c)
        for v2, c, sig in space.neighbors(state.vertex)
    ]


class StartGoalError(ValueError):
    pass


def plan_k_classes(space, k: int, max_word: int = 12, max_expansions: int = 10**7) -> PlanResult:
    """A* over (vertex, canonical key) states; goal states are accepted in
    cost order unless provably equivalent to an already accepted class."""
    if k < 1:
        raise ValueError("k must be at least 1")
    pres = space.presentation
    tr = _Transitions(pres)
    start, goal = space.start, space.goal
    if not space.neighbors(start) and start != goal:
        raise StartGoalError("start vertex has no free moves")
    s0 = (start, ())
    best = {s0: 0}
    parent = {s0: None}
    closed = set()
    tie = itertools.count()
    heap = [(space.heuristic(start), 0, next(tie), start, ())]  # (f, -g, tie, v, key)
    accepted = []
    seen_goal_keys = set()
    expansions = 0
    cap_hit = False
    while heap:
        f, ng, _, v, key = heapq.heappop(heap)
        g = -ng
        s = (v, key)
        if s in closed:
            continue
        closed.add(s)
        expansions += 1
        if v == goal and key not in seen_goal_keys:
            seen_goal_keys.add(key)
            if all(equivalent_encoded(key, c.key, pres) is Equivalence.NOT_PROVEN for c in accepted):
                accepted.append(_make_class(space, parent, s, g))
                if len(accepted) == k:
                    break
        if expansions >= max_expansions:
            break
        for v2, c, sig in space.neighbors(v):
            k2 = tr(key, sig)
            if len(k2) > max_word:
                cap_hit = True
                continue
            s2 = (v2, k2)
            if s2 in closed:
                continue
            g2 = g + c
            if g2 < best.get(s2, math.inf):
                best[s2] = g2
                parent[s2] = s
                heapq.heappush(heap, (g2 + space.heuristic(v2), -g2, next(tie), v2, k2))
    return PlanResult(
        accepted,
        len(accepted) == k,
        k,
        expansions,
        cap_hit,
        {"states": len(best), "transitions": len(tr.cache)},
    )


def _make_class(space, parent, s, g) -> PathClass:
    verts = []
    cur = s
    while cur is not None:
        verts.append(cur[0])
        cur = parent[cur]
    verts.reverse()
    pres = space.presentation
    word = path_word(space, verts)
    return PathClass(verts, g, s[1], pres.decode(word), [space.point(v) for v in verts])


def path_word(space, verts) -> tuple:
    """Freely reduced concatenation of edge signatures along a vertex path."""
    acc = []
    for a, b in zip(verts[:-1], verts[1:]):
        for v2, _, sig in space.neighbors(a):
            if v2 == b:
                acc.extend(sig)
                break
        else:
            raise ValueError(f"no edge {a} -> {b}")
    return kernels.free_reduce(acc)


def path_key(space, verts) -> tuple:
    """Canonical key accumulated edge by edge, as during search."""
    tr = _Transitions(space.presentation)
    key = ()
    for a, b in zip(verts[:-1], verts[1:]):
        for v2, _, sig in space.neighbors(a):
            if v2 == b:
                key = tr(key, sig)
                break
        else:
            raise ValueError(f"no edge {a} -> {b}")
    return key


# ---------------------------------------------------------------------------
# shortening


def _polyline_codes(space, pts) -> tuple:
    acc = []
    for a, b in zip(pts[:-1], pts[1:]):
        acc.extend(space.segment_codes(a, b))
    return kernels.free_reduce(acc)


def _polyline_length(pts) -> float:
    return float(sum(math.dist(a, b) for a, b in zip(pts[:-1], pts[1:])))


def _batch_free(space, a, B):
    if hasattr(space, "segments_free"):
        return space.segments_free(np.repeat([a], len(B), axis=0), B)
    return np.array([space.segment_free(a, b) for b in B], dtype=bool)


def _batch_codes(space, a, B):
    if hasattr(space, "segments_codes"):
        return space.segments_codes(np.repeat([a], len(B), axis=0), B)
    return [space.segment_codes(a, b) for b in B]


def shorten(points, space, iterations: int = 60, seed: int = 0) -> list:
    """Shortcut a polyline while keeping it collision-free and in its class.

    A shortcut from point i to point j replaces the sub-polyline when the
    straight segment is free, strictly shorter, and its crossing word is
    provably equal to the sub-polyline's.  Random pairs first, then greedy
    sweeps (farthest valid j from each i) until nothing changes.  Returns the
    input if the final whole-path check fails.
    """
    pres = space.presentation
    pts = [tuple(float(c) for c in p) for p in points]
    if len(pts) < 3:
        return pts
    orig = pts
    rng = np.random.default_rng(seed)
    seg_cache = {}

    def seg(a, b):
        w = seg_cache.get((a, b))
        if w is None:
            w = tuple(space.segment_codes(a, b))
            seg_cache[(a, b)] = w
        return w

    def sub_codes(pts, i, j):
        acc = []
        for q in range(i, j):
            acc.extend(seg(pts[q], pts[q + 1]))
        return kernels.free_reduce(acc)

    def same_class(w_new, w_old):
        return w_new == w_old or equivalent_encoded(w_new, w_old, pres) is Equivalence.PROVEN_EQUAL

    for _ in range(iterations):
        n = len(pts)
        if n < 3:
            break
        i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
        if j - i < 2:
            continue
        a, b = pts[i], pts[j]
        if math.dist(a, b) >= _polyline_length(pts[i : j + 1]) - 1e-12:
            continue
        if not space.segment_free(a, b):
            continue
        w = tuple(space.segment_codes(a, b))
        if same_class(w, sub_codes(pts, i, j)):
            seg_cache[(a, b)] = w
            pts = pts[: i + 1] + pts[j:]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(pts) - 2:
            a = pts[i]
            js = list(range(i + 2, len(pts)))
            cum = np.cumsum([math.dist(pts[q], pts[q + 1]) for q in range(i, len(pts) - 1)])
            direct = np.array([math.dist(a, pts[j]) for j in js])
            shorter = direct < cum[1:] - 1e-12
            cand = [j for j, ok in zip(js, shorter) if ok]
            if cand:
                B = np.array([pts[j] for j in cand])
                free = _batch_free(space, a, B)
                cand = [j for j, ok in zip(cand, free) if ok]
            if cand:
                codes = _batch_codes(space, a, np.array([pts[j] for j in cand]))
                for j, w in sorted(zip(cand, codes), reverse=True):
                    w = tuple(w)
                    if same_class(w, sub_codes(pts, i, j)):
                        seg_cache[(a, pts[j])] = w
                        pts = pts[: i + 1] + pts[j:]
                        changed = True
                        break
            i += 1
    if not same_class(sub_codes(pts, 0, len(pts) - 1), sub_codes(orig, 0, len(orig) - 1)):
        return orig
    if any(not space.segment_free(a, b) for a, b in zip(pts[:-1], pts[1:])):
        return orig
    return pts


def shorten_result(result: PlanResult, space, seed: int = 0) -> PlanResult:
    if not hasattr(space, "segment_free"):
        return result
    for c in result.classes:
        c.shortened = shorten(c.points, space, seed=seed)
        c.shortened_length = _polyline_length(c.shortened)
    return result
