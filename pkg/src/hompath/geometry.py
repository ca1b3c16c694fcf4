"""Small computational-geometry helpers shared by the planar and 3-d modules."""
from __future__ import annotations

import numpy as np


def signed_area(poly) -> float:
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def orient2d(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def point_in_polygon(pt, poly) -> bool:
    """Even-odd test; points on the boundary may go either way."""
    x, y = pt
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


def point_on_segment(p, a, b, tol=0.0) -> bool:
    if abs(orient2d(a, b, p)) > tol:
        return False
    return (
        min(a[0], b[0]) - tol <= p[0] <= max(a[0], b[0]) + tol
        and min(a[1], b[1]) - tol <= p[1] <= max(a[1], b[1]) + tol
    )


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed segment intersection (touching counts)."""
    d1 = orient2d(q1, q2, p1)
    d2 = orient2d(q1, q2, p2)
    d3 = orient2d(p1, p2, q1)
    d4 = orient2d(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and point_on_segment(p1, q1, q2):
        return True
    if d2 == 0 and point_on_segment(p2, q1, q2):
        return True
    if d3 == 0 and point_on_segment(q1, p1, p2):
        return True
    if d4 == 0 and point_on_segment(q2, p1, p2):
        return True
    return False


def segment_intersection_params(p1, p2, q1, q2):
    """Parameters (s, t) of a proper crossing of p1p2 and q1q2, or None."""
    r = (p2[0] - p1[0], p2[1] - p1[1])
    s = (q2[0] - q1[0], q2[1] - q1[1])
    den = r[0] * s[1] - r[1] * s[0]
    if den == 0:
        return None
    qp = (q1[0] - p1[0], q1[1] - p1[1])
    a = (qp[0] * s[1] - qp[1] * s[0]) / den
    b = (qp[0] * r[1] - qp[1] * r[0]) / den
    if 0.0 < a < 1.0 and 0.0 < b < 1.0:
        return a, b
    return None


def segment_hits_polygon(a, b, poly) -> bool:
    """True if the closed segment ab touches the closed polygon."""
    n = len(poly)
    for i in range(n):
        if segments_intersect(a, b, poly[i], poly[(i + 1) % n]):
            return True
    return point_in_polygon(a, poly)


def polygon_is_simple(poly) -> bool:
    n = len(poly)
    if n < 3:
        return False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if a[0] == b[0] and a[1] == b[1]:
            return False
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            if segments_intersect(a, b, poly[j], poly[(j + 1) % n]):
                return False
    return True


def ear_clip(poly) -> list:
    """Triangulate a simple CCW polygon; returns index triples (CCW)."""
    n = len(poly)
    idx = list(range(n))
    tris = []
    guard = 0
    while len(idx) > 3:
        m = len(idx)
        clipped = False
        for k in range(m):
            i0, i1, i2 = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
            a, b, c = poly[i0], poly[i1], poly[i2]
            if orient2d(a, b, c) <= 0:
                continue
            ok = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                p = poly[j]
                if orient2d(a, b, p) >= 0 and orient2d(b, c, p) >= 0 and orient2d(c, a, p) >= 0:
                    # coincident duplicates of the ear's corners do not block it
                    if tuple(p) in (tuple(a), tuple(b), tuple(c)):
                        continue
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            guard += 1
            if guard > 1:
                raise ValueError("ear clipping failed: polygon not simple")
            # drop a collinear vertex and try again
            for k in range(len(idx)):
                m = len(idx)
                a, b, c = poly[idx[(k - 1) % m]], poly[idx[k]], poly[idx[(k + 1) % m]]
                if orient2d(a, b, c) == 0:
                    idx.pop(k)
                    guard = 0
                    break
    if len(idx) == 3:
        i0, i1, i2 = idx
        if orient2d(poly[i0], poly[i1], poly[i2]) > 0:
            tris.append((i0, i1, i2))
    return tris


def interior_point(poly):
    """A point strictly inside a simple polygon: the centroid if inside,
    else the midpoint of the longest inside interval on the middle vertical line."""
    p = np.asarray(poly, dtype=float)
    a = signed_area(p)
    x, y = p[:, 0], p[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    cx = float(np.sum((x + np.roll(x, -1)) * cross) / (6 * a))
    cy = float(np.sum((y + np.roll(y, -1)) * cross) / (6 * a))
    if point_in_polygon((cx, cy), poly) and _boundary_distance((cx, cy), p) > 0:
        return cx, cy
    xs = sorted(set(x.tolist()))
    best = None
    # sample candidate verticals: middle of bbox, then midpoints between vertex xs
    cands = [0.5 * (xs[0] + xs[-1])] + [0.5 * (xs[i] + xs[i + 1]) for i in range(len(xs) - 1)]
    for vx in cands:
        ys = []
        n = len(p)
        for i in range(n):
            x1, y1 = p[i]
            x2, y2 = p[(i + 1) % n]
            if (x1 > vx) != (x2 > vx):
                ys.append(y1 + (vx - x1) * (y2 - y1) / (x2 - x1))
        ys.sort()
        for i in range(0, len(ys) - 1, 2):
            length = ys[i + 1] - ys[i]
            if best is None or length > best[0]:
                best = (length, vx, 0.5 * (ys[i] + ys[i + 1]))
        if best is not None and vx == cands[0]:
            break
    if best is None:
        raise ValueError("degenerate polygon")
    return best[1], best[2]


def _boundary_distance(pt, p) -> float:
    q = np.roll(p, -1, axis=0)
    return float(point_segment_distance(np.asarray(pt, float)[None, :], p, q).min())


def point_segment_distance(pts, a, b):
    """Distances between points and segments, broadcasting over leading axes.

    ``pts`` has shape (..., d) and ``a``, ``b`` shape (..., d); any dimension.
    """
    pts = np.asarray(pts, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    ap = pts - a
    den = np.sum(ab * ab, axis=-1)
    t = np.where(den > 0, np.sum(ap * ab, axis=-1) / np.where(den > 0, den, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.linalg.norm(pts - proj, axis=-1)


def segment_segment_distance(p0, p1, q0, q1):
    """Minimum distance between 3-d segments, vectorised over leading axes."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    den = a * e - b * b
    safe_a = np.where(a > 0, a, 1.0)
    safe_e = np.where(e > 0, e, 1.0)
    ok = den > 1e-300 * np.maximum(a * e, 1e-300)
    s = np.where(ok, np.clip((b * f - c * e) / np.where(ok, den, 1.0), 0, 1), 0.0)
    t = (b * s + f) / safe_e
    t_lo = t < 0
    t_hi = t > 1
    t = np.clip(t, 0, 1)
    s = np.where(t_lo, np.clip(-c / safe_a, 0, 1), s)
    s = np.where(t_hi, np.clip((b - c) / safe_a, 0, 1), s)
    # degenerate segments
    q_pt = e <= 0
    s = np.where(q_pt, np.clip(-c / safe_a, 0, 1), s)
    t = np.where(q_pt, 0.0, t)
    p_pt = a <= 0
    s = np.where(p_pt, 0.0, s)
    t = np.where(p_pt, np.clip(f / safe_e, 0, 1), t)
    cp = p0 + s[..., None] * d1
    cq = q0 + t[..., None] * d2
    return np.linalg.norm(cp - cq, axis=-1)


def segments_hit_polygon(A, B, poly) -> np.ndarray:
    """Vectorised ``segment_hits_polygon`` for segments A[i]B[i] (closed test)."""
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    P = np.asarray(poly, dtype=float)
    Q = np.roll(P, -1, axis=0)
    hit = np.zeros(len(A), dtype=bool)

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    def on_seg(p, a, b):
        return (
            (np.minimum(a[..., 0], b[..., 0]) <= p[..., 0])
            & (p[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
            & (np.minimum(a[..., 1], b[..., 1]) <= p[..., 1])
            & (p[..., 1] <= np.maximum(a[..., 1], b[..., 1]))
        )

    for p, q in zip(P, Q):
        p_ = np.broadcast_to(p, A.shape)
        q_ = np.broadcast_to(q, A.shape)
        d1 = orient(p_, q_, A)
        d2 = orient(p_, q_, B)
        d3 = orient(A, B, p_)
        d4 = orient(A, B, q_)
        proper = (d1 * d2 < 0) & (d3 * d4 < 0)
        touch = (
            ((d1 == 0) & on_seg(A, p_, q_))
            | ((d2 == 0) & on_seg(B, p_, q_))
            | ((d3 == 0) & on_seg(p_, A, B))
            | ((d4 == 0) & on_seg(q_, A, B))
        )
        hit |= proper | touch
    # segment entirely inside
    x, y = A[:, 0], A[:, 1]
    inside = np.zeros(len(A), dtype=bool)
    for p, q in zip(P, Q):
        cond = (p[1] > y) != (q[1] > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = p[0] + (y - p[1]) * (q[0] - p[0]) / (q[1] - p[1])
        inside ^= cond & (xc > x)
    return hit | inside
