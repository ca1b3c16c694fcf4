"""Pure-Python reference kernels.

Every function here has a twin in ``_kernels.pyx`` with identical semantics
(including floating-point operation order); the tests compare the two.
Words are tuples of non-zero ints: ``+k`` is generator ``k``, ``-k`` its inverse.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def free_reduce(seq):
    out = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_core(seq):
    i, j = 0, len(seq)
    while j - i >= 2 and seq[i] == -seq[j - 1]:
        i += 1
        j -= 1
    return tuple(seq[i:j])


class RelationSet:
    """Sorted symmetricized relators, prepared for repeated Dehn reduction."""

    def __init__(self, relators):
        self.relators = tuple(tuple(r) for r in relators)

    def __len__(self):
        return len(self.relators)


def _inverse_tail(rho, start):
    return [-x for x in reversed(rho[start:])]


def dehn_linear(seq, relset):
    """Dehn's algorithm on an open word; subword matches do not wrap."""
    w = list(free_reduce(seq))
    rels = relset.relators
    while True:
        n = len(w)
        applied = False
        for rho in rels:
            L = len(rho)
            need = L // 2 + 1
            if n < need:
                continue
            first = rho[0]
            for s in range(n - need + 1):
                if w[s] != first:
                    continue
                lim = min(L, n - s)
                ln = 1
                while ln < lim and w[s + ln] == rho[ln]:
                    ln += 1
                if ln >= need:
                    w = list(free_reduce(w[:s] + _inverse_tail(rho, ln) + w[s + ln:]))
                    applied = True
                    break
            if applied:
                break
        if not applied:
            return tuple(w)


def dehn_cyclic(seq, relset):
    """Dehn's algorithm on a cyclic word; returns a cyclically reduced word."""
    w = list(cyclic_core(free_reduce(seq)))
    rels = relset.relators
    while True:
        n = len(w)
        applied = False
        for rho in rels:
            L = len(rho)
            need = L // 2 + 1
            if n < need:
                continue
            first = rho[0]
            lim = min(L, n)
            for s in range(n):
                if w[s] != first:
                    continue
                ln = 1
                while ln < lim and w[(s + ln) % n] == rho[ln]:
                    ln += 1
                if ln >= need:
                    rot = w[s:] + w[:s]
                    w = list(cyclic_core(free_reduce(_inverse_tail(rho, ln) + rot[ln:])))
                    applied = True
                    break
            if applied:
                break
        if not applied:
            return tuple(w)


# ---------------------------------------------------------------------------
# geometry


def _orient3d(px, py, pz, qx, qy, qz, rx, ry, rz, sx, sy, sz):
    # ((q - p) x (r - p)) . (s - p)
    ux = qx - px
    uy = qy - py
    uz = qz - pz
    vx = rx - px
    vy = ry - py
    vz = rz - pz
    wx = sx - px
    wy = sy - py
    wz = sz - pz
    return (uy * vz - uz * vy) * wx + (uz * vx - ux * vz) * wy + (ux * vy - uy * vx) * wz


def _lex_less(ax, ay, az, bx, by, bz):
    if ax != bx:
        return ax < bx
    if ay != by:
        return ay < by
    return az < bz


def _edge_sign(a, b, vi, vj):
    """Side of the line a->b relative to triangle edge vi->vj, ties broken symbolically.

    The determinant is always evaluated with the edge endpoints in
    lexicographic order so that the two triangles sharing an edge see
    exactly opposite values.
    """
    ax, ay, az = a
    bx, by, bz = b
    if _lex_less(vi[0], vi[1], vi[2], vj[0], vj[1], vj[2]):
        d = _orient3d(ax, ay, az, bx, by, bz, vi[0], vi[1], vi[2], vj[0], vj[1], vj[2])
        if d > 0.0:
            return 1
        if d < 0.0:
            return -1
        return 1
    d = _orient3d(ax, ay, az, bx, by, bz, vj[0], vj[1], vj[2], vi[0], vi[1], vi[2])
    if d > 0.0:
        return -1
    if d < 0.0:
        return 1
    return -1


def segment_triangle_hits(seg_a, seg_b, tris):
    """All transverse segment/triangle crossings.

    Returns ``(seg_idx, tri_idx, t, sign)`` arrays; ``t`` is the crossing
    parameter along the segment and ``sign`` is +1 when the segment moves
    along the triangle normal ``(v1 - v0) x (v2 - v0)``.  Endpoints lying
    exactly on a triangle plane count as being on its positive side.
    """
    seg_a = np.ascontiguousarray(seg_a, dtype=np.float64).reshape(-1, 3)
    seg_b = np.ascontiguousarray(seg_b, dtype=np.float64).reshape(-1, 3)
    tris = np.ascontiguousarray(tris, dtype=np.float64).reshape(-1, 3, 3)
    out_s, out_t, out_p, out_g = [], [], [], []
    if len(seg_a) == 0 or len(tris) == 0:
        return _pack(out_s, out_t, out_p, out_g)
    seg_lo = np.minimum(seg_a, seg_b)
    seg_hi = np.maximum(seg_a, seg_b)
    tri_lo = tris.min(axis=1)
    tri_hi = tris.max(axis=1)
    for ti in range(len(tris)):
        cand = np.nonzero(
            np.all(seg_hi >= tri_lo[ti], axis=1) & np.all(seg_lo <= tri_hi[ti], axis=1)
        )[0]
        if len(cand) == 0:
            continue
        v0, v1, v2 = tris[ti]
        A = seg_a[cand]
        B = seg_b[cand]
        sa = _orient3d_vec(v0, v1, v2, A)
        sb = _orient3d_vec(v0, v1, v2, B)
        side_a = np.where(sa < 0.0, -1, 1)
        side_b = np.where(sb < 0.0, -1, 1)
        crossing = side_a != side_b
        if not crossing.any():
            continue
        cand = cand[crossing]
        A, B, sa, sb, side_a = A[crossing], B[crossing], sa[crossing], sb[crossing], side_a[crossing]
        e0 = _edge_sign_vec(A, B, v0, v1)
        e1 = _edge_sign_vec(A, B, v1, v2)
        e2 = _edge_sign_vec(A, B, v2, v0)
        inside = (e0 == e1) & (e1 == e2)
        for k in np.nonzero(inside)[0]:
            out_s.append(int(cand[k]))
            out_t.append(ti)
            out_p.append(float(sa[k] / (sa[k] - sb[k])))
            out_g.append(-int(side_a[k]))
    return _pack(out_s, out_t, out_p, out_g)


def _pack(s, t, p, g):
    return (
        np.asarray(s, dtype=np.int64),
        np.asarray(t, dtype=np.int64),
        np.asarray(p, dtype=np.float64),
        np.asarray(g, dtype=np.int8),
    )


def _orient3d_vec(p, q, r, S):
    # same operation order as _orient3d, vectorised over the last argument
    ux = q[0] - p[0]
    uy = q[1] - p[1]
    uz = q[2] - p[2]
    vx = r[0] - p[0]
    vy = r[1] - p[1]
    vz = r[2] - p[2]
    wx = S[:, 0] - p[0]
    wy = S[:, 1] - p[1]
    wz = S[:, 2] - p[2]
    return (uy * vz - uz * vy) * wx + (uz * vx - ux * vz) * wy + (ux * vy - uy * vx) * wz


def _edge_sign_vec(A, B, vi, vj):
    swap = not _lex_less(vi[0], vi[1], vi[2], vj[0], vj[1], vj[2])
    lo, hi = (vj, vi) if swap else (vi, vj)
    # orient3d(a, b, lo, hi) with a, b varying per row
    ux = B[:, 0] - A[:, 0]
    uy = B[:, 1] - A[:, 1]
    uz = B[:, 2] - A[:, 2]
    vx = lo[0] - A[:, 0]
    vy = lo[1] - A[:, 1]
    vz = lo[2] - A[:, 2]
    wx = hi[0] - A[:, 0]
    wy = hi[1] - A[:, 1]
    wz = hi[2] - A[:, 2]
    d = (uy * vz - uz * vy) * wx + (uz * vx - ux * vz) * wy + (ux * vy - uy * vx) * wz
    s = np.where(d < 0.0, -1, 1)
    return -s if swap else s


def segment_ray_hits(seg_a, seg_b, origins):
    """Crossings of 2-d segments with upward vertical rays.

    Ray ``i`` is treated as sitting at ``x = origin_x + i * eps``, so a point
    with ``x == origin_x`` is on its left.  Returns ``(seg_idx, ray_idx, t,
    sign)`` where sign is -1 for a left-to-right crossing.
    """
    seg_a = np.asarray(seg_a, dtype=np.float64).reshape(-1, 2)
    seg_b = np.asarray(seg_b, dtype=np.float64).reshape(-1, 2)
    origins = np.asarray(origins, dtype=np.float64).reshape(-1, 2)
    out_s, out_r, out_t, out_g = [], [], [], []
    for ri in range(len(origins)):
        ox, oy = origins[ri]
        left_a = seg_a[:, 0] <= ox
        left_b = seg_b[:, 0] <= ox
        cand = np.nonzero(left_a != left_b)[0]
        for k in cand:
            ax, ay = seg_a[k]
            bx, by = seg_b[k]
            t = (ox - ax) / (bx - ax)
            y = ay + t * (by - ay)
            if y > oy:
                out_s.append(int(k))
                out_r.append(ri)
                out_t.append(float(t))
                out_g.append(-1 if bx > ax else 1)
    return _pack(out_s, out_r, out_t, out_g)
