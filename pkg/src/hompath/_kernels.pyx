# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; a drop-in twin of ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"


cdef int _reduce_into(int* src, int n, int* dst) noexcept nogil:
    # free reduction; src and dst may alias
    cdef int k = 0, i, x
    for i in range(n):
        x = src[i]
        if k > 0 and dst[k - 1] == -x:
            k -= 1
        else:
            dst[k] = x
            k += 1
    return k


cdef int _cyclic_into(int* w, int n) noexcept nogil:
    # strip a conjugating prefix/suffix in place, returns new length
    cdef int i = 0, j = n, k
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    if i > 0:
        for k in range(j - i):
            w[k] = w[i + k]
    return j - i


cdef int* _to_buf(seq, int* n_out) except NULL:
    cdef Py_ssize_t n = len(seq), i
    cdef int* buf = <int*> malloc((n + 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = seq[i]
    n_out[0] = <int> n
    return buf


cdef tuple _from_buf(int* buf, int n):
    return tuple([buf[i] for i in range(n)])


def free_reduce(seq):
    cdef int n
    cdef int* buf = _to_buf(seq, &n)
    try:
        n = _reduce_into(buf, n, buf)
        return _from_buf(buf, n)
    finally:
        free(buf)


def cyclic_core(seq):
    cdef int n
    cdef int* buf = _to_buf(seq, &n)
    try:
        n = _cyclic_into(buf, n)
        return _from_buf(buf, n)
    finally:
        free(buf)


cdef class RelationSet:
    """Sorted symmetricized relators, flattened for repeated Dehn reduction."""
    cdef int* flat
    cdef int* offs
    cdef int count
    cdef readonly tuple relators

    def __cinit__(self, relators):
        rels = tuple(tuple(r) for r in relators)
        self.relators = rels
        self.count = len(rels)
        total = sum(len(r) for r in rels)
        self.flat = <int*> malloc((total + 1) * sizeof(int))
        self.offs = <int*> malloc((self.count + 1) * sizeof(int))
        if self.flat == NULL or self.offs == NULL:
            raise MemoryError()
        cdef int pos = 0, i
        for i in range(self.count):
            self.offs[i] = pos
            for x in rels[i]:
                self.flat[pos] = x
                pos += 1
        self.offs[self.count] = pos

    def __dealloc__(self):
        free(self.flat)
        free(self.offs)

    def __len__(self):
        return self.count


cdef int _dehn_linear(int* w, int n, int* tmp, RelationSet rs) noexcept nogil:
    cdef int r, L, need, s, ln, lim, k, m, first
    cdef int* rho
    cdef bint applied = True
    while applied:
        applied = False
        for r in range(rs.count):
            rho = rs.flat + rs.offs[r]
            L = rs.offs[r + 1] - rs.offs[r]
            need = L // 2 + 1
            if n < need:
                continue
            first = rho[0]
            for s in range(n - need + 1):
                if w[s] != first:
                    continue
                lim = L if L < n - s else n - s
                ln = 1
                while ln < lim and w[s + ln] == rho[ln]:
                    ln += 1
                if ln >= need:
                    m = 0
                    for k in range(s):
                        tmp[m] = w[k]
                        m += 1
                    for k in range(L - 1, ln - 1, -1):
                        tmp[m] = -rho[k]
                        m += 1
                    for k in range(s + ln, n):
                        tmp[m] = w[k]
                        m += 1
                    n = _reduce_into(tmp, m, w)
                    applied = True
                    break
            if applied:
                break
    return n


cdef int _dehn_cyclic(int* w, int n, int* tmp, RelationSet rs) noexcept nogil:
    cdef int r, L, need, s, ln, lim, k, m, first
    cdef int* rho
    cdef bint applied = True
    while applied:
        applied = False
        for r in range(rs.count):
            rho = rs.flat + rs.offs[r]
            L = rs.offs[r + 1] - rs.offs[r]
            need = L // 2 + 1
            if n < need:
                continue
            first = rho[0]
            lim = L if L < n else n
            for s in range(n):
                if w[s] != first:
                    continue
                ln = 1
                while ln < lim and w[(s + ln) % n] == rho[ln]:
                    ln += 1
                if ln >= need:
                    m = 0
                    for k in range(L - 1, ln - 1, -1):
                        tmp[m] = -rho[k]
                        m += 1
                    for k in range(ln, n):
                        tmp[m] = w[(s + k) % n]
                        m += 1
                    n = _reduce_into(tmp, m, w)
                    n = _cyclic_into(w, n)
                    applied = True
                    break
            if applied:
                break
    return n


def dehn_linear(seq, RelationSet relset):
    """Dehn's algorithm on an open word; subword matches do not wrap."""
    cdef int n
    cdef int* w = _to_buf(seq, &n)
    cdef int* tmp = <int*> malloc((n + 1) * sizeof(int))
    try:
        if tmp == NULL:
            raise MemoryError()
        n = _reduce_into(w, n, w)
        n = _dehn_linear(w, n, tmp, relset)
        return _from_buf(w, n)
    finally:
        free(w)
        free(tmp)


def dehn_cyclic(seq, RelationSet relset):
    """Dehn's algorithm on a cyclic word; returns a cyclically reduced word."""
    cdef int n
    cdef int* w = _to_buf(seq, &n)
    cdef int* tmp = <int*> malloc((n + 1) * sizeof(int))
    try:
        if tmp == NULL:
            raise MemoryError()
        n = _reduce_into(w, n, w)
        n = _cyclic_into(w, n)
        n = _dehn_cyclic(w, n, tmp, relset)
        return _from_buf(w, n)
    finally:
        free(w)
        free(tmp)


# ---------------------------------------------------------------------------
# geometry


cdef inline double _orient3d(double px, double py, double pz,
                             double qx, double qy, double qz,
                             double rx, double ry, double rz,
                             double sx, double sy, double sz) noexcept nogil:
    cdef double ux = qx - px, uy = qy - py, uz = qz - pz
    cdef double vx = rx - px, vy = ry - py, vz = rz - pz
    cdef double wx = sx - px, wy = sy - py, wz = sz - pz
    return (uy * vz - uz * vy) * wx + (uz * vx - ux * vz) * wy + (ux * vy - uy * vx) * wz


cdef inline bint _lex_less(const double* a, const double* b) noexcept nogil:
    if a[0] != b[0]:
        return a[0] < b[0]
    if a[1] != b[1]:
        return a[1] < b[1]
    return a[2] < b[2]


cdef inline int _edge_sign(const double* a, const double* b,
                           const double* vi, const double* vj) noexcept nogil:
    cdef double d
    if _lex_less(vi, vj):
        d = _orient3d(a[0], a[1], a[2], b[0], b[1], b[2],
                      vi[0], vi[1], vi[2], vj[0], vj[1], vj[2])
        return -1 if d < 0.0 else 1
    d = _orient3d(a[0], a[1], a[2], b[0], b[1], b[2],
                  vj[0], vj[1], vj[2], vi[0], vi[1], vi[2])
    return 1 if d < 0.0 else -1


def segment_triangle_hits(seg_a, seg_b, tris):
    """All transverse segment/triangle crossings (see ``_pykernels``)."""
    cdef double[:, ::1] A = np.ascontiguousarray(seg_a, dtype=np.float64).reshape(-1, 3)
    cdef double[:, ::1] B = np.ascontiguousarray(seg_b, dtype=np.float64).reshape(-1, 3)
    cdef double[:, ::1] T = np.ascontiguousarray(tris, dtype=np.float64).reshape(-1, 9)
    cdef Py_ssize_t M = A.shape[0], NT = T.shape[0], i, j, c
    out_s, out_t, out_p, out_g = [], [], [], []
    cdef double lo[3]
    cdef double hi[3]
    cdef double sa, sb, x
    cdef int side_a, side_b, e0, e1, e2
    cdef const double* v0
    cdef const double* v1
    cdef const double* v2
    cdef const double* pa
    cdef const double* pb
    cdef bint skip
    for j in range(NT):
        v0 = &T[j, 0]
        v1 = &T[j, 3]
        v2 = &T[j, 6]
        for c in range(3):
            lo[c] = v0[c]
            hi[c] = v0[c]
            if v1[c] < lo[c]:
                lo[c] = v1[c]
            if v1[c] > hi[c]:
                hi[c] = v1[c]
            if v2[c] < lo[c]:
                lo[c] = v2[c]
            if v2[c] > hi[c]:
                hi[c] = v2[c]
        for i in range(M):
            pa = &A[i, 0]
            pb = &B[i, 0]
            skip = False
            for c in range(3):
                x = pa[c] if pa[c] > pb[c] else pb[c]
                if x < lo[c]:
                    skip = True
                    break
                x = pa[c] if pa[c] < pb[c] else pb[c]
                if x > hi[c]:
                    skip = True
                    break
            if skip:
                continue
            sa = _orient3d(v0[0], v0[1], v0[2], v1[0], v1[1], v1[2],
                           v2[0], v2[1], v2[2], pa[0], pa[1], pa[2])
            sb = _orient3d(v0[0], v0[1], v0[2], v1[0], v1[1], v1[2],
                           v2[0], v2[1], v2[2], pb[0], pb[1], pb[2])
            side_a = -1 if sa < 0.0 else 1
            side_b = -1 if sb < 0.0 else 1
            if side_a == side_b:
                continue
            e0 = _edge_sign(pa, pb, v0, v1)
            e1 = _edge_sign(pa, pb, v1, v2)
            if e0 != e1:
                continue
            e2 = _edge_sign(pa, pb, v2, v0)
            if e1 != e2:
                continue
            out_s.append(i)
            out_t.append(j)
            out_p.append(sa / (sa - sb))
            out_g.append(-side_a)
    return _pack(out_s, out_t, out_p, out_g)


def _pack(s, t, p, g):
    return (
        np.asarray(s, dtype=np.int64),
        np.asarray(t, dtype=np.int64),
        np.asarray(p, dtype=np.float64),
        np.asarray(g, dtype=np.int8),
    )


def segment_ray_hits(seg_a, seg_b, origins):
    """Crossings of 2-d segments with upward vertical rays (see ``_pykernels``)."""
    cdef double[:, ::1] A = np.ascontiguousarray(seg_a, dtype=np.float64).reshape(-1, 2)
    cdef double[:, ::1] B = np.ascontiguousarray(seg_b, dtype=np.float64).reshape(-1, 2)
    cdef double[:, ::1] O = np.ascontiguousarray(origins, dtype=np.float64).reshape(-1, 2)
    cdef Py_ssize_t M = A.shape[0], R = O.shape[0], i, r
    cdef double ox, oy, ax, ay, bx, by, t, y
    out_s, out_r, out_t, out_g = [], [], [], []
    for r in range(R):
        ox = O[r, 0]
        oy = O[r, 1]
        for i in range(M):
            ax = A[i, 0]
            ay = A[i, 1]
            bx = B[i, 0]
            by = B[i, 1]
            if (ax <= ox) == (bx <= ox):
                continue
            t = (ox - ax) / (bx - ax)
            y = ay + t * (by - ay)
            if y > oy:
                out_s.append(i)
                out_r.append(r)
                out_t.append(t)
                out_g.append(-1 if bx > ax else 1)
    return _pack(out_s, out_r, out_t, out_g)
