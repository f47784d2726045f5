# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over 64-bit masks (ground sets of at most 64 elements).

Mirrors ``_pykernels``; see there for the table layout and semantics.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef unsigned long long u64
ctypedef long long i64

NAME = "cython"


cdef inline int _value(const u64* masks, const i64* ptr, Py_ssize_t nlab, u64 x) noexcept nogil:
    cdef u64 nx = ~x
    cdef u64 h
    cdef int count = 0
    cdef Py_ssize_t lab, j
    for lab in range(nlab):
        for j in range(ptr[lab], ptr[lab + 1]):
            h = masks[j]
            if (h & x) and (h & nx):
                count += 1
                break
    return count


cdef inline bint _lex_less(u64 a, u64 b) noexcept nogil:
    cdef u64 d = a ^ b
    cdef u64 p, above
    if d == 0:
        return False
    p = d & (~d + 1)
    above = ~((p << 1) - 1)  # wraps to 0 when p is the top bit
    if a & p:
        return (b & above) != 0
    return (a & above) == 0


cdef inline u64 _enum_mask(u64 j, bint symmetric) noexcept nogil:
    if symmetric:
        return 1 | (j << 1)
    return j + 1


def cut_value(const u64[::1] masks, const i64[::1] ptr, u64 x):
    return _value(&masks[0] if masks.shape[0] else NULL, &ptr[0], ptr.shape[0] - 1, x)


def cut_values(const u64[::1] masks, const i64[::1] ptr, const u64[::1] xs):
    cdef Py_ssize_t i, n = xs.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    cdef const u64* mp = &masks[0] if masks.shape[0] else NULL
    cdef Py_ssize_t nlab = ptr.shape[0] - 1
    with nogil:
        for i in range(n):
            o[i] = _value(mp, &ptr[0], nlab, xs[i])
    return out


def pair_slack(const u64[::1] masks, const i64[::1] ptr, const u64[::1] a, const u64[::1] b):
    cdef Py_ssize_t i, n = a.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    cdef const u64* mp = &masks[0] if masks.shape[0] else NULL
    cdef const i64* pp = &ptr[0]
    cdef Py_ssize_t nlab = ptr.shape[0] - 1
    with nogil:
        for i in range(n):
            o[i] = (_value(mp, pp, nlab, a[i]) + _value(mp, pp, nlab, b[i])
                    - _value(mp, pp, nlab, a[i] | b[i]) - _value(mp, pp, nlab, a[i] & b[i]))
    return out


def min_cut_range(const u64[::1] masks, const i64[::1] ptr, int n, bint symmetric, u64 lo, u64 hi):
    cdef const u64* mp = &masks[0] if masks.shape[0] else NULL
    cdef const i64* pp = &ptr[0]
    cdef Py_ssize_t nlab = ptr.shape[0] - 1
    cdef int best_val = -1, v
    cdef u64 best_mask = 0, x, j
    with nogil:
        for j in range(lo, hi):
            x = _enum_mask(j, symmetric)
            v = _value(mp, pp, nlab, x)
            if best_val < 0 or v < best_val or (v == best_val and _lex_less(x, best_mask)):
                best_val = v
                best_mask = x
    return best_val, best_mask, hi - lo


def collect_cuts_range(const u64[::1] masks, const i64[::1] ptr, int n, bint symmetric,
                       u64 lo, u64 hi, int value):
    cdef const u64* mp = &masks[0] if masks.shape[0] else NULL
    cdef const i64* pp = &ptr[0]
    cdef Py_ssize_t nlab = ptr.shape[0] - 1
    cdef u64 x, j
    cdef Py_ssize_t found = 0
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] buf = np.empty(16, dtype=np.uint64)
    for j in range(lo, hi):
        x = _enum_mask(j, symmetric)
        if _value(mp, pp, nlab, x) == value:
            if found == buf.shape[0]:
                buf = np.resize(buf, 2 * found)
            buf[found] = x
            found += 1
    return buf[:found].copy()


# ---------------------------------------------------------------------------
# prefix search

cdef struct Search:
    Py_ssize_t m
    int n
    int size
    bint collect
    const i64* kid0
    const i64* kid1
    const u64* ha
    const u64* hb
    const i64* sub
    u64 ground
    char* chosen
    i64* cands      # (size + 1) rows of m candidate slots
    i64* avail      # (size + 1) rows of (m + 1) suffix sums
    u64* edges      # scratch, 2m hyperedges
    u64* meet
    char* used
    i64* first
    bint have_first
    i64 count


cdef inline u64 _component(const u64* edges, Py_ssize_t ne, u64 start) noexcept nogil:
    cdef u64 comp = start, h
    cdef bint changed = True
    cdef Py_ssize_t j
    while changed:
        changed = False
        for j in range(ne):
            h = edges[j]
            if (h & comp) and (h & ~comp):
                comp |= h
                changed = True
    return comp


cdef bint _test(Search* s) noexcept nogil:
    cdef Py_ssize_t i, ne = 0, k
    cdef u64 comp, rest, bits, b
    for i in range(s.m):
        if not s.chosen[i]:
            if s.ha[i]:
                s.edges[ne] = s.ha[i]
                ne += 1
            if s.hb[i]:
                s.edges[ne] = s.hb[i]
                ne += 1
    comp = _component(s.edges, ne, s.ground & (~s.ground + 1))
    if comp == s.ground:
        return False
    s.count += 1
    if not s.have_first:
        s.have_first = True
        k = 0
        for i in range(s.m):
            if s.chosen[i]:
                s.first[k] = i
                k += 1
    if s.collect:
        rest = s.ground
        while rest:
            comp = _component(s.edges, ne, rest & (~rest + 1))
            rest &= ~comp
            bits = comp
            while bits:
                b = bits & (~bits + 1)
                s.meet[_bit_index(b)] &= comp
                bits ^= b
        for i in range(s.m):
            if s.chosen[i]:
                s.used[i] = 1
    return True


cdef inline int _bit_index(u64 b) noexcept nogil:
    cdef int i = 0
    while b > 1:
        b >>= 1
        i += 1
    return i


cdef bint _rec(Search* s, int depth, Py_ssize_t nc) noexcept nogil:
    cdef i64* cands = s.cands + depth * s.m
    cdef i64* avail = s.avail + depth * (s.m + 1)
    cdef i64* nxt
    cdef Py_ssize_t idx, j, nn
    cdef i64 v
    cdef int need
    if depth == s.size:
        return _test(s) and not s.collect
    need = s.size - depth
    avail[nc] = 0
    for idx in range(nc - 1, -1, -1):
        avail[idx] = avail[idx + 1] + s.sub[cands[idx]]
    nxt = s.cands + (depth + 1) * s.m
    for idx in range(nc):
        if avail[idx] < need:
            break
        v = cands[idx]
        s.chosen[v] = 1
        nn = 0
        for j in range(idx + 1, nc):
            nxt[nn] = cands[j]
            nn += 1
        if s.kid0[v] >= 0:
            nxt[nn] = s.kid0[v]
            nn += 1
        if s.kid1[v] >= 0:
            nxt[nn] = s.kid1[v]
            nn += 1
        if _rec(s, depth + 1, nn):
            s.chosen[v] = 0
            return True
        s.chosen[v] = 0
    return False


def prefix_search(const i64[::1] parent, const i64[::1] kid0, const i64[::1] kid1,
                  const u64[::1] ha, const u64[::1] hb, u64 ground, int size, bint collect):
    cdef Py_ssize_t m = parent.shape[0], i, nroots = 0
    cdef int n = 0
    cdef u64 g = ground
    while g:
        n += 1
        g >>= 1
    cdef i64[::1] sub = np.ones(max(m, 1), dtype=np.int64)
    for i in range(m - 1, -1, -1):
        if kid0[i] >= 0:
            sub[i] += sub[kid0[i]]
        if kid1[i] >= 0:
            sub[i] += sub[kid1[i]]
    cdef Search s
    cdef Py_ssize_t rows = size + 1
    cdef Py_ssize_t width = m if m > 0 else 1
    s.m = m
    s.n = n
    s.size = size
    s.collect = collect
    s.ground = ground
    s.count = 0
    s.have_first = False
    s.chosen = <char*>malloc(width)
    s.used = <char*>malloc(width)
    s.cands = <i64*>malloc(rows * width * sizeof(i64))
    s.avail = <i64*>malloc(rows * (width + 1) * sizeof(i64))
    s.edges = <u64*>malloc(2 * width * sizeof(u64))
    s.meet = <u64*>malloc((n if n > 0 else 1) * sizeof(u64))
    s.first = <i64*>malloc(width * sizeof(i64))
    if (not s.chosen or not s.used or not s.cands or not s.avail or not s.edges
            or not s.meet or not s.first):
        free(s.chosen); free(s.used); free(s.cands); free(s.avail)
        free(s.edges); free(s.meet); free(s.first)
        raise MemoryError()
    try:
        memset(s.chosen, 0, width)
        memset(s.used, 0, width)
        for i in range(n):
            s.meet[i] = ground if (ground >> i) & 1 else 0
        for i in range(m):
            if parent[i] < 0:
                s.cands[nroots] = i
                nroots += 1
        s.kid0 = &kid0[0] if m else NULL
        s.kid1 = &kid1[0] if m else NULL
        s.ha = &ha[0] if m else NULL
        s.hb = &hb[0] if m else NULL
        s.sub = &sub[0]
        with nogil:
            _rec(&s, 0, nroots)
        first = [int(s.first[i]) for i in range(size)] if s.have_first else []
        meet = [int(s.meet[i]) for i in range(n)]
        used = [int(s.used[i]) for i in range(m)]
        return int(s.count), first, meet, used
    finally:
        free(s.chosen); free(s.used); free(s.cands); free(s.avail)
        free(s.edges); free(s.meet); free(s.first)
