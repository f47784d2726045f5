"""Pure-Python kernels.

Same signatures as the compiled ``_ckernels`` module, but masks are Python
ints of any width.  A hyperedge table is ``masks`` (one bitmask per
hyperedge) plus ``ptr``: the hyperedges of label ``i`` are
``masks[ptr[i]:ptr[i+1]]``.  A label is cut when any of its hyperedges
meets both a set and its complement.
"""

from __future__ import annotations

NAME = "python"


def cut_value(masks, ptr, x):
    count = 0
    for lab in range(len(ptr) - 1):
        for j in range(ptr[lab], ptr[lab + 1]):
            h = masks[j]
            if h & x and h & ~x:
                count += 1
                break
    return count


def _compile(masks, ptr):
    groups = [tuple(masks[ptr[i]:ptr[i + 1]]) for i in range(len(ptr) - 1)]
    single = [g[0] for g in groups if len(g) == 1]
    multi = [g for g in groups if len(g) > 1]
    return single, multi


def _value(single, multi, x):
    nx = ~x
    count = 0
    for h in single:
        if h & x and h & nx:
            count += 1
    for group in multi:
        for h in group:
            if h & x and h & nx:
                count += 1
                break
    return count


def cut_values(masks, ptr, xs):
    single, multi = _compile(masks, ptr)
    return [_value(single, multi, int(x)) for x in xs]


def pair_slack(masks, ptr, a_list, b_list):
    """``f(A) + f(B) - f(A|B) - f(A&B)`` for each pair."""
    single, multi = _compile(masks, ptr)
    out = []
    for a, b in zip(a_list, b_list):
        a, b = int(a), int(b)
        out.append(
            _value(single, multi, a)
            + _value(single, multi, b)
            - _value(single, multi, a | b)
            - _value(single, multi, a & b)
        )
    return out


def enum_mask(j, symmetric):
    return 1 | (j << 1) if symmetric else j + 1


def enum_size(n, symmetric):
    """Number of proper nonempty subsets enumerated (element 0 fixed when symmetric)."""
    return (1 << (n - 1)) - 1 if symmetric else (1 << n) - 2


def lex_less(a, b):
    """Compare masks by their ascending element lists, lexicographically."""
    d = a ^ b
    if not d:
        return False
    p = d & -d
    above = ~((p << 1) - 1)
    if a & p:
        return b & above != 0
    return a & above == 0


def min_cut_range(masks, ptr, n, symmetric, lo, hi):
    single, multi = _compile(masks, ptr)
    best_val, best_mask = -1, 0
    for j in range(lo, hi):
        x = enum_mask(j, symmetric)
        v = _value(single, multi, x)
        if best_val < 0 or v < best_val or (v == best_val and lex_less(x, best_mask)):
            best_val, best_mask = v, x
    return best_val, best_mask, hi - lo


def collect_cuts_range(masks, ptr, n, symmetric, lo, hi, value):
    single, multi = _compile(masks, ptr)
    out = []
    for j in range(lo, hi):
        x = enum_mask(j, symmetric)
        if _value(single, multi, x) == value:
            out.append(x)
    return out


def _component(edges, start):
    comp = start
    changed = True
    while changed:
        changed = False
        for h in edges:
            if h & comp and h & ~comp:
                comp |= h
                changed = True
    return comp


def prefix_search(parent, kid0, kid1, ha, hb, ground, size, collect):
    """Enumerate ancestor-closed candidate sets of exactly ``size`` vertices.

    A set succeeds when deleting its hyperedges disconnects ``ground``.
    Returns ``(count, first, meet, used)``: number of successes, the first
    success as candidate indices, the per-element meet of the induced
    partitions (``meet[e]`` is the mask of elements sharing a part with
    ``e`` in every success) and a per-candidate usage flag.  Without
    ``collect`` the search stops at the first success.
    """
    m = len(parent)
    n = ground.bit_length()
    kids = [[c for c in (kid0[i], kid1[i]) if c >= 0] for i in range(m)]
    sub = [1] * m
    for i in range(m - 1, -1, -1):
        for c in kids[i]:
            sub[i] += sub[c]
    chosen = [False] * m
    meet = [ground if (ground >> e) & 1 else 0 for e in range(n)]
    used = [0] * m
    state = {"count": 0, "first": None}

    def test():
        edges = [h for i in range(m) if not chosen[i] for h in (ha[i], hb[i]) if h]
        low = ground & -ground
        comp = _component(edges, low)
        if comp == ground:
            return False
        state["count"] += 1
        if state["first"] is None:
            state["first"] = [i for i in range(m) if chosen[i]]
        if collect:
            rest = ground
            while rest:
                c = _component(edges, rest & -rest)
                rest &= ~c
                bits = c
                while bits:
                    b = bits & -bits
                    meet[b.bit_length() - 1] &= c
                    bits ^= b
            for i in range(m):
                if chosen[i]:
                    used[i] = 1
        return True

    def rec(depth, cands):
        if depth == size:
            return test() and not collect
        need = size - depth
        avail = [0] * (len(cands) + 1)
        for idx in range(len(cands) - 1, -1, -1):
            avail[idx] = avail[idx + 1] + sub[cands[idx]]
        for idx, v in enumerate(cands):
            if avail[idx] < need:
                break
            chosen[v] = True
            stop = rec(depth + 1, cands[idx + 1:] + kids[v])
            chosen[v] = False
            if stop:
                return True
        return False

    roots = [i for i in range(m) if parent[i] < 0]
    rec(0, roots)
    return state["count"], state["first"] or [], meet, used
