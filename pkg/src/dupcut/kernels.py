"""Kernel backend selection.

The compiled backend is used when it imported and the ground set fits in 64
bits; otherwise the pure-Python backend runs.  ``DUPCUT_PURE=1`` in the
environment forces pure Python everywhere.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels as python_backend

try:
    if os.environ.get("DUPCUT_PURE") == "1":
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

HAVE_COMPILED = compiled_backend is not None
MAX_COMPILED_BITS = 64


def available() -> list[str]:
    return ["cython", "python"] if HAVE_COMPILED else ["python"]


def select(n_bits: int, prefer: str | None = None):
    """Backend module for masks of ``n_bits`` bits."""
    if prefer == "python":
        return python_backend
    if prefer == "cython" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not built")
    if HAVE_COMPILED and n_bits <= MAX_COMPILED_BITS:
        return compiled_backend
    if prefer == "cython":
        raise ValueError(f"compiled kernels handle at most {MAX_COMPILED_BITS} elements")
    return python_backend


def masks_array(masks) -> np.ndarray:
    return np.ascontiguousarray(np.fromiter((int(m) for m in masks), dtype=np.uint64))


def index_array(values) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(list(values), dtype=np.int64))


def _shards(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


class HyperedgeTable:
    """Labels grouped into hyperedge masks over elements ``0..n-1``.

    A label counts toward the cut value of ``X`` when one of its hyperedges
    meets both ``X`` and its complement.
    """

    def __init__(self, n: int, groups, backend: str | None = None):
        self.n = n
        masks: list[int] = []
        ptr = [0]
        for group in groups:
            masks.extend(int(h) for h in group)
            ptr.append(len(masks))
        self.kernel = select(n, backend)
        if self.kernel is python_backend:
            self._masks, self._ptr = masks, ptr
        else:
            self._masks, self._ptr = masks_array(masks), index_array(ptr)

    @property
    def backend(self) -> str:
        return self.kernel.NAME

    def value(self, x: int) -> int:
        return int(self.kernel.cut_value(self._masks, self._ptr, x))

    def values(self, xs) -> list[int]:
        if self.kernel is python_backend:
            return self.kernel.cut_values(self._masks, self._ptr, xs)
        return self.kernel.cut_values(self._masks, self._ptr, masks_array(xs)).tolist()

    def pair_slack(self, a, b) -> list[int]:
        if self.kernel is python_backend:
            return self.kernel.pair_slack(self._masks, self._ptr, a, b)
        return self.kernel.pair_slack(self._masks, self._ptr, masks_array(a), masks_array(b)).tolist()

    def enumeration_size(self, symmetric: bool) -> int:
        return python_backend.enum_size(self.n, symmetric)

    def minimum(self, symmetric: bool, threads: int = 1) -> tuple[int, int, int]:
        """``(value, lexicographically smallest minimizer, evaluations)`` over proper nonempty sets."""
        total = self.enumeration_size(symmetric)
        shards = _shards(total, threads)

        def run(bounds):
            lo, hi = bounds
            return self.kernel.min_cut_range(self._masks, self._ptr, self.n, symmetric, lo, hi)

        results = _map(run, shards, threads)
        best_val, best_mask, evals = -1, 0, 0
        for val, mask, count in results:
            evals += int(count)
            if count == 0:
                continue
            val, mask = int(val), int(mask)
            if (
                best_val < 0
                or val < best_val
                or (val == best_val and python_backend.lex_less(mask, best_mask))
            ):
                best_val, best_mask = val, mask
        return best_val, best_mask, evals

    def minimizers(self, value: int, symmetric: bool, threads: int = 1) -> list[int]:
        """Every enumerated set whose cut value equals ``value``, in enumeration order."""
        shards = _shards(self.enumeration_size(symmetric), threads)

        def run(bounds):
            lo, hi = bounds
            return self.kernel.collect_cuts_range(
                self._masks, self._ptr, self.n, symmetric, lo, hi, value
            )

        out: list[int] = []
        for chunk in _map(run, shards, threads):
            out.extend(int(x) for x in chunk)
        return out


def _map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def prefix_search(parent, kid0, kid1, ha, hb, ground: int, size: int, collect: bool,
                  backend: str | None = None):
    """Dispatch the prefix enumeration; see ``_pykernels.prefix_search``."""
    kernel = select(ground.bit_length(), backend)
    if kernel is python_backend:
        return kernel.prefix_search(parent, kid0, kid1, ha, hb, ground, size, collect)
    return kernel.prefix_search(
        index_array(parent), index_array(kid0), index_array(kid1),
        masks_array(ha), masks_array(hb), ground, size, collect,
    )
