"""Set-function minimization over proper nonempty subsets.

Sets are element masks over ``0..ground_size-1`` (``LabelSet`` values are
accepted too).  ``queyranne_minimize`` is the pendant-pair method for
symmetric submodular functions; ``brute_force_minimize`` is the exhaustive
reference; ``check_submodular`` samples random pairs looking for violations.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .kernels import HyperedgeTable, python_backend
from .labels import LabelSet

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "HypergraphCutOracle",
    "LimitExceeded",
    "MinCutResult",
    "SetFunctionOracle",
    "Violation",
    "brute_force_minimize",
    "check_submodular",
    "queyranne_minimize",
    "random_subsets",
]

BRUTE_FORCE_LIMIT = 20


class LimitExceeded(ValueError):
    """An exhaustive computation was asked for beyond its configured size limit."""


def _bits(subset) -> int:
    return subset.bits if isinstance(subset, LabelSet) else int(subset)


class SetFunctionOracle:
    """Integer set function with an evaluation counter.

    ``fn`` receives an element mask.  The counter is lock-protected so the
    oracle can be shared between worker threads.
    """

    def __init__(self, ground_size: int, fn: Callable[[int], int], symmetric: bool = False):
        if ground_size < 0:
            raise ValueError("ground_size must be non-negative")
        self.ground_size = ground_size
        self.symmetric = symmetric
        self._fn = fn
        self._lock = threading.Lock()
        self._count = 0

    @property
    def evaluation_count(self) -> int:
        return self._count

    @property
    def full(self) -> int:
        return (1 << self.ground_size) - 1

    def _tick(self, n: int = 1) -> None:
        with self._lock:
            self._count += n

    def evaluate(self, subset) -> int:
        self._tick()
        return int(self._fn(_bits(subset)))

    __call__ = evaluate

    def evaluate_many(self, subsets: Sequence) -> list[int]:
        masks = [_bits(s) for s in subsets]
        self._tick(len(masks))
        return [int(self._fn(m)) for m in masks]

    def pair_slack(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        """``f(A) + f(B) - f(A|B) - f(A&B)`` per pair (four evaluations each)."""
        fa = self.evaluate_many(a)
        fb = self.evaluate_many(b)
        fu = self.evaluate_many([x | y for x, y in zip(a, b)])
        fi = self.evaluate_many([x & y for x, y in zip(a, b)])
        return [p + q - r - s for p, q, r, s in zip(fa, fb, fu, fi)]


class HypergraphCutOracle(SetFunctionOracle):
    """Number of labels with a hyperedge split by the set.

    Each label owns one or more hyperedges (element masks).  The function is
    symmetric; with one hyperedge per label it is a hypergraph cut function
    and therefore submodular.
    """

    def __init__(self, ground_size: int, groups: Iterable[Sequence[int]], backend: str | None = None):
        groups = [[_bits(h) for h in g] for g in groups]
        self.table = HyperedgeTable(ground_size, groups, backend)
        super().__init__(ground_size, self.table.value, symmetric=True)

    @classmethod
    def from_table(cls, table: HyperedgeTable) -> "HypergraphCutOracle":
        self = cls.__new__(cls)
        self.table = table
        SetFunctionOracle.__init__(self, table.n, table.value, symmetric=True)
        return self

    def evaluate_many(self, subsets: Sequence) -> list[int]:
        masks = [_bits(s) for s in subsets]
        self._tick(len(masks))
        return self.table.values(masks)

    def pair_slack(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        self._tick(4 * len(a))
        return self.table.pair_slack(a, b)


@dataclass(frozen=True)
class MinCutResult:
    minimizer: LabelSet
    value: int
    evaluations: int


def _check_ground(oracle: SetFunctionOracle) -> int:
    n = oracle.ground_size
    if n < 2:
        raise ValueError("minimization needs a ground set of at least two elements")
    return n


def brute_force_minimize(oracle: SetFunctionOracle, limit: int = BRUTE_FORCE_LIMIT, threads: int = 1) -> MinCutResult:
    """Exhaustive minimum over proper nonempty subsets.

    For symmetric oracles only subsets containing element 0 are visited.
    Ties go to the lexicographically smallest ascending element list.
    """
    n = _check_ground(oracle)
    if n > limit:
        raise LimitExceeded(f"brute force limited to {limit} elements, got {n}")
    symmetric = oracle.symmetric
    if isinstance(oracle, HypergraphCutOracle):
        value, mask, evals = oracle.table.minimum(symmetric, threads)
        oracle._tick(evals)
        return MinCutResult(LabelSet(mask), value, evals)
    before = oracle.evaluation_count
    best_val, best_mask = None, 0
    for j in range(python_backend.enum_size(n, symmetric)):
        x = python_backend.enum_mask(j, symmetric)
        v = oracle.evaluate(x)
        if best_val is None or v < best_val or (v == best_val and python_backend.lex_less(x, best_mask)):
            best_val, best_mask = v, x
    return MinCutResult(LabelSet(best_mask), best_val, oracle.evaluation_count - before)


def queyranne_minimize(oracle: SetFunctionOracle) -> MinCutResult:
    """Minimize a symmetric submodular function with pendant pairs.

    Each phase orders the current super-elements greedily, always appending
    the ``u`` minimizing ``f(W + u) - f(u)`` for the ordered prefix ``W``.
    The last two elements form a pendant pair: the last one alone is a best
    set separating them.  It is recorded as a candidate and the pair merged.
    After ``n - 1`` phases the best candidate is a global minimizer.  Uses
    fewer than ``n**3 / 2`` evaluations.  Submodularity is assumed, not
    checked.
    """
    n = _check_ground(oracle)
    before = oracle.evaluation_count
    f = oracle.evaluate
    groups = [1 << i for i in range(n)]
    best_val, best_mask = None, 0
    while len(groups) >= 2:
        w = groups[0]
        remaining = groups[1:]
        single = {u: f(u) for u in remaining}
        order = [w]
        while remaining:
            if len(remaining) == 1:
                pick = remaining[0]
            else:
                pick, pick_key = None, None
                for u in remaining:
                    key = f(w | u) - single[u]
                    if pick_key is None or key < pick_key:
                        pick, pick_key = u, key
            remaining.remove(pick)
            order.append(pick)
            w |= pick
        s, t = order[-2], order[-1]
        if best_val is None or single[t] < best_val:
            best_val, best_mask = single[t], t
        groups = [g | t if g == s else g for g in groups if g != t]
    return MinCutResult(LabelSet(best_mask), best_val, oracle.evaluation_count - before)


@dataclass(frozen=True)
class Violation:
    a: int
    b: int
    deficit: int


def random_subsets(n: int, count: int, rng: np.random.Generator) -> list[int]:
    """``count`` uniform subsets of ``0..n-1`` as masks."""
    if count == 0:
        return []
    bits = rng.integers(0, 2, size=(count, n), dtype=np.uint8)
    if n <= 63:
        weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
        return [int(v) for v in (bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)]
    return [sum(1 << int(i) for i in np.flatnonzero(row)) for row in bits]


def check_submodular(
    oracle: SetFunctionOracle,
    samples: int,
    seed: int,
    pairs: Iterable[tuple] = (),
) -> list[Violation]:
    """Look for pairs with ``f(A) + f(B) < f(A|B) + f(A&B)``.

    ``samples`` random pairs come from ``numpy.random.default_rng(seed)``
    (PCG64); explicit ``pairs`` are checked first.  An empty result is
    evidence, not proof.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    forced = [(_bits(a), _bits(b)) for a, b in pairs]
    rng = np.random.default_rng(seed)
    drawn = random_subsets(oracle.ground_size, 2 * samples, rng)
    a_list = [p[0] for p in forced] + drawn[0::2]
    b_list = [p[1] for p in forced] + drawn[1::2]
    slack = oracle.pair_slack(a_list, b_list)
    return [Violation(a, b, -s) for a, b, s in zip(a_list, b_list, slack) if s < 0]
