"""First-speciation solvers: the submodular-relaxation approximation, exact enumeration
of bipartitions and of prefixes, the meet partitions of all optimal solutions,
the per-edge and per-vertex decision problems, and the greedy species tree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .cutgraph import build_I, connected_components, element_space, h_table, i_table
from .kernels import prefix_search
from .labels import LabelSet
from .sfm import HypergraphCutOracle, LimitExceeded, queyranne_minimize
from .trees import (
    Bipartition,
    GeneForest,
    Partition,
    Prefix,
    SpeciesTree,
    d1_cost,
    duplication_count,
    partition_from_prefix,
    split_forest,
)

__all__ = [
    "ApproxResult",
    "ExactResult",
    "GreedyResult",
    "GreedyStep",
    "LimitExceeded",
    "PrefixResult",
    "all_optimal_bipartition_partition",
    "all_optimal_prefix_partition",
    "approx_mdbp",
    "edge_in_some_min_cut",
    "exact_mdbp",
    "exact_mdpp",
    "greedy_species_tree",
    "vertex_in_some_min_prefix",
]

log = logging.getLogger(__name__)

EXACT_LIMIT = 20
EXACT_HARD_CAP = 22
COLLECT_LIMIT = 16


@dataclass(frozen=True)
class ApproxResult:
    bipartition: Bipartition
    relaxed_value: int
    realized_cost: int
    evaluations: int
    disconnected: bool = False
    bound_certificate: int | None = None
    spanning_trees: int = 1

    def bound_holds(self) -> bool | None:
        """``relaxed_value <= 2d + 1`` and ``realized_cost <= 2d + 1`` against the certificate."""
        d = self.bound_certificate
        if d is None:
            return None
        return self.relaxed_value <= 2 * d + 1 and self.realized_cost <= 2 * d + 1

    def forest_bound_holds(self) -> bool | None:
        """``relaxed_value <= 2d + t`` with ``t`` the trees spanning two or more genomes.

        Each such tree adds at most one vertex beyond twice its share of the
        optimal prefix, so this is the guarantee that survives multi-tree
        forests; it equals the ``2d + 1`` bound for a single tree.
        """
        d = self.bound_certificate
        if d is None:
            return None
        return self.realized_cost <= self.relaxed_value <= 2 * d + self.spanning_trees


@dataclass(frozen=True)
class ExactResult:
    bipartition: Bipartition
    cost: int
    evaluations: int
    optimal_cuts: tuple[Bipartition, ...] | None = None


@dataclass(frozen=True)
class PrefixResult:
    prefix: Prefix
    size: int
    induced_partition: Partition


def _require_two(forest: GeneForest) -> None:
    if forest.k < 2:
        raise ValueError(f"need at least two genomes, forest has {forest.k}")


def _group_components(comps: list[int]) -> int:
    """Left-side mask balancing component sizes greedily, in component order."""
    left = right = 0
    for c in comps:
        if left.bit_count() <= right.bit_count():
            left |= c
        else:
            right |= c
    return left


def approx_mdbp(forest: GeneForest, certify: bool = False, limit: int = EXACT_LIMIT, threads: int = 1) -> ApproxResult:
    """Bipartition minimizing the I(F) cut function.

    When I(F) is disconnected its components are grouped into a zero-cost
    split instead.  With ``certify`` the exact optimum is attached.
    """
    _require_two(forest)
    space = element_space(forest)
    comps = sorted((space.encode(p) for p in connected_components(build_I(forest))), key=lambda c: c & -c)
    if len(comps) > 1:
        left_mask, relaxed, evals, disconnected = _group_components(comps), 0, 0, True
    else:
        oracle = HypergraphCutOracle.from_table(i_table(forest)[0])
        res = queyranne_minimize(oracle)
        left_mask, relaxed, evals, disconnected = res.minimizer.bits, res.value, res.evaluations, False
    bip = Bipartition.from_left(space.decode(left_mask), forest.ground).canonical(forest.genomes)
    certificate = exact_mdbp(forest, limit=limit, threads=threads).cost if certify else None
    spanning = sum(1 for t in forest.trees if len(t.labels) >= 2)
    return ApproxResult(bip, relaxed, d1_cost(forest, bip), evals, disconnected, certificate, spanning)


def _check_limit(n: int, limit: int) -> None:
    cap = min(limit, EXACT_HARD_CAP)
    if n > cap:
        raise LimitExceeded(f"exact enumeration limited to {cap} genomes, forest has {n}")


def _lex_key(mask: int) -> tuple[int, ...]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _optimal_masks(forest: GeneForest, limit: int, collect_limit: int, threads: int):
    space = element_space(forest)
    _check_limit(space.n, limit)
    if space.n > collect_limit:
        raise LimitExceeded(
            f"collecting all optimal bipartitions is limited to {collect_limit} genomes, forest has {space.n}"
        )
    table = h_table(forest)[0]
    value, _, _ = table.minimum(True, threads)
    return value, sorted(table.minimizers(value, True, threads), key=_lex_key)


def exact_mdbp(
    forest: GeneForest,
    collect_all: bool = False,
    limit: int = EXACT_LIMIT,
    collect_limit: int = COLLECT_LIMIT,
    threads: int = 1,
) -> ExactResult:
    """Minimum d1 over all bipartitions, genome 0 (alphabetically first) fixed left.

    Costs are evaluated as H(F) cut label-sizes, which equal d1 for every
    bipartition.
    """
    _require_two(forest)
    space = element_space(forest)
    _check_limit(space.n, limit)
    table = h_table(forest)[0]
    value, mask, evals = table.minimum(True, threads)
    bip = Bipartition.from_left(space.decode(mask), forest.ground)
    cuts = None
    if collect_all:
        _, masks = _optimal_masks(forest, limit, collect_limit, threads)
        cuts = tuple(Bipartition.from_left(space.decode(m), forest.ground) for m in masks)
    return ExactResult(bip, value, evals, cuts)


# ---------------------------------------------------------------------------
# prefixes


@dataclass
class _PrefixProblem:
    labels: list[int]  # vertex label of each candidate
    parent: list[int]
    kid0: list[int]
    kid1: list[int]
    ha: list[int]
    hb: list[int]
    ground: int
    index: dict[int, int] = field(default_factory=dict)

    def search(self, size: int, collect: bool, backend: str | None = None):
        return prefix_search(
            self.parent, self.kid0, self.kid1, self.ha, self.hb, self.ground, size, collect, backend
        )


def _prefix_problem(forest: GeneForest) -> _PrefixProblem:
    # a vertex without H(F) edges never belongs to a minimum prefix: it is
    # maximal in any prefix containing it and deleting it changes no edge
    space = element_space(forest)
    labels, parent, ha, hb = [], [], [], []
    index: dict[int, int] = {}
    for ti, node in forest.internal_nodes():
        hs = [space.encode(c) for c in forest.child_labels(node) if len(c) >= 2]
        if not hs:
            continue
        index[node.vertex_label] = len(labels)
        labels.append(node.vertex_label)
        p = forest.parent_label(node.vertex_label)
        parent.append(-1 if p is None else index[p])
        ha.append(hs[0])
        hb.append(hs[1] if len(hs) > 1 else 0)
    kid0 = [-1] * len(labels)
    kid1 = [-1] * len(labels)
    for i, p in enumerate(parent):
        if p >= 0:
            if kid0[p] < 0:
                kid0[p] = i
            else:
                kid1[p] = i
    return _PrefixProblem(labels, parent, kid0, kid1, ha, hb, space.full, index)


def _min_prefix_size(problem: _PrefixProblem, backend: str | None = None) -> tuple[int, list[int]]:
    for size in range(len(problem.labels) + 1):
        count, first, _, _ = problem.search(size, False, backend)
        if count:
            return size, first
    raise AssertionError("deleting every edge always disconnects two or more genomes")


def exact_mdpp(forest: GeneForest, backend: str | None = None) -> PrefixResult:
    """Smallest prefix whose deletion splits H(F), by iterative deepening on its size."""
    _require_two(forest)
    problem = _prefix_problem(forest)
    size, first = _min_prefix_size(problem, backend)
    prefix = Prefix(frozenset(problem.labels[i] for i in first))
    return PrefixResult(prefix, size, partition_from_prefix(forest, prefix))


def _meet_to_partition(forest: GeneForest, meet: list[int]) -> Partition:
    space = element_space(forest)
    return Partition(space.decode(m) for m in sorted(set(meet)))


def all_optimal_prefix_partition(forest: GeneForest, backend: str | None = None) -> Partition:
    """Genomes share a part iff no minimum prefix separates them (PP(F))."""
    _require_two(forest)
    problem = _prefix_problem(forest)
    size, _ = _min_prefix_size(problem, backend)
    _, _, meet, _ = problem.search(size, True, backend)
    return _meet_to_partition(forest, meet)


def vertex_in_some_min_prefix(forest: GeneForest, vertex_label: int, backend: str | None = None) -> bool:
    forest.locate(vertex_label)
    _require_two(forest)
    problem = _prefix_problem(forest)
    if vertex_label not in problem.index:
        return False
    size, _ = _min_prefix_size(problem, backend)
    _, _, _, used = problem.search(size, True, backend)
    return bool(used[problem.index[vertex_label]])


def all_optimal_bipartition_partition(
    forest: GeneForest, limit: int = EXACT_LIMIT, collect_limit: int = COLLECT_LIMIT, threads: int = 1
) -> Partition:
    """Genomes share a part iff every optimal bipartition keeps them together (PB(F))."""
    _require_two(forest)
    space = element_space(forest)
    _, masks = _optimal_masks(forest, limit, collect_limit, threads)
    cuts = np.array(masks, dtype=np.uint64)
    full = np.uint64(space.full)
    meet = []
    for e in range(space.n):
        bit = np.uint64(1 << e)
        sides = np.where(cuts & bit, cuts, ~cuts & full)
        meet.append(int(np.bitwise_and.reduce(sides)) if len(sides) else space.full)
    return _meet_to_partition(forest, meet)


def edge_in_some_min_cut(
    forest: GeneForest, u: int, v: int, label: int,
    limit: int = EXACT_LIMIT, collect_limit: int = COLLECT_LIMIT, threads: int = 1,
) -> bool:
    """Does edge ``(u, v)`` labeled ``label`` of H(F) lie in some minimum label-size cut?"""
    _, node = forest.locate(label)
    pair = LabelSet.of((u, v))
    hyperedges = [c for c in forest.child_labels(node) if len(c) >= 2]
    if u == v or not any(pair <= c for c in hyperedges):
        raise ValueError(f"({u}, {v}) labeled {label} is not an edge of H(F)")
    space = element_space(forest)
    _, masks = _optimal_masks(forest, limit, collect_limit, threads)
    for m in masks:
        left = space.decode(m)
        if (u in left) == (v in left):
            continue
        if any(c.straddles(left) for c in hyperedges):
            return True
    return False


# ---------------------------------------------------------------------------
# greedy species tree


@dataclass(frozen=True)
class GreedyStep:
    genomes: tuple[str, ...]
    left: tuple[str, ...]
    right: tuple[str, ...]
    cost: int
    relaxed_value: int | None = None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class GreedyResult:
    species: SpeciesTree
    steps: tuple[GreedyStep, ...]
    total_duplications: int

    @property
    def unconstrained(self) -> list[GreedyStep]:
        return [s for s in self.steps if "unconstrained" in s.flags]


def _caterpillar(names: list[str]):
    tree = names[-1]
    for name in reversed(names[:-1]):
        tree = (name, tree)
    return tree


def greedy_species_tree(forest: GeneForest, method: str = "approx", limit: int = EXACT_LIMIT, threads: int = 1) -> GreedyResult:
    """Species tree built by splitting the forest at a first speciation, recursively."""
    if method not in ("approx", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if forest.k < 1:
        raise ValueError("forest has no genomes")
    steps: list[GreedyStep] = []

    def solve(sub: GeneForest):
        names = sub.genomes.names_of(sub.ground)
        if len(names) <= 2:
            return names[0] if len(names) == 1 else tuple(names)
        if not any(len(node.labels) >= 2 for _, node in sub.internal_nodes()):
            steps.append(GreedyStep(tuple(names), (), (), 0, None, ("unconstrained",)))
            return _caterpillar(names)
        if method == "approx":
            res = approx_mdbp(sub)
            bip, relaxed = res.bipartition, res.relaxed_value
            flags = ("disconnected",) if res.disconnected else ()
        else:
            bip, relaxed, flags = exact_mdbp(sub, limit=limit, threads=threads).bipartition, None, ()
        left_names, right_names = bip.describe(sub.genomes)
        steps.append(
            GreedyStep(tuple(names), tuple(left_names), tuple(right_names), d1_cost(sub, bip), relaxed, flags)
        )
        log.debug("split %s | %s", left_names, right_names)
        left, right = split_forest(sub, bip)
        return (solve(left), solve(right))

    species = SpeciesTree.from_nested(solve(forest))
    return GreedyResult(species, tuple(steps), duplication_count(forest, species))
