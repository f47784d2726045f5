"""Seeded generators for species trees and gene forests.

All randomness comes from ``numpy.random.Generator`` with the PCG64 bit
generator, so a seed reproduces the same output on every platform.  Gene
families in a simulation draw from per-family streams seeded with
``(seed, family_index)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .labels import GenomeTable
from .trees import GeneForest, SpeciesTree

__all__ = [
    "SimConfig",
    "SimReport",
    "genome_names",
    "random_forest_uniform",
    "random_gene_forest",
    "random_species_tree",
    "random_topology",
]


def _rng(*seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(list(seed)))


def genome_names(k: int) -> list[str]:
    """``g0 .. g{k-1}``, zero-padded so alphabetical and numeric order agree."""
    width = len(str(k - 1))
    return [f"g{i:0{width}d}" for i in range(k)]


def random_topology(leaves: list, rng: np.random.Generator):
    """Uniform rooted binary topology over ``leaves`` (in the given order).

    Each new leaf is attached to one of the ``2i - 1`` edges of the current
    ``i``-leaf tree, the stem above the root included.
    """
    if not leaves:
        raise ValueError("need at least one leaf")
    # parent/child arrays; node 0 is the first leaf and the current root
    children: list[list[int]] = [[]]
    label: list = [leaves[0]]
    parent: list[int] = [-1]
    root = 0
    for leaf in leaves[1:]:
        # every node except the root hangs from an edge; the root has the stem
        target = int(rng.integers(len(label)))
        new_leaf = len(label)
        label.append(leaf)
        children.append([])
        parent.append(-1)
        joint = len(label)
        label.append(None)
        children.append([target, new_leaf])
        p = parent[target]
        parent.append(p)
        parent[target] = joint
        parent[new_leaf] = joint
        if p < 0:
            root = joint
        else:
            children[p][children[p].index(target)] = joint

    def build(nid):
        stack, built = [(nid, False)], {}
        while stack:
            n, done = stack.pop()
            if not children[n]:
                built[n] = label[n]
            elif done:
                built[n] = tuple(built.pop(c) for c in children[n])
            else:
                stack.append((n, True))
                stack.extend((c, False) for c in children[n])
        return built[nid]

    return build(root)


def random_species_tree(k: int, seed: int) -> SpeciesTree:
    if k < 2:
        raise ValueError("a species tree needs at least two genomes")
    names = genome_names(k)
    nested = random_topology(names, _rng(seed))
    return SpeciesTree.from_nested(nested, GenomeTable(names))


@dataclass(frozen=True)
class SimConfig:
    k: int
    n_families: int
    p_dup: float = 0.0
    p_loss: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.n_families < 0:
            raise ValueError("n_families must be non-negative")
        for name in ("p_dup", "p_loss"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        # expected surviving copies per lineage per branch
        growth = (1.0 + self.p_dup) * (1.0 - self.p_loss)
        if growth >= 1.5:
            warnings.warn(f"families grow by {growth:.2f}x per branch; forests may get very large", stacklevel=3)


@dataclass(frozen=True)
class SimReport:
    planted_root_duplications: tuple[int, ...] = field(default=())
    surviving_families: int = 0
    dropped_families: int = 0


class _Family:
    def __init__(self, species: SpeciesTree, cfg: SimConfig, rng: np.random.Generator):
        self.species = species
        self.p_dup = cfg.p_dup
        self.p_loss = cfg.p_loss
        self.rng = rng
        self.root_dups = 0

    def lineage(self, snode: int, on_root_branch: bool = False):
        """Gene subtree grown by one lineage entering the edge above ``snode``."""
        copies = 1
        if self.p_dup > 0 and self.rng.random() < self.p_dup:
            copies = 2
            if on_root_branch:
                self.root_dups += 1
        grown = []
        for _ in range(copies):
            if self.p_loss > 0 and self.rng.random() < self.p_loss:
                continue
            grown.append(self.speciate(snode))
        return _join([g for g in grown if g is not None])

    def speciate(self, snode: int):
        node = self.species.arena[snode]
        if not node.children:
            return self.species.genomes[node.leaf_genome]
        return _join([g for g in (self.lineage(c) for c in node.children) if g is not None])


def _join(parts: list):
    # unary pass-through vertices are suppressed; >2 parts become a left comb
    if not parts:
        return None
    tree = parts[0]
    for p in parts[1:]:
        tree = (tree, p)
    return tree


def _leaf_count(nested) -> int:
    if isinstance(nested, str):
        return 1
    return sum(_leaf_count(c) for c in nested)


def random_gene_forest(species: SpeciesTree, cfg: SimConfig) -> tuple[GeneForest, SimReport]:
    """Duplication-loss simulation of ``cfg.n_families`` families down ``species``.

    One lineage enters the stem edge above the root.  On every edge each
    lineage duplicates with probability ``p_dup`` and each resulting copy is
    then lost with probability ``p_loss``; at every speciation a surviving
    lineage splits into one copy per child.  Families with fewer than two
    surviving leaves are dropped.
    """
    trees, planted = [], []
    dropped = 0
    for fam in range(cfg.n_families):
        family = _Family(species, cfg, _rng(cfg.seed, fam))
        tree = family.lineage(species.root, on_root_branch=True)
        if tree is None or _leaf_count(tree) < 2:
            dropped += 1
            continue
        trees.append(tree)
        planted.append(family.root_dups)
    forest = GeneForest.from_nested(trees)
    return forest, SimReport(tuple(planted), len(trees), dropped)


def random_forest_uniform(k: int, n_trees: int, leaves_per_tree: int, seed: int) -> GeneForest:
    """Uniform random topologies with leaf genomes drawn i.i.d. from ``k`` names."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if leaves_per_tree < 2:
        raise ValueError("leaves_per_tree must be at least 2")
    rng = _rng(seed)
    names = genome_names(k)
    trees = []
    for _ in range(n_trees):
        picks = rng.integers(k, size=leaves_per_tree)
        trees.append(random_topology([names[i] for i in picks], rng))
    return GeneForest.from_nested(trees)
