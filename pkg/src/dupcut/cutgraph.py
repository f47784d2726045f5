"""Edge-labeled genome graphs built from a gene forest, and their cut functions.

``build_H`` puts an edge labeled ``a`` between every pair of distinct genomes
inside one child label set of vertex ``a``.  ``build_I`` additionally joins
every pair inside ``L(x)`` when ``x`` is not an apparent duplication.  Both
are stored as per-label hyperedges (the cliques that generate the edges);
literal pair edges are materialized on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .kernels import HyperedgeTable
from .labels import GenomeTable, LabelSet
from .trees import Bipartition, GeneForest, Partition

__all__ = [
    "CutEvaluation",
    "EdgeLabeledMultigraph",
    "ElementSpace",
    "LabeledEdge",
    "build_H",
    "build_I",
    "connected_components",
    "cut_label_size",
    "export_dot",
    "f_H",
    "f_I",
    "h_table",
    "i_table",
]


@dataclass(frozen=True, order=True)
class LabeledEdge:
    u: int
    v: int
    label: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("a labeled edge needs two distinct endpoints")


class EdgeLabeledMultigraph:
    def __init__(self, vertices: LabelSet, vertex_count: int, per_label_hyperedges: dict[int, tuple[LabelSet, ...]]):
        self.vertices = vertices
        self.vertex_count = vertex_count
        kept: dict[int, tuple[LabelSet, ...]] = {}
        for lab, hyperedges in sorted(per_label_hyperedges.items()):
            # singleton hyperedges generate no pair
            hyperedges = tuple(h for h in hyperedges if len(h) >= 2)
            if hyperedges:
                kept[lab] = hyperedges
        self.per_label_hyperedges = kept
        self.labels = frozenset(kept)

    @cached_property
    def edges(self) -> tuple[LabeledEdge, ...]:
        found = set()
        for lab, hyperedges in self.per_label_hyperedges.items():
            for h in hyperedges:
                for u, v in combinations(sorted(h), 2):
                    found.add(LabeledEdge(u, v, lab))
        return tuple(sorted(found))

    def __repr__(self) -> str:
        return (
            f"EdgeLabeledMultigraph(vertices={len(self.vertices)}, "
            f"labels={len(self.labels)}, edges={len(self.edges)})"
        )


@dataclass(frozen=True)
class CutEvaluation:
    crossing_labels: frozenset[int]

    @property
    def label_size(self) -> int:
        return len(self.crossing_labels)


def build_H(forest: GeneForest) -> EdgeLabeledMultigraph:
    hyper = {}
    for _, node in forest.internal_nodes():
        hyper[node.vertex_label] = forest.child_labels(node)
    return EdgeLabeledMultigraph(forest.ground, len(forest.genomes), hyper)


def build_I(forest: GeneForest) -> EdgeLabeledMultigraph:
    hyper = {}
    for _, node in forest.internal_nodes():
        left, right = forest.child_labels(node)
        if left.isdisjoint(right):
            hyper[node.vertex_label] = (node.labels,)
        else:
            hyper[node.vertex_label] = (left, right)
    return EdgeLabeledMultigraph(forest.ground, len(forest.genomes), hyper)


def cut_label_size(g: EdgeLabeledMultigraph, b: Bipartition) -> CutEvaluation:
    """Labels of the literal pair edges with one endpoint on each side."""
    if not g.vertices <= b.ground:
        raise ValueError("bipartition does not cover the graph vertices")
    left = b.left
    crossing = frozenset(e.label for e in g.edges if (e.u in left) != (e.v in left))
    return CutEvaluation(crossing)


def connected_components(g: EdgeLabeledMultigraph) -> Partition:
    comps: list[int] = [1 << v for v in g.vertices]
    for hyperedges in g.per_label_hyperedges.values():
        for h in hyperedges:
            merged, rest = h.bits, []
            for c in comps:
                if c & h.bits:
                    merged |= c
                else:
                    rest.append(c)
            comps = rest + [merged]
    return Partition(LabelSet(c) for c in comps)


def export_dot(g: EdgeLabeledMultigraph, names: GenomeTable, graph_name: str = "G") -> str:
    """Undirected DOT text; vertices sorted by name, edges by (u, v, label) names."""
    lines = [f"graph {graph_name} {{"]
    for name in names.names_of(g.vertices):
        lines.append(f'  "{name}";')
    edges = []
    for e in g.edges:
        a, b = sorted((names[e.u], names[e.v]))
        edges.append((a, b, e.label))
    for a, b, lab in sorted(edges):
        lines.append(f'  "{a}" -- "{b}" [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# set-function views


class ElementSpace:
    """Dense element indices for a forest's ground set, ordered by genome name.

    Kernels and minimizers work on element masks; element 0 is the
    alphabetically first genome, so ascending element lists compare like
    sorted name lists.
    """

    def __init__(self, genomes: GenomeTable, ground: LabelSet):
        self.genomes = genomes
        self.ground = ground
        self.ids = genomes.by_name(ground)
        self.pos = {g: i for i, g in enumerate(self.ids)}
        self.n = len(self.ids)
        self.full = (1 << self.n) - 1

    def encode(self, labels: LabelSet) -> int:
        pos = self.pos
        mask = 0
        for g in labels:
            mask |= 1 << pos[g]
        return mask

    def decode(self, mask: int) -> LabelSet:
        bits = 0
        i = 0
        while mask:
            if mask & 1:
                bits |= 1 << self.ids[i]
            mask >>= 1
            i += 1
        return LabelSet(bits)

    def name(self, element: int) -> str:
        return self.genomes[self.ids[element]]


def element_space(forest: GeneForest) -> ElementSpace:
    cache = forest.__dict__.setdefault("_dupcut_cache", {})
    if "space" not in cache:
        cache["space"] = ElementSpace(forest.genomes, forest.ground)
    return cache["space"]


def _cached_table(forest: GeneForest, key: str, build, backend: str | None):
    cache = forest.__dict__.setdefault("_dupcut_cache", {})
    k = (key, backend)
    if k not in cache:
        cache[k] = build()
    return cache[k]


def h_table(forest: GeneForest, backend: str | None = None) -> tuple[HyperedgeTable, list[int]]:
    """H(F) as hyperedges in element space, plus the vertex label of each group."""

    def build():
        space = element_space(forest)
        groups, labels = [], []
        for _, node in forest.internal_nodes():
            hs = [space.encode(c) for c in forest.child_labels(node) if len(c) >= 2]
            if hs:
                groups.append(hs)
                labels.append(node.vertex_label)
        return HyperedgeTable(space.n, groups, backend), labels

    return _cached_table(forest, "H", build, backend)


def i_table(forest: GeneForest, literal: bool = False, backend: str | None = None) -> tuple[HyperedgeTable, list[int]]:
    """I(F) as hyperedges in element space.

    By default every vertex contributes the single hyperedge ``L(x)``: for an
    apparent duplication the children share a genome, so a set splits one of
    them exactly when it splits their union.  ``literal=True`` keeps the
    two-child form the graph is defined with.
    """

    def build():
        space = element_space(forest)
        groups, labels = [], []
        for _, node in forest.internal_nodes():
            left, right = forest.child_labels(node)
            if literal and not left.isdisjoint(right):
                sets = (left, right)
            else:
                sets = (node.labels,)
            hs = [space.encode(s) for s in sets if len(s) >= 2]
            if hs:
                groups.append(hs)
                labels.append(node.vertex_label)
        return HyperedgeTable(space.n, groups, backend), labels

    return _cached_table(forest, "I-literal" if literal else "I", build, backend)


def _subset_mask(forest: GeneForest, x_set: LabelSet) -> int:
    if not x_set <= forest.ground:
        raise ValueError("set is not contained in the forest's genomes")
    return element_space(forest).encode(x_set)


def f_H(forest: GeneForest, x_set: LabelSet, backend: str | None = None) -> int:
    """Cut label-size of ``x_set`` in H(F) (0 for the empty and full sets)."""
    mask = _subset_mask(forest, x_set)
    return h_table(forest, backend)[0].value(mask)


def f_I(forest: GeneForest, x_set: LabelSet, literal: bool = False, backend: str | None = None) -> int:
    """Cut label-size of ``x_set`` in I(F) (0 for the empty and full sets)."""
    mask = _subset_mask(forest, x_set)
    return i_table(forest, literal, backend)[0].value(mask)
