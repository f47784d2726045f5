"""Gene and species trees, LCA mapping, duplication costs and forest splitting.

Gene trees are binary and may repeat genomes at their leaves.  Species trees
carry each genome exactly once and may be non-binary.  Every internal gene
vertex gets a forest-wide ``vertex_label`` in 1..m, assigned in pre-order
with trees taken in input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .labels import GenomeTable, LabelSet
from .newick import NewickError, parse_trees, to_newick

__all__ = [
    "Bipartition",
    "GeneForest",
    "GeneNode",
    "GeneTree",
    "GenomeMismatchError",
    "LcaMapping",
    "NewickError",
    "Partition",
    "Prefix",
    "SpeciesNode",
    "SpeciesTree",
    "d1_cost",
    "duplication_count",
    "duplication_vertices",
    "duplications_preceding",
    "is_apparent_duplication",
    "lca_mapping",
    "parse_newick_forest",
    "parse_species_tree",
    "partition_from_prefix",
    "serialize_newick",
    "split_forest",
]


class GenomeMismatchError(ValueError):
    """A gene leaf names a genome the species tree does not contain."""


@dataclass(frozen=True)
class GeneNode:
    node_id: int
    parent: int | None
    children: tuple[int, ...]
    leaf_genome: int | None
    vertex_label: int | None
    labels: LabelSet

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class GeneTree:
    """A rooted binary tree stored as a pre-order arena (``arena[0]`` is the root)."""

    root: int
    arena: tuple[GeneNode, ...]

    def __len__(self) -> int:
        return len(self.arena)

    def internal(self) -> Iterator[GeneNode]:
        return (n for n in self.arena if n.children)

    @property
    def labels(self) -> LabelSet:
        return self.arena[self.root].labels

    def nested(self, genomes: GenomeTable, node_id: int | None = None):
        """The subtree at ``node_id`` as nested tuples of genome names."""
        start = self.root if node_id is None else node_id
        built: dict[int, object] = {}
        for nid in reversed(list(self._preorder(start))):
            node = self.arena[nid]
            if node.children:
                built[nid] = tuple(built.pop(c) for c in node.children)
            else:
                built[nid] = genomes[node.leaf_genome]
        return built[start]

    def _preorder(self, start: int) -> Iterator[int]:
        stack = [start]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.arena[nid].children))


class GeneForest:
    """A list of gene trees over one shared genome table."""

    def __init__(self, trees: Sequence[GeneTree], genomes: GenomeTable):
        self.trees: tuple[GeneTree, ...] = tuple(trees)
        self.genomes = genomes
        ground = 0
        self._vertex: dict[int, tuple[int, int]] = {}
        for ti, tree in enumerate(self.trees):
            ground |= tree.labels.bits
            for node in tree.internal():
                if node.vertex_label in self._vertex:
                    raise ValueError(f"duplicate vertex label {node.vertex_label}")
                self._vertex[node.vertex_label] = (ti, node.node_id)
        self.ground = LabelSet(ground)
        self.m = len(self._vertex)

    @classmethod
    def from_nested(cls, nested: Iterable, genomes: GenomeTable | None = None) -> "GeneForest":
        """Build from nested tuples of names.

        Without ``genomes`` a fresh table is built in first-appearance order;
        with one, every name must already be in it (the table is shared).
        """
        fresh = genomes is None
        table = GenomeTable() if fresh else genomes
        trees = []
        next_label = 1
        for shape in nested:
            tree, next_label = _build_gene_tree(shape, table, next_label, fresh)
            trees.append(tree)
        return cls(trees, table)

    def __len__(self) -> int:
        return len(self.trees)

    def __repr__(self) -> str:
        return f"GeneForest(trees={len(self.trees)}, k={len(self.ground)}, m={self.m})"

    @property
    def k(self) -> int:
        return len(self.ground)

    def vertex_labels(self) -> list[int]:
        return sorted(self._vertex)

    def locate(self, vertex_label: int) -> tuple[int, GeneNode]:
        try:
            ti, nid = self._vertex[vertex_label]
        except KeyError:
            raise KeyError(f"unknown vertex label {vertex_label}") from None
        return ti, self.trees[ti].arena[nid]

    def node(self, vertex_label: int) -> GeneNode:
        return self.locate(vertex_label)[1]

    def child_labels(self, node_or_label) -> tuple[LabelSet, LabelSet]:
        if isinstance(node_or_label, GeneNode):
            ti = self._vertex[node_or_label.vertex_label][0]
            node = node_or_label
        else:
            ti, node = self.locate(node_or_label)
        arena = self.trees[ti].arena
        left, right = node.children
        return arena[left].labels, arena[right].labels

    def internal_nodes(self) -> Iterator[tuple[int, GeneNode]]:
        """``(tree_index, node)`` for every internal vertex, in label order."""
        for ti, tree in enumerate(self.trees):
            for node in tree.internal():
                yield ti, node

    def parent_label(self, vertex_label: int) -> int | None:
        ti, node = self.locate(vertex_label)
        if node.parent is None:
            return None
        return self.trees[ti].arena[node.parent].vertex_label

    def nested(self) -> list:
        return [t.nested(self.genomes) for t in self.trees]


def _build_gene_tree(shape, table: GenomeTable, next_label: int, fresh: bool):
    # pass 1: pre-order layout; children ids are known only after their subtree
    order: list = []  # (shape, parent_id)
    stack = [(shape, None)]
    while stack:
        item, parent = stack.pop()
        nid = len(order)
        order.append((item, parent))
        if not isinstance(item, str):
            if len(item) != 2:
                raise ValueError(f"gene-tree vertex with {len(item)} children (must be 2)")
            for child in reversed(item):
                stack.append((child, nid))
    children: list[list[int]] = [[] for _ in order]
    for nid, (_, parent) in enumerate(order):
        if parent is not None:
            children[parent].append(nid)
    genome_of: list[int | None] = [None] * len(order)
    label_of: list[int | None] = [None] * len(order)
    for nid, (item, _) in enumerate(order):
        if isinstance(item, str):
            if fresh:
                genome_of[nid] = table.intern(item)
            elif item in table:
                genome_of[nid] = table.index[item]
            else:
                raise KeyError(f"genome {item!r} not in the shared genome table")
        else:
            label_of[nid] = next_label
            next_label += 1
    bits = [0] * len(order)
    for nid in range(len(order) - 1, -1, -1):
        if genome_of[nid] is not None:
            bits[nid] = 1 << genome_of[nid]
        else:
            a, b = children[nid]
            bits[nid] = bits[a] | bits[b]
    arena = tuple(
        GeneNode(
            node_id=nid,
            parent=parent,
            children=tuple(children[nid]),
            leaf_genome=genome_of[nid],
            vertex_label=label_of[nid],
            labels=LabelSet(bits[nid]),
        )
        for nid, (_, parent) in enumerate(order)
    )
    return GeneTree(root=0, arena=arena), next_label


@dataclass(frozen=True)
class SpeciesNode:
    node_id: int
    parent: int | None
    children: tuple[int, ...]
    leaf_genome: int | None
    labels: LabelSet
    depth: int


class SpeciesTree:
    """A rooted species tree with one leaf per genome; internal vertices may have >2 children."""

    def __init__(self, arena: Sequence[SpeciesNode], genomes: GenomeTable, root: int = 0):
        self.arena = tuple(arena)
        self.root = root
        self.genomes = genomes
        self.leaf_of: dict[int, int] = {}
        for node in self.arena:
            if node.leaf_genome is not None:
                if node.leaf_genome in self.leaf_of:
                    raise ValueError(
                        f"genome {genomes[node.leaf_genome]!r} labels more than one species leaf"
                    )
                self.leaf_of[node.leaf_genome] = node.node_id
        self.ground = self.arena[root].labels

    @classmethod
    def from_nested(cls, shape, genomes: GenomeTable | None = None) -> "SpeciesTree":
        table = GenomeTable() if genomes is None else genomes
        order: list = []
        stack = [(shape, None, 0)]
        while stack:
            item, parent, depth = stack.pop()
            nid = len(order)
            order.append((item, parent, depth))
            if not isinstance(item, str):
                if len(item) < 2:
                    raise ValueError("species-tree vertex with fewer than two children")
                for child in reversed(item):
                    stack.append((child, nid, depth + 1))
        children: list[list[int]] = [[] for _ in order]
        for nid, (_, parent, _) in enumerate(order):
            if parent is not None:
                children[parent].append(nid)
        genome_of: list[int | None] = [None] * len(order)
        seen: set[str] = set()
        for nid, (item, _, _) in enumerate(order):
            if isinstance(item, str):
                if item in seen:
                    raise ValueError(f"genome {item!r} labels more than one species leaf")
                seen.add(item)
                genome_of[nid] = table.intern(item)
        bits = [0] * len(order)
        for nid in range(len(order) - 1, -1, -1):
            if genome_of[nid] is not None:
                bits[nid] = 1 << genome_of[nid]
            else:
                for c in children[nid]:
                    bits[nid] |= bits[c]
        arena = [
            SpeciesNode(nid, parent, tuple(children[nid]), genome_of[nid], LabelSet(bits[nid]), depth)
            for nid, (_, parent, depth) in enumerate(order)
        ]
        return cls(arena, table)

    @classmethod
    def from_bipartition(cls, b: "Bipartition", genomes: GenomeTable) -> "SpeciesTree":
        """The three-internal-vertex species tree of a first speciation.

        Genome ids are preserved, so the result shares ``genomes``.
        """

        def side(labels: LabelSet):
            names = [genomes[g] for g in genomes.by_name(labels)]
            return names[0] if len(names) == 1 else tuple(names)

        return cls.from_nested((side(b.left), side(b.right)), genomes)

    def nested(self, node_id: int | None = None):
        start = self.root if node_id is None else node_id
        node = self.arena[start]
        if not node.children:
            return self.genomes[node.leaf_genome]
        built: dict[int, object] = {}
        stack = [(start, False)]
        while stack:
            nid, done = stack.pop()
            node = self.arena[nid]
            if not node.children:
                built[nid] = self.genomes[node.leaf_genome]
            elif done:
                built[nid] = tuple(built.pop(c) for c in node.children)
            else:
                stack.append((nid, True))
                stack.extend((c, False) for c in node.children)
        return built[start]

    def lca(self, u: int, v: int) -> int:
        arena = self.arena
        while arena[u].depth > arena[v].depth:
            u = arena[u].parent
        while arena[v].depth > arena[u].depth:
            v = arena[v].parent
        while u != v:
            u, v = arena[u].parent, arena[v].parent
        return u

    def __len__(self) -> int:
        return len(self.arena)

    def __repr__(self) -> str:
        return f"SpeciesTree({serialize_newick(self)!r})"


@dataclass(frozen=True)
class Bipartition:
    """A first speciation: ``left`` and ``right`` split ``ground``."""

    left: LabelSet
    right: LabelSet
    ground: LabelSet

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("both sides of a bipartition must be nonempty")
        if not self.left.isdisjoint(self.right):
            raise ValueError("bipartition sides overlap")
        if (self.left | self.right) != self.ground:
            raise ValueError("bipartition sides do not cover the ground set")

    @classmethod
    def from_left(cls, left: LabelSet, ground: LabelSet) -> "Bipartition":
        return cls(left, ground - left, ground)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.right, self.left, self.ground)

    def canonical(self, genomes: GenomeTable) -> "Bipartition":
        """Orient so the alphabetically first genome is on the left."""
        first = genomes.by_name(self.ground)[0]
        return self if first in self.left else self.swapped()

    def describe(self, genomes: GenomeTable) -> tuple[list[str], list[str]]:
        return genomes.names_of(self.left), genomes.names_of(self.right)


@dataclass(frozen=True)
class Prefix:
    """An ancestor-closed set of internal vertex labels."""

    vertices: frozenset[int]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __contains__(self, label: int) -> bool:
        return label in self.vertices


def is_ancestor_closed(forest: GeneForest, vertices: Iterable[int]) -> bool:
    vs = set(vertices)
    for v in vs:
        p = forest.parent_label(v)
        if p is not None and p not in vs:
            return False
    return True


class Partition:
    """Disjoint nonempty label sets covering a ground set, kept in a canonical order."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[LabelSet]):
        parts = [p for p in parts]
        seen = 0
        for p in parts:
            if not p:
                raise ValueError("partition parts must be nonempty")
            if seen & p.bits:
                raise ValueError("partition parts overlap")
            seen |= p.bits
        self.parts: tuple[LabelSet, ...] = tuple(sorted(parts, key=lambda p: (p.bits & -p.bits)))

    @property
    def ground(self) -> LabelSet:
        bits = 0
        for p in self.parts:
            bits |= p.bits
        return LabelSet(bits)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def named(self, genomes: GenomeTable) -> list[list[str]]:
        return sorted(genomes.names_of(p) for p in self.parts)

    def __repr__(self) -> str:
        return f"Partition({[sorted(p) for p in self.parts]})"


# ---------------------------------------------------------------------------
# Newick I/O


def parse_newick_forest(text: str) -> GeneForest:
    """Parse ``;``-terminated binary gene trees into a forest."""
    return GeneForest.from_nested(parse_trees(text, binary=True))


def parse_species_tree(text: str, genomes: GenomeTable | None = None) -> SpeciesTree:
    trees = parse_trees(text, binary=False)
    if len(trees) != 1:
        raise NewickError(f"expected one species tree, found {len(trees)}", 0)
    return SpeciesTree.from_nested(trees[0], genomes)


def serialize_newick(obj) -> str:
    """Newick text for a forest (one tree per line) or a species tree."""
    if isinstance(obj, SpeciesTree):
        return to_newick(obj.nested())
    if isinstance(obj, GeneTree):
        raise TypeError("serialize a GeneForest, which carries the genome names")
    if not obj.trees:
        raise ValueError("cannot serialize an empty forest")
    return "\n".join(to_newick(t) for t in obj.nested())


# ---------------------------------------------------------------------------
# duplications


def is_apparent_duplication(forest: GeneForest, vertex_label: int) -> bool:
    left, right = forest.child_labels(vertex_label)
    return not left.isdisjoint(right)


class LcaMapping:
    """Species-node images of every gene node, indexed ``[tree][node_id]``."""

    def __init__(self, forest: GeneForest, species: SpeciesTree, images: list[list[int]]):
        self.forest = forest
        self.species = species
        self.images = images

    def __getitem__(self, vertex_label: int) -> int:
        ti, node = self.forest.locate(vertex_label)
        return self.images[ti][node.node_id]

    def of(self, tree_index: int, node_id: int) -> int:
        return self.images[tree_index][node_id]

    def is_duplication(self, tree_index: int, node: GeneNode) -> bool:
        img = self.images[tree_index]
        here = img[node.node_id]
        return any(img[c] == here for c in node.children)


def lca_mapping(forest: GeneForest, species: SpeciesTree) -> LcaMapping:
    """Map every gene node to the lowest species vertex containing its genomes."""
    # species trees may use their own genome table; match by name
    leaf_for: dict[int, int] = {}
    for gid in forest.ground:
        name = forest.genomes[gid]
        sid = species.genomes.index.get(name)
        if sid is None or sid not in species.leaf_of:
            raise GenomeMismatchError(f"genome {name!r} is not a leaf of the species tree")
        leaf_for[gid] = species.leaf_of[sid]
    images = []
    for tree in forest.trees:
        img = [0] * len(tree.arena)
        for node in reversed(tree.arena):
            if node.children:
                a, b = node.children
                img[node.node_id] = species.lca(img[a], img[b])
            else:
                img[node.node_id] = leaf_for[node.leaf_genome]
        images.append(img)
    return LcaMapping(forest, species, images)


def duplication_vertices(forest: GeneForest, species: SpeciesTree) -> list[int]:
    """Vertex labels of the duplications of ``forest`` with respect to ``species``."""
    mapping = lca_mapping(forest, species)
    return [
        node.vertex_label
        for ti, node in forest.internal_nodes()
        if mapping.is_duplication(ti, node)
    ]


def duplication_count(forest: GeneForest, species: SpeciesTree) -> int:
    return len(duplication_vertices(forest, species))


def _check_ground(forest: GeneForest, b: Bipartition) -> None:
    if b.ground != forest.ground:
        raise ValueError("ground-set mismatch between bipartition and forest")


def duplications_preceding(forest: GeneForest, b: Bipartition) -> Prefix:
    """Duplications mapped to the root of the bipartition species tree."""
    _check_ground(forest, b)
    species = SpeciesTree.from_bipartition(b, forest.genomes)
    mapping = lca_mapping(forest, species)
    root = species.root
    found = set()
    for ti, node in forest.internal_nodes():
        if mapping.of(ti, node.node_id) == root and mapping.is_duplication(ti, node):
            found.add(node.vertex_label)
    return Prefix(frozenset(found))


def d1_cost(forest: GeneForest, b: Bipartition) -> int:
    """Number of duplications preceding the first speciation ``b``."""
    return len(duplications_preceding(forest, b))


# ---------------------------------------------------------------------------
# greedy split and prefix partitions


def split_forest(forest: GeneForest, b: Bipartition) -> tuple[GeneForest, GeneForest]:
    """Delete every vertex whose genomes straddle ``b``; sort the surviving subtrees by side."""
    _check_ground(forest, b)
    left_bits = b.left.bits
    left_trees, right_trees = [], []
    for tree in forest.trees:
        arena = tree.arena
        removed = [False] * len(arena)
        for node in arena:
            bits = node.labels.bits
            removed[node.node_id] = bool(bits & left_bits) and bool(bits & ~left_bits)
        for node in arena:
            if removed[node.node_id]:
                continue
            if node.parent is not None and not removed[node.parent]:
                continue
            shape = tree.nested(forest.genomes, node.node_id)
            (left_trees if node.labels.bits & left_bits else right_trees).append(shape)
    return (
        GeneForest.from_nested(left_trees, forest.genomes),
        GeneForest.from_nested(right_trees, forest.genomes),
    )


class _DisjointSets:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def partition_from_prefix(forest: GeneForest, prefix: Prefix | Iterable[int]) -> Partition:
    """Components of H(F) once the edges labeled by ``prefix`` are deleted."""
    vertices = prefix.vertices if isinstance(prefix, Prefix) else frozenset(prefix)
    for v in vertices:
        forest.locate(v)
    if not is_ancestor_closed(forest, vertices):
        raise ValueError("vertex set is not ancestor-closed")
    dsu = _DisjointSets()
    for g in forest.ground:
        dsu.find(g)
    for ti, node in forest.internal_nodes():
        if node.vertex_label in vertices:
            continue
        for child in forest.child_labels(node):
            members = list(child)
            for other in members[1:]:
                dsu.union(members[0], other)
    groups: dict[int, int] = {}
    for g in forest.ground:
        r = dsu.find(g)
        groups[r] = groups.get(r, 0) | (1 << g)
    return Partition(LabelSet(bits) for bits in groups.values())


def singleton_partition(labels: LabelSet) -> Partition:
    return Partition(LabelSet(1 << g) for g in labels)


def partition_from_masks(masks: Iterable[int]) -> Partition:
    return Partition(LabelSet(m) for m in masks)
