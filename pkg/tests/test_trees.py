import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dupcut import (
    Bipartition,
    GenomeMismatchError,
    NewickError,
    Prefix,
    SpeciesTree,
    d1_cost,
    duplication_count,
    duplications_preceding,
    is_apparent_duplication,
    lca_mapping,
    parse_newick_forest,
    parse_species_tree,
    partition_from_prefix,
    serialize_newick,
    split_forest,
)
from dupcut.labels import GenomeTable, LabelSet
from dupcut.trees import GeneForest, duplication_vertices, is_ancestor_closed


def bip(forest, left):
    return Bipartition.from_left(forest.genomes.ids(left), forest.ground)


def named(obj, labels):
    # forests and species trees both carry a genome table
    return obj.genomes.names_of(labels)


# -- labels


def test_label_set_algebra():
    a, b = LabelSet.of([0, 2]), LabelSet.of([2, 3])
    assert sorted(a | b) == [0, 2, 3]
    assert sorted(a & b) == [2]
    assert sorted(a - b) == [0]
    assert len(a) == 2 and 2 in a and 1 not in a
    assert a.straddles(LabelSet.of([0])) and not a.straddles(LabelSet.of([0, 2, 5]))


def test_genome_table_rejects_bad_names():
    t = GenomeTable()
    with pytest.raises(ValueError):
        t.add("a b")
    with pytest.raises(ValueError):
        t.add("")
    t.add("x")
    with pytest.raises(ValueError):
        t.add("x")


# -- parsing


def test_parse_single_tree():
    f = parse_newick_forest("((a,b),(a,c));")
    assert (len(f.trees), f.k, f.m) == (1, 3, 3)
    assert named(f, f.ground) == ["a", "b", "c"]


def test_parse_two_trees():
    f = parse_newick_forest("(a,b);\n(b,c);")
    assert (len(f.trees), f.k, f.m) == (2, 3, 2)


def test_parse_rejects_non_binary():
    with pytest.raises(NewickError, match="non-binary"):
        parse_newick_forest("((a,b,c),d);")


@pytest.mark.parametrize("text", ["", "   ", "((a,b);", "(a,b)", "(a,,b);", "(a,b));"])
def test_parse_errors_carry_position(text):
    with pytest.raises(NewickError) as info:
        parse_newick_forest(text)
    assert info.value.position >= 0


def test_parse_discards_lengths_comments_and_internal_names():
    f = parse_newick_forest("[note]((a:1.5,b:2e-3)x:0.1,c)root;")
    assert serialize_newick(f) == "((a,b),c);"


def test_single_leaf_tree_is_accepted():
    f = parse_newick_forest("a;\n(a,b);")
    assert f.m == 1 and len(f.trees) == 2


def test_vertex_labels_are_preorder_across_trees():
    trees = [(("a", "b"), ("a", "c")), ("c", ("d", "a"))]
    f = parse_newick_forest(oracles.to_text(trees))
    for label, sub, parent in oracles.internal(trees):
        node = f.node(label)
        assert set(named(f, node.labels)) == oracles.leafset(sub)
        assert f.parent_label(label) == parent


def test_serialize_round_trip_examples():
    assert serialize_newick(parse_newick_forest("((a,b),(a,c));")) == "((a,b),(a,c));"
    assert serialize_newick(parse_species_tree("((a,b),c);")) == "((a,b),c);"
    with pytest.raises(ValueError):
        serialize_newick(GeneForest.from_nested([]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_and_label_cache(seed):
    trees = oracles.rand_forest(seed)
    text = oracles.to_text(trees)
    f = parse_newick_forest(text)
    assert serialize_newick(f) == text
    assert f.m == len(oracles.internal(trees))
    assert set(named(f, f.ground)) == oracles.ground(trees)
    for _, node in f.internal_nodes():
        left, right = f.child_labels(node)
        assert node.labels == left | right


# -- duplications


def test_apparent_duplication_examples():
    assert is_apparent_duplication(parse_newick_forest("((a,b),(a,c));"), 1)
    assert not is_apparent_duplication(parse_newick_forest("((a,b),(c,d));"), 1)
    assert is_apparent_duplication(parse_newick_forest("(a,a);"), 1)


def test_lca_mapping_example():
    f = parse_newick_forest("((a,b),(a,c));")
    s = parse_species_tree("((a,b),c);")
    m = lca_mapping(f, s)
    assert m[1] == s.root
    assert named(s, s.arena[m[2]].labels) == ["a", "b"]
    assert m[3] == s.root


def test_lca_mapping_bipartition_species():
    f = parse_newick_forest("(a,b);")
    b = bip(f, ["a"])
    s = SpeciesTree.from_bipartition(b, f.genomes)
    assert lca_mapping(f, s)[1] == s.root


@pytest.mark.parametrize(
    "forest,species,expected",
    [("((a,b),(a,c));", "((a,b),c);", 1), ("(a,b);", "((a,b),c);", 0), ("(a,a);", "(a,b);", 1), ("(a,b);", "(a,b);", 0)],
)
def test_duplication_count_examples(forest, species, expected):
    assert duplication_count(parse_newick_forest(forest), parse_species_tree(species)) == expected


def test_genome_mismatch():
    with pytest.raises(GenomeMismatchError):
        duplication_count(parse_newick_forest("((a,b),(a,c));"), parse_species_tree("(a,b);"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_duplication_count_matches_oracle(seed, sseed):
    trees = oracles.rand_forest(seed, max_k=6, max_trees=4)
    names = sorted(oracles.ground(trees))
    species = random.Random(sseed).choice(list(oracles.binary_topologies(names)))
    f = parse_newick_forest(oracles.to_text(trees))
    s = parse_species_tree(oracles.species_text(species))
    assert duplication_vertices(f, s) == oracles.duplications(trees, species)


def test_non_binary_species_tree():
    f = parse_newick_forest("((a,b),c);")
    s = parse_species_tree("(a,b,c);")
    assert duplication_count(f, s) == 1


# -- d1 and prefixes


def test_d1_examples():
    f = parse_newick_forest("((a,b),(a,c));")
    assert d1_cost(f, bip(f, ["a", "b"])) == 1
    f = parse_newick_forest("(a,b);")
    assert d1_cost(f, bip(f, ["a"])) == 0
    f = parse_newick_forest("((a,a),b);")
    assert d1_cost(f, bip(f, ["a"])) == 0


def test_duplications_preceding_examples():
    f = parse_newick_forest("((a,b),(a,c));")
    assert duplications_preceding(f, bip(f, ["a", "b"])) == Prefix(frozenset({1}))
    f = parse_newick_forest("(a,b);")
    assert len(duplications_preceding(f, bip(f, ["a"]))) == 0
    # children (a,c) and (b,c) have singleton children, so only the root counts
    f = parse_newick_forest("((a,c),(b,c));")
    assert duplications_preceding(f, bip(f, ["a", "b"])) == Prefix(frozenset({1}))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_d1_properties(seed, data):
    trees = oracles.rand_forest(seed)
    f = parse_newick_forest(oracles.to_text(trees))
    lefts = list(oracles.bipartitions(oracles.ground(trees)))
    left = data.draw(st.sampled_from(lefts))
    b = bip(f, sorted(left))
    pre = duplications_preceding(f, b)
    assert is_ancestor_closed(f, pre.vertices)
    assert len(pre) == d1_cost(f, b) == d1_cost(f, b.swapped()) == oracles.d1(trees, left)


# -- split and partitions


def test_split_examples():
    f = parse_newick_forest("((a,b),(a,c));")
    left, right = split_forest(f, bip(f, ["a", "b"]))
    assert serialize_newick(left) == "(a,b);\na;"
    assert serialize_newick(right) == "c;"
    f = parse_newick_forest("((a,b),(c,d));")
    left, right = split_forest(f, bip(f, ["a", "b"]))
    assert (serialize_newick(left), serialize_newick(right)) == ("(a,b);", "(c,d);")
    f = parse_newick_forest("(a,b);")
    left, right = split_forest(f, bip(f, ["a"]))
    assert (serialize_newick(left), serialize_newick(right)) == ("a;", "b;")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_split_conserves_genomes(seed, data):
    trees = oracles.rand_forest(seed)
    f = parse_newick_forest(oracles.to_text(trees))
    left = data.draw(st.sampled_from(list(oracles.bipartitions(oracles.ground(trees)))))
    b = bip(f, sorted(left))
    lf, rf = split_forest(f, b)
    assert lf.ground == b.left and rf.ground == b.right
    # every vertex whose genomes stay on one side survives exactly once
    kept = sum(1 for _, x, _ in oracles.internal(trees) if not oracles.straddles(oracles.leafset(x), left))
    assert lf.m + rf.m == kept


def test_partition_from_prefix_examples():
    f = parse_newick_forest("((a,b),(a,c));")
    assert partition_from_prefix(f, Prefix(frozenset({1}))).named(f.genomes) == [["a"], ["b"], ["c"]]
    assert partition_from_prefix(f, Prefix(frozenset())).named(f.genomes) == [["a", "b", "c"]]
    f = parse_newick_forest("((a,b),(c,d));")
    assert partition_from_prefix(f, Prefix(frozenset())).named(f.genomes) == [["a", "b"], ["c", "d"]]
    with pytest.raises(ValueError):
        partition_from_prefix(f, Prefix(frozenset({2})))
