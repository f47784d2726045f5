"""Parsimonious first speciations from gene-tree forests.

Core entry points::

    from dupcut import parse_newick_forest, approx_mdbp, exact_mdbp
    forest = parse_newick_forest("((a,b),(c,d));")
    approx_mdbp(forest, certify=True)
"""

from .cutgraph import build_H, build_I, connected_components, cut_label_size, export_dot, f_H, f_I
from .kernels import HAVE_COMPILED
from .labels import GenomeTable, LabelSet
from .sfm import (
    HypergraphCutOracle,
    LimitExceeded,
    SetFunctionOracle,
    brute_force_minimize,
    check_submodular,
    queyranne_minimize,
)
from .solver import (
    all_optimal_bipartition_partition,
    all_optimal_prefix_partition,
    approx_mdbp,
    edge_in_some_min_cut,
    exact_mdbp,
    exact_mdpp,
    greedy_species_tree,
    vertex_in_some_min_prefix,
)
from .trees import (
    Bipartition,
    GeneForest,
    GenomeMismatchError,
    NewickError,
    Partition,
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

__version__ = "0.1.0"
