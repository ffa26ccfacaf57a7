"""Maximum and certified odd induced subgraphs on graphs of small treewidth."""

from .graph import (
    Graph, GraphError, build_graph, common_deg2, common_deg2_excl, components, d_big,
    deg2_neighbors, induced_subgraph, is_even_set, is_odd_set, is_star, pendant_neighbors, s_set,
)
from .decomposition import (
    AdjacentTwoVertices, DecompositionError, HighDegreeSmallD, LemmaViolation, MinDegreeLE1,
    NiceTreeDecomposition, StuckCore, TreeDecomposition, lwz_find, recognize_tw2, to_nice,
    treewidth_brute, validate_decomposition,
)
from .exact import (
    EvenPartition, GallaiViolation, MoisResult, SolverRefused, chromatic_brute, gallai_partition,
    max_even_subgraph, mois_brute, mois_dp,
)
from .reduction import (
    CaseTableDefect, Configuration, OddCertificate, ReductionStep, StructureExhaustion,
    apply_lemma1, apply_lemma2, construct_odd, find_configuration, verify_certificate,
)
from .generators import FAMILIES, FamilySpec, generate
from .io import format_edge_list, parse_edge_list, read_edge_list
from .campaign import CampaignConfig, CampaignReport, run_campaign

__version__ = "0.1.0"
