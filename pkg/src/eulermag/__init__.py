"""Eulerian magnitude homology of graphs, the eulerian Asao-Izumihara pair,
shellability of word complexes, and Erdős–Rényi sweeps."""

__version__ = "0.1.0"

from eulermag.graph import (
    INFINITY,
    ErParams,
    Graph,
    butterfly_graph,
    from_edge_list,
    path_metric,
    read_edge_list,
    sample_er,
)
from eulermag.homology import HomologyGroup, IntegerChainComplex, IntegerMatrix, homology, smith_normal_form
from eulermag.complexes import TupleComplex, reduced_homology, relative_homology
from eulermag.trails import boundary_matrix, build_emc, emh, enumerate_trails
from eulermag.asao_izumihara import build_et, build_pair, emh_via_ai, verify_chain_isomorphism
from eulermag.shelling import (
    FacetDims,
    ShellStatus,
    et_shelling_threshold,
    etsub_shelling_threshold,
    find_shelling,
    is_shelling,
    skeleton_section,
    vanishing_threshold,
)
from eulermag.injective_words import (
    build_inj,
    build_inj_filtered,
    verify_bjorner_wachs,
    verify_filtration_quotient,
)

__all__ = [
    "INFINITY",
    "ErParams",
    "Graph",
    "butterfly_graph",
    "from_edge_list",
    "path_metric",
    "read_edge_list",
    "sample_er",
    "HomologyGroup",
    "IntegerChainComplex",
    "IntegerMatrix",
    "homology",
    "smith_normal_form",
    "TupleComplex",
    "reduced_homology",
    "relative_homology",
    "boundary_matrix",
    "build_emc",
    "emh",
    "enumerate_trails",
    "build_et",
    "build_pair",
    "emh_via_ai",
    "verify_chain_isomorphism",
    "FacetDims",
    "ShellStatus",
    "et_shelling_threshold",
    "etsub_shelling_threshold",
    "find_shelling",
    "is_shelling",
    "skeleton_section",
    "vanishing_threshold",
    "build_inj",
    "build_inj_filtered",
    "verify_bjorner_wachs",
    "verify_filtration_quotient",
]
