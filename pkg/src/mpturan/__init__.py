"""Exact Turán numbers of vertex-disjoint cliques in complete multipartite graphs."""

from .constructions import (
    Construction,
    ConstructionSpec,
    build_bipartite_along,
    build_complete,
    build_conjectured,
    build_g1,
    build_g2,
    construct,
)
from .errors import (
    CapExceededError,
    DegeneratePartsError,
    GraphParseError,
    InfeasibleConstructionError,
    InvalidParameterError,
    InvalidSizesError,
    PartViolationError,
    ResumeError,
    TuranError,
)
from .formulas import (
    BlockPartition,
    FormulaResult,
    bet_value,
    conj_value,
    delta_excess,
    g_value,
    induction_gap,
    matching_extremal_value,
    optimal_bipartition,
    set_partitions,
)
from .graph import MultipartiteGraph, PartSizes, new_graph, parse_graph, serialize_graph
from .harness import SweepReport, SweepSpec, audit_induction, run_sweep, shape_survey
from .packing import (
    PackingWitness,
    PairClass,
    RichEdgeReport,
    classify_pair,
    enumerate_cliques,
    enumerate_triangles,
    find_clique_packing,
    is_kkt_free,
    max_packing_size,
    mindeg_threshold,
    rich_edges,
    triangle_exists_under_mindeg,
)
from .solver import ExtremalRecord, SearchBudget, Status, exact_extremal, verify_point

__version__ = "0.1.0"
