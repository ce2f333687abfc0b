"""Design multi-copy graph-based codes by relocating entries or circulants.

The package splits into matrix/graph plumbing (``tanner``), cycle
machinery (``cycles``), absorbing-set enumeration (``absorbing``), the
relocation construction (``relocation``), exact fraction analysis
(``analysis``), brute-force verification (``oracle``), and the greedy
designer (``designer``).  The most common entry points are re-exported
here.
"""

from .absorbing import (
    CANONICAL_UAS,
    CanonicalUas,
    UasConfig,
    UasInstance,
    basic_cycle_count,
    canonical_uas,
    classify_config,
    cycle_count_bounds,
    degree2_check_count,
    enumerate_uas,
    involvement_counts,
)
from .analysis import (
    BasisIntersections,
    FractionReport,
    basis_intersections,
    expected_md_instances,
    fraction_report,
    fraction_report_for_basis,
    fraction_tsv,
    savings,
)
from .cycles import Cycle, CycleBasis, enumerate_cycles, minimum_cycle_basis
from .designer import (
    DesignReport,
    DesignResult,
    StepRecord,
    design_md,
    report_log,
    report_tsv,
    select_unit,
    vote,
)
from .oracle import (
    EmpiricalFractions,
    MdObjectProfile,
    MonteCarloResult,
    enumerate_md_uas,
    exhaustive_fractions,
    full_enumeration_fractions,
    md_instance_subgraph,
    md_object_profile,
    min_detached_checks,
    monte_carlo_avg,
)
from .relocation import (
    MdParts,
    RelocationMap,
    alternating_sum,
    alternating_value_sum,
    assemble_md,
    is_cycle_active,
    is_prime,
    is_uas_active,
    md_edge_copies,
    parse_reloc,
    split_matrices,
)
from .tanner import (
    BinaryMatrix,
    ParseError,
    QcMatrix,
    TannerGraph,
    build_graph,
    check_no_4cycles,
    check_regular_gamma,
    expand_qc,
    parse_alist,
    parse_qc,
    write_alist,
    write_qc,
)

__all__ = [
    "BinaryMatrix",
    "QcMatrix",
    "TannerGraph",
    "ParseError",
    "build_graph",
    "expand_qc",
    "parse_alist",
    "parse_qc",
    "write_alist",
    "write_qc",
    "check_no_4cycles",
    "check_regular_gamma",
    "Cycle",
    "CycleBasis",
    "enumerate_cycles",
    "minimum_cycle_basis",
    "UasConfig",
    "UasInstance",
    "CanonicalUas",
    "CANONICAL_UAS",
    "canonical_uas",
    "enumerate_uas",
    "degree2_check_count",
    "basic_cycle_count",
    "cycle_count_bounds",
    "classify_config",
    "involvement_counts",
    "RelocationMap",
    "parse_reloc",
    "alternating_sum",
    "alternating_value_sum",
    "is_cycle_active",
    "is_uas_active",
    "is_prime",
    "MdParts",
    "split_matrices",
    "assemble_md",
    "md_edge_copies",
    "BasisIntersections",
    "FractionReport",
    "basis_intersections",
    "fraction_report",
    "fraction_report_for_basis",
    "savings",
    "expected_md_instances",
    "fraction_tsv",
    "min_detached_checks",
    "EmpiricalFractions",
    "exhaustive_fractions",
    "full_enumeration_fractions",
    "enumerate_md_uas",
    "MdObjectProfile",
    "md_object_profile",
    "md_instance_subgraph",
    "MonteCarloResult",
    "monte_carlo_avg",
    "design_md",
    "DesignResult",
    "DesignReport",
    "StepRecord",
    "vote",
    "select_unit",
    "report_tsv",
    "report_log",
]
