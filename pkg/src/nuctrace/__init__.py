"""nuctrace: nuclear representations on truncated sequence spaces.

The library builds finite nuclear representations, factors them through
diagonal summing stages, and verifies at desk scale that the
representation trace is rewrite-invariant and equal to the eigenvalue sum,
with eigenvalue moduli summable along truncation ladders.
"""

from .exponents import (
    INF,
    Exponent,
    OrderExponent,
    ParameterTriple,
    check_holder_chain,
    conjugate,
    r_from_s,
    reduce_to_p_ge_2,
    s_from_p,
)
from .seqspace import (
    MAX_DIM,
    DenseOperator,
    SpaceMismatchError,
    SpaceTag,
    Vector,
    apply,
    c0,
    compose,
    conjugate_tag,
    dual_pairing,
    linf,
    lp,
    lp_norm,
    normalize,
)
from .nuclear import (
    NuclearRep,
    SchemeNotApplicableError,
    adjoint_rep,
    assemble,
    equivalent,
    nuclear_trace,
    quasi_norm_value,
    rep_from_json,
    rep_to_json,
    rewrite_equivalent,
)
from .factorization import (
    Pipeline,
    SummingCertificate,
    build_pipeline,
    exponent_budget,
    pipeline_to_json,
    split_diagonal,
    summing_certificates,
)
from .spectra import (
    LadderRow,
    SpectralReport,
    EigensolverError,
    eigen_spectrum,
    ladder_csv,
    spectral_report,
    summability_ladder,
    weyl_check,
)
from .harness import (
    FAMILIES,
    DecayProfile,
    ExperimentConfig,
    SuiteReport,
    Tolerances,
    config_from_json,
    config_to_json,
    generate_family,
    run_factorization_suite,
    run_ladder_suite,
    run_trace_suite,
    write_suite_report,
)
from .cli import cli_main

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Exponent",
    "OrderExponent",
    "ParameterTriple",
    "check_holder_chain",
    "conjugate",
    "r_from_s",
    "reduce_to_p_ge_2",
    "s_from_p",
    "MAX_DIM",
    "DenseOperator",
    "SpaceMismatchError",
    "SpaceTag",
    "Vector",
    "apply",
    "c0",
    "compose",
    "conjugate_tag",
    "dual_pairing",
    "linf",
    "lp",
    "lp_norm",
    "normalize",
    "NuclearRep",
    "SchemeNotApplicableError",
    "adjoint_rep",
    "assemble",
    "equivalent",
    "nuclear_trace",
    "quasi_norm_value",
    "rep_from_json",
    "rep_to_json",
    "rewrite_equivalent",
    "Pipeline",
    "SummingCertificate",
    "build_pipeline",
    "exponent_budget",
    "pipeline_to_json",
    "split_diagonal",
    "summing_certificates",
    "LadderRow",
    "SpectralReport",
    "EigensolverError",
    "eigen_spectrum",
    "ladder_csv",
    "spectral_report",
    "summability_ladder",
    "weyl_check",
    "FAMILIES",
    "DecayProfile",
    "ExperimentConfig",
    "SuiteReport",
    "Tolerances",
    "config_from_json",
    "config_to_json",
    "generate_family",
    "run_factorization_suite",
    "run_ladder_suite",
    "run_trace_suite",
    "write_suite_report",
    "cli_main",
    "__version__",
]
