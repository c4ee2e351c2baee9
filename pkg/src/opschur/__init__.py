"""Desk-scale verification of L_q -> L_p bounds for integral operators with
operator-valued kernels, and of Besov-space Fourier multiplier conditions.
"""

__version__ = "0.1.0"

from .exponents import ExponentTriple, conjugate, make_exponents
from .kernels import (
    OperatorKernel,
    adjoint_kernel,
    apply_operator,
    circulant_kernel,
    random_kernel,
    scalar_kernel,
)
from .schur import (
    BoundPair,
    NormSearch,
    SchurConstants,
    SchurVerification,
    dualize,
    exact_norm_q1,
    norm_lower_bound,
    operator_norm_search,
    schur_bound,
    schur_c1,
    schur_c2,
    schur_constants,
    verify_schur_bound,
)
from .spaces import (
    BochnerFunction,
    DiscreteMeasureSpace,
    NormedSpace,
    duality_map,
    lp_norm,
    pairing,
    random_simple_function,
)
from .torus import (
    SymbolField,
    TorusGrid,
    apply_multiplier,
    convolution_kernel,
    convolution_schur_constants,
    convolve,
    dft_forward,
    dft_inverse,
    frequency_lp_norm,
    grid_lp_norm,
    symbol_to_kernel,
)
from .besov import (
    BesovParams,
    DyadicPartition,
    InverseTransformCheck,
    besov_norm,
    build_partition,
    check_corollary32,
    dyadic_blocks,
    fourier_type_constant,
    mu_analysis_grid,
    mu_estimate,
    psi_profile,
)
from .multipliers import (
    FmBesovVerification,
    FmVerification,
    MultiplierReport,
    lemma36_check,
    mikhlin_check,
    remark38c_check,
    verify_fm_besov,
    verify_fm_lq_lp,
)
from .config import ConfigError, Scenario, parse_config
from .report import emit_report, parse_report_lines, render_figure
from .runner import RunReport, run_scenario, run_scenarios

__all__ = [
    "__version__",
    "ExponentTriple",
    "conjugate",
    "make_exponents",
    "OperatorKernel",
    "adjoint_kernel",
    "apply_operator",
    "circulant_kernel",
    "random_kernel",
    "scalar_kernel",
    "BoundPair",
    "NormSearch",
    "SchurConstants",
    "SchurVerification",
    "dualize",
    "exact_norm_q1",
    "norm_lower_bound",
    "operator_norm_search",
    "schur_bound",
    "schur_c1",
    "schur_c2",
    "schur_constants",
    "verify_schur_bound",
    "BochnerFunction",
    "DiscreteMeasureSpace",
    "NormedSpace",
    "duality_map",
    "lp_norm",
    "pairing",
    "random_simple_function",
    "SymbolField",
    "TorusGrid",
    "apply_multiplier",
    "convolution_kernel",
    "convolution_schur_constants",
    "convolve",
    "dft_forward",
    "dft_inverse",
    "frequency_lp_norm",
    "grid_lp_norm",
    "symbol_to_kernel",
    "BesovParams",
    "DyadicPartition",
    "InverseTransformCheck",
    "besov_norm",
    "build_partition",
    "check_corollary32",
    "dyadic_blocks",
    "fourier_type_constant",
    "mu_analysis_grid",
    "mu_estimate",
    "psi_profile",
    "FmBesovVerification",
    "FmVerification",
    "MultiplierReport",
    "lemma36_check",
    "mikhlin_check",
    "remark38c_check",
    "verify_fm_besov",
    "verify_fm_lq_lp",
    "ConfigError",
    "Scenario",
    "parse_config",
    "emit_report",
    "parse_report_lines",
    "render_figure",
    "RunReport",
    "run_scenario",
    "run_scenarios",
]
