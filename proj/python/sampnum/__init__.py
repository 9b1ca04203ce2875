"""Weighted least-squares sampling recovery on the torus."""

from ._core import (
    CheckFailure,
    CoefVector,
    DegenerateFitError,
    DensityParams,
    ErrorReport,
    ExperimentConfig,
    InfoMatrices,
    OrderedBasis,
    PointSet,
    Pseudoinverse,
    SpaceParams,
    SpectrumSummary,
    beta_gamma,
    build_matrices,
    certified_upper_bound,
    density_eval,
    density_selfcheck,
    empirical_error,
    error_operator,
    error_report,
    fit,
    head_size,
    load_config,
    ordered_basis,
    parse_config,
    random_unit_function,
    run_beta_lemma,
    run_claims,
    run_density_check,
    run_rates,
    sample_points,
    sample_values,
    spectral_sums,
    worst_case_error_trunc,
)

__all__ = [name for name in dir() if not name.startswith("_")]
