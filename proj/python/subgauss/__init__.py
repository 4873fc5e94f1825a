"""Orlicz norms, tail bounds and random-matrix probes."""

from ._subgauss import (
    Distribution,
    PsiNorm,
    ScalarInequalityCheck,
    TailBound,
    UsageError,
    appendix_c_check,
    bernstein_bound,
    binom_tail_exact,
    binom_tail_lower,
    hanson_wright_bound,
    jl_dimension,
    k2logk,
    psi_norm,
    psi_norm_analytic,
    psi_norm_from_samples,
    run_cli,
    sketch_dimension,
    sub_gaussian_parameter,
)

__all__ = [name for name in dir() if not name.startswith("_")]
