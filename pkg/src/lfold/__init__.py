"""Verification workbench for l-fold product coefficient statistics.

Exact eigenform coefficient tables, symmetric-power decompositions, local
Euler factors, truncated Dirichlet series with declared tails, exact rational
theorem exponents, squarefree moment sums, sign-change scans, and an audit
that cross-checks all of it.
"""

from .chebyshev import (
    ChebyshevExpansion,
    binomial_delta,
    cheb_U,
    chebyshev_expansion,
    fcrel_residual,
    sym_power_prime,
    verify_cheb_identity,
)
from .dirichlet import (
    CorrectionFactor,
    TruncatedSeries,
    correction_coeffs,
    decomposition_report,
    decomposition_residual,
    l_ell_truncated,
    lS_truncated,
    lT_truncated,
    pole_order,
    u_convergence_probe,
)
from .eigenform import (
    DeligneViolation,
    EigenformTable,
    QExpansion,
    ResourceLimitError,
    SatakeAngle,
    build_delta_qexpansion,
    hecke_residual,
    lambda_prime_power,
    normalize,
    satake_angle,
)
from .exponents import ExponentReport, alpha, audit_table, beta, delta_range
from .local_factors import (
    LocalSeries,
    TensorCoefficientTable,
    newton_h,
    sym_coefficient,
    tensor_coefficient,
    tensor_power_sums,
    tensor_table,
)
from .moments import (
    FitResult,
    MomentSeries,
    SignChangeRecord,
    SquarefreeSieve,
    build_sieve,
    count_sign_changes,
    fit_main_term,
    full_sum,
    full_sum_direct,
    moment_sums,
    window_sign_scan,
)

__version__ = "0.1.0"
