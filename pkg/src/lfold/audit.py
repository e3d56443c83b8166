"""One-shot consistency audit across every module.

Each check is a named pass/fail entry; the two documented discrepancies in
the audited exponent table (l = 3 and l = 5) are expected and therefore
reported as warnings, never as failures. The verdict is `ok` iff every
check passed.
"""

import math
import random
from fractions import Fraction

import numpy as np

from . import chebyshev, dirichlet, exponents, local_factors, moments, sieves
from .eigenform import (
    QExpansion,
    deligne_check_exact,
    divisor_bound_check_exact,
    hecke_residual,
    lambda_prime_power,
    rebuild_lambda,
)

SCHEMA_VERSION = 1

# hand-derived exact values the formula output is pinned against
_EXPECTED_EXPONENTS = {
    3: Fraction(8, 3),
    5: Fraction(38, 3),
    7: Fraction(164, 3),
    4: Fraction(299, 42),
    6: Fraction(610, 21),
    8: Fraction(1423, 12),
}


def _check(checks, name, fn):
    try:
        detail = fn()
        checks.append({"name": name, "passed": True, "detail": detail or "ok"})
    except Exception as exc:  # noqa: BLE001 - every failure must land in the report
        checks.append({"name": name, "passed": False, "detail": f"{type(exc).__name__}: {exc}"})


def run_audit(table, sieve, decomp_size=None):
    """Run every consistency check against an existing table and sieve."""
    checks = []
    warnings = []
    N = table.N
    rng = random.Random(0)

    def eigenform_normalized():
        assert float(table.lam[1]) == 1.0
        if table.exact is not None:
            assert table.exact[1] == 1
        return "lambda(1) = 1"

    def eigenform_deligne():
        if table.exact is None:
            raise AssertionError("no exact coefficients to check")
        qexp = QExpansion(coefficients=table.exact, N=N)
        count = deligne_check_exact(qexp, table.weight)
        return f"a(p)^2 <= 4 p^(k-1) for {count} primes (exact)"

    def eigenform_divisor_bound():
        cap = min(N, 100_000)
        qexp = QExpansion(coefficients=table.exact, N=N)
        divisor_bound_check_exact(qexp, table.weight, limit=cap)
        return f"|a(n)| <= d(n) n^((k-1)/2) for n <= {cap} (exact)"

    def eigenform_hecke():
        worst = 0.0
        for _ in range(1000):
            m = rng.randint(1, max(1, int(math.isqrt(N))))
            n = rng.randint(1, N // m)
            worst = max(worst, abs(hecke_residual(table, m, n)))
        assert worst < 1e-10, f"worst residual {worst}"
        return f"1000 random residuals, worst {worst:.2e}"

    def eigenform_rebuild():
        cap = min(N, 10_000)
        rebuilt = rebuild_lambda(table, cap)
        worst = float(np.max(np.abs(rebuilt - table.lam[: cap + 1])))
        assert worst < 1e-10, f"worst deviation {worst}"
        return f"prime-rebuilt lambda matches to {worst:.2e} for n <= {cap}"

    def cheb_identity():
        assert all(chebyshev.verify_cheb_identity(ell) for ell in range(1, 21))
        return "exact for ell = 1..20"

    def cheb_binomial_identity():
        for ell in range(1, 65):
            for n in range(1, ell // 2 + 1):
                lhs = (ell - n + 1) * chebyshev.binomial_delta(ell, n)
                rhs = (ell - 2 * n + 1) * math.comb(ell, n)
                assert lhs == rhs, (ell, n)
        return "rational form exact for ell <= 64"

    def cheb_dimension():
        for ell in range(1, 25):
            exp = chebyshev.chebyshev_expansion(ell)
            total_dim = sum(a * (ell - 2 * n + 1) for n, a in exp.coeffs.items())
            assert total_dim == 2**ell, ell
            assert sum(exp.coeffs.values()) == math.comb(ell, ell // 2), ell
        return "dimension 2^l and telescoped total match for ell <= 24"

    def fcrel():
        cap = min(N, 10_000)
        worst = 0.0
        for p in dirichlet._primes(cap):
            for ell in range(1, 13):
                worst = max(worst, abs(chebyshev.fcrel_residual(ell, table, int(p))))
        assert worst < 1e-8, f"worst residual {worst}"
        return f"worst residual {worst:.2e} over p <= {cap}, ell <= 12"

    def sym_prime_bound():
        for m in range(11):
            for theta in np.linspace(0.0, math.pi, 721):
                v = chebyshev.sym_power_prime(m, float(theta))
                assert abs(v) <= m + 1 + 1e-9, (m, theta, v)
        return "|sym prime value| <= m+1 on an angle grid, m <= 10"

    def newton_vs_brute():
        worst = 0.0
        for p in dirichlet._primes(min(N, 1000)):
            ang = table.satake(int(p))
            for ell in range(1, 7):
                ref = local_factors.product_expansion_h(ell, ang, 4)
                got = local_factors.newton_h(
                    local_factors.tensor_power_sums(ell, ang, 4), 4
                ).h
                for r in range(5):
                    err = abs(got[r] - ref[r]) / max(1.0, abs(ref[r]))
                    worst = max(worst, err)
        assert worst < 1e-9, f"worst relative error {worst}"
        return f"worst relative error {worst:.2e} (p <= 1000, ell <= 6, r <= 4)"

    def sym_convolution():
        cap = min(N, 10_000)
        worst_m1 = 0.0
        worst_m2 = 0.0
        worst_sf = 0.0
        for m in range(1, 5):
            vals = local_factors.multiplicative_values(
                lambda p, r: local_factors.sym_local(table, m, p, r).h[r], sieve, cap
            )
            if m == 1:
                # the first symmetric power is the eigenform series itself
                worst_m1 = float(np.max(np.abs(vals - table.lam[: cap + 1])))
                continue
            for n in range(1, cap + 1):
                if m != 2 and not sieve.flags[n]:
                    continue
                acc = 0.0
                d = 1
                while d**m <= n:
                    if n % d**m == 0:
                        acc += _lambda_power_arg(table, n // d**m, m)
                    d += 1
                err = abs(vals[n] - acc)
                if m == 2:
                    worst_m2 = max(worst_m2, err)
                if sieve.flags[n]:
                    worst_sf = max(worst_sf, err)
        assert worst_m1 < 1e-10, f"worst m=1 deviation {worst_m1}"
        assert worst_m2 < 1e-9, f"worst m=2 deviation {worst_m2}"
        assert worst_sf < 1e-9, f"worst squarefree deviation {worst_sf}"
        # the quoted convolution form is specific to m = 2 beyond squarefree
        # support; the m=3 counterexample at n=4 is reported as a warning below
        cf = local_factors.sym_local(table, 3, 2, 2).h[2]
        conv = _lambda_power_arg(table, 2, 6)
        gap = cf - conv
        u2 = chebyshev.sym_power_prime(2, table.satake(2))
        assert abs(gap - u2) < 1e-9
        warnings.append(
            "symmetric-power series identity: the audited source equates the m-th power "
            "series with zeta(ms) * sum lambda(n^m) n^(-s) for every m >= 2, but the "
            f"equality holds only for m = 2 (for m >= 3 only on squarefree n): at m=3, "
            f"n=4 the true coefficient {cf:.6f} differs from the convolution {conv:.6f} "
            f"by exactly the degree-2 prime value {u2:.6f}"
        )
        return (
            f"m=1 series equals the eigenform series to {worst_m1:.2e}; m=2 identity to "
            f"{worst_m2:.2e} for all n <= {cap}; squarefree-restricted identity to "
            f"{worst_sf:.2e} for m in 3..4; m!=2 full-range failure flagged"
        )

    def sym_divisor_bound():
        cap = min(N, 10_000)
        for m in range(1, 5):
            vals = local_factors.multiplicative_values(
                lambda p, r: local_factors.sym_local(table, m, p, r).h[r], sieve, cap
            )
            for n in range(2, cap + 1):
                dmn = 1.0
                for p, r in sieve.factorize(n):
                    dmn *= math.comb(r + m, m)
                assert abs(vals[n]) <= dmn + 1e-9, (m, n)
        return f"|sym coefficient| <= d_(m+1)(n) for n <= {cap}, m <= 4"

    def tensor_multiplicative():
        cap = min(N, 100_000)
        worst = 0.0
        for _ in range(200):
            m = rng.randint(2, 300)
            n = rng.randint(2, cap // m)
            if math.gcd(m, n) != 1:
                continue
            lhs = local_factors.tensor_coefficient(3, table, m * n, sieve)
            rhs = local_factors.tensor_coefficient(3, table, m, sieve) * local_factors.tensor_coefficient(
                3, table, n, sieve
            )
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        assert worst < 1e-9, f"worst relative deviation {worst}"
        return f"multiplicativity to {worst:.2e} on random coprime pairs"

    def decomposition():
        size = decomp_size or min(N, 20_000)
        worst = 0.0
        for ell in range(1, 5):
            for s in (2 + 0j, 2.5 + 0j, 3 + 1j):
                for kind in ("S", "T"):
                    rep = dirichlet.decomposition_report(ell, table, s, size, size, sieve, kind=kind)
                    assert rep["residual"] <= rep["combined_tail"], (ell, s, kind)
                    worst = max(worst, rep["residual"])
        return f"worst residual {worst:.2e} at N=P={size}, ell <= 4, both paths"

    def correction_vanishing():
        for p in dirichlet._primes(min(N, 1000)):
            for ell in range(1, 7):
                cf = dirichlet.correction_coeffs(ell, table, int(p), 4)
                assert cf.b[1] == 0.0, (ell, p)
        return "b(p) = 0 exactly (p <= 1000, ell <= 6)"

    def correction_crude_bound():
        for p in dirichlet._primes(min(N, 100)):
            for ell in range(1, 5):
                cf = dirichlet.correction_coeffs(ell, table, int(p), 4)
                for r in range(2, 5):
                    assert abs(cf.b[r]) <= (r + 1.0) ** (2**ell) + 1e-6, (ell, p, r)
        return "|b(p^r)| within the crude divisor bound (p <= 100, r <= 4, ell <= 4)"

    def pole_orders():
        for ell in range(2, 65, 2):
            assert dirichlet.pole_order(ell) == chebyshev.binomial_delta(ell, ell // 2)
        assert [dirichlet.pole_order(e) for e in (4, 6, 8)] == [2, 5, 14]
        return "pole order equals the zeta exponent for even ell <= 64; (4,6,8) -> (2,5,14)"

    def exponents_exact():
        for ell, want in _EXPECTED_EXPONENTS.items():
            got = exponents.alpha(ell) if ell % 2 else exponents.beta(ell)
            assert got == want, (ell, got, want)
        for ell in range(4, 21, 2):
            assert exponents.beta(ell) > 2
        for rep in exponents.audit_table():
            assert Fraction(1, 2) < rep.error_exponent < 1
        return "alpha/beta match hand-derived rationals; error exponents in (1/2, 1)"

    def delta_ranges():
        for ell in (3, 5, 7, 9):
            lo, hi = exponents.delta_range(ell)
            assert lo < hi
        return "nonempty for ell in {3, 5, 7, 9}"

    def exponent_quotes():
        table_rows = exponents.audit_table()
        for rep in table_rows:
            if rep.ell in (3, 5):
                assert rep.match is False, rep
                warnings.append(
                    f"ell={rep.ell}: computed error exponent {rep.error_exponent} "
                    f"differs from quoted {rep.quoted} (documented discrepancy)"
                )
            else:
                assert rep.match is True, rep
        return "quoted values match for ell in {4,6,7,8}; ell in {3,5} flagged"

    def full_sum_split():
        cap = min(N, 2000)
        for ell in range(1, 5):
            direct = moments.full_sum_direct(ell, table, sieve, cap)
            split = moments.full_sum(ell, table, sieve, cap)
            assert abs(direct - split) <= 1e-8 * max(1.0, abs(direct)), (ell, direct, split)
        return f"squarefull x squarefree split matches direct sums at X={cap}"

    def moment_shape():
        grid = moments.geometric_grid(10, min(N, 10_000))
        for ell in (2, 4):
            ms = moments.moment_sums(ell, table, sieve, grid)
            assert ms.S[0] >= 0 and np.all(np.diff(ms.S) >= 0), ell
            assert np.all(np.diff(ms.T) >= 0), ell
        one = moments.moment_sums(3, table, sieve, [1])
        assert one.S[0] == 1.0 and one.T[0] == 1.0
        return "even-l sums nondecreasing; S(1) = T(1) = 1"

    def sign_invariance():
        x = min(N // 2 - 1, 10_000)
        c3 = moments.count_sign_changes(3, table, sieve, x)
        c5 = moments.count_sign_changes(5, table, sieve, x)
        assert c3 == c5, (c3, c5)
        return f"count({x}..{2 * x}) = {c3} identical for ell = 3 and 5"

    def determinism():
        grid = moments.geometric_grid(10, min(N, 10_000))
        a = moments.moment_sums(3, table, sieve, grid)
        b = moments.moment_sums(3, table, sieve, grid)
        assert np.array_equal(a.S, b.S) and np.array_equal(a.T, b.T)
        return "repeated moment sums are bit-identical"

    _check(checks, "eigenform.normalized", eigenform_normalized)
    _check(checks, "eigenform.deligne_exact", eigenform_deligne)
    _check(checks, "eigenform.divisor_bound", eigenform_divisor_bound)
    _check(checks, "eigenform.hecke_residuals", eigenform_hecke)
    _check(checks, "eigenform.prime_rebuild", eigenform_rebuild)
    _check(checks, "decomp.basis_identity", cheb_identity)
    _check(checks, "decomp.binomial_identity", cheb_binomial_identity)
    _check(checks, "decomp.dimension_counts", cheb_dimension)
    _check(checks, "decomp.power_expansion", fcrel)
    _check(checks, "decomp.sym_prime_bound", sym_prime_bound)
    _check(checks, "local.newton_vs_product", newton_vs_brute)
    _check(checks, "local.sym_convolution", sym_convolution)
    _check(checks, "local.sym_divisor_bound", sym_divisor_bound)
    _check(checks, "local.tensor_multiplicative", tensor_multiplicative)
    _check(checks, "dirichlet.decomposition", decomposition)
    _check(checks, "dirichlet.correction_vanishing", correction_vanishing)
    _check(checks, "dirichlet.correction_bound", correction_crude_bound)
    _check(checks, "dirichlet.pole_orders", pole_orders)
    _check(checks, "exponents.exact_values", exponents_exact)
    _check(checks, "exponents.delta_ranges", delta_ranges)
    _check(checks, "exponents.quoted_table", exponent_quotes)
    _check(checks, "moments.full_sum_split", full_sum_split)
    _check(checks, "moments.prefix_shape", moment_shape)
    _check(checks, "moments.sign_invariance", sign_invariance)
    _check(checks, "moments.determinism", determinism)

    warnings.append(
        "basis parity: the audited source prints the single-variable expansion over "
        "indices of the same parity as l, which cannot reproduce an odd power; the "
        "(l-2n)-indexed form is implemented and verified instead"
    )
    warnings.append(
        "correction recurrence: the audited source states its linear local coefficient "
        "with the sign of the reciprocal series; with coefficients of the product itself "
        "the stated recurrence would not vanish at r=1. The ratio construction used here "
        "satisfies b(p)=0 identically"
    )

    return {
        "schema_version": SCHEMA_VERSION,
        "ok": all(c["passed"] for c in checks),
        "checks": checks,
        "warnings": warnings,
    }


def _lambda_power_arg(table, e, m):
    """lambda(e^m) from the factorization of e (e^m may exceed the table)."""
    if e == 1:
        return 1.0
    out = 1.0
    for p, r in sieves.factorize(e):
        out *= lambda_prime_power(float(table.lam[p]), m * r)
    return out
