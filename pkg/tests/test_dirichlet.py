import math

import numpy as np
import pytest

from lfold import (
    correction_coeffs,
    decomposition_report,
    decomposition_residual,
    l_ell_truncated,
    lS_truncated,
    lT_truncated,
    pole_order,
    u_convergence_probe,
)
from lfold.chebyshev import binomial_delta
from lfold.dirichlet import (
    divisor_tail_bound,
    l_ell_exponents,
    squarefree_tail_bound,
    sym_local_value,
    zeta_real,
)
from lfold.sieves import primes_up_to


class TestTruncatedSeries:
    def test_n_one_is_one(self, table10k, sieve10k):
        for ell in (1, 2, 5):
            ts = lS_truncated(ell, table10k, 2.0, 1, sieve10k)
            assert ts.value == 1.0 + 0.0j

    def test_direct_loop_oracle(self, table10k, sieve10k):
        ts = lS_truncated(3, table10k, 3.0, 400, sieve10k)
        acc = 0.0
        for n in range(1, 401):
            if sieve10k.is_squarefree(n):
                acc += float(table10k.lam[n]) ** 3 / n**3
        assert abs(ts.value - acc) < 1e-12

    def test_convergence_guard(self, table10k, sieve10k):
        with pytest.raises(ValueError):
            lS_truncated(2, table10k, 1.05, 100, sieve10k)

    def test_lT_equals_lS_at_double_ell(self, table10k, sieve10k):
        a = lT_truncated(1, table10k, 2.0, 5000, sieve10k)
        b = lS_truncated(2, table10k, 2.0, 5000, sieve10k)
        assert a.value == b.value and a.tail_bound == b.tail_bound

    def test_two_truncations_within_tail(self, table10k, sieve10k):
        coarse = lS_truncated(2, table10k, 2.0, 1000, sieve10k)
        fine = lS_truncated(2, table10k, 2.0, 10_000, sieve10k)
        assert abs(fine.value - coarse.value) <= coarse.tail_bound

    def test_tail_bound_nonnegative_and_decreasing(self):
        t1 = squarefree_tail_bound(4.0, 1_000, 2.0)
        t2 = squarefree_tail_bound(4.0, 100_000, 2.0)
        assert 0 <= t2 < t1


class TestZeta:
    def test_zeta_two(self):
        assert abs(zeta_real(2.0) - math.pi**2 / 6) < 1e-10

    def test_divisor_tail_decreases(self):
        assert divisor_tail_bound(2, 100_000, 2.0) < divisor_tail_bound(2, 1_000, 2.0)


class TestEulerProduct:
    def test_exponent_vectors(self):
        assert l_ell_exponents(2) == [(2, 1), (0, 1)]
        assert l_ell_exponents(4) == [(4, 1), (2, 3), (0, 2)]
        assert [e for _, e in l_ell_exponents(4)] == [
            binomial_delta(4, 0),
            binomial_delta(4, 1),
            binomial_delta(4, 2),
        ]

    def test_local_factor_ell_one_is_hecke(self, table10k):
        th = table10k.satake(2).theta
        t = 2.0 ** -2.0
        hecke = 1.0 / (1.0 - table10k.lam[2] * t + t * t)
        assert abs(sym_local_value(1, th, t) - hecke) < 1e-12

    def test_ell_one_matches_full_series(self, table10k):
        # partial Euler product vs full Dirichlet sum, both truncated at 1e4
        s = 2.0
        N = 10_000
        prod = l_ell_truncated(1, table10k, s, N)
        ns = np.arange(1, N + 1, dtype=np.float64)
        full = complex(np.sum(table10k.lam[1:] * ns**-s))
        bound = prod.tail_bound + divisor_tail_bound(2, N, s)
        assert abs(prod.value - full) <= bound

    def test_even_ell_includes_zeta_factor(self, table10k):
        # the l=2 product is (zeta local) * (sym^2 local) at each prime
        s = 2.5
        p = 3
        th = table10k.satake(p).theta
        t = complex(p) ** -s
        manual = sym_local_value(0, 0.0, t) * sym_local_value(2, th, t)
        combined = 1.0 + 0.0j
        for m, e in l_ell_exponents(2):
            combined *= sym_local_value(m, th, t) ** e
        assert abs(manual - combined) < 1e-12

    def test_guard(self, table10k):
        with pytest.raises(ValueError):
            l_ell_truncated(2, table10k, 1.0, 100)


class TestCorrectionFactor:
    def test_linear_coefficient_vanishes_exactly(self, table10k):
        for p in primes_up_to(1000):
            for ell in range(1, 7):
                cf = correction_coeffs(ell, table10k, int(p), 4)
                assert cf.b[1] == 0.0

    def test_quadratic_matches_reciprocal_recurrence(self, table10k):
        for p in (2, 3, 5, 7):
            for ell in range(1, 5):
                cf = correction_coeffs(ell, table10k, p, 4)
                lam_l = float(table10k.lam[p]) ** ell
                assert abs(cf.b[2] - (cf.a_recip[2] - lam_l**2)) < 1e-12
                for r in range(2, 5):
                    want = cf.a_recip[r] + cf.a_recip[r - 1] * lam_l
                    assert abs(cf.b[r] - want) < 1e-12

    def test_ell_one_quadratic_value(self, table10k):
        # ratio coefficient at p^2 is -lambda(p^2) = 1 - lambda(p)^2
        for p in (2, 3, 5):
            cf = correction_coeffs(1, table10k, p, 3)
            lam = float(table10k.lam[p])
            assert abs(cf.b[2] - (1.0 - lam * lam)) < 1e-12
            assert abs(cf.b[2] + table10k.lam[p * p]) < 1e-10

    def test_local_product_reproduces_squarefree_factor(self, table10k):
        # conv(a, b) must be 1, lambda^l, 0, 0, ... at every prime
        for p in (2, 3, 5, 11):
            for ell in range(1, 5):
                cf = correction_coeffs(ell, table10k, p, 6)
                conv = [
                    sum(cf.a[i] * cf.b[r - i] for i in range(r + 1)) for r in range(7)
                ]
                lam_l = float(table10k.lam[p]) ** ell
                assert abs(conv[0] - 1.0) < 1e-12
                assert abs(conv[1] - lam_l) < 1e-10
                for r in range(2, 7):
                    assert abs(conv[r]) < 1e-9

    def test_r_guard(self, table10k):
        with pytest.raises(ValueError):
            correction_coeffs(2, table10k, 2, 0)


class TestDecomposition:
    def test_ell_one_small(self, table10k, sieve10k):
        res = decomposition_residual(1, table10k, 2.0, 10_000, 10_000, sieve10k)
        assert res < 1e-6

    def test_ell_three_complexish(self, table10k, sieve10k):
        rep = decomposition_report(3, table10k, 2.5, 5000, 5000, sieve10k)
        assert rep["residual"] <= rep["combined_tail"]

    def test_squared_path(self, table10k, sieve10k):
        rep = decomposition_report(2, table10k, 2.0, 5000, 5000, sieve10k, kind="T")
        assert rep["residual"] <= rep["combined_tail"]
        assert rep["residual"] < 1e-8

    def test_guard_region(self, table10k, sieve10k):
        with pytest.raises(ValueError):
            decomposition_report(2, table10k, 1.2, 100, 100, sieve10k)

    def test_bad_kind(self, table10k, sieve10k):
        with pytest.raises(ValueError):
            decomposition_report(2, table10k, 2.0, 100, 100, sieve10k, kind="X")


class TestConvergenceProbe:
    def test_cauchy_at_low_sigma(self, table100k):
        probe = u_convergence_probe(3, table100k, 0.75, (1000, 10_000, 100_000))
        d1 = abs(probe[1] - probe[0])
        d2 = abs(probe[2] - probe[1])
        assert d2 < d1

    def test_tight_at_sigma_two(self, table10k):
        probe = u_convergence_probe(3, table10k, 2.0, (1000, 10_000))
        assert abs(probe[1] - probe[0]) < 1e-8

    def test_ell_one_finite(self, table10k):
        probe = u_convergence_probe(1, table10k, 0.75, (100, 1000))
        assert all(math.isfinite(v) for v in probe)

    def test_sigma_guard(self, table10k):
        with pytest.raises(ValueError):
            u_convergence_probe(2, table10k, 0.5, (100,))


class TestPoleOrder:
    def test_quoted_degrees(self):
        # pole orders 2, 5, 14 mean main-term degrees 1, 4, 13
        assert pole_order(4) == 2
        assert pole_order(6) == 5
        assert pole_order(8) == 14

    def test_matches_zeta_exponent(self):
        for ell in range(2, 65, 2):
            assert pole_order(ell) == binomial_delta(ell, ell // 2)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            pole_order(3)
