import math

import numpy as np
import pytest

from lfold import (
    binomial_delta,
    cheb_U,
    chebyshev_expansion,
    fcrel_residual,
    sym_power_prime,
    verify_cheb_identity,
)
from lfold.chebyshev import u_halfx_coeffs
from lfold.eigenform import EigenformTable
from lfold.sieves import primes_up_to


class TestBinomialDelta:
    def test_ell_three(self):
        assert binomial_delta(3, 0) == 1
        assert binomial_delta(3, 1) == 2

    def test_ell_four(self):
        assert binomial_delta(4, 2) == math.comb(4, 2) - math.comb(4, 1) == 2

    def test_ell_eight_middle(self):
        assert binomial_delta(8, 4) == 70 - 56 == 14

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            binomial_delta(4, 3)
        with pytest.raises(ValueError):
            binomial_delta(4, -1)

    def test_rational_identity_exact(self):
        # (l-n+1) (C(l,n)-C(l,n-1)) = (l-2n+1) C(l,n) for n >= 1
        for ell in range(1, 65):
            for n in range(1, ell // 2 + 1):
                assert (ell - n + 1) * binomial_delta(ell, n) == (ell - 2 * n + 1) * math.comb(
                    ell, n
                )

    def test_expansion_counts(self):
        # total degree 2^l; telescoped coefficient total C(l, floor(l/2))
        for ell in range(1, 25):
            exp = chebyshev_expansion(ell)
            assert sum(a * (ell - 2 * n + 1) for n, a in exp.coeffs.items()) == 2**ell
            assert sum(exp.coeffs.values()) == math.comb(ell, ell // 2)
            assert exp.coeffs[0] == 1
            assert all(a > 0 for a in exp.coeffs.values())


class TestChebU:
    def test_m_zero(self):
        assert cheb_U(0, 0.3) == 1.0

    def test_trig_oracle(self):
        th = 0.7
        assert abs(cheb_U(3, math.cos(th)) - math.sin(4 * th) / math.sin(th)) < 1e-12

    def test_limit_at_one(self):
        assert cheb_U(2, 1.0) == 3.0

    def test_halfx_coeffs(self):
        assert u_halfx_coeffs(0) == [1]
        assert u_halfx_coeffs(1) == [0, 1]
        assert u_halfx_coeffs(3) == [0, -2, 0, 1]  # U_3(x/2) = x^3 - 2x


class TestIdentity:
    def test_ell_one(self):
        assert verify_cheb_identity(1)

    def test_ell_three_by_hand(self):
        # x^3 = U_3(x/2) + 2 U_1(x/2) = (x^3 - 2x) + 2x
        assert verify_cheb_identity(3)

    def test_ell_twelve(self):
        assert verify_cheb_identity(12)

    def test_range_one_to_twenty(self):
        assert all(verify_cheb_identity(ell) for ell in range(1, 21))

    def test_bounds(self):
        with pytest.raises(ValueError):
            verify_cheb_identity(0)
        with pytest.raises(ValueError):
            verify_cheb_identity(65)


class TestSymPowerPrime:
    def test_m_zero(self):
        assert sym_power_prime(0, 1.1) == 1.0

    def test_m_one_is_lambda(self):
        for th in (0.3, 1.1, 2.9):
            assert abs(sym_power_prime(1, th) - 2.0 * math.cos(th)) < 1e-14

    def test_m_two_at_right_angle(self):
        assert abs(sym_power_prime(2, math.pi / 2) - (-1.0)) < 1e-12

    def test_degenerate_angles(self):
        for m in range(8):
            assert abs(sym_power_prime(m, 1e-12) - (m + 1)) < 1e-9
            assert abs(sym_power_prime(m, math.pi) - (m + 1) * (-1) ** m) < 1e-9

    def test_deligne_bound_on_grid(self):
        for m in range(11):
            for th in np.linspace(0.0, math.pi, 1441):
                assert abs(sym_power_prime(m, float(th))) <= m + 1 + 1e-9


def _fake_table(lam2):
    lam = np.zeros(11)
    lam[1] = 1.0
    lam[2] = lam2
    return EigenformTable(weight=12, lam=lam)


class TestFcrelResidual:
    def test_vanishing_lambda(self):
        # theta = pi/2 and odd power: both sides vanish by parity
        assert abs(fcrel_residual(3, _fake_table(0.0), 2)) < 1e-12

    def test_theta_zero_limit(self):
        # 2^2 - [1*3 + 1*1] = 0
        assert abs(fcrel_residual(2, _fake_table(2.0), 2)) < 1e-12

    def test_delta_p2_ell5(self, table10k):
        assert abs(fcrel_residual(5, table10k, 2)) < 1e-10

    def test_grid_small(self, table10k):
        for p in primes_up_to(500):
            for ell in range(1, 13):
                assert abs(fcrel_residual(ell, table10k, int(p))) < 1e-8

    def test_index_error(self, table10k):
        with pytest.raises(IndexError):
            fcrel_residual(3, table10k, 10_007)
