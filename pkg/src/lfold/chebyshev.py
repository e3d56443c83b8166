"""Expansion of powers of a prime coefficient in the symmetric-power basis.

The workhorse identity writes x^l as an integer combination of the shifted
second-kind Chebyshev polynomials U_(l-2n)(x/2); evaluated at x = 2cos(theta)
the basis elements become the symmetric-power prime values
sin((m+1)theta)/sin(theta). All operations here are pure.
"""

import math
from dataclasses import dataclass

from .eigenform import SatakeAngle

# switch from the sine quotient to the recurrence when sin(theta) is this small
_DEGENERATE_SIN = 1e-8


def binomial_delta(ell, n):
    """C(l,n) - C(l,n-1), exactly (with C(l,-1) = 0); positive for 0 <= n <= l/2."""
    if ell < 1:
        raise ValueError("ell must be positive")
    if n < 0 or n > ell // 2:
        raise ValueError(f"n={n} outside 0..{ell // 2}")
    if n == 0:
        return 1
    return math.comb(ell, n) - math.comb(ell, n - 1)


@dataclass
class ChebyshevExpansion:
    """Integer coefficients of x^l in the U_(l-2n)(x/2) basis, keyed by n."""

    ell: int
    coeffs: dict


def chebyshev_expansion(ell):
    return ChebyshevExpansion(
        ell=ell, coeffs={n: binomial_delta(ell, n) for n in range(ell // 2 + 1)}
    )


def cheb_U(m, x):
    """Second-kind Chebyshev polynomial U_m(x) by its three-term recurrence."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 1.0
    prev, cur = 1.0, 2.0 * x
    for _ in range(m - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def u_halfx_coeffs(m):
    """Integer coefficient list (index = power of x) of U_m(x/2)."""
    prev = [1]
    if m == 0:
        return prev
    cur = [0, 1]
    for _ in range(m - 1):
        nxt = [0] + cur  # multiply by x
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def verify_cheb_identity(ell):
    """Check x^l = sum_n (C(l,n)-C(l,n-1)) U_(l-2n)(x/2) by exact polynomial algebra."""
    if not 1 <= ell <= 64:
        raise ValueError("ell must be in 1..64")
    total = [0] * (ell + 1)
    for n in range(ell // 2 + 1):
        a = binomial_delta(ell, n)
        for i, c in enumerate(u_halfx_coeffs(ell - 2 * n)):
            total[i] += a * c
    expected = [0] * (ell + 1)
    expected[ell] = 1
    return total == expected


def sym_power_prime(m, theta):
    """Prime value of the m-th symmetric power: sin((m+1)theta)/sin(theta).

    Accepts a SatakeAngle or a bare angle. Near theta = 0 or pi the quotient
    is evaluated by the Chebyshev recurrence in 2cos(theta) instead
    (removable singularity, limit (m+1)(+-1)^m).
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    th = theta.theta if isinstance(theta, SatakeAngle) else float(theta)
    if m == 0:
        return 1.0
    s = math.sin(th)
    if abs(s) < _DEGENERATE_SIN:
        return cheb_U(m, math.cos(th))
    return math.sin((m + 1) * th) / s


def fcrel_residual(ell, table, p):
    """lambda(p)^l minus its expansion over symmetric-power prime values."""
    if p > table.N:
        raise IndexError(f"p={p} outside table of size {table.N}")
    ang = table.satake(p)
    lhs = float(table.lam[p]) ** ell
    rhs = 0.0
    for n in range(ell // 2 + 1):
        rhs += binomial_delta(ell, n) * sym_power_prime(ell - 2 * n, ang)
    return lhs - rhs
