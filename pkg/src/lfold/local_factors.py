"""Dirichlet coefficients of l-fold product and symmetric-power Euler factors.

At a prime p with Satake angle theta, the l-fold product factor has the 2^l
unit parameters e^(i(l-2w)theta), each with multiplicity C(l,w). Its p^(-rs)
coefficients h_r are complete homogeneous symmetric functions of those
parameters, which we compute from the power sums (2cos(k theta))^l by
Newton's identity r h_r = sum_i p_i h_(r-i). The same machinery with the
Dirichlet-kernel power sums sin((m+1)k theta)/sin(k theta) produces the
degree-(m+1) symmetric-power factors. Extension from prime powers to all n
is by multiplicativity.

The prime-power construction for r >= 2 is the canonical reading of the
Euler product over parameter maps; it is this module's construction, not a
formula taken from elsewhere.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import sieves
from .chebyshev import sym_power_prime


@dataclass
class LocalSeries:
    """Coefficients h_0..h_R of one local Euler factor at p (h_0 = 1)."""

    p: int
    R: int
    h: list


@dataclass
class TensorCoefficientTable:
    ell: int
    N: int
    values: np.ndarray


def tensor_power_sums(ell, theta, K):
    """Power sums p_k = (2 cos(k theta))^l of the 2^l tensor parameters, k = 1..K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    th = theta.theta if hasattr(theta, "theta") else float(theta)
    return [(2.0 * math.cos(k * th)) ** ell for k in range(1, K + 1)]


def sym_power_sums(m, theta, K):
    """Power sums of the m-th symmetric power parameters: Dirichlet kernel at k*theta."""
    th = theta.theta if hasattr(theta, "theta") else float(theta)
    return [sym_power_prime(m, k * th) for k in range(1, K + 1)]


def newton_h(power_sums, R, p=0):
    """Complete homogeneous values h_0..h_R from power sums (r h_r = sum p_i h_(r-i))."""
    if len(power_sums) < R:
        raise ValueError(f"need {R} power sums, got {len(power_sums)}")
    h = [1.0] + [0.0] * R
    for r in range(1, R + 1):
        acc = 0.0
        for i in range(1, r + 1):
            acc += power_sums[i - 1] * h[r - i]
        h[r] = acc / r
    return LocalSeries(p=p, R=R, h=h)


def newton_e(power_sums, R):
    """Elementary symmetric values e_0..e_R (r e_r = sum (-1)^(i-1) p_i e_(r-i))."""
    if len(power_sums) < R:
        raise ValueError(f"need {R} power sums, got {len(power_sums)}")
    e = [1.0] + [0.0] * R
    for r in range(1, R + 1):
        acc = 0.0
        sign = 1.0
        for i in range(1, r + 1):
            acc += sign * power_sums[i - 1] * e[r - i]
            sign = -sign
        e[r] = acc / r
    return e


def product_expansion_h(ell, theta, R):
    """Brute-force oracle: expand prod_w (1 - e^(i(l-2w)theta) t)^(-C(l,w)) to O(t^(R+1)).

    Works directly on the parameter multiset with truncated complex series, so
    it shares nothing with the Newton recurrence it cross-checks.
    """
    th = theta.theta if hasattr(theta, "theta") else float(theta)
    coeffs = [1.0 + 0.0j] + [0.0j] * R
    for w in range(ell + 1):
        x = cmath.exp(1j * (ell - 2 * w) * th)
        c = math.comb(ell, w)
        factor = [math.comb(c - 1 + j, j) * x**j for j in range(R + 1)]
        nxt = [0.0j] * (R + 1)
        for i, a in enumerate(coeffs):
            for j in range(R + 1 - i):
                nxt[i + j] += a * factor[j]
        coeffs = nxt
    return [z.real for z in coeffs]


def _cached_series(table, kind, degree, p, R, builder):
    """Memoized per-(kind, degree, p) coefficient lists, extended on demand."""
    key = (kind, degree, p)
    cached = table._local.get(key)
    if cached is None or len(cached) <= R:
        cached = builder(R)
        table._local[key] = cached
    return cached[: R + 1]


def tensor_local(table, ell, p, R):
    """Local l-fold product factor coefficients at p, from the table's angle."""
    ang = table.satake(p)

    def build(r):
        return newton_h(tensor_power_sums(ell, ang, max(r, 1)), r).h

    return LocalSeries(p=p, R=R, h=_cached_series(table, "t", ell, p, R, build))


def sym_local(table, m, p, R):
    """Local m-th symmetric power factor coefficients at p."""
    ang = table.satake(p)

    def build(r):
        return newton_h(sym_power_sums(m, ang, max(r, 1)), r).h

    return LocalSeries(p=p, R=R, h=_cached_series(table, "s", m, p, R, build))


def tensor_coefficient(ell, table, n, sieve=None):
    """Coefficient of the l-fold product Dirichlet series at n (multiplicative)."""
    if not 1 <= n <= table.N:
        raise IndexError(f"n={n} outside table of size {table.N}")
    if n == 1:
        return 1.0
    spf = sieve.spf if sieve is not None else None
    out = 1.0
    for p, r in sieves.factorize(n, spf):
        out *= tensor_local(table, ell, p, r).h[r]
    return out


def sym_coefficient(m, table, n, sieve=None):
    """Coefficient of the m-th symmetric power Dirichlet series at n."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 1 <= n <= table.N:
        raise IndexError(f"n={n} outside table of size {table.N}")
    if n == 1:
        return 1.0
    spf = sieve.spf if sieve is not None else None
    out = 1.0
    for p, r in sieves.factorize(n, spf):
        out *= sym_local(table, m, p, r).h[r]
    return out


def multiplicative_values(local_fn, sieve, N):
    """Array v[0..N] of the multiplicative function with v(p^r) = local_fn(p, r).

    v[0] = 0, v[1] = 1. local_fn is called once per needed prime power.
    """
    pk_p, pk_r, cof = sieve.decomposition(N)
    out = np.zeros(N + 1)
    out[1] = 1.0
    memo = {}
    for n in range(2, N + 1):
        key = (int(pk_p[n]), int(pk_r[n]))
        v = memo.get(key)
        if v is None:
            v = local_fn(key[0], key[1])
            memo[key] = v
        out[n] = v * out[cof[n]]
    return out


def tensor_table(ell, table, sieve, N):
    """Tabulate the l-fold product coefficients for n <= N."""
    if N > table.N:
        raise IndexError(f"N={N} exceeds table size {table.N}")

    def local(p, r):
        return tensor_local(table, ell, p, r).h[r]

    return TensorCoefficientTable(ell=ell, N=N, values=multiplicative_values(local, sieve, N))
