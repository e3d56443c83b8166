"""Squarefree moment sums, full-range sums, main-term fits, and sign scans.

Summation runs over fixed 2^16-element blocks: block subtotals come from
numpy's pairwise sum and are merged in index order with compensated
addition, so every prefix value is a pure function of its endpoint and
identical across reruns regardless of threading.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import sieves
from .dirichlet import pole_order
from .exponents import delta_range
from .local_factors import tensor_coefficient, tensor_table

BLOCK = 1 << 16

MAX_SIEVE_SIZE = 10_000_000


class SquarefreeSieve:
    """Squarefree indicator + smallest-prime-factor table up to N.

    decomposition(N) lazily builds, for every n, the leading prime power
    p^r || n and the cofactor n / p^r, which is what the multiplicative
    table builders consume.
    """

    def __init__(self, N):
        self.N = N
        self.flags = sieves.squarefree_flags(N)
        self.spf = sieves.spf_sieve(N)
        self._dec = None

    def is_squarefree(self, n):
        return bool(self.flags[n])

    def factorize(self, n):
        return sieves.factorize(n, self.spf)

    def decomposition(self, N=None):
        if N is None:
            N = self.N
        if N > self.N:
            raise IndexError(f"N={N} exceeds sieve size {self.N}")
        if self._dec is None:
            pk_p = np.zeros(self.N + 1, dtype=np.int64)
            pk_r = np.zeros(self.N + 1, dtype=np.int64)
            cof = np.zeros(self.N + 1, dtype=np.int64)
            spf = self.spf
            for n in range(2, self.N + 1):
                p = int(spf[n])
                if p == 0:
                    p = n
                m, r = n, 0
                while m % p == 0:
                    m //= p
                    r += 1
                pk_p[n], pk_r[n], cof[n] = p, r, m
            self._dec = (pk_p, pk_r, cof)
        return self._dec


def build_sieve(N):
    if N < 1:
        raise ValueError("N must be positive")
    if N > MAX_SIEVE_SIZE:
        raise RuntimeError(f"N={N} exceeds maximum sieve size {MAX_SIEVE_SIZE}")
    return SquarefreeSieve(N)


@dataclass
class MomentSeries:
    ell: int
    grid: np.ndarray
    S: np.ndarray
    T: np.ndarray
    A: Optional[np.ndarray] = None


@dataclass
class FitResult:
    ell: int
    degree: int
    coefficients: list
    residual_exponent: float
    r2: float


@dataclass
class SignChangeRecord:
    ell: int
    X: int
    delta: float
    window: tuple
    count: int
    first_pair: Optional[tuple]
    all_zero: bool = False


class _BlockSummer:
    """Deterministic prefix sums over values[1..N] with fixed-block merging."""

    def __init__(self, values):
        self.values = values
        n = len(values) - 1
        full = n // BLOCK
        self.block_sums = [
            float(np.sum(values[1 + j * BLOCK : 1 + (j + 1) * BLOCK])) for j in range(full)
        ]

    def prefix(self, x):
        """Sum of values[1..x]; compensated merge of whole blocks, then the tail."""
        full = x // BLOCK
        total = 0.0
        comp = 0.0
        for j in range(full):
            y = self.block_sums[j] - comp
            t = total + y
            comp = (t - total) - y
            total = t
        tail = float(np.sum(self.values[1 + full * BLOCK : x + 1]))
        return total + tail


def moment_sums(ell, table, sieve, grid, include_full=False):
    """Prefix sums S_l (squarefree l-th powers) and T_l (their squares) on a grid.

    include_full adds the unrestricted column A_l computed from the
    multiplicative coefficient table.
    """
    grid = np.asarray(grid, dtype=np.int64)
    x_max = int(grid.max())
    if x_max > table.N or x_max > sieve.N:
        raise IndexError(f"grid reaches {x_max}, table/sieve hold {table.N}/{sieve.N}")
    lam = table.lam[: x_max + 1]
    sf = sieve.flags[: x_max + 1]
    powered = np.where(sf, lam**ell, 0.0)
    s_summer = _BlockSummer(powered)
    t_summer = _BlockSummer(np.where(sf, lam ** (2 * ell), 0.0))
    s_vals = np.array([s_summer.prefix(int(x)) for x in grid])
    t_vals = np.array([t_summer.prefix(int(x)) for x in grid])
    a_vals = None
    if include_full:
        full = tensor_table(ell, table, sieve, x_max).values
        a_summer = _BlockSummer(full)
        a_vals = np.array([a_summer.prefix(int(x)) for x in grid])
    return MomentSeries(ell=ell, grid=grid, S=s_vals, T=t_vals, A=a_vals)


def _squarefull_numbers(sieve, X):
    """All squarefull Q <= X (every prime exponent >= 2), with their prime sets."""
    out = [(1, ())]
    for q in range(4, X + 1):
        fac = sieves.factorize(q, sieve.spf)
        if all(r >= 2 for _, r in fac):
            out.append((q, tuple(p for p, _ in fac)))
    return out


def full_sum(ell, table, sieve, X):
    """Unrestricted sum over n <= X via the squarefull x squarefree split."""
    if X > table.N or X > sieve.N:
        raise IndexError(f"X={X} exceeds table/sieve size")
    lam = table.lam
    flags = sieve.flags
    total = 0.0
    for q, q_primes in _squarefull_numbers(sieve, X):
        m = X // q
        idx = np.nonzero(flags[: m + 1])[0]
        for p in q_primes:
            idx = idx[idx % p != 0]
        inner = float(np.sum(lam[idx] ** ell))
        weight = tensor_coefficient(ell, table, q, sieve) if q > 1 else 1.0
        total += weight * inner
    return total


def full_sum_direct(ell, table, sieve, X):
    """Unrestricted sum over n <= X straight from the coefficient table."""
    if X > table.N or X > sieve.N:
        raise IndexError(f"X={X} exceeds table/sieve size")
    values = tensor_table(ell, table, sieve, X).values
    return _BlockSummer(values).prefix(X)


def fit_main_term(series):
    """Least-squares fit of S(X)/X against a polynomial in log X of the forced degree.

    The degree is one less than the pole order for the series' (even) l. The
    residual exponent is the log-log slope of |S - X P(log X)| over the upper
    half of the grid; it is reported, not certified.
    """
    ell = series.ell
    degree = pole_order(ell) - 1
    grid = np.asarray(series.grid, dtype=np.float64)
    if len(grid) < degree + 3:
        raise ValueError(f"need at least {degree + 3} grid points, got {len(grid)}")
    span = math.log10(float(grid.max()) / float(grid.min()))
    if span < 1.0:
        raise ValueError(f"grid spans {span:.2f} decades; need >= 1")
    logx = np.log(grid)
    y = series.S / grid
    design = np.vander(logx, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coef
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    resid = np.abs(series.S - grid * fitted)
    upper = slice(len(grid) // 2, None)
    mask = resid[upper] > 0
    if mask.sum() >= 2:
        slope = np.polyfit(logx[upper][mask], np.log(resid[upper][mask]), 1)[0]
    else:
        slope = float("-inf")
    return FitResult(
        ell=ell,
        degree=degree,
        coefficients=[float(c) for c in coef],
        residual_exponent=float(slope),
        r2=r2,
    )


def _scan_signs(ell, table, sieve, lo, hi):
    """Adjacent squarefree sign flips of lambda(n)^l in [lo, hi]; zeros skipped."""
    idx = np.arange(lo, hi + 1, dtype=np.int64)
    sf = idx[sieve.flags[lo : hi + 1]]
    if len(sf) == 0:
        return 0, None, True
    vals = table.lam[sf] ** ell
    signs = np.sign(vals)
    nz = signs != 0
    if not nz.any():
        return 0, None, True
    s = signs[nz]
    pos = sf[nz]
    flips = np.nonzero(s[1:] * s[:-1] < 0)[0]
    first = (int(pos[flips[0]]), int(pos[flips[0] + 1])) if len(flips) else None
    return int(len(flips)), first, False


def window_sign_scan(ell, table, sieve, X, delta):
    """Sign changes of the squarefree sequence in [X, X + X^(1-delta)]."""
    if ell % 2 == 0:
        raise ValueError("sign scans are defined for odd ell")
    if ell >= 3:  # no admissible window is known below ell = 3; scan anyway
        lo_f, hi_f = delta_range(ell)
        if not float(lo_f) <= delta < float(hi_f):
            warnings.warn(
                f"delta={delta} outside admissible [{float(lo_f):.4f}, {float(hi_f):.4f})"
                f" for ell={ell}",
                stacklevel=2,
            )
    h = X ** (1.0 - delta)
    lo, hi = int(X), int(math.floor(X + h))
    if hi > table.N or hi > sieve.N:
        raise IndexError(f"window reaches {hi}, table/sieve hold {table.N}/{sieve.N}")
    count, first, all_zero = _scan_signs(ell, table, sieve, lo, hi)
    return SignChangeRecord(
        ell=ell,
        X=int(X),
        delta=delta,
        window=(lo, hi),
        count=count,
        first_pair=first,
        all_zero=all_zero,
    )


def count_sign_changes(ell, table, sieve, X):
    """Number of adjacent squarefree sign flips in [X, 2X]."""
    if ell % 2 == 0:
        raise ValueError("sign scans are defined for odd ell")
    if 2 * X > table.N or 2 * X > sieve.N:
        raise IndexError(f"2X={2 * X} exceeds table/sieve size")
    count, _, _ = _scan_signs(ell, table, sieve, int(X), int(2 * X))
    return count


def geometric_grid(lo, hi, ratio=10 ** 0.125):
    """Increasing integer grid from lo to hi with roughly constant ratio."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    out = []
    x = float(lo)
    while x < hi:
        v = int(round(x))
        if not out or v > out[-1]:
            out.append(v)
        x *= ratio
    if out[-1] != hi:
        out.append(int(hi))
    return np.array(out, dtype=np.int64)
