"""Fourier coefficient tables for level-1 Hecke eigenforms.

The built-in form is the weight-12 discriminant cusp form, constructed
exactly as q * prod(1-q^n)^24. Other one-dimensional level-1 weights
(16, 18, 20, 22, 26) can be supplied as prime-coefficient files and are
extended to all indices with the Hecke recursion.

Exact integer coefficients a(n) live alongside the double-precision
normalized values lambda(n) = a(n) / n^((k-1)/2). Tables are immutable
after construction and safe to share across threads.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import sieves
from .series import mul_series, pentagonal_series

MAX_TABLE_SIZE = 10_000_000

# |lambda(p)| may exceed 2 by at most this before the table is rejected
DELIGNE_TOL = 1e-12


class DeligneViolation(ValueError):
    """A prime value left the interval [-2, 2]: corrupted table or non-eigenform input."""


class ResourceLimitError(RuntimeError):
    """Requested table size exceeds the configured maximum."""


@dataclass
class QExpansion:
    """Exact integer coefficients a(1..N); coefficients[0] is unused (0)."""

    coefficients: list
    N: int

    def a(self, n):
        if not 1 <= n <= self.N:
            raise IndexError(f"n={n} outside table of size {self.N}")
        return self.coefficients[n]


@dataclass
class SatakeAngle:
    p: int
    theta: float


def build_delta_qexpansion(N):
    """Exact a(n) of the weight-12 form for n = 1..N.

    The eta-product factor prod(1-q^n) is the sparse pentagonal series; the
    24th power is taken by repeated squaring (E^2, E^4, E^8, E^16) and one
    cross product E^8 * E^16, all in exact integers.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N > MAX_TABLE_SIZE:
        raise ResourceLimitError(f"N={N} exceeds maximum {MAX_TABLE_SIZE}")
    e = pentagonal_series(N)
    e2 = mul_series(e, e, N)
    e4 = mul_series(e2, e2, N)
    e8 = mul_series(e4, e4, N)
    e16 = mul_series(e8, e8, N)
    e24 = mul_series(e8, e16, N)
    # Delta = q * E^24, so a(n) is the q^(n-1) coefficient of E^24
    coeffs = [0] + e24[:N]
    return QExpansion(coefficients=coeffs, N=N)


class EigenformTable:
    """Normalized coefficients lambda(n) plus the exact integers they came from.

    lam is a float64 array with lam[0] = 0 and lam[1] = 1. The table keeps a
    private memo dict for per-prime derived quantities (Satake angles, local
    Euler factor coefficients); inserts are idempotent, so concurrent reads
    and duplicate writes are harmless.
    """

    def __init__(self, weight, lam, exact=None):
        self.weight = weight
        self.lam = lam
        self.N = len(lam) - 1
        self.exact = exact
        self.cache_path = None  # set by the CLI loader when backed by a file
        self._satake = {}
        self._local = {}

    def satake(self, p):
        ang = self._satake.get(p)
        if ang is None:
            ang = satake_angle(float(self.lam[p]), p)
            self._satake[p] = ang
        return ang


def normalize(qexp, k):
    """Build an EigenformTable from exact coefficients of a weight-k eigenform."""
    if k % 2 != 0 or k < 12:
        raise ValueError(f"weight must be an even integer >= 12, got {k}")
    if qexp.a(1) != 1:
        raise ValueError(f"not normalized: a(1) = {qexp.a(1)}")
    n = np.arange(qexp.N + 1, dtype=np.float64)
    n[0] = 1.0  # avoid 0^negative; slot 0 is unused
    a = np.array(qexp.coefficients, dtype=np.float64)
    lam = a / n ** ((k - 1) / 2.0)
    lam[0] = 0.0
    return EigenformTable(weight=k, lam=lam, exact=qexp.coefficients)


def satake_angle(lambda_p, p=0):
    """theta in [0, pi] with 2 cos(theta) = lambda_p."""
    x = lambda_p / 2.0
    if abs(x) > 1.0 + DELIGNE_TOL / 2:
        raise DeligneViolation(f"|lambda({p})| = {abs(lambda_p)} > 2")
    x = min(1.0, max(-1.0, x))
    return SatakeAngle(p=p, theta=math.acos(x))


def lambda_prime_power(lambda_p, r):
    """lambda(p^r) from lambda(p) via the rank-one Hecke recursion.

    Equals sin((r+1)theta)/sin(theta) at 2cos(theta) = lambda_p; the
    recurrence form is stable through theta = 0 and pi.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return 1.0
    prev, cur = 1.0, float(lambda_p)
    for _ in range(r - 1):
        prev, cur = cur, lambda_p * cur - prev
    return cur


def hecke_residual(table, m, n):
    """lambda(m)lambda(n) - sum_{d | gcd(m,n)} lambda(mn/d^2); ~0 for a valid table."""
    if m < 1 or n < 1 or m * n > table.N:
        raise IndexError(f"need mn <= {table.N}, got m={m}, n={n}")
    lam = table.lam
    acc = 0.0
    g = math.gcd(m, n)
    for d in range(1, g + 1):
        if g % d == 0:
            acc += lam[(m * n) // (d * d)]
    return float(lam[m] * lam[n] - acc)


def rebuild_lambda(table, N, spf=None):
    """lambda(1..N) reconstructed from prime values only (recursion + multiplicativity)."""
    if N > table.N:
        raise IndexError(f"N={N} exceeds table size {table.N}")
    if spf is None:
        spf = sieves.spf_sieve(N)
    lam = table.lam
    out = np.zeros(N + 1)
    out[1] = 1.0
    pp = {}
    for n in range(2, N + 1):
        p = int(spf[n])
        if p == 0:
            p = n
        m, r = n, 0
        while m % p == 0:
            m //= p
            r += 1
        key = (p, r)
        v = pp.get(key)
        if v is None:
            v = lambda_prime_power(float(lam[p]), r)
            pp[key] = v
        out[n] = v * out[m]
    return out


def extend_from_primes(weight, N, prime_coeffs):
    """Exact a(1..N) from a map {p: a(p)} using the weight-k Hecke recursion.

    a(p^(r+1)) = a(p) a(p^r) - p^(k-1) a(p^(r-1)), then multiplicativity.
    """
    if N > MAX_TABLE_SIZE:
        raise ResourceLimitError(f"N={N} exceeds maximum {MAX_TABLE_SIZE}")
    spf = sieves.spf_sieve(N)
    coeffs = [0] * (N + 1)
    coeffs[1] = 1
    pk = weight - 1
    pp = {}

    def prime_power(p, r):
        key = (p, r)
        v = pp.get(key)
        if v is not None:
            return v
        if p not in prime_coeffs:
            raise KeyError(f"no coefficient supplied for prime {p} <= {N}")
        ap = prime_coeffs[p]
        prev, cur = 1, ap
        for _ in range(r - 1):
            prev, cur = cur, ap * cur - p**pk * prev
        pp[key] = cur
        return cur

    for n in range(2, N + 1):
        p = int(spf[n])
        if p == 0:
            p = n
        m, r = n, 0
        while m % p == 0:
            m //= p
            r += 1
        coeffs[n] = prime_power(p, r) * coeffs[m]
    return QExpansion(coefficients=coeffs, N=N)


def deligne_check_exact(qexp, weight, primes=None):
    """Verify a(p)^2 <= 4 p^(k-1) in exact integers for every prime p <= N.

    Returns the number of primes checked; raises DeligneViolation on failure.
    """
    if primes is None:
        primes = sieves.primes_up_to(qexp.N)
    k1 = weight - 1
    for p in primes:
        p = int(p)
        a = qexp.coefficients[p]
        if a * a > 4 * p**k1:
            raise DeligneViolation(f"a({p})^2 > 4*{p}^{k1}")
    return len(primes)


def divisor_bound_check_exact(qexp, weight, limit=None):
    """Verify a(n)^2 <= d(n)^2 n^(k-1) exactly for n <= limit (default: all of the table)."""
    n_max = qexp.N if limit is None else min(limit, qexp.N)
    d = sieves.divisor_counts(n_max)
    k1 = weight - 1
    for n in range(1, n_max + 1):
        a = qexp.coefficients[n]
        dn = int(d[n])
        if a * a > dn * dn * n**k1:
            raise DeligneViolation(f"|a({n})| exceeds d(n) n^((k-1)/2)")
    return n_max


CACHE_MAGIC = "LFOLD-COEFFS"
CACHE_VERSION = "v1"


def save_coefficients(path, weight, qexp):
    """Write the coefficient cache file; format round-trips bit-exactly."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{CACHE_MAGIC} {CACHE_VERSION} weight={weight} N={qexp.N}\n")
        coeffs = qexp.coefficients
        for n in range(1, qexp.N + 1):
            fh.write(f"{n} {coeffs[n]}\n")


def load_coefficients(path):
    """Read a coefficient cache file.

    Returns (weight, N, entries) where entries maps n -> a(n). A file holding
    only prime indices is a valid prime-coefficient file; use
    `table_from_cache` to assemble either kind into a full table.
    """
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != CACHE_MAGIC or header[1] != CACHE_VERSION:
            raise ValueError(f"bad cache header in {path}")
        weight = int(header[2].removeprefix("weight="))
        n_max = int(header[3].removeprefix("N="))
        entries = {}
        for line in fh:
            ns, a = line.split()
            entries[int(ns)] = int(a)
    return weight, n_max, entries


def table_from_cache(path, N=None):
    """Load a cache file into an EigenformTable.

    Full files are used as-is (optionally truncated to N); sparse files are
    treated as prime-coefficient input and extended by the Hecke recursion.
    """
    weight, n_max, entries = load_coefficients(path)
    if N is None:
        N = n_max
    if N > n_max:
        raise ValueError(f"cache holds N={n_max}, requested {N}")
    if len(entries) == n_max:
        coeffs = [0] * (N + 1)
        for n in range(1, N + 1):
            coeffs[n] = entries[n]
        qexp = QExpansion(coefficients=coeffs, N=N)
    else:
        qexp = extend_from_primes(weight, N, entries)
    return normalize(qexp, weight)
