"""Prime / smallest-prime-factor / squarefree sieves, numpy-backed.

These are the shared factorization primitives; the moment machinery wraps
them in a `SquarefreeSieve` object (see `lfold.moments`).
"""

import math

import numpy as np


def primes_up_to(n):
    """All primes <= n as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def spf_sieve(n):
    """Smallest-prime-factor table; spf[m] = 0 marks m prime (or m < 2)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    return spf


def squarefree_flags(n):
    """Boolean array; flags[m] is True iff no p^2 divides m (flags[0] = False)."""
    flags = np.ones(n + 1, dtype=bool)
    flags[0] = False
    for p in primes_up_to(math.isqrt(n)):
        flags[p * p :: p * p] = False
    return flags


def divisor_counts(n):
    """d(m) for m = 0..n via harmonic slice updates."""
    d = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        d[i::i] += 1
    return d


def factorize(n, spf=None):
    """Factor n into [(p, r), ...] with p ascending, using an spf table if given."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            if p == 0:
                p = n
            r = 0
            while n % p == 0:
                n //= p
                r += 1
            out.append((p, r))
        return out
    # trial division fallback for values outside the table
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            r = 0
            while n % p == 0:
                n //= p
                r += 1
            out.append((p, r))
    if n > 1:
        out.append((n, 1))
    return out
