"""Exact integer q-series arithmetic.

A series is a plain list of Python ints; index i holds the coefficient of
q^i. Products are always exact. Large products go through Kronecker
substitution: both factors are evaluated at a power of two, multiplied as
single big integers in GMP (FFT-backed), and the truncated product is read
back limb by limb. Small ones fall back to schoolbook convolution.
"""

import gmpy2

# below this len(a)*len(b), plain convolution beats the pack/unpack overhead
_SCHOOLBOOK_LIMIT = 1 << 18


def pentagonal_series(n_terms):
    """Euler's product prod_{m>=1}(1 - q^m) to q^(n_terms-1).

    Only generalized pentagonal indices k(3k +- 1)/2 carry a nonzero
    coefficient, with sign (-1)^k.
    """
    c = [0] * n_terms
    c[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= n_terms and g2 >= n_terms:
            break
        s = -1 if k % 2 else 1
        if g1 < n_terms:
            c[g1] = s
        if g2 < n_terms:
            c[g2] = s
        k += 1
    return c


def mul_series(a, b, n_terms):
    """Exact product of two integer series, truncated to n_terms coefficients."""
    n_terms = min(n_terms, len(a) + len(b) - 1)
    if len(a) * len(b) <= _SCHOOLBOOK_LIMIT:
        return _mul_schoolbook(a, b, n_terms)
    return _mul_kronecker(a, b, n_terms)


def _mul_schoolbook(a, b, n_terms):
    out = [0] * n_terms
    for i, ai in enumerate(a):
        if ai == 0 or i >= n_terms:
            continue
        top = min(len(b), n_terms - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _pack(coeffs, limb_bytes):
    """Evaluate sum c_i * 2^(8*limb_bytes*i) exactly for signed c_i."""
    bits = 8 * limb_bytes
    base = 1 << bits
    mask = base - 1
    chunks = []
    borrow = 0
    for c in coeffs:
        t = c + borrow
        u = t & mask
        chunks.append(u.to_bytes(limb_bytes, "little"))
        borrow = (t - u) >> bits
    value = int.from_bytes(b"".join(chunks), "little")
    if borrow:
        value += borrow << (bits * len(coeffs))
    return value


def _unpack(value, limb_bytes, n_terms):
    """First n_terms signed coefficients of value = sum c_i 2^(L*i), |c_i| < 2^(L-1)."""
    bits = 8 * limb_bytes
    base = 1 << bits
    half = base >> 1
    # keep one spare limb so a trailing borrow has somewhere to land
    value &= (1 << (bits * (n_terms + 1))) - 1
    raw = int(value).to_bytes(limb_bytes * (n_terms + 1), "little")
    out = [0] * n_terms
    carry = 0
    for i in range(n_terms):
        u = int.from_bytes(raw[i * limb_bytes : (i + 1) * limb_bytes], "little") + carry
        if u >= half:
            out[i] = u - base
            carry = 1
        else:
            out[i] = u
            carry = 0
    return out


def _mul_kronecker(a, b, n_terms):
    max_a = max(map(abs, a))
    max_b = max(map(abs, b))
    if max_a == 0 or max_b == 0:
        return [0] * n_terms
    bits = (
        max_a.bit_length()
        + max_b.bit_length()
        + min(len(a), len(b)).bit_length()
        + 1
    )
    limb_bytes = bits // 8 + 1
    pa = gmpy2.mpz(_pack(a, limb_bytes))
    pb = gmpy2.mpz(_pack(b, limb_bytes))
    return _unpack(int(pa * pb), limb_bytes, n_terms)
