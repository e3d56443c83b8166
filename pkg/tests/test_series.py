import random

from lfold.series import _mul_kronecker, _mul_schoolbook, mul_series, pentagonal_series


def naive_euler_product(n_terms, factors):
    """prod_{m=1..factors} (1 - q^m), one sparse factor at a time."""
    poly = [0] * n_terms
    poly[0] = 1
    for m in range(1, factors + 1):
        for i in range(n_terms - 1, m - 1, -1):
            poly[i] -= poly[i - m]
    return poly


def test_pentagonal_matches_naive_product():
    n = 80
    assert pentagonal_series(n) == naive_euler_product(n, n)


def test_pentagonal_known_prefix():
    # 1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...
    c = pentagonal_series(16)
    assert c == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1]


def test_kronecker_matches_schoolbook_signed():
    rng = random.Random(7)
    for _ in range(5):
        la, lb = rng.randint(1, 40), rng.randint(1, 40)
        a = [rng.randint(-(2**80), 2**80) for _ in range(la)]
        b = [rng.randint(-(2**80), 2**80) for _ in range(lb)]
        n = rng.randint(1, la + lb)
        assert _mul_kronecker(a, b, n) == _mul_schoolbook(a, b, n)


def test_mul_series_truncates():
    a = [1, 1, 1]
    b = [1, -1]
    assert mul_series(a, b, 2) == [1, 0]
    assert mul_series(a, b, 10) == [1, 0, 0, -1]


def test_zero_factor():
    assert _mul_kronecker([0, 0], [1, 2], 3) == [0, 0, 0]
