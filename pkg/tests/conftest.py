import time

import pytest

from lfold import build_delta_qexpansion, build_sieve, normalize


@pytest.fixture(scope="session")
def table10k():
    return normalize(build_delta_qexpansion(10_000), 12)


@pytest.fixture(scope="session")
def sieve10k():
    return build_sieve(10_000)


@pytest.fixture(scope="session")
def table100k():
    return normalize(build_delta_qexpansion(100_000), 12)


@pytest.fixture(scope="session")
def sieve100k():
    return build_sieve(100_000)


@pytest.fixture(scope="session")
def delta_build_1m():
    """Full-size expansion plus its wall-clock build time (for the budget check)."""
    t0 = time.perf_counter()
    qexp = build_delta_qexpansion(1_000_000)
    return qexp, time.perf_counter() - t0


@pytest.fixture(scope="session")
def table1m(delta_build_1m):
    return normalize(delta_build_1m[0], 12)


@pytest.fixture(scope="session")
def sieve1m():
    return build_sieve(1_000_000)
