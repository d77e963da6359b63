import pytest

from qsign.certify import cached_expansion


@pytest.fixture(scope="session")
def series_800():
    """Exact expansions of all six registered products to order 800."""
    return {name: cached_expansion(name, 800) for name in ("A", "B", "C", "D", "c", "d")}


@pytest.fixture(scope="session")
def series_a_1000():
    return cached_expansion("A", 1000)


@pytest.fixture(scope="session")
def series_b_1000():
    return cached_expansion("B", 1000)


@pytest.fixture(scope="session")
def series_d_19501():
    return cached_expansion("D", 19501)
