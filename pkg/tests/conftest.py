import numpy as np
import pytest

from hirotalab.core import SpectralData, SpectralDatum, SystemParams


@pytest.fixture(scope="session")
def default_params():
    return SystemParams(epsilon=1.0, k1=1.0, a2=1.0)


@pytest.fixture(scope="session")
def third_order_params():
    return SystemParams(epsilon=1.0, k1=1.0, a2=0.0)


@pytest.fixture(scope="session")
def default_datum():
    return SpectralDatum(zeta=0.3 + 0.2j, alpha=1.0, beta=1.0, gamma=2.0)


@pytest.fixture(scope="session")
def default_data(default_datum):
    return SpectralData((default_datum,))


def make_random_data(n: int, seed: int) -> SpectralData:
    rng = np.random.default_rng(seed)
    items = []
    while len(items) < n:
        zeta = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.15, 0.8))
        if any(zeta == d.zeta for d in items):
            continue
        vec = rng.normal(size=3) + 1j * rng.normal(size=3)
        items.append(SpectralDatum(zeta, *map(complex, vec)))
    return SpectralData(tuple(items))
