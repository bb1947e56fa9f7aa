import numpy as np
import pytest

from panfuse.dataset import SceneSpec, make_wald_triple
from panfuse.raster import Raster


@pytest.fixture(scope="session")
def triple():
    """Seeded default triple: 128x128, 4 bands, seed 42, ratio 2."""
    return make_wald_triple(SceneSpec(), ratio=2)


@pytest.fixture(scope="session")
def triple3():
    return make_wald_triple(SceneSpec(bands=3), ratio=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_raster(rng, bands, h, w, lo=0.0, hi=255.0):
    return Raster(rng.uniform(lo, hi, size=(bands, h, w)))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
