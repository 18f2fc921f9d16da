import numpy as np
import pytest

from mixorder.baselines import make_baseline
from mixorder.mixture import ComponentGroup, build_mixture, single_component


@pytest.fixture(scope="session")
def weibull2():
    return make_baseline("weibull", (2.0,))


@pytest.fixture(scope="session")
def expo():
    return make_baseline("exponential", ())


@pytest.fixture(scope="session")
def crossing_u(weibull2):
    return build_mixture(weibull2, (ComponentGroup(3, 0.17, 6.0, 2.0),
                                    ComponentGroup(2, 0.245, 8.0, 4.0)))


@pytest.fixture(scope="session")
def crossing_v(weibull2):
    return build_mixture(weibull2, (ComponentGroup(3, 0.17, 4.0, 2.0),
                                    ComponentGroup(2, 0.245, 12.0, 4.0)))


@pytest.fixture(scope="session")
def exp_degenerate(expo):
    return build_mixture(expo, (ComponentGroup(1, 0.5, 0.0, 1.0),
                                ComponentGroup(1, 0.5, 0.0, 1.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_proper_model(rng, family="exponential", params=()):
    """Random two-group model on an unbounded baseline."""
    base = make_baseline(family, params)
    n = rng.integers(1, 6, 2)
    r1 = rng.uniform(0.05, 0.95) / n[0]
    r2 = (1.0 - n[0] * r1) / n[1]
    loc = rng.uniform(0.0, 5.0, 2)
    scale = np.exp(rng.uniform(np.log(0.2), np.log(5.0), 2))
    return build_mixture(base, (ComponentGroup(int(n[0]), r1, loc[0], scale[0]),
                                ComponentGroup(int(n[1]), r2, loc[1], scale[1])))


def scaled_exponential(scale):
    return single_component(make_baseline("exponential", ()), 0.0, scale)


def fd_step(x, locations, rel=1e-5):
    """Central-difference step, relative in the local coordinate x - sigma."""
    d = np.min(np.abs(np.asarray(x)[:, None] - np.asarray(locations)[None, :]), axis=1)
    return rel * np.minimum(np.maximum(np.abs(x), 1.0), d)


ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail):
    """Store the one-line verdict for an acceptance criterion and echo it."""
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
