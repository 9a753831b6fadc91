import numpy as np
import pytest

from autoforma import AffineTau, Lattice, compute_B

ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# tau families exercised throughout the suite
TAUS = {
    "z": AffineTau(1, 0, 0),
    "zbar": AffineTau(0, 1, 0),
    "2z+zbar+1": AffineTau(2, 1, 1),
    "z+1/2": AffineTau(1, 0, 0.5),
    "2z+zbar": AffineTau(2, 1, 0),
    "zbar+i": AffineTau(0, 1, 1j),
}


@pytest.fixture
def square():
    return Lattice(1, 1j)


@pytest.fixture
def canonical():
    """tau = z + 1/2, nu = mu = pi/2 on Z + Zi."""
    tau = AffineTau(1, 0, 0.5)
    return tau, compute_B(tau, np.pi / 2, np.pi / 2), Lattice(1, 1j)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_points(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
