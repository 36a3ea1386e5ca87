import numpy as np
import pytest

from gwnet import MeasureNetwork

# PASS/FAIL lines recorded by the end-to-end guarantee tests; replayed
# after the run so they stay visible without -s.
REPORT_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if REPORT_LINES:
        terminalreporter.section("guarantee report")
        for line in REPORT_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def one_node():
    """One-node network with weight 1."""
    return MeasureNetwork(np.array([[1.0]]), np.array([1.0]))


@pytest.fixture
def two_swap():
    """Two-node network with weights [[0,1],[1,0]] and uniform measure."""
    return MeasureNetwork(np.array([[0.0, 1.0], [1.0, 0.0]]),
                          np.array([0.5, 0.5]))


def random_network(rng, n, asym=True, uniform_mu=True):
    omega = rng.standard_normal((n, n))
    if not asym:
        omega = (omega + omega.T) / 2
    if uniform_mu:
        mu = np.full(n, 1.0 / n)
    else:
        mu = rng.random(n) + 0.2
        mu /= mu.sum()
    return MeasureNetwork(omega, mu)


def psd_network(rng, n, uniform_mu=True):
    """Symmetric positive semidefinite weights; the squared distortion is
    then concave over the coupling polytope, so its minimum sits at a
    polytope vertex and the vertex sweep in oracles.py is a global oracle.
    """
    a = rng.standard_normal((n, n))
    net = random_network(rng, n, uniform_mu=uniform_mu)
    return MeasureNetwork(a @ a.T, net.mu)
