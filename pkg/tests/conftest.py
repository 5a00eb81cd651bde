import math

import numpy as np
import pytest


def tmsv(s):
    """Two-mode squeezed vacuum in (x_A, p_A, x_B, p_B) ordering."""
    c, sh = math.cosh(2 * s), math.sinh(2 * s)
    sigma = np.diag([c, c, c, c])
    cross = np.array([[-sh, 0.0], [0.0, sh]])
    sigma[:2, 2:] = cross
    sigma[2:, :2] = cross
    return sigma


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _local(theta, r):
    return _rotation(theta) @ np.diag([math.exp(-r), math.exp(r)])


def random_physical_state(rng, nu_max=5.0, pure=False, nu=None):
    """``S diag(nu1, nu1, nu2, nu2) S^T`` for a random symplectic ``S``.

    ``S`` is a two-mode squeezer sandwiched between local rotations and
    single-mode squeezers, so every generated matrix is physical.
    """
    if nu is not None:
        nu1, nu2 = nu
    elif pure:
        nu1, nu2 = 1.0, 1.0
    else:
        nu1, nu2 = rng.uniform(1.0, nu_max, size=2)
    r = rng.uniform(0.0, 1.5)
    ch, sh = math.cosh(r), math.sinh(r)
    two_mode = np.array(
        [[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]]
    )
    left = np.zeros((4, 4))
    right = np.zeros((4, 4))
    left[:2, :2] = _local(rng.uniform(0, 2 * math.pi), rng.uniform(-0.7, 0.7))
    left[2:, 2:] = _local(rng.uniform(0, 2 * math.pi), rng.uniform(-0.7, 0.7))
    right[:2, :2] = _rotation(rng.uniform(0, 2 * math.pi))
    right[2:, 2:] = _rotation(rng.uniform(0, 2 * math.pi))
    S = left @ two_mode @ right
    sigma = S @ np.diag([nu1, nu1, nu2, nu2]) @ S.T
    return 0.5 * (sigma + sigma.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
