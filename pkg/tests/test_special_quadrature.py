import math

import numpy as np
import pytest
from scipy.special import loggamma

from unruhcorr import ConvergenceFailure, DomainError, complex_log_gamma
from unruhcorr import quadrature


# ---------------------------------------------------------------------------
# complex log-gamma


def test_log_gamma_one():
    assert abs(complex_log_gamma(1.0)) < 1e-15


def test_log_gamma_half():
    assert complex_log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
    assert complex_log_gamma(0.5).real == pytest.approx(0.572365, abs=1e-6)


def test_abs_gamma_one_plus_i():
    val = abs(np.exp(complex_log_gamma(1 + 1j)))
    assert val == pytest.approx(0.521564, abs=1e-6)
    assert val**2 == pytest.approx(0.272029, abs=1e-6)


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_abs_gamma_identity(x):
    got = math.exp(2 * complex_log_gamma(1 + 1j * x).real)
    assert got == pytest.approx(math.pi * x / math.sinh(math.pi * x), rel=1e-10)


def test_log_gamma_matches_scipy():
    rng = np.random.default_rng(3)
    z = rng.uniform(0.01, 30, 400) + 1j * rng.uniform(-500, 500, 400)
    z = np.concatenate([z, 1 - 1j * np.geomspace(1e-4, 400, 200)])
    got = complex_log_gamma(z)
    ref = loggamma(z)
    # compare modulo 2 pi i (branches of the imaginary part)
    diff = np.exp(1j * (got.imag - ref.imag))
    assert np.max(np.abs(got.real - ref.real) / np.maximum(1, np.abs(ref))) < 1e-11
    assert np.max(np.abs(np.angle(diff))) < 1e-9


def test_log_gamma_is_continuous_along_line():
    # the prefactor uses Gamma(1 - i kappa) on a fine kappa grid
    z = 1 - 1j * np.linspace(0, 50, 20001)
    im = complex_log_gamma(z).imag
    assert np.max(np.abs(np.diff(im))) < 0.01


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        complex_log_gamma(0.0)
    with pytest.raises(DomainError):
        complex_log_gamma(np.array([1.0, -0.5 + 2j]))


# ---------------------------------------------------------------------------
# Gauss-Kronrod


def test_gk15_weights_sum():
    assert quadrature.KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert quadrature.GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("deg", [0, 5, 13, 22])
def test_gk15_polynomial_exactness(deg):
    # Kronrod 15 is exact to degree 22 on a single panel
    vals, _ = quadrature.gk15(lambda x: x[None, :] ** deg, np.array([-0.3]), np.array([1.7]))
    exact = (1.7 ** (deg + 1) - (-0.3) ** (deg + 1)) / (deg + 1)
    assert vals[0, 0] == pytest.approx(exact, rel=1e-13)


def test_integrate_oscillatory():
    f = lambda x: np.vstack([np.cos(40 * x) * np.exp(-x), np.exp(-x * x)])
    total, err = quadrature.integrate(f, np.array([0.0, 3.0]), lambda t: 1e-12 * np.abs(t) + 1e-15)
    ref0 = (math.exp(-3) * (40 * math.sin(120) - math.cos(120)) + 1) / (1 + 1600)
    ref1 = 0.5 * math.sqrt(math.pi) * math.erf(3)
    assert total[0] == pytest.approx(ref0, rel=1e-10)
    assert total[1] == pytest.approx(ref1, rel=1e-12)
    assert np.all(err <= 1e-12 * np.abs(total) + 1e-15)


def test_integrate_reports_failure():
    f = lambda x: np.sign(x - 0.123456789)[None, :]
    with pytest.raises(ConvergenceFailure) as info:
        quadrature.integrate(f, np.array([0.0, 1.0]), lambda t: np.full_like(t, 1e-30), max_passes=5, quantity="step")
    assert info.value.quantity == "step"
    assert info.value.achieved_error > 0
