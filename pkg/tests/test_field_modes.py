import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.special import loggamma

from unruhcorr import (
    ConvergenceFailure,
    DomainError,
    GaussianModeSpec,
    NonPhysical,
    OverlapSet,
    QuadratureConfig,
    minkowski_overlap,
    overlap_set_local,
    overlap_set_unruh,
    packet_normalization,
    rindler_packet_overlaps,
)
from unruhcorr.field_modes import (
    _endpoint_tail_coefficients,
    _mellin_integrals,
    rindler_conjugate_kernel,
    rindler_minkowski_kernel,
    unruh_noise,
)

SPEC = GaussianModeSpec()  # N=6, Lambda L=1/3
QUAD = QuadratureConfig()

# Frozen at rel_tol=1e-10 (N=6, Lambda L=1/3, aL=10, kL=5).
F_REF = 0.07118786968735964 + 0.09838230107417627j
G_REF = -0.012380094719863831 + 0.020860571256327697j
# Frozen at rel_tol=1e-10; cross-checked against a 1e6-point Simpson rule.
N_PHI_REF = 0.9962091511910549


def _trapezoid_grid(spec, n=1_000_001):
    l = np.linspace(spec.Lambda, spec.N + 26.0, n)
    w = np.full(n, l[1] - l[0])
    w[0] = w[-1] = 0.5 * (l[1] - l[0])
    return l, w


def _g(l, N):
    return (N + l) / (2 * np.sqrt(l * N * np.sqrt(2 * np.pi))) * np.exp(-((l - N) ** 2) / 4)


def _brute_overlaps(k, a, spec, n_phi, phase=True):
    """Trapezoid over Minkowski frequency of kernel times packet, independent of the engine."""
    l, w = _trapezoid_grid(spec)
    kappa = k / a
    kern = 1j / (2 * np.pi) * np.exp(0.5 * np.pi * kappa + loggamma(1 - 1j * kappa)) / np.sqrt(k * l)
    kern = kern * np.exp(1j * kappa * np.log(l / a))
    shift = np.exp(-1j * l / a) if phase else 1.0
    packet = n_phi * _g(l, spec.N)
    F = np.sum(w * kern * packet * shift)
    G = np.sum(w * np.exp(-np.pi * kappa) * kern * packet * np.conj(shift))
    return F, G


# ---------------------------------------------------------------------------
# closed-form pieces


def test_minkowski_overlap_peak():
    val = minkowski_overlap(6.0, SPEC)
    assert val == pytest.approx(12 / (2 * math.sqrt(36 * math.sqrt(2 * math.pi))), rel=1e-15)
    assert val == pytest.approx(0.6316, abs=1e-4)


def test_minkowski_overlap_tail():
    assert minkowski_overlap(32.0, SPEC) < 1e-18 * minkowski_overlap(6.0, SPEC)


def test_minkowski_overlap_dimensionless_reduction():
    # lengths in units of L: (u_l, phi)_L = sqrt(L) (u_{lL}, phi)_1
    for L, l in [(2.0, 3.0), (0.5, 10.0), (3.0, 1.7)]:
        lhs = minkowski_overlap(l, GaussianModeSpec(6.0, 1 / 3, L))
        rhs = math.sqrt(L) * minkowski_overlap(l * L, SPEC)
        assert lhs == pytest.approx(rhs, rel=1e-14)


def test_minkowski_overlap_domain():
    with pytest.raises(DomainError):
        minkowski_overlap(np.array([1.0, 0.0]), SPEC)


def test_kernel_identity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        k, l, a = rng.uniform(0.05, 20), rng.uniform(0.05, 30), rng.uniform(0.5, 70)
        lhs = rindler_conjugate_kernel(k, l, a)
        rhs = math.exp(-math.pi * k / a) * rindler_minkowski_kernel(k, l, a)
        assert abs(lhs - rhs) <= 1e-14 * abs(rhs)


def test_kernel_matches_scipy_gamma():
    k, l, a = 3.0, 5.5, 2.0
    kap = k / a
    ref = 1j / (2 * np.pi) * np.exp(np.pi * kap / 2 + loggamma(1 - 1j * kap)) * (l / a) ** (1j * kap) / np.sqrt(k * l)
    assert rindler_minkowski_kernel(k, l, a) == pytest.approx(ref, rel=1e-11)


# ---------------------------------------------------------------------------
# normalization


def test_normalization_frozen_and_simpson():
    n_phi = packet_normalization(SPEC)
    assert n_phi == pytest.approx(N_PHI_REF, rel=1e-9)
    l = np.linspace(SPEC.Lambda, SPEC.N + 26, 1_000_001)
    y = _g(l, SPEC.N) ** 2
    h = l[1] - l[0]
    simpson = h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())
    assert n_phi**2 * simpson == pytest.approx(1.0, rel=1e-8)


def test_normalization_monotone_in_cutoff():
    values = [packet_normalization(GaussianModeSpec(6.0, lam)) for lam in (1e-4, 0.05, 1 / 3, 1.0, 2.0)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_normalization_small_cutoff_self_consistent():
    spec = GaussianModeSpec(6.0, 1e-6)
    n_phi = packet_normalization(spec)
    # the region below the cutoff carries ~1e-9 of the weight: integrate it on a log grid
    l = np.geomspace(1e-6, 40.0, 400_001)
    assert n_phi**2 * np.trapezoid(_g(l, 6.0) ** 2, l) == pytest.approx(1.0, rel=1e-8)


def test_zero_cutoff_rejected():
    with pytest.raises(DomainError):
        packet_normalization(GaussianModeSpec(6.0, 0.0))


def test_spec_validation():
    with pytest.raises(DomainError):
        GaussianModeSpec(N=-1.0)
    with pytest.raises(DomainError):
        GaussianModeSpec(6.0, 7.0)
    with pytest.raises(DomainError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(DomainError):
        overlap_set_local(1.0, GaussianModeSpec(6.0, 1 / 3, 2.0))


# ---------------------------------------------------------------------------
# Rindler packet overlaps


def test_packet_overlaps_against_trapezoid_oracle():
    F, G = rindler_packet_overlaps(5.0, 10.0, SPEC)
    assert F == pytest.approx(F_REF, rel=1e-8)
    assert G == pytest.approx(G_REF, rel=1e-8)
    Fb, Gb = _brute_overlaps(5.0, 10.0, SPEC, N_PHI_REF)
    assert Fb == pytest.approx(F_REF, rel=1e-8)
    assert Gb == pytest.approx(G_REF, rel=1e-8)


def test_abs_gamma_factor_in_overlap():
    k, a = np.array([0.3, 2.0, 9.0]), 4.0
    F, _ = rindler_packet_overlaps(k, a, SPEC)
    kap = k / a
    i_minus, _ = _mellin_integrals(kap, a, SPEC, QUAD)
    n_phi = packet_normalization(SPEC)
    abs_gamma_sq = np.pi * kap / np.sinh(np.pi * kap)
    F2 = n_phi**2 / (4 * np.pi**2) * np.exp(np.pi * kap) * abs_gamma_sq / (a * kap) * np.abs(i_minus) ** 2
    np.testing.assert_allclose(np.abs(F) ** 2, F2, rtol=1e-10)


def test_large_acceleration_phase_limit():
    # |exp(-i l/a) - 1| <= l/a bounds the change from dropping the phase
    k = 2.0
    n_phi = packet_normalization(SPEC)
    l, w = _trapezoid_grid(SPEC, 200_001)
    h = np.abs(_g(l, SPEC.N)) / np.sqrt(l)
    for a in (50.0, 500.0, 5000.0):
        F, _ = rindler_packet_overlaps(k, a, SPEC)
        F0, _ = _brute_overlaps(k, a, SPEC, n_phi, phase=False)
        kap = k / a
        pre = n_phi / (2 * np.pi) * np.exp(np.pi * kap / 2 + loggamma(1 - 1j * kap).real) / np.sqrt(k)
        bound = abs(pre) * np.sum(w * h * l) / a
        assert abs(F - F0) <= 1.01 * bound
        assert abs(F - F0) / abs(F0) < 30.0 / a


def test_overlaps_shape_and_domain():
    F, G = rindler_packet_overlaps(np.array([[1.0, 2.0], [3.0, 4.0]]), 5.0, SPEC)
    assert F.shape == G.shape == (2, 2)
    with pytest.raises(DomainError):
        rindler_packet_overlaps(0.0, 5.0, SPEC)


def test_endpoint_tail_series():
    a = 5.0
    n_phi = packet_normalization(SPEC)
    coeffs = _endpoint_tail_coefficients(a, SPEC, n_phi)
    # past kappa ~ 100 the Gaussian bulk no longer leaks into the transform
    kap = np.array([120.0, 250.0, 500.0])
    F, _ = rindler_packet_overlaps(kap * a, a, SPEC)
    series = sum(c * kap ** (-m) for m, c in enumerate(coeffs))
    np.testing.assert_allclose(a * np.abs(F) ** 2, series, rtol=1e-6)


# ---------------------------------------------------------------------------
# overlap sets


GRID = [(a, N) for a in (1.0, 20.0, 60.0) for N in (4.0, 6.0, 8.0)]


@pytest.mark.parametrize("a,N", GRID)
def test_tolerance_halving(a, N):
    spec = GaussianModeSpec(N, 1 / 3)
    o1 = overlap_set_local(a, spec, QUAD)
    o2 = overlap_set_local(a, spec, replace(QUAD, rel_tol=QUAD.rel_tol / 2))
    bound = 10 * QUAD.rel_tol
    assert abs(o1.beta - o2.beta) <= bound * abs(o2.beta)
    assert abs(o1.n_U - o2.n_U) <= bound * o2.n_U
    assert abs(abs(o1.beta_prime) - abs(o2.beta_prime)) <= bound * abs(o2.beta_prime)


@pytest.mark.parametrize("a,N", [(1.0, 4.0), (20.0, 6.0), (60.0, 8.0)])
def test_truncation_soundness(a, N):
    spec = GaussianModeSpec(N, 1 / 3)
    base = overlap_set_local(a, spec, QUAD)
    wide = overlap_set_local(a, spec, replace(QUAD, gaussian_tail_halfwidth=2 * QUAD.gaussian_tail_halfwidth))
    longer = overlap_set_local(a, spec, QUAD, extra_outer_doublings=1)
    for other in (wide, longer):
        assert abs(base.beta - other.beta) < QUAD.rel_tol * abs(other.beta)
        assert abs(base.n_U - other.n_U) < QUAD.rel_tol * other.n_U
        assert abs(base.beta_prime - other.beta_prime) < QUAD.rel_tol * abs(other.beta_prime)


def test_beta_monotone_in_cutoff():
    for a in (2.0, 20.0):
        betas = [overlap_set_local(a, GaussianModeSpec(6.0, lam)).beta.real for lam in (0.1, 1 / 3, 0.6, 1.0, 2.0)]
        assert all(b <= a_ for a_, b in zip(betas, betas[1:]))


def test_local_set_invariants():
    ov = overlap_set_local(30.0, SPEC)
    assert ov.provenance == "local"
    assert ov.alpha == 1.0
    assert abs(ov.beta) <= 1.0 and abs(ov.beta_prime) <= 1.0
    assert ov.beta.imag == 0.0 and ov.beta.real > 0
    assert ov.n_U >= 0


def test_large_acceleration_trend():
    n35 = overlap_set_local(35.0, SPEC).n_U
    n70 = overlap_set_local(70.0, SPEC).n_U
    assert n70 / n35 == pytest.approx(2.0, rel=0.1)
    beta_sq = [abs(overlap_set_local(a, SPEC).beta) ** 2 for a in np.linspace(40, 70, 7)]
    assert (max(beta_sq) - min(beta_sq)) / np.mean(beta_sq) < 0.05


def test_small_acceleration_fails_loudly():
    with pytest.raises(ConvergenceFailure) as info:
        overlap_set_local(0.02, SPEC, replace(QUAD, max_subdivisions=2))
    assert "integral" in str(info.value)


def test_acceleration_domain():
    with pytest.raises(DomainError):
        overlap_set_local(0.0, SPEC)


# ---------------------------------------------------------------------------
# Unruh modes


def test_unruh_half():
    omega = math.log(2) / (2 * math.pi)
    ov = overlap_set_unruh(omega)
    assert ov.n_U == pytest.approx(1.0, rel=1e-14)
    assert ov.beta == pytest.approx(math.sqrt(2), rel=1e-14)
    assert ov.beta_prime == 0 and ov.alpha == 1


def test_unruh_inertial_limit():
    ov = overlap_set_unruh(50.0)
    assert (ov.alpha, ov.beta, ov.beta_prime) == (1, 1, 0)
    assert ov.n_U < 1e-100


@pytest.mark.parametrize("omega", [0.05, 0.2, 1.0])
def test_unruh_z_identity(omega):
    ov = overlap_set_unruh(omega)
    assert ov.n_U / (ov.n_U + 1) == pytest.approx(math.exp(-2 * math.pi * omega), rel=1e-12)
    assert abs(ov.beta) ** 2 - ov.n_U == pytest.approx(1.0, abs=1e-12 * (1 + ov.n_U))


def test_unruh_noise_matches_arctanh_form():
    omega = np.array([0.05, 0.3, 2.0])
    r = np.arctanh(np.exp(-np.pi * omega))
    np.testing.assert_allclose(unruh_noise(omega), np.sinh(r) ** 2, rtol=1e-12)


def test_unruh_domain():
    with pytest.raises(DomainError):
        overlap_set_unruh(0.0)


def test_provenance_gates():
    with pytest.raises(NonPhysical):
        OverlapSet(1, 1.2, 0, 0.1, "local")
    with pytest.raises(NonPhysical):
        OverlapSet(1, math.sqrt(2), 0.1, 1.0, "unruh")
    with pytest.raises(NonPhysical):
        OverlapSet(1, 1.2, 0, 1.0, "unruh")
    with pytest.raises(NonPhysical):
        OverlapSet(1, 0.5, 0, -0.1, "local")
    with pytest.raises(DomainError):
        OverlapSet(1, 0.5, 0, 0.1, "global")
    # |beta| > 1 is fine for Unruh sets
    OverlapSet(1, math.sqrt(3), 0, 2.0, "unruh")
