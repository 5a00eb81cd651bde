"""Klein-Gordon overlaps between Bob's wave packet and Rob's Rindler modes.

All lengths are measured in units of the packet width ``L``: accelerations,
Minkowski frequencies ``l`` and Rindler frequencies ``k`` are the
dimensionless products ``aL``, ``lL`` and ``kL``.  The outer integrals use
``kappa = k / a`` so that the Bose factors depend on one variable only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import quadrature
from .errors import ConvergenceFailure, DomainError, NonPhysical
from .special import complex_log_gamma

__all__ = [
    "GaussianModeSpec",
    "OverlapSet",
    "QuadratureConfig",
    "minkowski_overlap",
    "packet_normalization",
    "rindler_minkowski_kernel",
    "rindler_conjugate_kernel",
    "rindler_packet_overlaps",
    "overlap_set_local",
    "overlap_set_unruh",
    "unruh_noise",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
# Panel width cap for the Gaussian envelope exp(-(l - N)^2 / 4) (std sqrt 2).
_ENVELOPE_PANEL = 1.0
OVERLAP_TOL = 1e-9
_KAPPA_CHUNK = 60
_TAIL_TERMS = 6


@dataclass(frozen=True)
class GaussianModeSpec:
    """Bob's localized Gaussian packet.

    Attributes
    ----------
    N : float
        Carrier frequency times ``L``.
    Lambda : float
        Infrared cutoff in units of ``1/L``; used both for the packet and
        as the lowest Rindler frequency of Rob's detector.
    L : float
        Packet width (the unit of length).
    """

    N: float = 6.0
    Lambda: float = 1.0 / 3.0
    L: float = 1.0

    def __post_init__(self):
        if not self.N > 0:
            raise DomainError(f"N must be positive, got {self.N!r}")
        if not self.Lambda >= 0:
            raise DomainError(f"Lambda must be non-negative, got {self.Lambda!r}")
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L!r}")
        if not self.Lambda < self.N:
            raise DomainError(f"cutoff Lambda*L={self.Lambda!r} must lie below the carrier N={self.N!r}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation windows for the nested overlap integrals."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    gaussian_tail_halfwidth: float = 13.0
    max_panel_fraction_of_oscillation: float = 0.25
    outer_tail_relative_cutoff: float = 1e-10
    max_subdivisions: int = 60

    def __post_init__(self):
        for name in (
            "rel_tol",
            "abs_tol",
            "gaussian_tail_halfwidth",
            "max_panel_fraction_of_oscillation",
            "outer_tail_relative_cutoff",
            "max_subdivisions",
        ):
            if not getattr(self, name) > 0:
                raise DomainError(f"QuadratureConfig.{name} must be positive")
        if not self.rel_tol < 1e-2:
            raise DomainError("QuadratureConfig.rel_tol must be below 1e-2")


@dataclass(frozen=True)
class OverlapSet:
    """Detector overlaps that parameterize the Alice-Rob covariance matrix.

    ``provenance`` selects which invariants apply: ``"local"`` sets come
    from a normalized detector projection and satisfy Cauchy-Schwarz;
    ``"unruh"`` sets are global-mode closed forms with ``beta**2 - n_U = 1``.
    """

    alpha: complex
    beta: complex
    beta_prime: complex
    n_U: float
    provenance: Literal["local", "unruh"] = "local"
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.n_U >= 0:
            raise NonPhysical(f"n_U must be non-negative, got {self.n_U!r}")
        if self.provenance == "local":
            for name in ("alpha", "beta", "beta_prime"):
                if abs(getattr(self, name)) > 1.0 + OVERLAP_TOL:
                    raise NonPhysical(f"|{name}| exceeds 1 for a local overlap set")
        elif self.provenance == "unruh":
            if abs(self.beta_prime) != 0.0:
                raise NonPhysical("Unruh overlap sets have beta_prime = 0")
            if abs(abs(self.beta) ** 2 - self.n_U - 1.0) > 1e-12 * (1.0 + self.n_U):
                raise NonPhysical("Unruh overlap sets satisfy beta^2 - n_U = 1")
        else:
            raise DomainError(f"unknown provenance {self.provenance!r}")


# ---------------------------------------------------------------------------
# closed-form kernels


def minkowski_overlap(l, spec: GaussianModeSpec):
    """Overlap ``(u_l, phi)`` of a Minkowski plane wave with the bare Gaussian.

    ``(N + l L) / (2 sqrt(l N sqrt(2 pi))) * exp(-(l L - N)^2 / 4)`` for ``l > 0``.
    """
    l = np.asarray(l, dtype=float)
    if np.any(~(l > 0)):
        raise DomainError("minkowski_overlap requires l > 0")
    N, L = spec.N, spec.L
    out = (N + l * L) / (2.0 * np.sqrt(l * N * _SQRT_2PI)) * np.exp(-0.25 * (l * L - N) ** 2)
    return float(out) if out.ndim == 0 else out


def rindler_minkowski_kernel(k, l, a):
    """``(w_Ik, u_l)``: region-I Rindler mode against a Minkowski plane wave."""
    k, l, a = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (k, l, a)))
    if np.any(~(k > 0)) or np.any(~(l > 0)) or np.any(~(a > 0)):
        raise DomainError("kernel requires k, l, a > 0")
    kappa = k / a
    log_mag = 0.5 * np.pi * kappa + complex_log_gamma(1.0 - 1j * kappa) + 1j * kappa * np.log(l / a)
    out = 1j / (2.0 * np.pi) * np.exp(log_mag) / np.sqrt(k * l)
    return complex(out) if out.ndim == 0 else out


def rindler_conjugate_kernel(k, l, a):
    """``(w_Ik, u_l^*) = exp(-pi k / a) (w_Ik, u_l)``."""
    k_arr = np.asarray(k, dtype=float)
    a_arr = np.asarray(a, dtype=float)
    return np.exp(-np.pi * k_arr / a_arr) * rindler_minkowski_kernel(k, l, a)


# ---------------------------------------------------------------------------
# packet construction


def _upper_l(spec: GaussianModeSpec, quad: QuadratureConfig) -> float:
    return spec.N + 2.0 * quad.gaussian_tail_halfwidth


def _check_cutoff(spec: GaussianModeSpec):
    if spec.L != 1.0:
        raise DomainError("the overlap engine works in units L = 1; rescale a, k and Lambda")
    if not spec.Lambda > 0:
        # (u_l, phi)^2 ~ 1/l near l = 0, so the packet norm diverges logarithmically.
        raise DomainError("Lambda must be positive: the packet norm diverges for Lambda = 0")


def _envelope_edges(lo, hi):
    n = max(1, int(math.ceil((hi - lo) / _ENVELOPE_PANEL)))
    return np.linspace(lo, hi, n + 1)


def packet_normalization(spec: GaussianModeSpec, quad: QuadratureConfig | None = None) -> float:
    """Factor ``N_phi`` giving Bob's cut-off packet unit Klein-Gordon norm.

    ``N_phi = [int_Lambda^inf (u_l, phi)^2 dl]^(-1/2)``.
    """
    quad = quad or QuadratureConfig()
    _check_cutoff(spec)
    edges = _envelope_edges(spec.Lambda, _upper_l(spec, quad))
    total, _ = quadrature.integrate(
        lambda x: minkowski_overlap(x, spec)[None, :] ** 2,
        edges,
        lambda t: np.maximum(quad.rel_tol * 0.1 * np.abs(t), quad.abs_tol),
        max_passes=quad.max_subdivisions,
        quantity="packet normalization",
    )
    return float(total[0] ** -0.5)


# ---------------------------------------------------------------------------
# Rindler projections


def _oscillation_edges(lo, hi, kappa_max, a, fraction):
    # Phase theta(l) = kappa ln(l/a) -+ l/a, |theta'| <= kappa/l + 1/a, which
    # decreases with l; evaluating the bound at a panel's left edge caps it.
    edges = [lo]
    x = lo
    two_pi_frac = 2.0 * np.pi * fraction
    while x < hi:
        step = min(_ENVELOPE_PANEL, two_pi_frac / (kappa_max / x + 1.0 / a))
        x = min(x + step, hi)
        edges.append(x)
    return np.array(edges)


def _mellin_integrals(kappa, a, spec, quad):
    """``I_-+(kappa) = int h(l) exp(i(kappa ln(l/a) -+ l/a)) dl`` with ``h = (u_l, phi) l^{-1/2}``."""
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    lo, hi = spec.Lambda, _upper_l(spec, quad)
    edges = _oscillation_edges(lo, hi, float(kappa.max()), a, quad.max_panel_fraction_of_oscillation)
    m = kappa.size

    def integrand(l):
        h = minkowski_overlap(l, spec) / np.sqrt(l)
        phase = np.exp(1j * np.outer(kappa, np.log(l / a)))
        shift = np.exp(-1j * l / a)
        base = phase * h
        return np.vstack([base * shift, base * np.conj(shift)])

    # Scale for the absolute floor: int |h| dl over the window.
    scale = _abs_h_integral(spec, quad)

    def tolerance(total):
        mag = np.abs(total)
        return np.maximum(0.1 * quad.rel_tol * mag, quad.abs_tol * scale)

    total, _ = quadrature.integrate(
        integrand,
        edges,
        tolerance,
        max_passes=quad.max_subdivisions,
        quantity=f"inner Minkowski-frequency integral (aL={a:g}, kappa in [{kappa.min():.4g}, {kappa.max():.4g}])",
    )
    return total[:m], total[m:]


def _abs_h_integral(spec, quad):
    lo, hi = spec.Lambda, _upper_l(spec, quad)
    x = np.linspace(lo, hi, 2001)
    y = minkowski_overlap(x, spec) / np.sqrt(x)
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def _prefactor(kappa, a, n_phi):
    # N_phi (i / 2 pi) exp(pi kappa / 2) Gamma(1 - i kappa) (a kappa)^(-1/2)
    return n_phi * 1j / (2.0 * np.pi) * np.exp(0.5 * np.pi * kappa + complex_log_gamma(1.0 - 1j * kappa)) / np.sqrt(a * kappa)


def _packet_overlaps_kappa(kappa, a, spec, quad, n_phi):
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    # Sorted chunks bound memory, and low-kappa chunks get coarser panels.
    order = np.argsort(kappa, kind="stable")
    i_minus = np.empty(kappa.size, dtype=complex)
    i_plus = np.empty(kappa.size, dtype=complex)
    for start in range(0, kappa.size, _KAPPA_CHUNK):
        idx = order[start : start + _KAPPA_CHUNK]
        i_minus[idx], i_plus[idx] = _mellin_integrals(kappa[idx], a, spec, quad)
    pre = _prefactor(kappa, a, n_phi)
    F = pre * i_minus
    G = pre * np.exp(-np.pi * kappa) * i_plus
    return F, G


def rindler_packet_overlaps(k, a, spec: GaussianModeSpec, quad: QuadratureConfig | None = None, n_phi=None):
    """Overlaps of the region-I Rindler mode ``w_Ik`` with the translated packet.

    Parameters
    ----------
    k : float or array_like
        Rindler frequency ``kL > 0``.
    a : float
        Proper acceleration ``aL > 0``.
    spec : GaussianModeSpec
    quad : QuadratureConfig, optional
    n_phi : float, optional
        Precomputed :func:`packet_normalization`.

    Returns
    -------
    F, G : complex or ndarray
        ``F = (w_Ik, phi_B(x - 1/a))`` and ``G = (w_Ik, phi_B(x - 1/a)^*)``.
    """
    quad = quad or QuadratureConfig()
    _check_cutoff(spec)
    k_arr = np.asarray(k, dtype=float)
    if np.any(~(k_arr > 0)) or not a > 0:
        raise DomainError("rindler_packet_overlaps requires k > 0 and a > 0")
    if n_phi is None:
        n_phi = packet_normalization(spec, quad)
    F, G = _packet_overlaps_kappa(k_arr.ravel() / a, a, spec, quad, n_phi)
    if k_arr.ndim == 0:
        return complex(F[0]), complex(G[0])
    return F.reshape(k_arr.shape), G.reshape(k_arr.shape)


# ---------------------------------------------------------------------------
# overlap sets


def unruh_noise(omega):
    """``sinh^2 r_Omega = 1 / (exp(2 pi Omega) - 1)`` without forming ``arctanh``."""
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(2.0 * np.pi * np.asarray(omega, dtype=float))


def _outer_integrand(a, spec, quad, n_phi):
    def integrand(kappa):
        F, G = _packet_overlaps_kappa(kappa, a, spec, quad, n_phi)
        w = a * np.abs(F) ** 2
        return np.vstack([w, w * unruh_noise(kappa), a * F * G])

    return integrand


def _endpoint_tail_coefficients(a, spec, n_phi, n_terms=_TAIL_TERMS):
    """Coefficients ``c_m`` with ``a |F|^2 ~ sum_m c_m kappa^-m`` for large ``kappa``.

    Past the packet window the only contribution to ``I_-`` comes from the
    hard cutoff at ``l = Lambda``.  In ``t = ln(l/a)`` the integrand is
    ``phi(t) exp(i kappa t)`` with ``phi = sqrt(l) (u_l, phi) exp(-i l/a)``,
    and repeated integration by parts gives
    ``I_- ~ exp(i kappa t0) sum_n (-1)^(n+1) phi^(n)(t0) / (i kappa)^(n+1)``.
    Using ``|prefactor|^2 = N_phi^2 (1 + n(kappa)) / (2 pi a)`` with the
    Bose term dropped (it is below ``e^-50`` here).
    """
    N, lam = spec.N, spec.Lambda
    Poly = np.polynomial.Polynomial
    l_poly = Poly([0.0, 1.0])
    # sqrt(l) (u_l, phi) = P(l) exp(E(l)), E = -(l - N)^2 / 4 - i l / a.
    p = Poly([N, 1.0]) / (2.0 * math.sqrt(N * _SQRT_2PI))
    e_prime = Poly([0.5 * N - 1j / a, -0.5])
    e_val = np.exp(-0.25 * (lam - N) ** 2 - 1j * lam / a)
    b = []
    for n in range(n_terms):
        b.append((-1) ** (n + 1) * p(lam) * e_val / 1j ** (n + 1))
        p = l_poly * (p.deriv() + p * e_prime)
    coeffs = np.zeros(2 * n_terms + 1, dtype=complex)
    for i, bi in enumerate(b):
        for j, bj in enumerate(b):
            coeffs[i + j + 2] += bi * np.conj(bj)
    return n_phi**2 * coeffs.real / (2.0 * np.pi)


def _tail_integral(coeffs, lo, hi=math.inf):
    m = np.arange(2, coeffs.size)
    upper = 0.0 if math.isinf(hi) else hi ** (1.0 - m)
    return float(np.sum(coeffs[2:] * (lo ** (1.0 - m) - upper) / (m - 1)))


def overlap_set_local(
    a: float, spec: GaussianModeSpec, quad: QuadratureConfig | None = None, extra_outer_doublings: int = 0
) -> OverlapSet:
    """Overlaps for Rob's optimal detector against Bob's localized packet.

    ``beta^2 = int |F|^2 dk``, ``n_U = beta^-2 int sinh^2(r_{k/a}) |F|^2 dk``
    and ``beta' = beta^-1 int F G dk``, all over ``k >= Lambda``.  Alice's
    detector matches her mode exactly, so ``alpha = 1``.

    The numeric ``kappa`` range grows by doubling until the pieces agree with
    the cutoff-endpoint asymptotics; the remaining algebraic tail of
    ``beta^2`` is added in closed form.  ``extra_outer_doublings`` extends
    the numeric range further before that (used to check truncation).

    Raises
    ------
    ConvergenceFailure
        If an inner or outer integral misses its tolerance; the message names
        the integral and the achieved error.
    """
    quad = quad or QuadratureConfig()
    _check_cutoff(spec)
    if not a > 0:
        raise DomainError(f"acceleration must be positive, got {a!r}")
    n_phi = packet_normalization(spec, quad)
    integrand = _outer_integrand(a, spec, quad, n_phi)

    def tolerance(total):
        mag = np.abs(total)
        # beta*beta' is measured against beta^2.
        mag[2] = max(mag[2], mag[0])
        return np.maximum(0.5 * quad.rel_tol * mag, quad.abs_tol)

    kappa0 = spec.Lambda / a
    # Stationary phase puts the bulk near kappa ~ l/a; the Mellin tail of the
    # envelope extends to kappa ~ O(few) for any a.
    bulk = max((spec.N + quad.gaussian_tail_halfwidth) / a, 8.0, 4.0 * kappa0)
    edges = kappa0 * 2.0 ** np.arange(0, int(math.ceil(math.log2(bulk / kappa0))) + 1)
    label = f"outer Rindler-frequency integrals (aL={a:g})"
    total, err = quadrature.integrate(integrand, edges, tolerance, quad.max_subdivisions, label)

    # Beyond the window beta^2 has an algebraic tail from the hard cutoff; the
    # other two integrands fall off like exp(-2 pi kappa).  Keep doubling until
    # numeric pieces match the endpoint series twice, then add its remainder.
    coeffs = _endpoint_tail_coefficients(a, spec, n_phi)
    quiet = 0
    upper = edges[-1]
    for _ in range(quad.max_subdivisions):
        piece, perr = quadrature.integrate(
            integrand, np.array([upper, 2.0 * upper]), lambda t: tolerance(total + t), quad.max_subdivisions, label
        )
        predicted = np.array([_tail_integral(coeffs, upper, 2.0 * upper), 0.0, 0.0])
        total = total + piece
        err = err + perr
        upper *= 2.0
        scale = np.abs(total)
        scale[2] = max(scale[2], scale[0])
        if np.all(np.abs(piece - predicted) <= np.maximum(quad.outer_tail_relative_cutoff * scale, quad.abs_tol)):
            quiet += 1
            if quiet == 2:
                break
        else:
            quiet = 0
    else:
        raise ConvergenceFailure(
            f"{label}: tail does not match the endpoint asymptotics by kappa = {upper:.3g}",
            quantity="outer tail",
            achieved_error=float(np.max(np.abs(piece - predicted) / np.maximum(scale, 1e-300))),
        )
    for _ in range(extra_outer_doublings):
        piece, perr = quadrature.integrate(
            integrand, np.array([upper, 2.0 * upper]), lambda t: tolerance(total + t), quad.max_subdivisions, label
        )
        total = total + piece
        err = err + perr
        upper *= 2.0
    remainder = _tail_integral(coeffs, upper)
    total[0] += remainder

    beta_sq = float(total[0].real)
    if not beta_sq > 0:
        raise ConvergenceFailure(f"{label}: non-positive beta^2 = {beta_sq!r}", quantity="beta^2")
    beta = math.sqrt(beta_sq)
    n_u = float(total[1].real) / beta_sq
    beta_prime = complex(total[2]) / beta
    return OverlapSet(
        alpha=1.0 + 0j,
        beta=complex(beta),
        beta_prime=beta_prime,
        n_U=n_u,
        provenance="local",
        diagnostics={
            "a": a,
            "n_phi": n_phi,
            "kappa_range": (kappa0, upper),
            "analytic_tail": remainder,
            "error_estimates": tuple(float(e) for e in err),
        },
    )


def overlap_set_unruh(omega0: float) -> OverlapSet:
    """Closed-form overlaps for an Unruh-mode state seen by the optimal Rindler detector.

    ``beta = cosh r``, ``n_U = sinh^2 r``, ``beta' = 0`` with
    ``tanh r = exp(-pi Omega0)``.
    """
    if not omega0 > 0:
        raise DomainError(f"Omega0 must be positive, got {omega0!r}")
    n_u = float(unruh_noise(omega0))
    return OverlapSet(
        alpha=1.0 + 0j,
        beta=complex(math.sqrt(1.0 + n_u)),
        beta_prime=0j,
        n_U=n_u,
        provenance="unruh",
    )
