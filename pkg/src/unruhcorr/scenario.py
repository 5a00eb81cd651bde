"""Alice-Rob correlations of a two-mode squeezed state.

Alice is inertial and detects her mode perfectly; Rob accelerates and uses
the detector that maximizes the extractable entanglement.  Bob's mode is
either a localized Gaussian packet or a global Unruh mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import BracketError, ConvergenceFailure, DomainError
from .field_modes import (
    GaussianModeSpec,
    OverlapSet,
    QuadratureConfig,
    overlap_set_local,
    overlap_set_unruh,
)
from .gaussian_core import (
    CorrelationMeasures,
    check_physical,
    correlation_measures,
    symplectic_eigenvalues,
)

__all__ = [
    "UnruhMode",
    "ScenarioConfig",
    "CorrelationRecord",
    "SuddenDeathResult",
    "assemble_covariance",
    "correlations",
    "separability_residual",
    "sudden_death_acceleration",
    "residual_discord_limit",
    "z_from_omega",
    "omega_from_z",
    "unruh_overlaps_for_detector",
    "unruh_flatness_check",
    "evaluate_point",
]


@dataclass(frozen=True)
class UnruhMode:
    """Bob's mode is a global Unruh mode.

    With ``omega0`` set, sweeps run over Rob's acceleration at fixed Unruh
    frequency; with ``omega0=None`` the sweep variable is
    ``z = exp(-2 pi Omega)``.
    """

    omega0: Optional[float] = None

    def __post_init__(self):
        if self.omega0 is not None and not self.omega0 > 0:
            raise DomainError(f"omega0 must be positive, got {self.omega0!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    s: float
    mode: Union[GaussianModeSpec, UnruhMode] = field(default_factory=GaussianModeSpec)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if not self.s > 0:
            raise DomainError(f"squeezing s must be positive, got {self.s!r}")
        if not isinstance(self.mode, (GaussianModeSpec, UnruhMode)):
            raise DomainError(f"unsupported mode {self.mode!r}")

    @property
    def is_local(self) -> bool:
        return isinstance(self.mode, GaussianModeSpec)


@dataclass(frozen=True)
class CorrelationRecord:
    """One sweep point: ``x`` is ``aL`` for acceleration sweeps, ``z`` otherwise."""

    x: float
    overlaps: OverlapSet
    measures: CorrelationMeasures
    separability_residual: float


@dataclass(frozen=True)
class SuddenDeathResult:
    a_star: float
    nu_tilde_minus_minus_one: float
    separability_residual: float
    bracket: tuple
    iterations: int
    overlaps: OverlapSet = field(repr=False)


def assemble_covariance(s: float, ov: OverlapSet) -> np.ndarray:
    """Covariance matrix of the squeezed state as seen through the detectors.

    The general complex form is always assembled::

        1 + 2 n_U P_B
          + 2 sinh^2 s [[|alpha|^2 I, 0], [0, R]]
          + sinh 2s [[0, X], [X^T, 0]]

    with ``R = [[|beta + beta'*|^2, 2 Im(beta beta')], [2 Im(beta beta'), |beta - beta'*|^2]]``
    and ``X = [[-Re u, -Im v], [-Im u, Re v]]``, ``u = alpha (beta + beta'*)``,
    ``v = alpha (beta - beta'*)``.

    Raises
    ------
    NonPhysical
        If the result violates the uncertainty relation, which signals an
        inconsistent overlap set.
    """
    if not s >= 0:
        raise DomainError(f"squeezing s must be non-negative, got {s!r}")
    alpha = complex(ov.alpha)
    beta = complex(ov.beta)
    bp_conj = complex(ov.beta_prime).conjugate()
    sh2 = 2.0 * math.sinh(s) ** 2
    s2 = math.sinh(2.0 * s)
    plus = beta + bp_conj
    minus = beta - bp_conj
    u = alpha * plus
    v = alpha * minus
    off = 2.0 * (beta * complex(ov.beta_prime)).imag

    sigma = np.zeros((4, 4))
    sigma[0, 0] = sigma[1, 1] = 1.0 + sh2 * abs(alpha) ** 2
    sigma[2, 2] = 1.0 + 2.0 * ov.n_U + sh2 * abs(plus) ** 2
    sigma[3, 3] = 1.0 + 2.0 * ov.n_U + sh2 * abs(minus) ** 2
    sigma[2, 3] = sigma[3, 2] = sh2 * off
    cross = s2 * np.array([[-u.real, -v.imag], [-u.imag, v.real]])
    sigma[:2, 2:] = cross
    sigma[2:, :2] = cross.T
    return check_physical(sigma)


def correlations(s: float, ov: OverlapSet) -> CorrelationMeasures:
    """``E_N`` (nats), ``D(A:B)`` and ``D(B:A)`` (bits) plus eigenvalue diagnostics."""
    return correlation_measures(assemble_covariance(s, ov))


def separability_residual(ov: OverlapSet) -> float:
    """``|beta|^2 - n_U (1 - |beta'|^2 / (1 + n_U))``; zero on the separability boundary.

    For Unruh sets ``beta' = 0`` and ``beta^2 = 1 + n_U`` hold by
    construction, so the residual is the hyperbolic identity ``1``.
    """
    if ov.provenance == "unruh":
        return 1.0
    n = ov.n_U
    return abs(ov.beta) ** 2 - n * (1.0 - abs(ov.beta_prime) ** 2 / (1.0 + n))


def _local_pt_gap(a, spec, quad, s):
    ov = overlap_set_local(a, spec, quad)
    nu_t, _ = symplectic_eigenvalues(assemble_covariance(s, ov), partial_transpose=True)
    return nu_t - 1.0, ov


def sudden_death_acceleration(
    cfg: ScenarioConfig,
    bracket=(0.5, 70.0),
    xtol: float = 1e-3,
    ftol: float = 1e-7,
    max_iter: int = 200,
) -> SuddenDeathResult:
    """Acceleration ``a*L`` at which the partially transposed ``nu_tilde_minus`` reaches 1.

    Bisection in ``log a`` on ``g(a) = nu_tilde_minus(a) - 1``.  Stops once the
    bracket is narrower than ``xtol * a`` and ``|g| <= ftol`` at the midpoint.

    Raises
    ------
    BracketError
        Unless the state is entangled at ``bracket[0]`` and separable at
        ``bracket[1]``.
    ConvergenceFailure
        If ``max_iter`` bisections do not meet both tolerances.
    """
    if not cfg.is_local:
        raise DomainError("sudden death is only defined for localized modes")
    spec, quad, s = cfg.mode, cfg.quad, cfg.s
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise BracketError(f"invalid bracket {bracket!r}")
    g_lo, _ = _local_pt_gap(lo, spec, quad, s)
    g_hi, ov_hi = _local_pt_gap(hi, spec, quad, s)
    if not (g_lo < 0.0 <= g_hi):
        raise BracketError(
            f"bracket {bracket!r} does not straddle sudden death "
            f"(nu_tilde_minus - 1 = {g_lo:.3e} at {lo:g}, {g_hi:.3e} at {hi:g})"
        )
    for it in range(1, max_iter + 1):
        mid = math.sqrt(lo * hi)
        g_mid, ov_mid = _local_pt_gap(mid, spec, quad, s)
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= xtol * mid and abs(g_mid) <= ftol:
            return SuddenDeathResult(
                a_star=mid,
                nu_tilde_minus_minus_one=g_mid,
                separability_residual=separability_residual(ov_mid),
                bracket=(lo, hi),
                iterations=it,
                overlaps=ov_mid,
            )
    raise ConvergenceFailure(
        f"sudden-death bisection did not converge in {max_iter} steps (bracket {lo:g}..{hi:g})",
        quantity="sudden-death root",
        achieved_error=abs(g_mid),
    )


def residual_discord_limit(s: float) -> float:
    """Limit of ``D(B:A)`` for Unruh modes as ``Omega -> 0``: ``2 log2(coth s) sinh^2 s`` bits."""
    if not s > 0:
        raise DomainError(f"squeezing s must be positive, got {s!r}")
    log_coth = math.log1p(2.0 / math.expm1(2.0 * s))
    return 2.0 * log_coth / math.log(2.0) * math.sinh(s) ** 2


def z_from_omega(omega: float) -> float:
    """``z = exp(-2 pi Omega) = n_U / (n_U + 1)``."""
    if not omega > 0:
        raise DomainError(f"Omega must be positive, got {omega!r}")
    return math.exp(-2.0 * math.pi * omega)


def omega_from_z(z: float) -> float:
    """Inverse of :func:`z_from_omega` on ``0 < z < 1``."""
    if not 0.0 < z < 1.0:
        raise DomainError(f"z must lie in (0, 1), got {z!r}")
    return -math.log(z) / (2.0 * math.pi)


def unruh_overlaps_for_detector(a: float, omega0: float) -> OverlapSet:
    """Overlaps for the optimal Rindler detector, tuned to ``k = a * Omega0``."""
    if not a > 0:
        raise DomainError(f"acceleration must be positive, got {a!r}")
    k = a * omega0
    return overlap_set_unruh(k / a)


def unruh_flatness_check(s: float, omega0: float, a_grid) -> float:
    """Largest spread of ``E_N``, ``D(A:B)``, ``D(B:A)`` over a grid of accelerations.

    Each point uses the detector tuned to ``k = a * Omega0``; the overlaps
    depend only on ``k / a`` so the spread is zero up to rounding.
    """
    a_grid = list(a_grid)
    if not a_grid:
        raise DomainError("acceleration grid is empty")
    if not omega0 > 0:
        raise DomainError(f"Omega0 must be positive, got {omega0!r}")
    rows = np.array(
        [
            [m.E_N, m.D_AB, m.D_BA]
            for m in (correlations(s, unruh_overlaps_for_detector(a, omega0)) for a in a_grid)
        ]
    )
    return float(np.max(rows.max(axis=0) - rows.min(axis=0)))


def evaluate_point(cfg: ScenarioConfig, x: float) -> CorrelationRecord:
    """Compute one sweep record.

    ``x`` is ``aL`` for localized modes and for Unruh modes with a fixed
    ``omega0``; otherwise it is ``z``.
    """
    if cfg.is_local:
        ov = overlap_set_local(x, cfg.mode, cfg.quad)
    elif cfg.mode.omega0 is not None:
        ov = unruh_overlaps_for_detector(x, cfg.mode.omega0)
    else:
        ov = overlap_set_unruh(omega_from_z(x))
    return CorrelationRecord(
        x=float(x),
        overlaps=ov,
        measures=correlations(cfg.s, ov),
        separability_residual=separability_residual(ov),
    )
