"""Two-mode Gaussian state algebra.

Covariance matrices use the quadrature ordering ``(x_A, p_A, x_B, p_B)`` and
the normalization in which the vacuum is the identity.  Logarithmic
negativity is reported in nats, Gaussian discord in bits.

The symplectic invariants are computed exactly from the stored floating
point entries (every double is a dyadic rational).  Near pure states the
closed-form eigenvalue and conditional-entropy expressions involve
cancellations of order ``entries**4``; evaluating them in exact arithmetic
and rounding once keeps the degenerate cases accurate to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import operator
from typing import NamedTuple

import numpy as np

from .errors import BranchInconsistency, DomainError, NonPhysical, SpectralMismatch

__all__ = [
    "SymplecticInvariants",
    "CorrelationMeasures",
    "as_covariance",
    "check_physical",
    "partial_transpose",
    "swap_modes",
    "local_invariants",
    "symplectic_eigenvalues",
    "williamson_spectrum",
    "log_negativity",
    "entropy_f",
    "gaussian_discord",
    "conditional_entropy_argument",
    "correlation_measures",
]

ALICE = "alice"
ROB = "rob"

# Symplectic form for two modes, ordering (x_A, p_A, x_B, p_B).
OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)

DISCRIMINANT_TOL = 1e-9
PHYSICAL_TOL = 1e-6
ORACLE_RTOL = 1e-8
ENTROPY_TOL = 1e-9
DISCORD_TOL = 1e-9
EN_FLOOR = 1e-12
BRANCH_EQUALITY_RTOL = 1e-12
BRANCH_AGREEMENT_TOL = 1e-9

_SWAP = np.array([2, 3, 0, 1])
_PT_SIGNS = np.array([1.0, 1.0, 1.0, -1.0])


class SymplecticInvariants(NamedTuple):
    """Local symplectic invariants of a two-mode covariance matrix.

    ``A``, ``B`` and ``C`` are the determinants of the Alice, Rob and cross
    blocks; ``det`` is the determinant of the full matrix.
    """

    A: float
    B: float
    C: float
    det: float


@dataclass(frozen=True)
class CorrelationMeasures:
    """Entanglement and discord of one two-mode state.

    E_N is in nats; D_AB (measurement on Rob) and D_BA (measurement on
    Alice) are in bits.
    """

    E_N: float
    D_AB: float
    D_BA: float
    nu_tilde_minus: float
    nu_minus: float
    nu_plus: float


def as_covariance(sigma) -> np.ndarray:
    """Return `sigma` as a float 4x4 array, checking shape and exact symmetry."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise NonPhysical(f"covariance matrix must be 4x4, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise NonPhysical("covariance matrix has non-finite entries")
    if not np.array_equal(sigma, sigma.T):
        raise NonPhysical("covariance matrix is not symmetric")
    return sigma


def partial_transpose(sigma) -> np.ndarray:
    """Partial transpose on Rob's mode (p_B -> -p_B)."""
    sigma = np.asarray(sigma, dtype=float)
    return sigma * np.outer(_PT_SIGNS, _PT_SIGNS)


def swap_modes(sigma) -> np.ndarray:
    """Exchange the two mode blocks (rows/columns 1,2 <-> 3,4)."""
    sigma = np.asarray(sigma, dtype=float)
    return sigma[np.ix_(_SWAP, _SWAP)]


_partial_transpose = partial_transpose


# ---------------------------------------------------------------------------
# exact invariants


class _Dyadic:
    """Exact ``n / 2**e``.

    Every double is dyadic and the invariants are polynomials in the
    entries, so ``+``, ``-`` and ``*`` stay exact without the gcd work of
    :class:`fractions.Fraction`.  ``float()`` rounds once, correctly.
    """

    __slots__ = ("n", "e")

    def __init__(self, n: int, e: int = 0):
        self.n = n
        self.e = e

    @staticmethod
    def _coerce(other):
        if isinstance(other, _Dyadic):
            return other
        if isinstance(other, int):
            return _Dyadic(other)
        return None

    def _aligned(self, other):
        e = max(self.e, other.e)
        return self.n << (e - self.e), other.n << (e - other.e), e

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) + other
        a, b, e = self._aligned(o)
        return _Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) - other
        a, b, e = self._aligned(o)
        return _Dyadic(a - b, e)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) * other
        return _Dyadic(self.n * o.n, self.e + o.e)

    __rmul__ = __mul__

    def __pow__(self, p: int):
        return _Dyadic(self.n**p, self.e * p)

    def __neg__(self):
        return _Dyadic(-self.n, self.e)

    def __abs__(self):
        return _Dyadic(abs(self.n), self.e)

    def __float__(self):
        # int / int is correctly rounded in CPython.
        return self.n / (1 << self.e)

    def _compare(self, other, op):
        o = self._coerce(other)
        if o is None:
            return op(float(self), other)
        a, b, _ = self._aligned(o)
        return op(a, b)

    def __lt__(self, other):
        return self._compare(other, operator.lt)

    def __le__(self, other):
        return self._compare(other, operator.le)

    def __gt__(self, other):
        return self._compare(other, operator.gt)

    def __ge__(self, other):
        return self._compare(other, operator.ge)

    def __eq__(self, other):
        return self._compare(other, operator.eq)

    def __ne__(self, other):
        return self._compare(other, operator.ne)

    __hash__ = None


class _Exact(NamedTuple):
    A: _Dyadic
    B: _Dyadic
    C: _Dyadic
    det: _Dyadic


def _exact_invariants(sigma: np.ndarray) -> _Exact:
    # Put every entry over the common power-of-two denominator, do the
    # polynomial arithmetic in Python integers, divide once at the end.
    ratios = [x.as_integer_ratio() for x in sigma.ravel().tolist()]
    shift = max(q.bit_length() - 1 for _, q in ratios)
    m = [p << (shift - (q.bit_length() - 1)) for p, q in ratios]

    def minor(r0, r1, c0, c1):
        return m[4 * r0 + c0] * m[4 * r1 + c1] - m[4 * r0 + c1] * m[4 * r1 + c0]

    a = minor(0, 1, 0, 1)
    b = minor(2, 3, 2, 3)
    c = minor(0, 1, 2, 3)
    # Laplace expansion along the first two rows.
    d = (
        a * b
        - minor(0, 1, 0, 2) * minor(2, 3, 1, 3)
        + minor(0, 1, 0, 3) * minor(2, 3, 1, 2)
        + minor(0, 1, 1, 2) * minor(2, 3, 0, 3)
        - minor(0, 1, 1, 3) * minor(2, 3, 0, 2)
        + c * minor(2, 3, 0, 1)
    )
    return _Exact(_Dyadic(a, 2 * shift), _Dyadic(b, 2 * shift), _Dyadic(c, 2 * shift), _Dyadic(d, 4 * shift))


def local_invariants(sigma) -> SymplecticInvariants:
    """Compute the block determinants ``A, B, C`` and ``det(sigma)``.

    Parameters
    ----------
    sigma : array_like, shape (4, 4)
        Symmetric covariance matrix.

    Returns
    -------
    SymplecticInvariants
        Each value is the correctly rounded float of the exact invariant of
        the stored entries.
    """
    ex = _exact_invariants(as_covariance(sigma))
    return SymplecticInvariants(float(ex.A), float(ex.B), float(ex.C), float(ex.det))


# ---------------------------------------------------------------------------
# symplectic spectrum


def williamson_spectrum(sigma) -> tuple[float, float]:
    """Symplectic eigenvalues from the Hermitian matrix ``S (i Omega) S``.

    ``S`` is the positive square root of `sigma`; the eigenvalues of the
    Hermitian matrix are ``+-nu_j``.  This is the eigen-solver route and is
    used as an independent check on the closed-form expression.
    """
    sigma = np.asarray(sigma, dtype=float)
    w, v = np.linalg.eigh(sigma)
    if w[0] <= 0.0:
        raise NonPhysical(f"covariance matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    root = (v * np.sqrt(w)) @ v.T
    herm = root @ (1j * OMEGA) @ root
    ev = np.linalg.eigvalsh(herm)
    return float(ev[2]), float(ev[3])


def _spectrum_from_invariants(ex: _Exact, partial: bool) -> tuple[float, float]:
    delta = ex.A + ex.B + (-2 if partial else 2) * ex.C
    disc = delta * delta - 4 * ex.det
    if disc < -DISCRIMINANT_TOL:
        raise NonPhysical(f"complex symplectic eigenvalues (discriminant {float(disc):.3e})")
    if delta <= 0 or ex.det <= 0:
        raise NonPhysical("covariance matrix has non-positive symplectic invariants")
    disc_f = max(float(disc), 0.0)
    nu_plus_sq = (float(delta) + math.sqrt(disc_f)) / 2.0
    # ν₋²·ν₊² = det; dividing avoids the cancellation in Δ - sqrt(disc).
    nu_minus_sq = float(ex.det) / nu_plus_sq
    return math.sqrt(nu_minus_sq), math.sqrt(nu_plus_sq)


def symplectic_eigenvalues(sigma, partial_transpose: bool = False, check: bool = True):
    """Symplectic eigenvalues ``(nu_minus, nu_plus)`` of a two-mode state.

    Uses ``nu_pm^2 = (Delta +- sqrt(Delta^2 - 4 det)) / 2`` with
    ``Delta = A + B + 2C`` (or ``A + B - 2C`` for the partial transpose).

    Parameters
    ----------
    sigma : array_like, shape (4, 4)
        Covariance matrix.
    partial_transpose : bool
        Return the spectrum of the partially transposed matrix instead.
    check : bool
        Cross-check against :func:`williamson_spectrum`; a relative
        disagreement above 1e-8 raises :class:`SpectralMismatch`.

    Raises
    ------
    NonPhysical
        If the discriminant is below -1e-9 (complex eigenvalues).
    """
    sigma = as_covariance(sigma)
    nu = _spectrum_from_invariants(_exact_invariants(sigma), partial_transpose)
    if check:
        target = _partial_transpose(sigma) if partial_transpose else sigma
        oracle = williamson_spectrum(target)
        for got, ref in zip(nu, oracle):
            if abs(got - ref) > ORACLE_RTOL * max(abs(ref), 1.0e-300):
                raise SpectralMismatch(
                    f"closed-form eigenvalues {nu} disagree with Williamson spectrum {oracle}"
                )
    return nu


def check_physical(sigma) -> np.ndarray:
    """Validate a covariance matrix and return it as an array.

    Requires exact symmetry, positive definiteness and ``nu_minus >= 1 - 1e-6``.
    """
    return _checked(sigma)[0]


def _checked(sigma):
    sigma = as_covariance(sigma)
    if np.linalg.eigvalsh(sigma)[0] <= 0.0:
        raise NonPhysical("covariance matrix is not positive definite")
    ex = _exact_invariants(sigma)
    nu_minus, _ = _spectrum_from_invariants(ex, False)
    if nu_minus < 1.0 - PHYSICAL_TOL:
        raise NonPhysical(f"uncertainty relation violated: nu_minus = {nu_minus!r} < 1")
    return sigma, ex


def log_negativity(sigma) -> float:
    """Logarithmic negativity ``max(0, -ln nu_tilde_minus)`` in nats."""
    sigma = check_physical(sigma)
    nu_t, _ = symplectic_eigenvalues(sigma, partial_transpose=True)
    return _log_negativity_from(nu_t)


def _log_negativity_from(nu_tilde_minus: float) -> float:
    en = -math.log(nu_tilde_minus)
    return en if en >= EN_FLOOR else 0.0


# ---------------------------------------------------------------------------
# entropies and discord


def entropy_f(x: float) -> float:
    """Von Neumann entropy (bits) of a single-mode thermal state with symplectic eigenvalue `x`.

    ``f(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2)``, with ``f(1) = 0``.
    Arguments in ``[1 - 1e-9, 1)`` are clamped to 1.
    """
    x = float(x)
    if not x >= 1.0 - ENTROPY_TOL:
        raise DomainError(f"entropy_f requires x >= 1, got {x!r}")
    if x <= 1.0:
        return 0.0
    plus = 0.5 * (x + 1.0)
    minus = 0.5 * (x - 1.0)
    return plus * math.log2(plus) - minus * math.log2(minus)


def _sqrt_nonneg(value: _Dyadic, what: str) -> float:
    v = float(value)
    if v < 0.0:
        if v < -DISCRIMINANT_TOL:
            raise NonPhysical(f"negative radicand in {what}: {v:.3e}")
        return 0.0
    return math.sqrt(v)


def _branch_one(ex: _Exact) -> float:
    A, B, C, det = ex
    bm1 = B - 1
    inner = C * C + bm1 * (det - A)
    num = float(2 * C * C + bm1 * (det - A)) + 2.0 * abs(float(C)) * _sqrt_nonneg(inner, "E (first branch)")
    return num / float(bm1 * bm1)


def _branch_two(ex: _Exact) -> float:
    A, B, C, det = ex
    c2 = C * C
    rad = c2 * c2 + (det - A * B) ** 2 - 2 * c2 * (A * B + det)
    return (float(A * B - c2 + det) - _sqrt_nonneg(rad, "E (second branch)")) / float(2 * B)


def conditional_entropy_argument(sigma) -> float:
    """Minimal ``E`` (squared symplectic eigenvalue of Alice's conditional state).

    Gaussian measurement is on Rob's mode (the second block).  The branch is
    chosen by ``(det - AB)^2 <= (1 + B) C^2 (A + det)``, evaluated exactly.
    Within 1e-12 (relative) of equality both branches are evaluated and must
    agree to 1e-9.
    """
    return _conditional_entropy_argument(_exact_invariants(as_covariance(sigma)))


def _conditional_entropy_argument(ex: _Exact) -> float:
    A, B, C, det = ex
    lhs = (det - A * B) ** 2
    rhs = (1 + B) * C * C * (A + det)
    first = lhs <= rhs and B != 1
    near = abs(lhs - rhs) <= BRANCH_EQUALITY_RTOL * max(abs(lhs), abs(rhs))
    if near and B != 1:
        e1, e2 = _branch_one(ex), _branch_two(ex)
        if abs(e1 - e2) > BRANCH_AGREEMENT_TOL * max(1.0, abs(e1)):
            raise BranchInconsistency(f"E branches disagree at boundary: {e1!r} vs {e2!r}")
        value = e1 if first else e2
    else:
        value = _branch_one(ex) if first else _branch_two(ex)
    return max(value, 1.0)


def _discord_from(ex: _Exact, nu_minus: float, nu_plus: float) -> float:
    e = _conditional_entropy_argument(ex)
    d = (
        entropy_f(math.sqrt(max(float(ex.B), 1.0)))
        - entropy_f(max(nu_minus, 1.0))
        - entropy_f(max(nu_plus, 1.0))
        + entropy_f(math.sqrt(e))
    )
    if d < 0.0:
        if d < -DISCORD_TOL:
            raise NonPhysical(f"negative Gaussian discord {d!r}")
        return 0.0
    return d


def gaussian_discord(sigma, measured_party: str = ROB) -> float:
    """Gaussian quantum discord in bits.

    Parameters
    ----------
    sigma : array_like, shape (4, 4)
        Physical covariance matrix, Alice's mode first.
    measured_party : {"rob", "alice"}
        Whose mode the optimal Gaussian measurement acts on.  ``"rob"``
        gives ``D(A:B)``; ``"alice"`` gives ``D(B:A)``, obtained by swapping
        the mode blocks.
    """
    sigma = check_physical(sigma)
    party = measured_party.lower()
    if party == ALICE:
        sigma = swap_modes(sigma)
    elif party != ROB:
        raise DomainError(f"measured_party must be 'alice' or 'rob', got {measured_party!r}")
    ex = _exact_invariants(sigma)
    nu_minus, nu_plus = _spectrum_from_invariants(ex, False)
    return _discord_from(ex, nu_minus, nu_plus)


def correlation_measures(sigma, check: bool = True) -> CorrelationMeasures:
    """Logarithmic negativity, both discords and the symplectic diagnostics."""
    sigma, ex = _checked(sigma)
    nu_minus, nu_plus = _spectrum_from_invariants(ex, False)
    nu_t_minus, nu_t_plus = _spectrum_from_invariants(ex, True)
    if check:
        for nu, oracle in (
            ((nu_minus, nu_plus), williamson_spectrum(sigma)),
            ((nu_t_minus, nu_t_plus), williamson_spectrum(partial_transpose(sigma))),
        ):
            for got, ref in zip(nu, oracle):
                if abs(got - ref) > ORACLE_RTOL * abs(ref):
                    raise SpectralMismatch(
                        f"closed-form eigenvalues {nu} disagree with Williamson spectrum {oracle}"
                    )
    d_ab = _discord_from(ex, nu_minus, nu_plus)
    # Block swap maps A <-> B and leaves C and det unchanged.
    swapped = _Exact(ex.B, ex.A, ex.C, ex.det)
    d_ba = _discord_from(swapped, nu_minus, nu_plus)
    return CorrelationMeasures(
        E_N=_log_negativity_from(nu_t_minus),
        D_AB=d_ab,
        D_BA=d_ba,
        nu_tilde_minus=nu_t_minus,
        nu_minus=nu_minus,
        nu_plus=nu_plus,
    )
