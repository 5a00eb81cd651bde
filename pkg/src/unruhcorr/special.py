"""Complex log-gamma for the right half-plane (Lanczos approximation)."""

import numpy as np

from .errors import DomainError

# Lanczos coefficients for g = 7, n = 9 (Godfrey).
_G = 7.0
_COEF = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _lanczos(z):
    zm1 = z - 1.0
    acc = np.full_like(zm1, _COEF[0])
    for i in range(1, _COEF.size):
        acc = acc + _COEF[i] / (zm1 + i)
    t = zm1 + _G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(acc)


def complex_log_gamma(z):
    """Log-gamma on ``Re z > 0``, continuous with the real ``ln Gamma``.

    The approximation is applied at ``z + 1`` when ``Re z < 1`` and shifted
    back with ``ln Gamma(z) = ln Gamma(z + 1) - ln z``.

    Parameters
    ----------
    z : complex or array_like of complex
        Points with strictly positive real part.

    Returns
    -------
    complex or ndarray of complex
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(~(z.real > 0.0)):
        raise DomainError("complex_log_gamma requires Re z > 0")
    small = z.real < 1.0
    shifted = np.where(small, z + 1.0, z)
    out = _lanczos(shifted)
    out = np.where(small, out - np.log(z), out)
    return complex(out[0]) if scalar else out
