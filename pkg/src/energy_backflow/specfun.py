"""Special functions needed by the closed-form bath kernels.

All functions accept scalars or numpy arrays and broadcast.
"""
import numpy as np

from .errors import DomainError, PoleError

# Re z threshold above which the asymptotic series is used.
_SHIFT_THRESHOLD = 10.0

# B_{2k} for k = 1..7; the trigamma series runs through z**-15. Stopping at
# z**-11 leaves ~2e-14 absolute at Re z = 10, visible in the recurrence.
_BERNOULLI = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
              -691.0 / 2730.0, 7.0 / 6.0)


def _as_output(value, scalar):
    return value[()] if scalar else value


def trigamma(z):
    r"""Trigamma function :math:`\psi'(z)` for complex argument.

    The argument is shifted upward with :math:`\psi'(z) = \psi'(z+1) + 1/z^2`
    until ``Re z >= 10``, then the asymptotic expansion

    .. math::

        \psi'(z) \sim \frac{1}{z} + \frac{1}{2z^2}
                     + \sum_{k=1}^{7} \frac{B_{2k}}{z^{2k+1}}

    is summed. Accuracy is better than 1e-12 relative for ``Re z > 0``.

    Parameters
    ----------
    z : complex or array_like of complex

    Returns
    -------
    complex or ndarray of complex

    Raises
    ------
    PoleError
        If any element lies within machine tolerance of 0, -1, -2, ...
    """
    z, shape = _check_argument(z, "trigamma")
    acc = np.zeros_like(z)
    n_shift = np.ceil(_SHIFT_THRESHOLD - z.real).clip(min=0).astype(int)
    for k in range(int(n_shift.max(initial=0))):
        m = n_shift > k
        acc[m] += 1.0 / (z[m] * z[m])
        z[m] += 1.0

    w = 1.0 / z
    w2 = w * w
    series = np.zeros_like(z)
    for b in reversed(_BERNOULLI):
        series = (series + b) * w2
    # series now holds sum_k B_2k w^(2k); one more factor of w gives z^-(2k+1)
    value = (acc + w + 0.5 * w2 + series * w).reshape(shape)
    return _as_output(value, len(shape) == 0)


def tetragamma(z):
    r"""Tetragamma function :math:`\psi''(z)` for complex argument.

    Same scheme as :func:`trigamma`: shift with
    :math:`\psi''(z) = \psi''(z+1) - 2/z^3` until ``Re z >= 10``, then sum the
    term-by-term derivative of the trigamma expansion (through ``z**-16``).

    Raises
    ------
    PoleError
        If any element lies within machine tolerance of 0, -1, -2, ...
    """
    z, shape = _check_argument(z, "tetragamma")
    acc = np.zeros_like(z)
    n_shift = np.ceil(_SHIFT_THRESHOLD - z.real).clip(min=0).astype(int)
    for k in range(int(n_shift.max(initial=0))):
        m = n_shift > k
        acc[m] -= 2.0 / (z[m] * z[m] * z[m])
        z[m] += 1.0

    w = 1.0 / z
    w2 = w * w
    series = np.zeros_like(z)
    for k, b in reversed(list(enumerate(_BERNOULLI, start=1))):
        series = (series - (2 * k + 1) * b) * w2
    value = (acc - w2 - w2 * w + series * w2).reshape(shape)
    return _as_output(value, len(shape) == 0)


def _check_argument(z, name):
    z = np.asarray(z, dtype=np.complex128)
    shape = z.shape
    z = z.ravel().copy()
    if not np.all(np.isfinite(z)):
        raise DomainError(f"{name} argument must be finite")
    nearest = np.round(z.real)
    on_pole = (nearest <= 0) & (np.abs(z - nearest) <= 8 * np.finfo(float).eps
                                * np.maximum(1.0, np.abs(nearest)))
    if np.any(on_pole):
        raise PoleError(f"{name} pole at {z[on_pole][0]!r}")
    return z, shape


def bose_occupation(omega, T):
    """Bose-Einstein occupation ``1 / (exp(omega/T) - 1)``.

    Evaluated as ``exp(-x) / (1 - exp(-x))`` so that ``T -> 0`` underflows
    cleanly to zero instead of overflowing.
    """
    omega = np.asarray(omega, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(omega <= 0) or np.any(T <= 0):
        raise DomainError("bose_occupation needs omega > 0 and T > 0")
    x = omega / T
    out = np.exp(-x) / -np.expm1(-x)
    return _as_output(out, out.ndim == 0)


def csch(x):
    """Hyperbolic cosecant, overflow-safe for large ``|x|``."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise DomainError("csch is singular at x = 0")
    a = np.abs(x)
    out = np.sign(x) * 2.0 * np.exp(-a) / -np.expm1(-2.0 * a)
    return _as_output(out, out.ndim == 0)


def coth(x):
    """Hyperbolic cotangent (``1/tanh``); singular at zero."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise DomainError("coth is singular at x = 0")
    out = 1.0 / np.tanh(x)
    return _as_output(out, out.ndim == 0)
