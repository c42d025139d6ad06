"""Ohmic bath with exponential cutoff: spectral densities and kernels.

Units are fixed by the qubit splitting: frequencies and temperatures are in
units of ``omega0``, times in ``1/omega0``, and ``k_B = hbar = 1``.

The bath correlation function is ``(D1(tau) - 1j * D2(tau)) / 2`` with the
noise kernel ``D1`` (even, temperature dependent) and the dissipation kernel
``D2`` (odd, temperature independent).
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .specfun import bose_occupation, csch, tetragamma, trigamma

log = logging.getLogger(__name__)

WEAK_COUPLING_LIMIT = 0.3

# Below this frequency J_eff is replaced by its omega -> 0 limit.
_JEFF_SERIES_SWITCH = 1e-8


@dataclass(frozen=True)
class BathParams:
    """Coupling strength, cutoff frequency and temperature of the bath.

    ``coupling`` may be zero (decoupled limit); ``cutoff`` and ``temp`` must
    be strictly positive.
    """

    coupling: float
    cutoff: float
    temp: float

    def __post_init__(self):
        for name in ("coupling", "cutoff", "temp"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.coupling < 0:
            raise DomainError("coupling must be non-negative")
        if self.cutoff <= 0 or self.temp <= 0:
            raise DomainError("cutoff and temp must be positive")
        if self.coupling > WEAK_COUPLING_LIMIT:
            log.warning("coupling %.3g is outside the weak-coupling regime",
                        self.coupling)


class KernelPair(NamedTuple):
    d1: np.ndarray
    d2: np.ndarray


def spectral_density(omega, p: BathParams):
    """``J(omega) = lambda * omega * exp(-omega / cutoff)``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("spectral density is defined for omega >= 0")
    return p.coupling * omega * np.exp(-omega / p.cutoff)


def effective_spectral_density(omega, p: BathParams):
    """``J(omega) * coth(omega / 2T)``, continuous at ``omega -> 0``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("effective spectral density needs omega > 0")
    small = omega < _JEFF_SERIES_SWITCH
    safe = np.where(small, 1.0, omega)
    out = spectral_density(safe, p) / np.tanh(safe / (2.0 * p.temp))
    return np.where(small, 2.0 * p.coupling * p.temp, out)


def noise_kernel(tau, p: BathParams):
    r"""Noise kernel in closed form.

    .. math::

        D_1(\tau) = 2\lambda\Big[\Omega^2\frac{(\Omega\tau)^2-1}
                    {(1+(\Omega\tau)^2)^2}
                    + 2T^2\,\mathrm{Re}\,\psi'\big(T(1+i\Omega\tau)/\Omega\big)
                    \Big]
    """
    tau = np.asarray(tau, dtype=float)
    lam, om, T = p.coupling, p.cutoff, p.temp
    x2 = (om * tau) ** 2
    z = T / om + 1j * (T * tau)
    thermal = 2.0 * T * T * np.real(trigamma(z))
    return 2.0 * lam * (om * om * (x2 - 1.0) / (1.0 + x2) ** 2 + thermal)


def dissipation_kernel(tau, p: BathParams):
    """``D2(tau) = 4 lambda cutoff^3 tau / (1 + (cutoff tau)^2)^2``."""
    tau = np.asarray(tau, dtype=float)
    om = p.cutoff
    return 4.0 * p.coupling * om ** 3 * tau / (1.0 + (om * tau) ** 2) ** 2


def kernel_time_derivatives(tau, p: BathParams) -> KernelPair:
    r"""Time derivatives ``(dD1/dtau, dD2/dtau)`` in closed form.

    .. math::

        \partial_\tau D_1 = 2\lambda\Big[\Omega^3\frac{2x(3-x^2)}{(1+x^2)^3}
            - 2T^3\,\mathrm{Im}\,\psi''\big(T/\Omega + iT\tau\big)\Big],
        \qquad x = \Omega\tau
    """
    tau = np.asarray(tau, dtype=float)
    lam, om, T = p.coupling, p.cutoff, p.temp
    x = om * tau
    x2 = x * x
    z = T / om + 1j * (T * tau)
    dd1 = 2.0 * lam * (om ** 3 * 2.0 * x * (3.0 - x2) / (1.0 + x2) ** 3
                       - 2.0 * T ** 3 * np.imag(tetragamma(z)))
    dd2 = 4.0 * lam * om ** 3 * (1.0 - 3.0 * x2) / (1.0 + x2) ** 3
    return KernelPair(dd1, dd2)


# --- quadrature oracles ------------------------------------------------------

def _omega_max(p: BathParams):
    # exp(-40) puts the cutoff tail far below the oracle tolerance
    return max(40.0 * p.cutoff, 20.0 * p.temp, 50.0)


def fourier_quadrature(func, tau, omega_max, kind="cos", epsabs=1e-13,
                       limit=200):
    """``int_0^omega_max func(w) trig(w tau) dw`` by panelled adaptive quadrature.

    Panels are aligned with the periods ``2 pi / |tau|`` of the oscillating
    factor; each panel is integrated with :func:`scipy.integrate.quad`.

    Raises
    ------
    ConvergenceError
        If any panel exhausts its subdivision budget.
    """
    trig = np.cos if kind == "cos" else np.sin
    tau = float(tau)
    if tau == 0.0:
        edges = np.linspace(0.0, omega_max, 9)
    else:
        period = 2.0 * math.pi / abs(tau)
        n = max(1, int(math.ceil(omega_max / period)))
        edges = np.minimum(np.arange(n + 1) * period, omega_max)
        edges[-1] = omega_max
    n_panels = len(edges) - 1
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        val, _err, info, *rest = integrate.quad(
            lambda w: func(w) * trig(w * tau), a, b,
            epsabs=epsabs / n_panels, epsrel=1e-13, limit=limit,
            full_output=1)
        if rest and info["last"] >= limit:
            raise ConvergenceError(
                f"quadrature on [{a:.4g}, {b:.4g}] did not converge: {rest[0]}")
        total += val
    return total


def noise_kernel_quadrature(tau, p: BathParams, epsabs=1e-10):
    """Oracle for :func:`noise_kernel`: ``2 int_0^inf J_eff cos(w tau) dw``."""
    def jeff(w):
        return float(effective_spectral_density(w, p))
    return 2.0 * fourier_quadrature(jeff, tau, _omega_max(p), "cos",
                                    epsabs=epsabs / 2)


def dissipation_kernel_quadrature(tau, p: BathParams, epsabs=1e-10):
    """Oracle for :func:`dissipation_kernel`: ``2 int_0^inf J sin(w tau) dw``."""
    def jw(w):
        return p.coupling * w * math.exp(-w / p.cutoff)
    return 2.0 * fourier_quadrature(jw, tau, _omega_max(p), "sin",
                                    epsabs=epsabs / 2)


# --- resonance and Markov rate -----------------------------------------------

def resonance_deviation(p: BathParams, omega0=1.0):
    r"""Slope :math:`\partial_\omega J_{eff}` at ``omega = omega0``.

    .. math::

        \lambda e^{-\omega/\Omega}\Big[(1-\omega/\Omega)\coth\frac{\omega}{2T}
        - \frac{\omega}{2T}\,\mathrm{csch}^2\frac{\omega}{2T}\Big]
    """
    if omega0 <= 0:
        raise DomainError("omega0 must be positive")
    x = omega0 / (2.0 * p.temp)
    return p.coupling * math.exp(-omega0 / p.cutoff) * (
        (1.0 - omega0 / p.cutoff) / math.tanh(x) - x * float(csch(x)) ** 2)


def resonance_curve(T_E, omega0=1.0):
    """Cutoff at which ``J_eff`` is flat at ``omega0`` for bath temperature ``T_E``.

    ``Omega_res = T_E / (T_E/omega0 - csch(omega0/T_E))``. Accepts arrays.
    """
    T_E = np.asarray(T_E, dtype=float)
    if np.any(T_E <= 0):
        raise DomainError("temperature must be positive")
    denom = T_E / omega0 - csch(omega0 / T_E)
    if np.any(denom <= 0):
        raise DomainError("resonance curve denominator is non-positive")
    out = T_E / denom
    return out[()] if out.ndim == 0 else out


def markov_rate(p: BathParams, omega0=1.0):
    """Born-Markov decay rate ``Gamma = 2 pi J(omega0)``."""
    if omega0 <= 0:
        raise DomainError("omega0 must be positive")
    return 2.0 * math.pi * float(spectral_density(omega0, p))


def markov_occupation(p: BathParams, omega0=1.0):
    """Bath occupation ``n(omega0)`` entering the Born-Markov rates."""
    return float(bose_occupation(omega0, p.temp))

