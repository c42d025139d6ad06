"""Second-order time-convolutionless dynamics of the spin-boson qubit.

The reduced state is propagated with fixed-step classical RK4, driven by the
running integrals of the generator entries (the "coefficients"):

=========  ====================================================
a_zz       ``-2 int_0^t D1(s) cos(w0 s) ds``
b_z        ``-2 int_0^t D2(s) sin(w0 s) ds``
a_minus    ``(a_zz + b_z) / 2``
a_plus     ``a_zz - a_minus``
A          ``int_0^t D1(s) exp(-i w0 s) ds`` (coherence block)
w_plus     ``int_0^t [D1'(s) sin(w0 s) - D2'(s) cos(w0 s)] ds``
w_minus    ``int_0^t [-D1'(s) sin(w0 s) - D2'(s) cos(w0 s)] ds``
=========  ====================================================

with ``d rho00/dt = a_zz rho00 - a_minus`` and
``d rho01/dt = i w0 rho01 - A rho01 + conj(A) rho10``. The ``i w0 rho01``
term is the free precession ``-i[H_S, rho]``; ``free_evolution=False``
drops it and keeps only the dissipator block, in which case the Bloch
``x`` component is conserved and the canonical-pair trace distance is
exactly ``exp(int_0^t a_zz)``. Populations do not depend on this choice.

The coefficients do not depend on the state, so they are integrated ahead
of time with 3-point Gauss-Legendre quadrature on every half step (sixth
order) and handed to RK4 at its stage times ``t_n``, ``t_n + h/2`` and
``t_n + h``. The state equations are affine in the state, so one RK4 step
collapses to ``y_{n+1} = P_n y_n + Q_n`` with precomputed ``P_n, Q_n`` (a
2x2 matrix ``P_n`` for the coherence), which avoids per-stage Python
overhead.
"""
import logging
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .bath import (BathParams, dissipation_kernel, kernel_time_derivatives,
                   markov_occupation, markov_rate, noise_kernel)
from .errors import DomainError, InputError, NumericsError

log = logging.getLogger(__name__)

_BLOCH_TOL = 1e-9

_GL_X, _GL_W = np.polynomial.legendre.leggauss(3)


@dataclass(frozen=True)
class SystemParams:
    """Qubit splitting and effective temperature of the initial Gibbs state."""

    omega0: float = 1.0
    T_S: float = math.inf

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise DomainError("omega0 must be positive and finite")
        if not self.T_S > 0:
            raise DomainError("T_S must be positive (math.inf allowed)")

    def gibbs_state(self) -> "QubitState":
        """Diagonal Gibbs state at ``T_S``; ``T_S = inf`` gives ``p0 = 1/2``."""
        if math.isinf(self.T_S):
            return QubitState(0.5)
        return QubitState(1.0 / (1.0 + math.exp(-self.omega0 / self.T_S)))


@dataclass(frozen=True)
class QubitState:
    """Qubit density matrix stored as ground population and coherence.

    ``rho11 = 1 - p0`` and ``rho10 = conj(coh)``, so trace and hermiticity
    hold by construction. Bloch components follow
    ``rho = (I + x sx + y sy + z sz) / 2`` with ``|0>`` the ground state on
    the ``+z`` axis.
    """

    p0: float
    coh: complex = 0j

    @classmethod
    def from_bloch(cls, x, y, z):
        return cls((1.0 + z) / 2.0, complex(x, -y) / 2.0)

    def bloch(self):
        return (2.0 * self.coh.real, -2.0 * self.coh.imag, 2.0 * self.p0 - 1.0)

    def matrix(self):
        return np.array([[self.p0, self.coh],
                         [np.conj(self.coh), 1.0 - self.p0]])


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``0, dt, ..., t_max`` (inclusive)."""

    t_max: float = 100.0
    dt: float = 0.01

    def __post_init__(self):
        if not (self.t_max > 0 and 0 < self.dt <= self.t_max):
            raise DomainError("need t_max > 0 and 0 < dt <= t_max")
        n = self.t_max / self.dt
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise DomainError("t_max must be an integer multiple of dt")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps + 1)

    def halved(self) -> "TimeGrid":
        return TimeGrid(self.t_max, self.dt / 2.0)


@dataclass
class Coefficients:
    """Running TCL2 coefficients (scalars or arrays over time)."""

    a_plus: np.ndarray
    a_minus: np.ndarray
    a_zz: np.ndarray
    b_z: np.ndarray
    A: np.ndarray
    w_plus: np.ndarray
    w_minus: np.ndarray

    def at(self, i) -> "Coefficients":
        return Coefficients(*(getattr(self, f.name)[i] for f in fields(self)))


def coefficient_derivatives(t, p: BathParams, s: SystemParams) -> Coefficients:
    """Integrands accumulated into :class:`Coefficients` at times ``t``."""
    t = np.asarray(t, dtype=float)
    w0 = s.omega0
    d1 = noise_kernel(t, p)
    d2 = dissipation_kernel(t, p)
    dd1, dd2 = kernel_time_derivatives(t, p)
    return _rates(t, w0, d1, d2, dd1, dd2)


def _rates(t, w0, d1, d2, dd1, dd2):
    c, sn = np.cos(w0 * t), np.sin(w0 * t)
    azz = -2.0 * d1 * c
    bz = -2.0 * d2 * sn
    am = 0.5 * (azz + bz)
    return Coefficients(
        a_plus=azz - am, a_minus=am, a_zz=azz, b_z=bz,
        A=d1 * (c - 1j * sn),
        w_plus=dd1 * sn - dd2 * c,
        w_minus=-dd1 * sn - dd2 * c,
    )


def markov_limit_coefficients(p: BathParams, s: SystemParams) -> Coefficients:
    """Long-time (Born-Markov) values of the coefficients.

    ``A`` keeps only its dissipative part ``Gamma (1 + 2n) / 2``; the
    principal-value (Lamb shift) part is dropped, as for the populations.
    """
    w0 = s.omega0
    gamma = markov_rate(p, w0)
    n = markov_occupation(p, w0)
    a_plus, a_minus = -gamma * n, -gamma * (1.0 + n)
    # summed rather than -gamma (1 + 2n) so the identity holds bit for bit
    azz = a_plus + a_minus
    return Coefficients(
        a_plus=a_plus, a_minus=a_minus, a_zz=azz, b_z=-gamma,
        A=complex(-0.5 * azz, 0.0),
        w_plus=-w0 * gamma * (1.0 + n), w_minus=w0 * gamma * n,
    )


def born_markov_population(t, p: BathParams, s: SystemParams, rho00_0):
    """Ground population under constant Born-Markov rates.

    ``rho_inf + (rho00_0 - rho_inf) exp(-Gamma (1 + 2n) t)`` with
    ``rho_inf = (1 + n) / (1 + 2n)``. The transient amplitude is
    ``rho00_0 - rho_inf``, which is what the rate equation requires.
    """
    t = np.asarray(t, dtype=float)
    gamma = markov_rate(p, s.omega0)
    n = markov_occupation(p, s.omega0)
    rho_inf = (1.0 + n) / (1.0 + 2.0 * n)
    return rho_inf + (rho00_0 - rho_inf) * np.exp(-gamma * (1.0 + 2.0 * n) * t)


@dataclass
class CoefficientTable:
    """Coefficients on the grid plus the RK4 stage values between grid points.

    ``stages[k]`` holds the coefficient values seen by RK4 stage ``k`` of
    every step (arrays of length ``n_steps``).
    """

    times: np.ndarray
    grid: Coefficients
    stages: tuple
    d1: np.ndarray
    d2: np.ndarray
    markov: bool = False


def accumulate_coefficients(p: BathParams, s: SystemParams, grid: TimeGrid,
                            markov=False) -> CoefficientTable:
    """Running coefficient integrals on ``grid`` and at the RK4 stage times.

    With ``markov=True`` every coefficient is held at its Born-Markov value
    and the kernels are reported as zero.
    """
    t = grid.times
    h = grid.t_max / grid.n_steps
    n = grid.n_steps
    names = [f.name for f in fields(Coefficients)]

    if markov:
        lim = markov_limit_coefficients(p, s)
        const = {k: np.full(n + 1, getattr(lim, k)) for k in names}
        gridc = Coefficients(**const)
        stage = Coefficients(**{k: v[:-1] for k, v in const.items()})
        zeros = np.zeros(n + 1)
        return CoefficientTable(t, gridc, (stage,) * 4, zeros, zeros.copy(),
                                markov=True)

    # 3-point Gauss-Legendre on each half step: the coefficient integrals are
    # sixth-order accurate, so RK4 sees them essentially exact
    half = 0.5 * h
    starts = np.concatenate([t[:-1], t[:-1] + half])
    nodes = (starts[:, None] + 0.5 * half * (1.0 + _GL_X)).ravel()
    allt = np.concatenate([t, nodes])
    d1 = noise_kernel(allt, p)
    d2 = dissipation_kernel(allt, p)
    dd1, dd2 = kernel_time_derivatives(allt, p)
    rates = _rates(allt, s.omega0, d1, d2, dd1, dd2)

    gridc, s1, s2, s3, s4 = {}, {}, {}, {}, {}
    for k in names:
        r = getattr(rates, k)[n + 1:].reshape(2 * n, 3)
        parts = 0.5 * half * (r @ _GL_W)
        first, second = parts[:n], parts[n:]
        c = np.concatenate([np.zeros(1, dtype=parts.dtype),
                            np.cumsum(first + second)])
        gridc[k] = c
        s1[k] = c[:-1]
        s2[k] = s3[k] = c[:-1] + first
        s4[k] = c[1:]
    stages = tuple(Coefficients(**d) for d in (s1, s2, s3, s4))
    return CoefficientTable(t, Coefficients(**gridc), stages,
                            d1[:n + 1], d2[:n + 1])


def _affine_rk4(h, alphas, betas):
    """Per-step maps ``y -> P y + Q`` of RK4 for ``y' = alpha(t) y - beta(t)``.

    ``alphas``/``betas`` are the four stage values (arrays over steps).
    """
    a1, a2, a3, a4 = alphas
    b1, b2, b3, b4 = betas
    p1, q1 = a1, -b1
    p2 = a2 * (1.0 + 0.5 * h * p1)
    q2 = a2 * 0.5 * h * q1 - b2
    p3 = a3 * (1.0 + 0.5 * h * p2)
    q3 = a3 * 0.5 * h * q2 - b3
    p4 = a4 * (1.0 + h * p3)
    q4 = a4 * h * q3 - b4
    P = 1.0 + (h / 6.0) * (p1 + 2.0 * p2 + 2.0 * p3 + p4)
    Q = (h / 6.0) * (q1 + 2.0 * q2 + 2.0 * q3 + q4)
    return P, Q


def _linear_rk4(h, mats):
    """Per-step 2x2 matrices of RK4 for ``y' = M(t) y``."""
    eye = np.eye(2)
    m1, m2, m3, m4 = mats
    k1 = m1
    k2 = m2 @ (eye + 0.5 * h * k1)
    k3 = m3 @ (eye + 0.5 * h * k2)
    k4 = m4 @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _coherence_generator(A, rot):
    # (u, v) = (Re rho01, Im rho01): u' = -rot v, v' = (rot - 2 Im A) u - 2 Re A v
    m = np.zeros(A.shape + (2, 2))
    m[:, 0, 1] = -rot
    m[:, 1, 0] = rot - 2.0 * A.imag
    m[:, 1, 1] = -2.0 * A.real
    return m


def _run_linear2(y0, S):
    u, v = y0
    us, vs = [u], [v]
    for a, b, c, d in S.reshape(-1, 4).tolist():
        u, v = a * u + b * v, c * u + d * v
        us.append(u)
        vs.append(v)
    return np.array(us), np.array(vs)


def _run_affine(y0, P, Q):
    out = [y0]
    y = y0
    for pk, qk in zip(P.tolist(), Q.tolist()):
        y = pk * y + qk
        out.append(y)
    return np.array(out)


@dataclass
class Trajectory:
    """Propagated state and coefficients on a time grid."""

    times: np.ndarray
    rho00: np.ndarray
    coh: np.ndarray
    coeffs: Coefficients
    d1: np.ndarray
    d2: np.ndarray
    bath: BathParams
    system: SystemParams
    markov: bool = False
    free_evolution: bool = True
    bloch_norm_max: float = field(default=0.0)

    @property
    def rho11(self):
        return 1.0 - self.rho00

    def state(self, i) -> QubitState:
        return QubitState(float(self.rho00[i]), complex(self.coh[i]))

    def rho00_rate(self):
        """Right-hand side ``a_zz rho00 - a_minus`` on the grid."""
        return self.coeffs.a_zz * self.rho00 - self.coeffs.a_minus

    def bloch(self):
        """Bloch components ``(x, y, z)`` as arrays over time."""
        return 2.0 * self.coh.real, -2.0 * self.coh.imag, 2.0 * self.rho00 - 1.0

    def __len__(self):
        return len(self.times)


def propagate(p: BathParams, s: SystemParams, init: QubitState = None,
              grid: TimeGrid = TimeGrid(), markov=False,
              table: CoefficientTable = None,
              free_evolution=True) -> Trajectory:
    """RK4 propagation of the TCL2 populations and coherence.

    Parameters
    ----------
    p, s : BathParams, SystemParams
    init : QubitState, optional
        Initial state; defaults to the Gibbs state at ``s.T_S``.
    grid : TimeGrid
    markov : bool
        Replace the running coefficients by their Born-Markov constants.
    table : CoefficientTable, optional
        Reuse coefficients accumulated for the same ``p``, ``s`` and ``grid``
        (for example when propagating several initial states).
    free_evolution : bool
        Include the precession ``i omega0 rho01`` of the coherence.

    Raises
    ------
    NumericsError
        If any propagated component becomes non-finite.
    """
    if init is None:
        init = s.gibbs_state()
    if table is None:
        table = accumulate_coefficients(p, s, grid, markov=markov)
    elif len(table.times) != grid.n_steps + 1 or table.markov != markov:
        raise InputError("coefficient table does not match the grid")
    h = grid.t_max / grid.n_steps
    st = table.stages

    P, Q = _affine_rk4(h, [c.a_zz for c in st], [c.a_minus for c in st])
    rho00 = _run_affine(float(init.p0), P, Q)

    rot = s.omega0 if free_evolution else 0.0
    S = _linear_rk4(h, [_coherence_generator(np.asarray(c.A), rot) for c in st])
    u, v = _run_linear2((float(np.real(init.coh)), float(np.imag(init.coh))), S)
    coh = u + 1j * v

    if not (np.all(np.isfinite(rho00)) and np.all(np.isfinite(coh))):
        raise NumericsError(f"non-finite state in propagation for {p}")

    norm = np.sqrt(4.0 * np.abs(coh) ** 2 + (2.0 * rho00 - 1.0) ** 2)
    nmax = float(norm.max())
    if nmax > 1.0 + _BLOCH_TOL:
        log.warning("Bloch norm reached %.6f for %s (positivity violated)",
                    nmax, p)
    return Trajectory(table.times, rho00, coh, table.grid, table.d1, table.d2,
                      p, s, markov=markov, free_evolution=free_evolution,
                      bloch_norm_max=nmax)
