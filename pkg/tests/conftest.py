import numpy as np
import pytest
from scipy import integrate

from energy_backflow.bath import BathParams
from energy_backflow.tcl2 import (SystemParams, TimeGrid, coefficient_derivatives,
                                  propagate)


@pytest.fixture(scope="session")
def reference_traj():
    """Trajectory at (lambda, Omega, T_E, T_S) = (0.1, 0.4, 1, 5)."""
    return propagate(BathParams(0.1, 0.4, 1.0), SystemParams(1.0, 5.0))


def coefficient_reference(p, s, times):
    """Coefficients ``a_zz, a_minus, A`` at ``times`` by adaptive quadrature."""
    def rates(t):
        c = coefficient_derivatives(t, p, s)
        return np.array([float(c.a_zz), float(c.a_minus),
                         float(np.real(c.A)), float(np.imag(c.A))])

    out = [np.zeros(4)]
    for a, b in zip(times[:-1], times[1:]):
        val, _ = integrate.quad_vec(rates, a, b, epsabs=1e-15, epsrel=1e-13)
        out.append(out[-1] + val)
    return np.array(out)


def naive_rk4(p, s, init, grid, free_evolution=True):
    """Textbook RK4 on (rho00, Re rho01, Im rho01), one stage at a time.

    The coefficients entering each stage come from an independent adaptive
    quadrature at the stage times.
    """
    w = s.omega0 if free_evolution else 0.0
    h = grid.dt
    fine = np.linspace(0.0, grid.t_max, 2 * grid.n_steps + 1)
    coef = coefficient_reference(p, s, fine)

    def rhs(k, y):
        r, u, v = y
        azz, am, ar, ai = coef[k]
        return np.array([azz * r - am, -w * v, (w - 2.0 * ai) * u - 2.0 * ar * v])

    y = np.array([init.p0, init.coh.real, init.coh.imag], float)
    out = [y.copy()]
    for n in range(grid.n_steps):
        k1 = rhs(2 * n, y)
        k2 = rhs(2 * n + 1, y + h / 2 * k1)
        k3 = rhs(2 * n + 1, y + h / 2 * k2)
        k4 = rhs(2 * n + 2, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(y.copy())
    return np.array(out), coef[::2]


# --- acceptance reporting -------------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(number, title, ok, detail=""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[key])
