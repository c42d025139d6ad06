import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from energy_backflow.bath import (BathParams, dissipation_kernel,
                                  dissipation_kernel_quadrature,
                                  effective_spectral_density, fourier_quadrature,
                                  kernel_time_derivatives, markov_occupation,
                                  markov_rate, noise_kernel,
                                  noise_kernel_quadrature, resonance_curve,
                                  resonance_deviation, spectral_density)
from energy_backflow.errors import DomainError

P = BathParams(0.1, 0.4, 1.0)


def test_params_validation(caplog):
    with pytest.raises(DomainError):
        BathParams(-0.1, 1, 1)
    with pytest.raises(DomainError):
        BathParams(0.1, 0.0, 1)
    with pytest.raises(DomainError):
        BathParams(0.1, 1, -1)
    with pytest.raises(DomainError):
        BathParams(0.1, math.nan, 1)
    BathParams(0.0, 1, 1)
    with caplog.at_level("WARNING"):
        BathParams(0.5, 1, 1)
    assert "weak-coupling" in caplog.text


def test_spectral_density():
    assert spectral_density(0.0, P) == 0.0
    assert abs(spectral_density(1.0, P) - 0.1 * math.exp(-2.5)) < 1e-16
    assert abs(spectral_density(1.0, P) - 0.00820850) < 1e-8
    w = np.linspace(0.01, 3, 3000)
    assert abs(w[np.argmax(spectral_density(w, P))] - 0.4) < 1e-3
    with pytest.raises(DomainError):
        spectral_density(-1.0, P)


def test_effective_spectral_density():
    p = BathParams(0.1, 0.4, 1.0)
    assert abs(effective_spectral_density(1e-10, p) - 0.2) < 1e-15
    assert abs(effective_spectral_density(1e-6, p) - 0.2) < 1e-6
    cold = BathParams(0.1, 0.4, 1e-3)
    assert abs(effective_spectral_density(1.0, cold) - spectral_density(1.0, cold)) < 1e-15
    hot = BathParams(0.1, 0.4, 5.0)
    # 0.00820850 * coth(0.1); the decimal 0.0822220 quoted alongside is a slip
    assert abs(effective_spectral_density(1.0, hot)
               - 0.1 * math.exp(-2.5) / math.tanh(0.1)) < 1e-15
    assert abs(effective_spectral_density(1.0, hot) - 0.0823584) < 1e-7


def test_noise_kernel_examples():
    p = BathParams(0.1, 1.0, 1.0)
    assert abs(noise_kernel(0.0, p) - 0.2 * (-1 + 2 * math.pi ** 2 / 6)) < 1e-14
    assert abs(noise_kernel(0.0, p) - 0.4579736) < 1e-7
    assert noise_kernel(0.7, p) == noise_kernel(-0.7, p)
    hot = BathParams(0.1, 1.0, 100.0)
    assert abs(noise_kernel(1.0, hot) / 20.0 - 1) < 5e-3


def test_dissipation_kernel_examples():
    p = BathParams(0.1, 1.0, 1.0)
    assert dissipation_kernel(0.0, p) == 0.0
    assert abs(dissipation_kernel(1.0, p) - 0.1) < 1e-16
    assert dissipation_kernel(-2.0, p) == -dissipation_kernel(2.0, p)


@settings(max_examples=20, deadline=None)
@given(st.floats(-50, 50), st.floats(0.2, 5), st.floats(0.2, 5))
def test_kernel_symmetries(tau, om, T):
    p = BathParams(0.1, om, T)
    assert noise_kernel(tau, p) == noise_kernel(-tau, p)
    assert dissipation_kernel(tau, p) == -dissipation_kernel(-tau, p)


def test_noise_quadrature_oracle_point():
    p = BathParams(0.1, 0.4, 1.0)
    q = noise_kernel_quadrature(0.5, p)
    assert abs(noise_kernel(0.5, p) - q) < 1e-7 * abs(q)


def test_noise_quadrature_at_zero_is_plain_integral():
    p = BathParams(0.1, 0.4, 1.0)
    plain, _ = integrate.quad(lambda w: float(effective_spectral_density(w, p)),
                              0, 40, epsabs=1e-13, limit=200)
    assert abs(noise_kernel_quadrature(0.0, p) - 2 * plain) < 1e-9


def test_noise_quadrature_decays():
    assert abs(noise_kernel_quadrature(50.0, BathParams(0.1, 1.0, 1.0))) < 1e-3


def test_dissipation_quadrature_grid():
    for tau in (0, 0.5, 1, 5, 20):
        for om in (0.2, 0.4, 1, 2, 5):
            p = BathParams(0.1, om, 1.0)
            assert abs(dissipation_kernel(tau, p)
                       - dissipation_kernel_quadrature(tau, p)) < 1e-8


def test_fourier_quadrature_against_closed_form():
    # int_0^inf w e^{-w} cos(w t) dw = (1 - t^2) / (1 + t^2)^2
    for t in (0.0, 0.3, 3.0, 30.0):
        val = fourier_quadrature(lambda w: w * math.exp(-w), t, 60.0, "cos")
        assert abs(val - (1 - t * t) / (1 + t * t) ** 2) < 1e-12


def test_kernel_time_derivatives():
    p = BathParams(0.1, 0.4, 1.0)
    dd1, dd2 = kernel_time_derivatives(0.0, p)
    assert abs(dd1) < 1e-9
    assert abs(dd2 - 4 * 0.1 * 0.4 ** 3) < 1e-16
    # differentiated cosine transform as oracle
    jw = lambda w: w * float(effective_spectral_density(w, p))
    oracle = -2 * fourier_quadrature(jw, 1.0, 50.0, "sin")
    assert abs(kernel_time_derivatives(1.0, p).d1 - oracle) < 1e-6
    # Richardson-extrapolated central difference of the closed form
    t = np.linspace(-30, 30, 601)
    h = 1e-5
    for q in (P, BathParams(0.1, 5.0, 0.2), BathParams(0.1, 0.2, 5.0)):
        c1 = (noise_kernel(t + h, q) - noise_kernel(t - h, q)) / (2 * h)
        c2 = (noise_kernel(t + 2 * h, q) - noise_kernel(t - 2 * h, q)) / (4 * h)
        fd = (4 * c1 - c2) / 3
        assert np.max(np.abs(kernel_time_derivatives(t, q).d1 - fd)) < 1e-8 * np.max(np.abs(fd))
    t = np.linspace(0.1, 5, 7)
    h = 1e-6
    fd = (dissipation_kernel(t + h, p) - dissipation_kernel(t - h, p)) / (2 * h)
    assert np.allclose(kernel_time_derivatives(t, p).d2, fd, atol=1e-8)


def test_resonance_deviation():
    p = BathParams(0.1, 0.4, 1.0)
    assert resonance_deviation(p) < 0
    for T in (0.5, 1.0, 2.0, 3.0):
        on = BathParams(0.1, float(resonance_curve(T)), T)
        assert abs(resonance_deviation(on)) < 1e-10
    cold = BathParams(0.1, 2.0, 1e-3)
    assert abs(resonance_deviation(cold) - 0.1 * 0.5 * math.exp(-0.5)) < 1e-14
    assert abs(resonance_deviation(BathParams(0.1, 1.0, 1e-3))) < 1e-15
    # numeric derivative of J_eff as oracle
    p = BathParams(0.1, 1.3, 0.7)
    h = 1e-5
    fd = (effective_spectral_density(1 + h, p) - effective_spectral_density(1 - h, p)) / (2 * h)
    assert abs(resonance_deviation(p) - fd) < 1e-9


def test_resonance_curve():
    assert abs(resonance_curve(1.0) - 1 / (1 - 1 / math.sinh(1))) < 1e-12
    assert abs(resonance_curve(1.0) - 6.7077) < 1e-4
    assert abs(resonance_curve(20.0) / (6 * 400) - 1) < 0.02
    arr = resonance_curve(np.array([0.5, 1.0]))
    assert arr.shape == (2,)
    with pytest.raises(DomainError):
        resonance_curve(0.0)


def test_markov_rate():
    assert abs(markov_rate(P) - 2 * math.pi * 0.1 * math.exp(-2.5)) < 1e-15
    assert abs(markov_rate(P) - 0.0515755) < 1e-7
    assert markov_rate(BathParams(0.0, 0.4, 1.0)) == 0.0
    assert abs(markov_rate(BathParams(0.2, 0.4, 1.0)) - 2 * markov_rate(P)) < 1e-16
    assert abs(markov_occupation(P) - 1 / (math.e - 1)) < 1e-15


def test_markov_limit_identities():
    # long-time cosine/sine transforms of the kernels on [0, 200]
    n = markov_occupation(P)
    g = markov_rate(P)
    f1 = lambda t: float(noise_kernel(t, P)) * math.cos(t)
    f2 = lambda t: float(dissipation_kernel(t, P)) * math.sin(t)
    azz = -2 * integrate.quad(f1, 0, 200, limit=500)[0]
    bz = -2 * integrate.quad(f2, 0, 200, limit=500)[0]
    assert abs(azz / (-g * (1 + 2 * n)) - 1) < 0.01
    assert abs(bz / -g - 1) < 0.01
