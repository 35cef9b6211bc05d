from __future__ import annotations

import math

import numpy as np
import pytest

from src.bath.spectrum import (
    DetectorParams,
    c_tilde,
    c_tilde_sum,
    f_pm,
    g_pm,
    kernel,
    stable_coth,
    x_coth,
    x_coth_derivative,
)
from src.common.errors import ConfigError


def test_kernel_values():
    assert kernel(0.0, 1.0) == pytest.approx(1.0)
    assert kernel(2.0, 0.0) == 2.0
    assert kernel(-2.0, 0.0) == 0.0
    assert kernel(0.0, 0.0) == 0.0
    assert kernel(-2.0, 1.0) == pytest.approx(2.0 / (math.e**2 - 1.0), rel=1e-12)
    assert kernel(-2.0, 1.0) == pytest.approx(0.31304, abs=1e-5)


def test_kernel_is_continuous_and_non_negative():
    temp = 0.7
    for x in (1e-9, -1e-9, 1e-7, -1e-7):
        assert kernel(x, temp) == pytest.approx(temp + 0.5 * x, rel=1e-12)
    grid = np.linspace(-800.0, 800.0, 4001)
    values = kernel(grid, 1.0)
    assert np.all(values >= 0.0)
    assert np.all(np.isfinite(values))


def test_kernel_rejects_negative_temperature():
    with pytest.raises(ValueError):
        kernel(1.0, -0.1)
    with pytest.raises(ConfigError):
        DetectorParams(t_amp=1.0, chi=0.1, g_l=1.0, g_r=1.0, v=1.0, temp=-1.0)


def test_c_tilde_examples(bare_detector):
    forward = c_tilde("-", 0.0, bare_detector)
    backward = c_tilde("+", 0.0, bare_detector)
    assert forward == pytest.approx(2.0 / (1.0 - math.exp(-2.0)), rel=1e-12)
    assert backward == pytest.approx(0.31304, abs=1e-5)
    assert forward - backward == pytest.approx(2.0, rel=1e-12)
    assert c_tilde_sum(0.0, bare_detector) == pytest.approx(2.0 / math.tanh(1.0), rel=1e-12)
    with pytest.raises(ValueError):
        c_tilde("x", 0.0, bare_detector)


@pytest.mark.parametrize("v,temp", [(0.5, 0.0), (2.0, 0.3), (-3.0, 1.0), (10.0, 4.0)])
def test_ohmic_and_shot_noise_identities(v, temp):
    d = DetectorParams.with_eta(1.7, t_amp=1.0, chi=0.0, v=v, temp=temp)
    assert c_tilde("-", 0.0, d) - c_tilde("+", 0.0, d) == pytest.approx(d.eta * v, rel=1e-12)
    assert c_tilde_sum(0.0, d) == pytest.approx(d.eta * x_coth(v, temp), rel=1e-12)


@pytest.mark.parametrize("delta,temp", [(1.0, 1.0), (0.5, 2.0), (3.0, 0.4)])
def test_detailed_balance_at_zero_bias(delta, temp):
    d = DetectorParams.with_eta(1.0, t_amp=1.0, chi=0.0, v=0.0, temp=temp)
    ratio = c_tilde_sum(delta, d) / c_tilde_sum(-delta, d)
    assert ratio == pytest.approx(math.exp(-delta / temp), rel=1e-12)


def test_eta_from_lead_densities(reference_detector):
    assert reference_detector.eta == pytest.approx(2.0 * math.pi * 6.25)
    assert reference_detector.eta == pytest.approx(39.26991, rel=1e-6)


def test_f_and_g_examples():
    assert f_pm("+", 1.0, 2.0, 1.0) == pytest.approx(3.31438, abs=1e-5)
    assert f_pm("-", 1.0, 2.0, 1.0) == pytest.approx(2.16395, abs=1e-5)
    assert f_pm("-", 1.0, 1.0, 1.0) == pytest.approx(2.0)
    assert g_pm("+", 1.0, 2.0, 1.0) == pytest.approx(2.73917, abs=1e-5)
    assert g_pm("-", 1.0, 2.0, 1.0) == pytest.approx(0.57522, abs=1e-5)
    assert g_pm("-", 1.0, 0.5, 0.0) == pytest.approx(0.5)
    assert g_pm("+", 1.0, 0.5, 0.0) == pytest.approx(1.0)


def test_x_coth_limits_and_parity():
    assert x_coth(0.0, 0.8) == pytest.approx(1.6)
    assert x_coth(-3.0, 0.0) == 3.0
    assert x_coth(-1.3, 0.6) == pytest.approx(x_coth(1.3, 0.6))
    assert x_coth(2.0, 1.0) == pytest.approx(2.0 / math.tanh(1.0), rel=1e-12)


@pytest.mark.parametrize("u,temp", [(1.0, 1.0), (0.2, 3.0), (4.0, 0.5)])
def test_x_coth_derivative_matches_finite_difference(u, temp):
    h = 1e-6
    numeric = (x_coth(u + h, temp) - x_coth(u - h, temp)) / (2 * h)
    assert x_coth_derivative(u, temp) == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("y", [1e-6, 0.3, 2.0, 40.0, 800.0])
def test_stable_coth_matches_definition(y):
    assert stable_coth(y) == pytest.approx(1.0 / math.tanh(y), rel=1e-9)
    assert stable_coth(-y) == pytest.approx(-1.0 / math.tanh(y), rel=1e-9)


def test_stable_coth_rejects_zero():
    with pytest.raises(ValueError):
        stable_coth(0.0)
