from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from src.analytic.oracle import (
    analytic_s0,
    analytic_spectrum,
    rate_constants,
    s1_prefactor,
    stationary_current_symmetric,
)
from src.bath.spectrum import DetectorParams, g_pm
from src.common.errors import AsymmetricQubitError
from src.dynamics.model import MeasurementModel
from src.dynamics.solver import steady_state
from src.observables.current import current
from src.observables.noise import peak_to_pedestal
from src.qubit.model import QubitParams, diagonalize

SYMMETRIC = diagonalize(QubitParams(0.0, 0.5))


def _detector(v=2.0, temp=1.0, chi=0.1, g=2.5, t_amp=1.0) -> DetectorParams:
    return DetectorParams(t_amp=t_amp, chi=chi, g_l=g, g_r=g, v=v, temp=temp)


def test_rate_constants_at_reference_parameters(reference_detector):
    rates = rate_constants(reference_detector, SYMMETRIC)
    assert rates.gamma_d == pytest.approx(0.53783, abs=1e-5)
    assert rates.gamma == pytest.approx(0.5 * reference_detector.eta * 0.01)
    assert rates.i_d == pytest.approx(rates.i_a - rates.i_b)
    assert rates.i0 == pytest.approx(0.5 * (rates.i_a + rates.i_b))
    assert rates.g0 == pytest.approx(reference_detector.eta * 1.05**2)
    assert rates.g1 == pytest.approx(reference_detector.eta * 0.05**2)


def test_rate_constants_without_coupling():
    d = _detector(chi=0.0)
    rates = rate_constants(d, SYMMETRIC)
    assert rates.gamma_d == 0.0
    assert rates.gamma == 0.0
    assert rates.i_d == 0.0
    assert rates.i_bar == pytest.approx(d.eta * 2.0)
    assert stationary_current_symmetric(d, SYMMETRIC) == pytest.approx(d.eta * 2.0)


def test_stationary_current_example(reference_detector):
    eta = reference_detector.eta
    g_ratio = g_pm("-", 1.0, 2.0, 1.0) / g_pm("+", 1.0, 2.0, 1.0)
    expected = eta * 1.05**2 * 2 + eta * 0.05**2 * 2 * (1 - 0.5 * g_ratio)
    assert stationary_current_symmetric(reference_detector, SYMMETRIC) == pytest.approx(expected, rel=1e-12)
    assert stationary_current_symmetric(reference_detector, SYMMETRIC) == pytest.approx(86.7659, rel=1e-5)


def test_zero_temperature_below_threshold():
    d = _detector(v=0.5, temp=0.0, chi=0.2)
    rates = rate_constants(d, SYMMETRIC)
    assert stationary_current_symmetric(d, SYMMETRIC) == pytest.approx(rates.g0 * 0.5, rel=1e-12)
    assert rates.i_bar == pytest.approx(rates.i0 - 0.25 * d.eta * 0.04 * 0.5, rel=1e-12)
    assert rates.i_bar == pytest.approx(stationary_current_symmetric(d, SYMMETRIC), rel=1e-12)


def test_zero_temperature_prefactor_is_one_half():
    assert s1_prefactor(_detector(v=0.5, temp=0.0), SYMMETRIC) == pytest.approx(0.5, abs=1e-6)


def test_prefactor_tends_to_one_at_high_voltage():
    values = [s1_prefactor(_detector(v=v, temp=1.0), SYMMETRIC) for v in (2.0, 10.0, 100.0)]
    assert values[0] < values[1] < values[2] <= 1.0
    assert values[2] == pytest.approx(1.0, abs=1e-3)


def test_prefactor_is_finite_at_zero_bias():
    assert math.isfinite(s1_prefactor(_detector(v=0.0, temp=1.0), SYMMETRIC))


def test_uncoupled_spectrum_is_flat():
    d = _detector(chi=0.0)
    spectrum = analytic_spectrum(d, SYMMETRIC, np.linspace(0.0, 6.0, 13))
    np.testing.assert_allclose(spectrum.values, 2.0 * d.eta * 2.0 / math.tanh(1.0), rtol=1e-12)


def test_spectrum_components(reference_detector):
    omegas = np.linspace(0.0, 6.0, 61)
    spectrum = analytic_spectrum(reference_detector, SYMMETRIC, omegas)
    components = spectrum.components
    np.testing.assert_allclose(spectrum.values, components.s0 + components.s1 + components.s2)
    assert components.s0 == pytest.approx(analytic_s0(reference_detector, SYMMETRIC))

    gamma_d = rate_constants(reference_detector, SYMMETRIC).gamma_d
    lorentz_weight = components.s2 * (omegas**2 + gamma_d**2)
    np.testing.assert_allclose(lorentz_weight, lorentz_weight[0], rtol=1e-10)

    far = analytic_spectrum(reference_detector, SYMMETRIC, np.array([1e4]))
    assert far.values[0] == pytest.approx(components.s0, rel=1e-6)

    frame = spectrum.to_frame()
    assert list(frame.columns) == ["omega", "s", "s0", "s1", "s2"]


def test_pedestal_without_coupling_is_shot_noise():
    d = _detector(chi=0.0, v=3.0, temp=0.5)
    rates = rate_constants(d, SYMMETRIC)
    assert analytic_s0(d, SYMMETRIC) == pytest.approx(2.0 * rates.i0 / math.tanh(3.0), rel=1e-12)


def test_asymmetric_qubit_is_refused(reference_detector):
    basis = diagonalize(QubitParams.from_angle(0.6))
    with pytest.raises(AsymmetricQubitError):
        rate_constants(reference_detector, basis)
    with pytest.raises(AsymmetricQubitError):
        analytic_spectrum(reference_detector, basis, np.array([1.0]))
    with pytest.raises(ValueError):
        analytic_spectrum(_detector(v=-1.0), SYMMETRIC, np.array([1.0]))


@pytest.mark.parametrize(
    "v,temp,chi",
    list(itertools.product([0.5, 2.0, 10.0], [0.1, 1.0, 4.0], [0.02, 0.1, 0.3])),
)
def test_numeric_current_matches_closed_form_on_grid(v, temp, chi):
    d = _detector(v=v, temp=temp, chi=chi)
    model = MeasurementModel(qubit=QubitParams(0.0, 0.5), detector=d)
    numeric = current(steady_state(model), model.ops)
    assert numeric == pytest.approx(stationary_current_symmetric(d, SYMMETRIC), rel=1e-6)

    spectrum = analytic_spectrum(d, SYMMETRIC, np.linspace(0.0, 6.0, 241))
    assert peak_to_pedestal(spectrum, 1.0, pedestal=spectrum.components.s0) <= 4.02


def test_peak_to_pedestal_approaches_four():
    d = _detector(v=50.0, temp=0.1, chi=0.05)
    spectrum = analytic_spectrum(d, SYMMETRIC, np.linspace(0.0, 6.0, 241))
    ratio = peak_to_pedestal(spectrum, 1.0, pedestal=spectrum.components.s0)
    assert 3.8 <= ratio <= 4.02

    weak = _detector(v=100.0, temp=1.0, chi=0.01, g=0.5)
    weak_spectrum = analytic_spectrum(weak, SYMMETRIC, np.array([1.0, 6.0]))
    assert peak_to_pedestal(weak_spectrum, 1.0, pedestal=weak_spectrum.components.s0) == pytest.approx(4.0, rel=0.05)


def test_coherent_peak_grows_with_voltage():
    ratios = []
    for v in (1.0, 2.0, 4.0, 6.0, 10.0):
        d = _detector(v=v)
        spectrum = analytic_spectrum(d, SYMMETRIC, np.linspace(0.0, 3.0, 121))
        ratios.append(peak_to_pedestal(spectrum, 1.0, pedestal=spectrum.components.s0))
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


def test_gibbs_population_from_closed_form():
    d = _detector(v=0.0, temp=1.0, chi=0.05)
    g_plus = rate_constants(d, SYMMETRIC).g_plus
    assert 0.5 * (1.0 - 1.0 / g_plus) == pytest.approx(1.0 / (1.0 + math.e), rel=1e-12)
