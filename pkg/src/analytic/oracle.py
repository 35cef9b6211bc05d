"""Closed-form stationary current and noise spectrum of the symmetric qubit (epsilon = 0)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.bath.spectrum import DetectorParams, g_pm, x_coth, x_coth_derivative
from src.common.errors import AsymmetricQubitError
from src.observables.spectrum import Spectrum, SpectrumComponents
from src.qubit.model import EigenBasis


@dataclass(frozen=True)
class RateConstants:
    i_a: float
    i_b: float
    i0: float
    i_d: float
    i_bar: float
    gamma_d: float
    gamma: float
    d_z: float
    g0: float
    g1: float
    g_plus: float
    g_minus: float


def _require_symmetric(basis: EigenBasis) -> None:
    if not basis.is_symmetric:
        raise AsymmetricQubitError(
            f"closed-form results need a symmetric qubit (theta = pi/2), got cos(theta)={basis.cos_theta:.6g}"
        )


def rate_constants(d: DetectorParams, basis: EigenBasis) -> RateConstants:
    _require_symmetric(basis)
    delta, v, eta, chi, t_amp = basis.delta, d.v, d.eta, d.chi, d.t_amp
    g_plus = g_pm("+", delta, v, d.temp)
    g_minus = g_pm("-", delta, v, d.temp)

    i_a = eta * (t_amp + chi) ** 2 * v
    i_b = eta * t_amp**2 * v
    i0 = 0.5 * (i_a + i_b)
    chi2_eta = eta * chi * chi
    return RateConstants(
        i_a=i_a,
        i_b=i_b,
        i0=i0,
        i_d=i_a - i_b,
        i_bar=i0 - 0.25 * chi2_eta * delta * g_minus / g_plus,
        gamma_d=0.5 * chi2_eta * g_plus,
        gamma=0.5 * chi2_eta * delta,
        d_z=-delta * math.sqrt(max(i_a * i_b, 0.0)) / g_plus - 0.25 * chi2_eta * g_minus,
        g0=eta * (t_amp + 0.5 * chi) ** 2,
        g1=eta * (0.5 * chi) ** 2,
        g_plus=g_plus,
        g_minus=g_minus,
    )


def _g_ratio_over_v(d: DetectorParams, basis: EigenBasis) -> float:
    """G(-) / (V G(+)), continued to V = 0."""
    g_plus = g_pm("+", basis.delta, d.v, d.temp)
    if d.v == 0.0:
        return x_coth_derivative(basis.delta, d.temp) / g_plus
    return g_pm("-", basis.delta, d.v, d.temp) / (d.v * g_plus)


def s1_prefactor(d: DetectorParams, basis: EigenBasis) -> float:
    """Relaxation-reduced weight 1 - (delta/2V) G(-)/G(+) of the coherent peak."""
    _require_symmetric(basis)
    return 1.0 - 0.5 * basis.delta * _g_ratio_over_v(d, basis)


def stationary_current_symmetric(d: DetectorParams, basis: EigenBasis) -> float:
    rates = rate_constants(d, basis)
    return rates.g0 * d.v + rates.g1 * (d.v - basis.delta * rates.g_minus / rates.g_plus)


def analytic_s0(d: DetectorParams, basis: EigenBasis) -> float:
    rates = rate_constants(d, basis)
    v_coth = float(x_coth(d.v, d.temp))
    # 2 I0 coth(V/2T) written through V coth(V/2T), finite at V = 0.
    shot = 2.0 * d.eta * (d.t_amp**2 + d.t_amp * d.chi + 0.5 * d.chi**2) * v_coth
    delta = basis.delta
    return shot + 0.5 * d.eta * d.chi**2 * (rates.g_plus - delta * delta / rates.g_plus - v_coth)


def analytic_spectrum(d: DetectorParams, basis: EigenBasis, omegas: np.ndarray) -> Spectrum:
    if d.v < 0:
        raise ValueError(f"closed-form spectrum needs V >= 0, got {d.v}")
    rates = rate_constants(d, basis)
    omegas = np.asarray(omegas, dtype=float)
    s0 = analytic_s0(d, basis)
    delta = basis.delta

    if rates.gamma_d > 0:
        w2 = omegas * omegas
        lorentz_peak = rates.gamma_d * delta**2 / ((w2 - delta**2) ** 2 + rates.gamma_d**2 * w2)
        s1 = s1_prefactor(d, basis) * rates.i_d**2 * lorentz_peak
        weight = d.chi**2 * d.eta * (rates.gamma_d * rates.d_z + rates.gamma * rates.i_bar) * rates.g_minus
        s2 = weight / (w2 + rates.gamma_d**2)
    else:
        s1 = np.zeros_like(omegas)
        s2 = np.zeros_like(omegas)

    return Spectrum(
        omegas=omegas,
        values=s0 + s1 + s2,
        components=SpectrumComponents(s0=s0, s1=s1, s2=s2),
    )
