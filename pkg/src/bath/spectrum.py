"""Wide-band spectra of the point-contact reservoirs.

Units: hbar = e = k_B = 1. ``kernel`` is the thermal spectral function
``x / (1 - exp(-x/T))``; every rate in the package is built from it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.common.errors import ConfigError

Sign = Literal["+", "-"]

SERIES_CUTOFF = 1e-6


@dataclass(frozen=True)
class DetectorParams:
    t_amp: float
    chi: float
    g_l: float
    g_r: float
    v: float
    temp: float

    def __post_init__(self) -> None:
        if self.temp < 0:
            raise ConfigError(f"temperature must be >= 0, got {self.temp}")
        if self.g_l <= 0 or self.g_r <= 0:
            raise ConfigError(f"lead densities must be positive, got g_l={self.g_l}, g_r={self.g_r}")

    @property
    def eta(self) -> float:
        return 2.0 * math.pi * self.g_l * self.g_r

    @staticmethod
    def with_eta(eta: float, t_amp: float, chi: float, v: float, temp: float) -> "DetectorParams":
        g = math.sqrt(eta / (2.0 * math.pi))
        return DetectorParams(t_amp=t_amp, chi=chi, g_l=g, g_r=g, v=v, temp=temp)


def _as_output(values: np.ndarray) -> float | np.ndarray:
    return float(values) if np.ndim(values) == 0 else values


def kernel(x: float | np.ndarray, temp: float) -> float | np.ndarray:
    if temp < 0:
        raise ValueError(f"temperature must be >= 0, got {temp}")
    x_arr = np.asarray(x, dtype=float)
    if temp == 0.0:
        return _as_output(np.where(x_arr > 0, x_arr, 0.0))

    y = x_arr / temp
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        direct = x_arr / -np.expm1(-y)
    series = temp + 0.5 * x_arr + x_arr * x_arr / (12.0 * temp)
    out = np.where(np.abs(y) < SERIES_CUTOFF, series, direct)
    # exp overflow for x << -T gives -0.0 / nan-free zeros; clamp the sign.
    return _as_output(np.abs(out))


def stable_coth(y: float | np.ndarray) -> float | np.ndarray:
    y_arr = np.asarray(y, dtype=float)
    a = np.abs(y_arr)
    if np.any(a == 0):
        raise ValueError("coth is singular at 0")
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        direct = 1.0 + 2.0 / np.expm1(2.0 * a)
        series = 1.0 / a + a / 3.0
    out = np.sign(y_arr) * np.where(a < SERIES_CUTOFF, series, direct)
    return _as_output(out)


def _energy_argument(sign: Sign, lam: float, v: float) -> float:
    if sign == "+":
        return -lam - v
    if sign == "-":
        return -lam + v
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def c_tilde(sign: Sign, lam: float, d: DetectorParams) -> float:
    """Reservoir spectrum C~(+/-) at Liouvillian eigenvalue ``lam``; '-' is forward tunnelling."""
    return d.eta * kernel(_energy_argument(sign, lam, d.v), d.temp)


def c_tilde_sum(lam: float, d: DetectorParams) -> float:
    return c_tilde("+", lam, d) + c_tilde("-", lam, d)


def x_coth(u: float | np.ndarray, temp: float) -> float | np.ndarray:
    """``u * coth(u / 2T)``, even in ``u``, equal to ``2T`` at ``u = 0`` and ``|u|`` at ``T = 0``."""
    u_arr = np.abs(np.asarray(u, dtype=float))
    if temp == 0.0:
        return _as_output(u_arr)
    y = u_arr / (2.0 * temp)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        direct = u_arr * (1.0 + 2.0 / np.expm1(2.0 * y))
    series = 2.0 * temp + u_arr * u_arr / (6.0 * temp)
    return _as_output(np.where(y < SERIES_CUTOFF, series, direct))


def f_pm(sign: Sign, delta: float, v: float, temp: float) -> float:
    if temp < 0:
        raise ValueError(f"temperature must be >= 0, got {temp}")
    if sign == "+":
        return float(x_coth(delta + v, temp))
    if sign == "-":
        return float(x_coth(delta - v, temp))
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def g_pm(sign: Sign, delta: float, v: float, temp: float) -> float:
    f_plus = f_pm("+", delta, v, temp)
    f_minus = f_pm("-", delta, v, temp)
    if sign == "+":
        return 0.5 * (f_plus + f_minus)
    if sign == "-":
        return 0.5 * (f_plus - f_minus)
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def x_coth_derivative(u: float, temp: float) -> float:
    """d/du of ``u * coth(u / 2T)``; used for the V -> 0 limit of G(-)/V."""
    if temp == 0.0:
        return float(np.sign(u))
    y = u / (2.0 * temp)
    if abs(y) < SERIES_CUTOFF:
        return u / (3.0 * temp)
    if abs(y) > 350.0:
        return float(np.sign(u))
    return float(stable_coth(y) - y / math.sinh(y) ** 2)
