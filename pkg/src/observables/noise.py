"""Detector noise spectrum from the growth of the counted-charge variance.

S(omega) = 2 omega int_0^inf sin(omega t) g(t) dt with g = d<n^2>/dt - 2 I^2 t. The
constant g_inf that g(t) settles to is split off and contributes 2 g_inf; only the
decaying remainder is sine-transformed on the solver's time grid.
"""
from __future__ import annotations

import dataclasses

import numpy as np
from scipy.integrate import simpson

from src.common.errors import NonDecayingRemainderError, NonUniqueSteadyStateError
from src.common.logging_utils import get_logger
from src.dynamics.model import MeasurementModel
from src.dynamics.solver import SolverConfig, evolve_auxiliary, steady_state
from src.observables.current import current, dn2_dt
from src.observables.spectrum import Spectrum, SpectrumComponents

__all__ = [
    "Spectrum",
    "SpectrumComponents",
    "macdonald_spectrum",
    "peak_to_pedestal",
    "stationary_reference",
    "tail_constant",
]

logger = get_logger(__name__)

TAIL_FRACTION = 0.2
REMAINDER_TOL = 1e-4
CHUNK_ELEMENTS = 2_000_000


def stationary_reference(model: MeasurementModel, tol: float = 1e-10) -> np.ndarray:
    """Stationary state, or the ground state when the generator leaves it undetermined but stationary."""
    try:
        return steady_state(model, tol)
    except NonUniqueSteadyStateError:
        ground = np.diag([0.0, 1.0]).astype(complex)
        residual = float(np.linalg.norm(model.liouvillian @ ground.reshape(4)))
        if residual > 1e-12 * max(1.0, float(np.max(np.abs(model.liouvillian)))):
            raise
        logger.warning("stationary state is not unique; using the ground state")
        return ground


def tail_constant(times: np.ndarray, g: np.ndarray, delta: float) -> float:
    """Mean of g over the final stretch of the run, after checking it has stopped moving."""
    start = int(np.floor((1.0 - TAIL_FRACTION) * (len(times) - 1)))
    t_tail = times[start:]
    g_tail = g[start:]
    g_inf = float(np.mean(g_tail))
    scale = max(abs(g_inf), abs(float(g[0])), 1e-300)

    slope = float(np.polyfit(t_tail - t_tail[0], g_tail, 1)[0]) if len(t_tail) > 1 else 0.0
    spread = float(np.max(np.abs(g_tail - g_inf)))
    if abs(slope) > REMAINDER_TOL * scale * delta or spread > REMAINDER_TOL * scale:
        raise NonDecayingRemainderError(
            f"g(t) has not settled by t={times[-1]:.4g} (tail slope {slope:.3g}, spread {spread:.3g}); "
            "increase solver.t_final"
        )
    return g_inf


def _sine_transform(times: np.ndarray, remainder: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    dt = float(times[1] - times[0])
    out = np.empty_like(omegas)
    chunk = max(1, CHUNK_ELEMENTS // len(times))
    for start in range(0, len(omegas), chunk):
        block = omegas[start : start + chunk]
        integrand = np.sin(np.outer(block, times)) * remainder
        out[start : start + chunk] = simpson(integrand, dx=dt, axis=-1)
    return out


def macdonald_spectrum(
    model: MeasurementModel,
    cfg: SolverConfig,
    omegas: np.ndarray,
    rho0: np.ndarray | None = None,
) -> Spectrum:
    omegas = np.asarray(omegas, dtype=float)
    rho_start = stationary_reference(model, cfg.steady_tol) if rho0 is None else np.asarray(rho0, dtype=complex)
    ops = model.ops
    i_bar = current(rho_start, ops)

    series = evolve_auxiliary(rho_start, dataclasses.replace(cfg, record_every=1), model)
    times = series.times
    g = dn2_dt(series.nhat, series.rho, ops) - 2.0 * i_bar * i_bar * times
    g_inf = tail_constant(times, g, model.delta)
    logger.debug("MacDonald integrand: g(0)=%.6g, g_inf=%.6g, I=%.6g", g[0], g_inf, i_bar)

    values = 2.0 * g_inf + 2.0 * omegas * _sine_transform(times, g - g_inf, omegas)
    return Spectrum(omegas=omegas, values=values)


def peak_to_pedestal(
    s: Spectrum,
    delta: float,
    pedestal: float | None = None,
    window: float = 0.0,
) -> float:
    """(S(delta) - pedestal) / pedestal.

    ``window > 0`` takes the largest sample with |omega - delta| <= window instead of
    interpolating at delta. The pedestal defaults to the high-frequency plateau.
    """
    base = s.plateau if pedestal is None else float(pedestal)
    if base == 0:
        raise ValueError("pedestal is zero; the ratio is undefined")
    peak = s.at(delta)
    if window > 0:
        near = np.abs(s.omegas - delta) <= window
        if np.any(near):
            peak = float(np.max(s.values[near]))
    return (peak - base) / base
