"""Fixed-step propagation of the conditional hierarchy, N-hat, and the stationary state.

All propagation uses the classical fourth-order Runge-Kutta scheme with a fixed
step. For the small linear systems (rho alone, or the pair (rho, N-hat)) one RK4
step is the degree-4 Taylor polynomial of ``dt * A``; it is formed once and the
steps are applied in blocks of its precomputed powers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import linalg

from src.analytic.oracle import analytic_s0
from src.bath.spectrum import x_coth
from src.common.errors import ConfigError, NonUniqueSteadyStateError, TruncationOverflowError
from src.common.logging_utils import get_logger
from src.common.time_grid import TimeGrid
from src.dynamics.hierarchy import ConditionalHierarchy
from src.dynamics.model import MeasurementModel
from src.dynamics.superoperators import hierarchy_derivative
from src.observables.current import current

logger = get_logger(__name__)

LEAKAGE_LIMIT = 1e-6
TRACE_DRIFT_LIMIT = 1e-8
POSITIVITY_FLOOR = -1e-8
NULL_TOL = 1e-10
BLOCK = 256


@dataclass(frozen=True)
class SolverConfig:
    dt: float = 0.0
    t_final: float = 0.0
    n_max: int = 0
    steady_tol: float = 1e-10
    record_every: int = 1

    def __post_init__(self) -> None:
        if self.dt < 0 or self.t_final < 0:
            raise ConfigError("solver dt and t_final must be >= 0 (0 selects the automatic value)")
        if self.dt > 0 and 0 < self.t_final < self.dt:
            raise ConfigError(f"t_final={self.t_final} must be at least dt={self.dt}")
        if self.n_max < 0:
            raise ConfigError(f"solver n_max must be >= 0, got {self.n_max}")
        if self.record_every < 0:
            raise ConfigError(f"solver record_every must be >= 0, got {self.record_every}")


def auto_dt(model: MeasurementModel) -> float:
    fastest = model.fastest_rate
    dt = 0.02 / model.delta
    if fastest > 0:
        dt = min(dt, 0.02 / fastest)
    return dt


def auto_t_final(model: MeasurementModel) -> float:
    rates = model.decay_rates()
    if rates.size == 0:
        return 50.0 / model.delta
    return 25.0 / float(rates[0])


def time_grid(model: MeasurementModel, cfg: SolverConfig) -> TimeGrid:
    dt = cfg.dt if cfg.dt > 0 else auto_dt(model)
    t_final = cfg.t_final if cfg.t_final > 0 else auto_t_final(model)
    grid = TimeGrid.from_horizon(dt, max(t_final, dt))
    logger.debug("time grid: dt=%.3g, t_final=%.3g, steps=%d", grid.dt, grid.t_final, grid.n_steps)
    return grid


def auto_count_window(model: MeasurementModel, t_final: float, rho0: np.ndarray | None = None) -> tuple[int, int]:
    """(n_min, n_max) covering the mean drift plus eight standard deviations either side."""
    try:
        i_bar = current(steady_state(model), model.ops)
    except NonUniqueSteadyStateError:
        reference = rho0 if rho0 is not None else np.diag([0.0, 1.0]).astype(complex)
        i_bar = current(reference, model.ops)

    d = model.detector
    if model.basis.is_symmetric and d.v >= 0 and d.chi != 0:
        s0 = analytic_s0(d, model.basis)
    else:
        q_max = model.coupling.max_abs_eigenvalue
        s0 = 2.0 * d.eta * q_max * q_max * float(x_coth(d.v, d.temp))

    spread = 8.0 * math.sqrt(max(s0, 0.0) * t_final)
    n_max = max(0, math.ceil(i_bar * t_final + spread + 20))
    n_min = min(0, math.floor(i_bar * t_final - spread - 20))
    return n_min, n_max


def steady_state(model: MeasurementModel, tol: float = 1e-10) -> np.ndarray:
    """Unique trace-one null vector of the unconditional generator."""
    generator = model.liouvillian
    _, singular, vh = linalg.svd(generator)
    scale = max(float(singular[0]), 1e-300)
    null_dim = int(np.sum(singular < NULL_TOL * scale))
    if null_dim != 1:
        raise NonUniqueSteadyStateError(
            f"generator null space has dimension {null_dim}; the stationary state is not unique"
        )
    rho = vh[-1].conj().reshape(2, 2)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)

    residual = float(np.linalg.norm(generator @ rho.reshape(4)))
    if residual > tol * scale:
        logger.warning("steady state residual %.3g exceeds tolerance %.3g", residual, tol * scale)
    _check_positivity(rho, "steady state")
    return rho


def _smallest_eigenvalue(rho: np.ndarray) -> float:
    """Smaller eigenvalue of the Hermitian part of a 2x2 matrix."""
    a = float(np.real(rho[0, 0]))
    d = float(np.real(rho[1, 1]))
    b = 0.5 * (rho[0, 1] + np.conj(rho[1, 0]))
    return 0.5 * (a + d) - math.sqrt(0.25 * (a - d) ** 2 + float(np.abs(b)) ** 2)


def _check_positivity(rho: np.ndarray, label: str) -> float:
    smallest = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if smallest < POSITIVITY_FLOOR:
        logger.warning("%s: smallest eigenvalue %.3g is below %.0e", label, smallest, POSITIVITY_FLOOR)
    return smallest


def rk4_amplification(generator: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of dy/dt = A y, as a matrix."""
    step = dt * generator
    identity = np.eye(generator.shape[0], dtype=complex)
    term = identity.copy()
    total = identity.copy()
    for order in range(1, 5):
        term = term @ step / order
        total = total + term
    return total


def _propagate_linear(generator: np.ndarray, y0: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """States at every grid point, shape (n_steps + 1, dim)."""
    amplification = rk4_amplification(generator, grid.dt)
    dim = generator.shape[0]
    block = min(BLOCK, grid.n_steps)
    powers = np.empty((block, dim, dim), dtype=complex)
    powers[0] = amplification
    for j in range(1, block):
        powers[j] = powers[j - 1] @ amplification

    states = np.empty((grid.n_steps + 1, dim), dtype=complex)
    states[0] = y0
    k = 0
    while k < grid.n_steps:
        count = min(block, grid.n_steps - k)
        states[k + 1 : k + 1 + count] = powers[:count] @ states[k]
        k += count
    return states


@dataclass(frozen=True)
class UnconditionalSeries:
    times: np.ndarray
    rho: np.ndarray
    min_eigenvalue: float

    @property
    def excited_population(self) -> np.ndarray:
        return np.real(self.rho[:, 0, 0])

    @property
    def coherence_magnitude(self) -> np.ndarray:
        return np.abs(self.rho[:, 0, 1])


@dataclass(frozen=True)
class AuxiliarySeries:
    times: np.ndarray
    nhat: np.ndarray
    rho: np.ndarray

    def mean_counts(self) -> np.ndarray:
        return np.real(np.trace(self.nhat, axis1=1, axis2=2))


@dataclass(frozen=True)
class HierarchySeries:
    times: np.ndarray
    entries: np.ndarray
    n_min: int
    max_trace_drift: float
    leakage: float
    min_eigenvalue: float
    max_hermiticity_error: float

    @property
    def counts(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + self.entries.shape[1])

    def at(self, index: int) -> ConditionalHierarchy:
        return ConditionalHierarchy(entries=self.entries[index], n_min=self.n_min)

    def probabilities(self) -> np.ndarray:
        return np.real(np.trace(self.entries, axis1=2, axis2=3))

    def total_trace(self) -> np.ndarray:
        return self.probabilities().sum(axis=1)

    def mean_counts(self) -> np.ndarray:
        return self.probabilities() @ self.counts.astype(float)

    def second_moments(self) -> np.ndarray:
        counts = self.counts.astype(float)
        return self.probabilities() @ (counts * counts)

    def variances(self) -> np.ndarray:
        mean = self.mean_counts()
        return self.second_moments() - mean * mean

    def unconditional(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def auxiliary(self) -> np.ndarray:
        return np.tensordot(self.entries, self.counts.astype(float), axes=(1, 0))


def evolve_unconditional(rho0: np.ndarray, cfg: SolverConfig, model: MeasurementModel) -> UnconditionalSeries:
    grid = time_grid(model, cfg)
    states = _propagate_linear(model.liouvillian, np.asarray(rho0, dtype=complex).reshape(4), grid)
    keep = grid.record_indices(cfg.record_every)
    rho = states[keep].reshape(-1, 2, 2)
    hermitian = 0.5 * (rho + np.conj(np.swapaxes(rho, 1, 2)))
    smallest = float(np.min(np.linalg.eigvalsh(hermitian)))
    if smallest < POSITIVITY_FLOOR:
        logger.warning("unconditional evolution: smallest eigenvalue %.3g is below %.0e", smallest, POSITIVITY_FLOOR)
    return UnconditionalSeries(times=grid.times[keep], rho=rho, min_eigenvalue=smallest)


def evolve_auxiliary(
    rho0: np.ndarray,
    cfg: SolverConfig,
    model: MeasurementModel,
) -> AuxiliarySeries:
    """Propagate (rho, N-hat) jointly from (rho0, 0); N-hat shares the generator of rho."""
    generator = np.zeros((8, 8), dtype=complex)
    generator[:4, :4] = model.liouvillian
    generator[4:, 4:] = model.liouvillian
    generator[4:, :4] = model.source

    y0 = np.zeros(8, dtype=complex)
    y0[:4] = np.asarray(rho0, dtype=complex).reshape(4)
    grid = time_grid(model, cfg)
    states = _propagate_linear(generator, y0, grid)
    keep = grid.record_indices(cfg.record_every)
    states = states[keep]
    return AuxiliarySeries(
        times=grid.times[keep],
        nhat=states[:, 4:].reshape(-1, 2, 2),
        rho=states[:, :4].reshape(-1, 2, 2),
    )


def _rk4_step(
    entries: np.ndarray,
    dt: float,
    derivative: Callable[[np.ndarray], np.ndarray],
) -> np.ndarray:
    k1 = derivative(entries)
    k2 = derivative(entries + 0.5 * dt * k1)
    k3 = derivative(entries + 0.5 * dt * k2)
    k4 = derivative(entries + dt * k3)
    return entries + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_conditional(
    init: ConditionalHierarchy | np.ndarray,
    cfg: SolverConfig,
    model: MeasurementModel,
) -> HierarchySeries:
    """Propagate the n-resolved hierarchy.

    ``init`` is either a prepared hierarchy or a 2x2 density matrix placed at n = 0
    inside an automatically sized count window.
    """
    grid = time_grid(model, cfg)
    if isinstance(init, ConditionalHierarchy):
        hierarchy = init
    else:
        rho0 = np.asarray(init, dtype=complex)
        if cfg.n_max > 0:
            n_min, n_max = -cfg.n_max, cfg.n_max
        else:
            n_min, n_max = auto_count_window(model, grid.t_final, rho0)
        hierarchy = ConditionalHierarchy.initial(rho0, n_min=n_min, n_max=n_max)
    logger.debug("count window: n in [%d, %d]", hierarchy.n_min, hierarchy.n_max)

    ops = model.ops
    q = model.coupling.q
    h = model.hamiltonian

    def derivative(x: np.ndarray) -> np.ndarray:
        return hierarchy_derivative(x, ops, q, h)

    keep = set(grid.record_indices(cfg.record_every).tolist())
    recorded: list[np.ndarray] = [hierarchy.entries.copy()]
    initial_trace = hierarchy.total_trace()
    max_drift = 0.0
    leakage = 0.0
    min_eigenvalue = math.inf
    max_herm = 0.0
    entries = hierarchy.entries.astype(complex)
    for step in range(1, grid.n_steps + 1):
        entries = _rk4_step(entries, grid.dt, derivative)
        traces = np.real(np.trace(entries, axis1=1, axis2=2))
        leakage = max(leakage, abs(float(traces[0])), abs(float(traces[-1])))
        if leakage > LEAKAGE_LIMIT:
            raise TruncationOverflowError(
                f"probability {leakage:.3g} reached the count-window edge "
                f"[{hierarchy.n_min}, {hierarchy.n_max}] at t={step * grid.dt:.4g}; increase solver.n_max"
            )
        max_drift = max(max_drift, abs(float(traces.sum()) - initial_trace))
        max_herm = max(max_herm, float(np.max(np.abs(entries - np.conj(np.swapaxes(entries, 1, 2))))))
        min_eigenvalue = min(min_eigenvalue, _smallest_eigenvalue(entries.sum(axis=0)))
        if step in keep:
            recorded.append(entries.copy())

    # Mass lost through the absorbing edges counts as leakage.
    if max_drift > LEAKAGE_LIMIT:
        raise TruncationOverflowError(
            f"total probability changed by {max_drift:.3g} inside the count window "
            f"[{hierarchy.n_min}, {hierarchy.n_max}]; increase solver.n_max"
        )
    if max_drift > TRACE_DRIFT_LIMIT:
        logger.warning("hierarchy total trace drifted by %.3g", max_drift)
    if min_eigenvalue < POSITIVITY_FLOOR:
        logger.warning("hierarchy: smallest eigenvalue of rho %.3g is below %.0e", min_eigenvalue, POSITIVITY_FLOOR)

    return HierarchySeries(
        times=grid.times[sorted(keep)],
        entries=np.stack(recorded),
        n_min=hierarchy.n_min,
        max_trace_drift=max_drift,
        leakage=leakage,
        min_eigenvalue=min_eigenvalue if math.isfinite(min_eigenvalue) else 0.0,
        max_hermiticity_error=max_herm,
    )
