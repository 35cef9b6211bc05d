from __future__ import annotations

import dataclasses
import math
from pathlib import Path
from time import perf_counter

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.analytic.oracle import analytic_spectrum, stationary_current_symmetric
from src.common.logging_utils import get_logger
from src.dynamics.model import MeasurementModel
from src.dynamics.solver import (
    SolverConfig,
    evolve_conditional,
    evolve_unconditional,
    time_grid,
)
from src.observables.current import current
from src.observables.noise import Spectrum, macdonald_spectrum, peak_to_pedestal, stationary_reference
from src.qubit.model import from_local
from src.scenarios.config import RunConfig
from src.scenarios.writers import format_float, write_result_csv

logger = get_logger(__name__)

RELAX_ROWS = 2000
PNT_SLICES = 10


def initial_state(config: RunConfig, model: MeasurementModel) -> np.ndarray:
    name = config.initial_state
    if name == "steady":
        return stationary_reference(model, config.solver.steady_tol)
    if name == "excited":
        return np.diag([1.0, 0.0]).astype(complex)
    if name == "ground":
        return np.diag([0.0, 1.0]).astype(complex)
    occupied = np.diag([1.0, 0.0]) if name == "local_a" else np.diag([0.0, 1.0])
    return from_local(occupied, model.basis).astype(complex)


def _has_closed_form(config: RunConfig, model: MeasurementModel) -> bool:
    return model.basis.is_symmetric and not config.frozen_filter


def _recording(config: RunConfig, model: MeasurementModel, target: int) -> SolverConfig:
    if config.solver.record_every > 0:
        return config.solver
    n_steps = time_grid(model, config.solver).n_steps
    return dataclasses.replace(config.solver, record_every=max(1, math.ceil(n_steps / target)))


def _thin(times: np.ndarray, every: int) -> np.ndarray:
    """Row indices kept for output; the last row is always written."""
    indices = np.arange(0, len(times), max(1, every))
    if indices[-1] != len(times) - 1:
        indices = np.append(indices, len(times) - 1)
    return indices


def compute_spectrum(config: RunConfig) -> tuple[Spectrum, Spectrum | None, float]:
    """Numeric spectrum, the closed form when available, and the elapsed seconds."""
    started = perf_counter()
    model = config.model()
    rho0 = None if config.initial_state == "steady" else initial_state(config, model)
    numeric = macdonald_spectrum(model, config.solver, config.omegas(), rho0=rho0)
    analytic = None
    if _has_closed_form(config, model) and config.detector.v >= 0:
        analytic = analytic_spectrum(config.detector, model.basis, config.omegas())
    return numeric, analytic, perf_counter() - started


def spectrum_ratios(config: RunConfig, numeric: Spectrum, analytic: Spectrum | None) -> dict[str, float]:
    """Peak-to-pedestal ratios against the plateau and, when a closed form exists, against S0."""
    delta = config.model().delta
    ratios = {"peak_to_pedestal_plateau": peak_to_pedestal(numeric, delta)}
    if analytic is not None and analytic.components is not None:
        s0 = analytic.components.s0
        ratios["peak_to_pedestal_s0"] = peak_to_pedestal(numeric, delta, pedestal=s0)
        ratios["analytic_peak_to_pedestal"] = peak_to_pedestal(analytic, delta, pedestal=s0)
    return ratios


def compute_current(config: RunConfig) -> dict[str, float]:
    model = config.model()
    rho = stationary_reference(model, config.solver.steady_tol)
    analytic = stationary_current_symmetric(config.detector, model.basis) if _has_closed_form(config, model) else math.nan
    d = config.detector
    return {
        "epsilon": config.qubit.epsilon,
        "tunneling": config.qubit.omega,
        "t_amp": d.t_amp,
        "chi": d.chi,
        "g_l": d.g_l,
        "g_r": d.g_r,
        "v": d.v,
        "temp": d.temp,
        "i_numeric": current(rho, model.ops),
        "i_analytic": analytic,
    }


class ScenarioPipeline:
    def __init__(self, config: RunConfig, out_dir: Path, threads: int = 1) -> None:
        self.config = config
        self.out_dir = out_dir
        self.threads = max(1, int(threads))

    @property
    def output_path(self) -> Path:
        return self.out_dir / self.config.output_path

    def run(self) -> Path:
        scenario = self.config.scenario
        self._log(f"Scenario start: {scenario}")
        started = perf_counter()
        runner = {
            "spectrum": self._run_spectrum,
            "sweep": self._run_sweep,
            "pnt": self._run_pnt,
            "current": self._run_current,
            "relax": self._run_relax,
        }[scenario]
        path = runner()
        self._log(f"Scenario done: {scenario}, wrote {path}, took={perf_counter() - started:.1f}s")
        return path

    @staticmethod
    def _log(message: str) -> None:
        logger.info(message)

    def _sweep_configs(self) -> list[RunConfig]:
        axis = self.config.sweep_axis
        if axis is None:
            return [self.config]
        return [self.config.with_override(axis, value) for value in self.config.sweep_values]

    def _map(self, func, configs: list[RunConfig]) -> list:
        if self.threads == 1 or len(configs) == 1:
            return [func(config) for config in configs]
        # joblib returns results in submission order.
        return Parallel(n_jobs=self.threads)(delayed(func)(config) for config in configs)

    def _write(self, frame: pd.DataFrame, results: dict[str, float] | None = None) -> Path:
        return write_result_csv(self.output_path, frame, self.config.header_items(), results)

    def _run_spectrum(self) -> Path:
        numeric, analytic, _ = compute_spectrum(self.config)
        frame = pd.DataFrame({"omega": numeric.omegas, "s_numeric": numeric.values})
        results = spectrum_ratios(self.config, numeric, analytic)
        if analytic is not None and analytic.components is not None:
            components = analytic.components
            frame["s0"] = components.s0
            frame["s1"] = components.s1
            frame["s2"] = components.s2
            frame["s_analytic_total"] = analytic.values
        else:
            for column in ("s0", "s1", "s2", "s_analytic_total"):
                frame[column] = np.nan
        return self._write(frame, results)

    def _run_sweep(self) -> Path:
        points = self._sweep_configs()
        twins = [dataclasses.replace(point, frozen_filter=True) for point in points] if self._with_twins() else []
        outputs = self._map(compute_spectrum, points + twins)
        values = self.config.sweep_values
        blocks = []
        results: dict[str, float] = {}
        for value, point, (numeric, analytic, took) in zip(values, points, outputs):
            self._log(f"Sweep point done: {self.config.sweep_axis}={value!r}, took={took:.1f}s")
            blocks.append(
                pd.DataFrame(
                    {
                        "sweep_value": np.full(numeric.omegas.shape, value),
                        "omega": numeric.omegas,
                        "s_numeric": numeric.values,
                    }
                )
            )
            for name, ratio in spectrum_ratios(point, numeric, analytic).items():
                results[f"{name}.{format_float(value)}"] = ratio
        for value, twin, (numeric, _, took) in zip(values, twins, outputs[len(points) :]):
            self._log(f"Frozen-filter point done: {self.config.sweep_axis}={value!r}, took={took:.1f}s")
            results[f"frozen_peak_to_pedestal_plateau.{format_float(value)}"] = peak_to_pedestal(
                numeric, twin.model().delta
            )
        return self._write(pd.concat(blocks, ignore_index=True), results)

    def _with_twins(self) -> bool:
        return self.config.frozen_twin and not self.config.frozen_filter

    def _run_pnt(self) -> Path:
        model = self.config.model()
        solver = _recording(self.config, model, PNT_SLICES)
        series = evolve_conditional(initial_state(self.config, model), solver, model)
        probabilities = series.probabilities()
        counts = series.counts
        rows = _thin(series.times, self.config.output_every)
        frame = pd.DataFrame(
            {
                "t": np.repeat(series.times[rows], len(counts)),
                "n": np.tile(counts, len(rows)),
                "p": probabilities[rows].reshape(-1),
            }
        )
        results = {
            "mean_count": float(series.mean_counts()[-1]),
            "variance": float(series.variances()[-1]),
            "max_trace_drift": series.max_trace_drift,
            "leakage": series.leakage,
        }
        return self._write(frame, results)

    def _run_current(self) -> Path:
        rows = self._map(compute_current, self._sweep_configs())
        return self._write(pd.DataFrame(rows))

    def _run_relax(self) -> Path:
        model = self.config.model()
        solver = _recording(self.config, model, RELAX_ROWS)
        series = evolve_unconditional(initial_state(self.config, model), solver, model)
        rows = _thin(series.times, self.config.output_every)
        frame = pd.DataFrame(
            {
                "t": series.times[rows],
                "p_excited": series.excited_population[rows],
                "coherence_magnitude": series.coherence_magnitude[rows],
            }
        )
        results = {"p_excited_final": float(series.excited_population[-1]), "min_eigenvalue": series.min_eigenvalue}
        return self._write(frame, results)
