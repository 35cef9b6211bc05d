from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from src.bath.spectrum import DetectorParams
from src.common.errors import ConfigError
from src.common.settings import env_overrides, read_keyvalue_file
from src.dynamics.model import MeasurementModel
from src.dynamics.solver import SolverConfig
from src.qubit.model import QubitParams

SCENARIOS = ("spectrum", "sweep", "pnt", "current", "relax")
INITIAL_STATES = ("steady", "ground", "excited", "local_a", "local_b")

DEFAULTS: dict[str, str] = {
    "qubit.epsilon": "0.0",
    "qubit.omega": "0.5",
    "qubit.cos_theta": "",
    "qubit.normalize": "true",
    "detector.t_amp": "",
    "detector.chi": "0.1",
    "detector.g_l": "2.5",
    "detector.g_r": "2.5",
    "detector.v": "2.0",
    "detector.temp": "1.0",
    "detector.frozen_filter": "false",
    "solver.dt": "0",
    "solver.t_final": "0",
    "solver.n_max": "0",
    "solver.record_every": "0",
    "solver.steady_tol": "1e-10",
    "omega.min": "0",
    "omega.max": "6",
    "omega.count": "241",
    "sweep.axis": "",
    "sweep.values": "",
    "sweep.frozen_twin": "false",
    "initial.state": "",
    "output.path": "",
    "output.every": "0",
}
KNOWN_KEYS = frozenset(DEFAULTS) | {"scenario"}

SWEEPABLE = (
    "qubit.epsilon",
    "qubit.omega",
    "qubit.cos_theta",
    "detector.t_amp",
    "detector.chi",
    "detector.g_l",
    "detector.g_r",
    "detector.v",
    "detector.temp",
)

DEFAULT_INITIAL = {
    "spectrum": "steady",
    "sweep": "steady",
    "pnt": "steady",
    "current": "steady",
    "relax": "excited",
}


def _float(values: Mapping[str, str], key: str) -> float:
    raw = values[key]
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc


def _int(values: Mapping[str, str], key: str) -> int:
    raw = values[key]
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc


def _bool(values: Mapping[str, str], key: str) -> bool:
    raw = values[key].strip().lower()
    if raw in {"true", "1", "yes", "on"}:
        return True
    if raw in {"false", "0", "no", "off"}:
        return False
    raise ConfigError(f"{key}: expected true/false, got {values[key]!r}")


def _float_list(raw: str, key: str) -> tuple[float, ...]:
    items = [item.strip() for item in raw.split(",") if item.strip()]
    try:
        return tuple(float(item) for item in items)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a comma-separated list of numbers, got {raw!r}") from exc


@dataclass(frozen=True)
class OmegaGrid:
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError(f"omega.count must be >= 1, got {self.count}")
        if self.start < 0:
            raise ConfigError(f"omega.min must be >= 0, got {self.start}")
        if self.count > 1 and self.stop <= self.start:
            raise ConfigError(f"omega grid must be increasing, got min={self.start}, max={self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    qubit: QubitParams
    detector: DetectorParams
    frozen_filter: bool
    solver: SolverConfig
    omega_grid: OmegaGrid
    sweep_axis: str | None
    sweep_values: tuple[float, ...]
    frozen_twin: bool
    initial_state: str
    output_path: str
    output_every: int
    values: dict[str, str] = field(repr=False, compare=False)

    @staticmethod
    def from_values(raw: Mapping[str, str]) -> "RunConfig":
        unknown = sorted(set(raw) - KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values = {**DEFAULTS, **{k: str(v).strip() for k, v in raw.items()}}
        given = {k for k, v in raw.items() if str(v).strip()}

        scenario = values.get("scenario", "").lower()
        if scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {', '.join(SCENARIOS)}, got {scenario!r}")
        if not values["detector.t_amp"]:
            raise ConfigError("detector.t_amp is required")

        if values["qubit.cos_theta"]:
            clashing = sorted(given & {"qubit.epsilon", "qubit.omega"})
            if clashing:
                raise ConfigError(f"qubit.cos_theta fixes the qubit; remove {', '.join(clashing)}")
            qubit = QubitParams.from_angle(_float(values, "qubit.cos_theta"))
        else:
            qubit = QubitParams(epsilon=_float(values, "qubit.epsilon"), omega=_float(values, "qubit.omega"))
            if _bool(values, "qubit.normalize"):
                qubit = qubit.normalized()

        detector = DetectorParams(
            t_amp=_float(values, "detector.t_amp"),
            chi=_float(values, "detector.chi"),
            g_l=_float(values, "detector.g_l"),
            g_r=_float(values, "detector.g_r"),
            v=_float(values, "detector.v"),
            temp=_float(values, "detector.temp"),
        )
        solver = SolverConfig(
            dt=_float(values, "solver.dt"),
            t_final=_float(values, "solver.t_final"),
            n_max=_int(values, "solver.n_max"),
            steady_tol=_float(values, "solver.steady_tol"),
            record_every=_int(values, "solver.record_every"),
        )
        omega_grid = OmegaGrid(
            start=_float(values, "omega.min"),
            stop=_float(values, "omega.max"),
            count=_int(values, "omega.count"),
        )

        sweep_axis = values["sweep.axis"].lower() or None
        sweep_values = _float_list(values["sweep.values"], "sweep.values")
        if scenario == "sweep" and sweep_axis is None:
            sweep_axis = "detector.v"
        if sweep_axis is not None:
            if sweep_axis not in SWEEPABLE:
                raise ConfigError(f"sweep.axis must be one of {', '.join(SWEEPABLE)}, got {sweep_axis!r}")
            if not sweep_values:
                raise ConfigError("sweep.values must list at least one value")
            if any(b <= a for a, b in zip(sweep_values, sweep_values[1:])):
                raise ConfigError("sweep.values must be strictly increasing")
            if values["qubit.cos_theta"] and sweep_axis in {"qubit.epsilon", "qubit.omega"}:
                raise ConfigError(f"sweep.axis={sweep_axis} has no effect while qubit.cos_theta is set")
        elif sweep_values:
            raise ConfigError("sweep.values given without sweep.axis")

        initial_state = values["initial.state"].lower() or DEFAULT_INITIAL[scenario]
        if initial_state not in INITIAL_STATES:
            raise ConfigError(f"initial.state must be one of {', '.join(INITIAL_STATES)}, got {initial_state!r}")

        output_every = _int(values, "output.every")
        if output_every < 0:
            raise ConfigError(f"output.every must be >= 0, got {output_every}")

        return RunConfig(
            scenario=scenario,
            qubit=qubit,
            detector=detector,
            frozen_filter=_bool(values, "detector.frozen_filter"),
            solver=solver,
            omega_grid=omega_grid,
            sweep_axis=sweep_axis,
            sweep_values=sweep_values,
            frozen_twin=_bool(values, "sweep.frozen_twin"),
            initial_state=initial_state,
            output_path=values["output.path"] or f"{scenario}.csv",
            output_every=output_every,
            values=values,
        )

    @staticmethod
    def load(path: Path, environ: Mapping[str, str] | None = None) -> "RunConfig":
        values = read_keyvalue_file(path)
        values.update(env_overrides(environ))
        return RunConfig.from_values(values)

    def with_override(self, key: str, value: float) -> "RunConfig":
        """Copy with one numeric parameter replaced; the sweep block is dropped."""
        updated = {k: v for k, v in self.values.items() if v != DEFAULTS.get(k)}
        updated[key] = repr(float(value))
        updated["sweep.axis"] = ""
        updated["sweep.values"] = ""
        if updated["scenario"] == "sweep":
            updated["scenario"] = "spectrum"
        return RunConfig.from_values(updated)

    def model(self) -> MeasurementModel:
        return MeasurementModel(qubit=self.qubit, detector=self.detector, frozen_filter=self.frozen_filter)

    def omegas(self) -> np.ndarray:
        return self.omega_grid.values()

    def header_items(self) -> dict[str, str]:
        """Every resolved parameter, for the provenance header of result files."""
        return {key: value for key, value in sorted(self.values.items()) if value != ""}
