from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    n_steps: int

    @staticmethod
    def from_horizon(dt: float, t_final: float) -> "TimeGrid":
        """Uniform grid ending exactly at ``t_final`` with a step no larger than ``dt``."""
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        if t_final < dt:
            raise ValueError(f"t_final={t_final} must be at least dt={dt}")
        n_steps = max(1, math.ceil(t_final / dt - 1e-9))
        return TimeGrid(dt=t_final / n_steps, n_steps=n_steps)

    @property
    def t_final(self) -> float:
        return self.dt * self.n_steps

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1, dtype=float)

    def record_indices(self, every: int = 1) -> np.ndarray:
        """Step indices kept in a series; the final step is always included."""
        stride = max(1, int(every))
        indices = np.arange(0, self.n_steps + 1, stride)
        if indices[-1] != self.n_steps:
            indices = np.append(indices, self.n_steps)
        return indices
