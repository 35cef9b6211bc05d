from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class SpectrumComponents:
    s0: float
    s1: np.ndarray
    s2: np.ndarray


@dataclass(frozen=True)
class Spectrum:
    """S(omega) sampled on non-negative, increasing angular frequencies."""

    omegas: np.ndarray
    values: np.ndarray
    components: SpectrumComponents | None = None

    def __post_init__(self) -> None:
        if self.omegas.shape != self.values.shape:
            raise ValueError(f"omegas {self.omegas.shape} and values {self.values.shape} differ in shape")

    def at(self, omega: float) -> float:
        return float(np.interp(omega, self.omegas, self.values))

    @property
    def plateau(self) -> float:
        return float(self.values[-1])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"omega": self.omegas, "s": self.values})
        if self.components is not None:
            frame["s0"] = self.components.s0
            frame["s1"] = self.components.s1
            frame["s2"] = self.components.s2
        return frame
