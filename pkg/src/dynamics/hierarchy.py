from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.common.errors import HierarchyLengthError


@dataclass(frozen=True)
class ConditionalHierarchy:
    """Density matrices rho^(n) conditioned on n tunnelled electrons, n_min <= n <= n_max.

    ``entries`` has shape ``(n_max - n_min + 1, 2, 2)``. Counts outside the window
    are treated as absorbing (zero) boundaries.
    """

    entries: np.ndarray
    n_min: int = 0

    def __post_init__(self) -> None:
        if self.entries.ndim != 3 or self.entries.shape[1:] != (2, 2):
            raise HierarchyLengthError(f"entries must have shape (N, 2, 2), got {self.entries.shape}")
        if self.n_min > 0:
            raise HierarchyLengthError(f"n_min must be <= 0, got {self.n_min}")
        if self.n_max < 0:
            raise HierarchyLengthError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def n_max(self) -> int:
        return self.n_min + self.entries.shape[0] - 1

    @property
    def counts(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    @staticmethod
    def initial(rho: np.ndarray, n_min: int, n_max: int) -> "ConditionalHierarchy":
        if n_max < 0:
            raise HierarchyLengthError(f"n_max must be >= 0, got {n_max}")
        if n_min > 0:
            raise HierarchyLengthError(f"n_min must be <= 0, got {n_min}")
        entries = np.zeros((n_max - n_min + 1, 2, 2), dtype=complex)
        entries[-n_min] = np.asarray(rho, dtype=complex)
        return ConditionalHierarchy(entries=entries, n_min=n_min)

    def entry(self, n: int) -> np.ndarray:
        if not self.n_min <= n <= self.n_max:
            return np.zeros((2, 2), dtype=complex)
        return self.entries[n - self.n_min]

    def probabilities(self) -> np.ndarray:
        return np.real(np.trace(self.entries, axis1=1, axis2=2))

    def total_trace(self) -> float:
        return float(self.probabilities().sum())

    def unconditional(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    def auxiliary(self) -> np.ndarray:
        """N-hat = sum_n n rho^(n)."""
        return np.tensordot(self.counts.astype(float), self.entries, axes=(0, 0))

    def mean_count(self) -> float:
        return float(self.counts @ self.probabilities())

    def second_moment(self) -> float:
        counts = self.counts.astype(float)
        return float((counts * counts) @ self.probabilities())

    def leakage(self) -> float:
        """Largest |trace| of the two boundary entries."""
        p = self.probabilities()
        return float(max(abs(p[0]), abs(p[-1])))
