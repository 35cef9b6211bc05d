from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.bath.spectrum import DetectorParams, kernel
from src.dynamics.superoperators import (
    FilteredOperators,
    build_filtered,
    liouvillian_matrix,
    source_matrix,
)
from src.qubit.model import (
    CouplingOperator,
    EigenBasis,
    QubitParams,
    coupling_in_eigenbasis,
    diagonalize,
    hamiltonian,
)


@dataclass(frozen=True)
class MeasurementModel:
    """A charge qubit measured by a point contact, with derived operators cached."""

    qubit: QubitParams
    detector: DetectorParams
    frozen_filter: bool = False

    @cached_property
    def basis(self) -> EigenBasis:
        return diagonalize(self.qubit)

    @cached_property
    def coupling(self) -> CouplingOperator:
        return coupling_in_eigenbasis(self.basis, self.detector.t_amp, self.detector.chi)

    @cached_property
    def ops(self) -> FilteredOperators:
        return build_filtered(self.coupling, self.basis, self.detector, frozen=self.frozen_filter)

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        return hamiltonian(self.basis)

    @cached_property
    def liouvillian(self) -> np.ndarray:
        return liouvillian_matrix(self.ops, self.coupling, self.basis)

    @cached_property
    def source(self) -> np.ndarray:
        return source_matrix(self.ops)

    @property
    def delta(self) -> float:
        return self.basis.delta

    @property
    def kernel_max(self) -> float:
        """Largest thermal kernel value reached by any filtered element."""
        v = self.detector.v
        lams = np.array([0.0, self.delta, -self.delta])
        args = np.concatenate([-lams - v, -lams + v])
        return float(np.max(kernel(args, self.detector.temp)))

    @property
    def fastest_rate(self) -> float:
        q_max = self.coupling.max_abs_eigenvalue
        return self.detector.eta * q_max * q_max * self.kernel_max

    def decay_rates(self, tol: float = 1e-9) -> np.ndarray:
        """Non-zero decay rates -Re(lambda) of the unconditional generator, ascending."""
        eigenvalues = np.linalg.eigvals(self.liouvillian)
        scale = max(1.0, float(np.max(np.abs(eigenvalues))))
        rates = -np.real(eigenvalues)
        return np.sort(rates[rates > tol * scale])
