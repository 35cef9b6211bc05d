"""Charge qubit (double quantum dot) and its coupling to the point-contact detector.

All dynamics run in the qubit eigenbasis ordered as ``(|1>, |0>)``: index 0 is the
excited state with energy ``+delta/2``, index 1 the ground state with ``-delta/2``.
The dot basis ``(|a>, |b>)`` only appears at the input/output boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.common.errors import ConfigError, DegenerateQubitError

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class QubitParams:
    epsilon: float
    omega: float

    def __post_init__(self) -> None:
        if self.omega < 0:
            raise ConfigError(f"qubit tunneling amplitude omega must be >= 0, got {self.omega}")
        if self.epsilon == 0 and self.omega == 0:
            raise DegenerateQubitError("degenerate qubit: epsilon = omega = 0 gives delta = 0")

    @staticmethod
    def from_angle(cos_theta: float, delta: float = 1.0) -> "QubitParams":
        if not -1.0 <= cos_theta <= 1.0:
            raise ConfigError(f"cos_theta must lie in [-1, 1], got {cos_theta}")
        sin_theta = math.sqrt(max(0.0, 1.0 - cos_theta * cos_theta))
        return QubitParams(epsilon=0.5 * delta * cos_theta, omega=0.5 * delta * sin_theta)

    def normalized(self) -> "QubitParams":
        """Same mixing angle, rescaled so that delta = 1."""
        delta = 2.0 * math.hypot(self.epsilon, self.omega)
        return QubitParams(epsilon=self.epsilon / delta, omega=self.omega / delta)


@dataclass(frozen=True)
class EigenBasis:
    delta: float
    theta: float

    @property
    def e1(self) -> float:
        return 0.5 * self.delta

    @property
    def e0(self) -> float:
        return -0.5 * self.delta

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.e1, self.e0])

    @property
    def cos_theta(self) -> float:
        return math.cos(self.theta)

    @property
    def sin_theta(self) -> float:
        return math.sin(self.theta)

    @property
    def is_symmetric(self) -> bool:
        return abs(self.cos_theta) < SYMMETRY_TOL

    @property
    def local_vectors(self) -> np.ndarray:
        """Rows are |1> and |0> written in the dot basis (|a>, |b>)."""
        c = math.cos(0.5 * self.theta)
        s = math.sin(0.5 * self.theta)
        return np.array([[c, s], [s, -c]])

    @property
    def dot_a(self) -> np.ndarray:
        """|a> expressed in the eigenbasis."""
        return np.array([math.cos(0.5 * self.theta), math.sin(0.5 * self.theta)])


@dataclass(frozen=True)
class CouplingOperator:
    q: np.ndarray
    t_amp: float
    chi: float

    @property
    def max_abs_eigenvalue(self) -> float:
        return max(abs(self.t_amp), abs(self.t_amp + self.chi))


def diagonalize(p: QubitParams) -> EigenBasis:
    delta = 2.0 * math.hypot(p.epsilon, p.omega)
    if delta <= 0:
        raise DegenerateQubitError("degenerate qubit: delta must be positive")
    # omega >= 0 pins theta to [0, pi].
    theta = math.atan2(2.0 * p.omega, 2.0 * p.epsilon)
    return EigenBasis(delta=delta, theta=theta)


def coupling_in_eigenbasis(basis: EigenBasis, t_amp: float, chi: float) -> CouplingOperator:
    v = basis.dot_a
    q = t_amp * np.eye(2) + chi * np.outer(v, v)
    return CouplingOperator(q=q, t_amp=float(t_amp), chi=float(chi))


def hamiltonian(basis: EigenBasis) -> np.ndarray:
    return np.diag(basis.energies).astype(complex)


def to_local(matrix: np.ndarray, basis: EigenBasis) -> np.ndarray:
    u = basis.local_vectors
    return u.T @ matrix @ u


def from_local(matrix: np.ndarray, basis: EigenBasis) -> np.ndarray:
    u = basis.local_vectors
    return u @ matrix @ u.T


def local_hamiltonian(p: QubitParams) -> np.ndarray:
    return np.array([[p.epsilon, p.omega], [p.omega, -p.epsilon]], dtype=float)
