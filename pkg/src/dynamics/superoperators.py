"""Spectrally filtered coupling operators and master-equation right-hand sides.

Sign convention: the eigenoperator |i><j| of L(X) = [H_s, X] carries eigenvalue
E_i - E_j, so element (i, j) of Q is filtered at that value. With this choice the
V = 0 stationary state is the Gibbs state.

Every right-hand side is written in its complex-linear form (the "h.c." partner
of ``A X B`` is ``B^dag X A^dag``) so that it also acts correctly on the
non-Hermitian basis matrices used to assemble the 4x4 generator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.bath.spectrum import DetectorParams, c_tilde
from src.dynamics.hierarchy import ConditionalHierarchy
from src.qubit.model import CouplingOperator, EigenBasis, hamiltonian


@dataclass(frozen=True)
class FilteredOperators:
    coupling: CouplingOperator
    q_plus: np.ndarray
    q_minus: np.ndarray

    @property
    def q(self) -> np.ndarray:
        return self.coupling.q

    @property
    def q_tilde(self) -> np.ndarray:
        return self.q_plus + self.q_minus

    @property
    def q_bar(self) -> np.ndarray:
        return self.q_minus - self.q_plus


def build_filtered(
    q: CouplingOperator,
    basis: EigenBasis,
    d: DetectorParams,
    frozen: bool = False,
) -> FilteredOperators:
    """Filter Q element-wise; ``frozen=True`` evaluates every element at lambda = 0 (high-voltage limit)."""
    energies = basis.energies
    q_plus = np.zeros((2, 2), dtype=complex)
    q_minus = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            lam = 0.0 if frozen else energies[i] - energies[j]
            q_plus[i, j] = c_tilde("+", lam, d) * q.q[i, j]
            q_minus[i, j] = c_tilde("-", lam, d) * q.q[i, j]
    return FilteredOperators(coupling=q, q_plus=q_plus, q_minus=q_minus)


def _dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _sandwich(left: np.ndarray, x: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``left X Q + Q X left^dag``, broadcasting over leading axes of ``x``."""
    return left @ x @ q + q @ x @ _dag(left)


def _coherent(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    return -1j * (h @ x - x @ h)


def _loss(x: np.ndarray, ops: FilteredOperators, q: np.ndarray) -> np.ndarray:
    qq = q @ ops.q_tilde
    return -0.5 * (qq @ x + x @ _dag(qq))


def hierarchy_derivative(
    entries: np.ndarray,
    ops: FilteredOperators,
    q: np.ndarray,
    h: np.ndarray,
) -> np.ndarray:
    """Stacked right-hand side for ``entries`` of shape (N, 2, 2)."""
    out = _coherent(entries, h) + _loss(entries, ops, q)
    forward = 0.5 * _sandwich(ops.q_minus, entries, q)
    backward = 0.5 * _sandwich(ops.q_plus, entries, q)
    out[1:] += forward[:-1]
    out[:-1] += backward[1:]
    return out


def conditional_rhs(
    h: ConditionalHierarchy,
    ops: FilteredOperators,
    q: CouplingOperator,
    basis: EigenBasis,
) -> ConditionalHierarchy:
    derivative = hierarchy_derivative(h.entries, ops, q.q, hamiltonian(basis))
    return ConditionalHierarchy(entries=derivative, n_min=h.n_min)


def unconditional_rhs(
    rho: np.ndarray,
    ops: FilteredOperators,
    q: CouplingOperator,
    basis: EigenBasis,
) -> np.ndarray:
    x = np.asarray(rho, dtype=complex)
    return (
        _coherent(x, hamiltonian(basis))
        + _loss(x, ops, q.q)
        + 0.5 * _sandwich(ops.q_tilde, x, q.q)
    )


def auxiliary_source(rho: np.ndarray, ops: FilteredOperators) -> np.ndarray:
    """Inhomogeneous term of the N-hat equation, 1/2 (Q_bar rho Q + h.c.)."""
    return 0.5 * _sandwich(ops.q_bar, np.asarray(rho, dtype=complex), ops.q)


def _vectorize(action) -> np.ndarray:
    matrix = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        unit = np.zeros(4, dtype=complex)
        unit[k] = 1.0
        matrix[:, k] = action(unit.reshape(2, 2)).reshape(4)
    return matrix


def liouvillian_matrix(
    ops: FilteredOperators,
    q: CouplingOperator,
    basis: EigenBasis,
) -> np.ndarray:
    """4x4 generator acting on row-major ``rho.reshape(4)``."""
    return _vectorize(lambda x: unconditional_rhs(x, ops, q, basis))


def source_matrix(ops: FilteredOperators) -> np.ndarray:
    return _vectorize(lambda x: auxiliary_source(x, ops))
