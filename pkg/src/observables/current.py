from __future__ import annotations

import numpy as np

from src.dynamics.superoperators import FilteredOperators


def _trace_product(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Tr(m @ x) over any leading axes of ``x``."""
    return np.einsum("ij,...ji->...", m, x)


def current(rho: np.ndarray, ops: FilteredOperators) -> float | np.ndarray:
    """Detector current 1/2 Tr(Q_bar rho Q + h.c.); accepts a single state or a stack."""
    value = np.real(_trace_product(ops.q @ ops.q_bar, np.asarray(rho, dtype=complex)))
    return float(value) if np.ndim(value) == 0 else value


def dn2_dt(
    nhat: np.ndarray,
    rho: np.ndarray,
    ops: FilteredOperators,
    q: np.ndarray | None = None,
) -> float | np.ndarray:
    """d<n^2>/dt = Tr(Q_bar N Q + 1/2 Q~ rho Q + h.c.), vectorised over time."""
    q = ops.q if q is None else q
    nhat = np.asarray(nhat, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    value = 2.0 * np.real(_trace_product(q @ ops.q_bar, nhat)) + np.real(_trace_product(q @ ops.q_tilde, rho))
    return float(value) if np.ndim(value) == 0 else value
