from __future__ import annotations


class ConfigError(ValueError):
    """Invalid run configuration or model parameters."""


class DegenerateQubitError(ConfigError):
    pass


class AsymmetricQubitError(ValueError):
    """Closed-form results exist only for the symmetric qubit (epsilon = 0)."""


class HierarchyLengthError(ValueError):
    pass


class SolverError(RuntimeError):
    """A propagation or stationary solve could not deliver a trustworthy result."""


class TruncationOverflowError(SolverError):
    pass


class NonUniqueSteadyStateError(SolverError):
    pass


class NonDecayingRemainderError(SolverError):
    pass
