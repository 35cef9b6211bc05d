from __future__ import annotations

import math
from pathlib import Path
import sys

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.bath.spectrum import DetectorParams  # noqa: E402
from src.dynamics.model import MeasurementModel  # noqa: E402
from src.qubit.model import QubitParams  # noqa: E402

UNIT_ETA_G = math.sqrt(1.0 / (2.0 * math.pi))


@pytest.fixture
def symmetric_qubit() -> QubitParams:
    return QubitParams(epsilon=0.0, omega=0.5)


@pytest.fixture
def reference_detector() -> DetectorParams:
    return DetectorParams(t_amp=1.0, chi=0.1, g_l=2.5, g_r=2.5, v=2.0, temp=1.0)


@pytest.fixture
def reference_model(symmetric_qubit: QubitParams, reference_detector: DetectorParams) -> MeasurementModel:
    return MeasurementModel(qubit=symmetric_qubit, detector=reference_detector)


@pytest.fixture
def bare_detector() -> DetectorParams:
    """Uncoupled detector with eta = 1 at V = 2, T = 1."""
    return DetectorParams.with_eta(1.0, t_amp=1.0, chi=0.0, v=2.0, temp=1.0)
