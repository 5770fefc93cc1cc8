from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from cellfree import Geometry, SolverSettings, SystemConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def small_cfg() -> SystemConfig:
    return SystemConfig(M=16, K=4, num_realizations=4, master_seed=3)


@pytest.fixture
def geom() -> Geometry:
    return Geometry()


@pytest.fixture
def solver() -> SolverSettings:
    return SolverSettings()


def write_config(path: Path, text: str) -> Path:
    path.write_text(text)
    return path
