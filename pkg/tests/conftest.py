import os

import pytest

from sinkchase import GridSpec, KinematicModel, MovementMode


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Run every test without debug output or SINKCHASE_* overrides"""
    monkeypatch.delenv("DEBUG", raising=False)
    for name in list(os.environ):
        if "SINKCHASE_" in name:
            monkeypatch.delenv(name, raising=False)


@pytest.fixture
def grid():
    return GridSpec(width=200, height=200)


@pytest.fixture
def sink_model():
    return KinematicModel(v_max=2, mode=MovementMode.AXIS_ONLY)


@pytest.fixture
def target_model():
    return KinematicModel(v_max=1, mode=MovementMode.AXIS_ONLY)
