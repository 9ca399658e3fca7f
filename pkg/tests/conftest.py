import numpy as np
import pytest

from roughdrive.models.simulation import GridConfig
from roughdrive.services.params import constant_drift_pair, derive_params, make_drift_pair


@pytest.fixture
def params():
    return derive_params(0.25)


@pytest.fixture
def small_grid():
    """64 points, 64 steps of 2^-8, records every 4 steps"""
    return GridConfig(L=16.0, N=64, dt=2.0 ** -8, n_steps=64, record_every=4)


@pytest.fixture
def unit_f(params):
    return constant_drift_pair(1.0, params, of='f')


@pytest.fixture
def sin_drift(params):
    return make_drift_pair(np.sin, params, lip_g=1.0, name='sin')


@pytest.fixture
def write_config(tmp_path):
    """Write a JSON config into tmp_path and return its path"""
    import json

    def _write(payload, name='config.json'):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return _write
