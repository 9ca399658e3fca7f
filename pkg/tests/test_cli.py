import json
import os

import pytest

import app
from roughdrive.errors import ConfigError, ExitCode
from roughdrive.models.run import DEFAULT_EXPERIMENTS
from roughdrive.services.params import derive_params
from roughdrive.utils.config_loader import ENV_OUTPUT_DIR, ENV_WORKERS, config_from_mapping, load_config, parse_g_spec
from roughdrive.utils.file_utils import get_config_hash

# 64 points and 64 steps: fast enough for every experiment to run end to end
SMALL = {
    'H': 0.25,
    'seed': 99,
    'T': 0.25,
    'L': 16.0,
    'N': 64,
    'dt': 2.0 ** -8,
    'record_every': 1,
    'n_replicas': 20,
}


def test_minimal_config(write_config):
    config = load_config(write_config({'H': 0.25, 'seed': 1}))
    assert config.seed == 1
    assert config.experiments == DEFAULT_EXPERIMENTS
    assert config.g_spec == 'sin' and config.Y0 == 1.0
    assert derive_params(config.H).alpha == pytest.approx(2.0)
    assert config.grid_config().n_steps == 4096


def test_dalang_violation_is_named(write_config):
    with pytest.raises(ConfigError) as excinfo:
        load_config(write_config({'H': 0.3, 'seed': 1}))
    assert any("Dalang" in v for v in excinfo.value.violations)


def test_seed_is_mandatory():
    with pytest.raises(ConfigError, match="seed is required"):
        config_from_mapping({'H': 0.25})


def test_every_violation_is_reported():
    with pytest.raises(ConfigError) as excinfo:
        config_from_mapping({'H': 0.3, 'N': 100, 'experiments': ['nope'], 'colour': 'red'})
    text = "\n".join(excinfo.value.violations)
    for needle in ("seed is required", "Dalang", "N=100", "unknown experiments", "unknown field 'colour'"):
        assert needle in text


def test_grid_violations():
    with pytest.raises(ConfigError) as excinfo:
        config_from_mapping({'H': 0.25, 'seed': 1, 'T': 1.0, 'dt': 0.3, 'L': 2.0})
    text = "\n".join(excinfo.value.violations)
    assert "integer multiple of dt" in text
    assert "16 T^(1/alpha)" in text


def test_split_exponent_range():
    with pytest.raises(ConfigError, match="b_exponent"):
        config_from_mapping({'H': 0.25, 'seed': 1, 'b_exponent': 0.45})
    assert config_from_mapping({'H': 0.25, 'seed': 1, 'b_exponent': 0.3}).b_exponent == 0.3


def test_custom_table_needs_points():
    with pytest.raises(ConfigError, match="g_table"):
        config_from_mapping({'H': 0.25, 'seed': 1, 'g_spec': 'custom-table', 'g_table': {'x': [0.0], 'y': [1.0]}})


def test_g_spec_parsing():
    assert parse_g_spec('f-const:1') == ('f-const', 1.0)
    assert parse_g_spec('sin') == ('sin', None)
    with pytest.raises(ValueError):
        parse_g_spec('linear')
    with pytest.raises(ValueError):
        parse_g_spec('cos')


def test_overrides_and_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path / 'from_env'))
    config = config_from_mapping({'H': 0.25, 'seed': 1}, {'seed': 2, 'output_dir': None})
    assert config.seed == 2
    assert config.output_dir == str(tmp_path / 'from_env')


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.setenv(ENV_WORKERS, '2')
    assert config_from_mapping({'H': 0.25, 'seed': 1}).workers == 2
    assert config_from_mapping({'H': 0.25, 'seed': 1, 'workers': 5}).workers == 5
    monkeypatch.setenv(ENV_WORKERS, 'many')
    with pytest.raises(ConfigError):
        config_from_mapping({'H': 0.25, 'seed': 1})


def test_hash_ignores_output_location():
    a = config_from_mapping({**SMALL, 'output_dir': 'a'})
    b = config_from_mapping({**SMALL, 'output_dir': 'b', 'workers': 3})
    c = config_from_mapping({**SMALL, 'seed': 100})
    assert get_config_hash(a.hashed_fields()) == get_config_hash(b.hashed_fields())
    assert get_config_hash(a.hashed_fields()) != get_config_hash(c.hashed_fields())


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(str(tmp_path / 'absent.json'))


def test_config_error_exit_code(write_config):
    path = write_config({'H': 0.3, 'seed': 1})
    assert app.main(['all', '--config', path]) == ExitCode.CONFIG_ERROR


def test_passing_experiments_exit_zero(write_config, tmp_path):
    path = write_config({'H': 0.25, 'seed': 5})
    out = str(tmp_path / 'out')
    code = app.main(['verify', '--config', path, '--out', out,
                     '-e', 'constant-identities', '-e', 'cov-decomposition'])
    assert code == ExitCode.PASS
    manifest = json.load(open(os.path.join(out, 'manifest.json')))
    assert manifest['passed']
    assert [e['name'] for e in manifest['experiments']] == ['constant-identities', 'cov-decomposition']
    assert os.path.exists(os.path.join(out, 'cov-decomposition.csv'))


def test_failing_experiment_exit_one(write_config, tmp_path):
    path = write_config({**SMALL, 'g_spec': 'f-const:0', 'experiments': ['holder-slope']})
    out = str(tmp_path / 'out')
    assert app.main(['all', '--config', path, '--out', out]) == ExitCode.EXPERIMENT_FAILURE
    manifest = json.load(open(os.path.join(out, 'manifest.json')))
    assert manifest['experiments'][0]['error'].startswith('DegenerateInputError')


def test_seed_override_on_command_line(write_config, tmp_path):
    path = write_config({'H': 0.25, 'seed': 5})
    out = str(tmp_path / 'out')
    app.main(['params', '--config', path, '--seed', '77', '--out', out])
    manifest = json.load(open(os.path.join(out, 'manifest.json')))
    assert manifest['config']['seed'] == 77


def test_simulate_dumps_traces(write_config, tmp_path):
    path = write_config({**SMALL, 'g_spec': 'f-const:1'})
    out = str(tmp_path / 'out')
    code = app.main(['simulate', '--config', path, '--out', out])
    assert code in (ExitCode.PASS, ExitCode.EXPERIMENT_FAILURE)
    header = open(os.path.join(out, 'traces.csv')).read().splitlines()[2]
    assert header == 'replica,t,u0,v0,xi'


def test_reruns_are_byte_identical(write_config, tmp_path):
    path = write_config({**SMALL, 'g_spec': 'sin', 'Y0': 1.0, 'experiments': ['correction-rate', 'weak-solution']})
    first, second = str(tmp_path / 'first'), str(tmp_path / 'second')
    app.main(['all', '--config', path, '--out', first])
    app.main(['all', '--config', path, '--out', second])
    for name in ('correction-rate.csv', 'weak-solution.csv', 'correction-rate.plot.dat'):
        with open(os.path.join(first, name), 'rb') as a, open(os.path.join(second, name), 'rb') as b:
            assert a.read() == b.read()
