import pytest

from pdcsim.config import RunConfig, Scenario, config_keys, load_config
from pdcsim.errors import ConfigError
from pdcsim.gaussian.modes import StatKind


@pytest.fixture
def config_file(tmp_path):
    def write(text):
        path = tmp_path / "run.conf"
        path.write_text(text, encoding="utf-8")
        return path
    return write


class TestRunConfig:
    def test_defaults(self):
        config = load_config()
        assert config.scenario == Scenario.STEADY
        assert (config.r_min, config.r_max, config.r_points) == (0.0, 4.0, 81)
        assert config.n0 == 0.3
        assert config.classical_occupation == pytest.approx(0.8)
        assert (config.decay_rate, config.loss_rate) == (0.1, 0.1)
        assert (config.t_max, config.dt) == (50.0, 0.01)
        assert config.order_max == 6
        assert config.seed == 20240101
        assert config.out is None and config.plot is False

    def test_explicit_classical_occupation(self):
        assert RunConfig(n0=0.3, n0_classical=1.5).classical_occupation == 1.5

    def test_config_keys_use_aliases(self):
        keys = config_keys()
        assert keys["Lambda"] == "decay_rate"
        assert keys["lambda"] == "loss_rate"
        assert "decay_rate" not in keys

    def test_resolved(self):
        resolved = RunConfig(scenario="lossy").resolved()
        assert resolved["scenario"] == "lossy"
        assert resolved["Lambda"] == 0.1
        assert resolved["n0_classical"] == pytest.approx(0.8)

    def test_lossy_params(self):
        config = RunConfig(n0=0.3, t_max=5.0, dt=0.1, Lambda=0.2)
        quantum = config.lossy_params(StatKind.QUANTUM)
        classical = config.lossy_params(StatKind.CLASSICAL)
        assert quantum.n0 == 0.3 and quantum.decay_rate == 0.2
        assert classical.n0 == pytest.approx(0.8)
        assert classical.stat == StatKind.CLASSICAL
        assert quantum.n_steps == 50

    def test_steady_params(self):
        params = RunConfig(r=2.0, n0=0.5).steady_params()
        assert (params.r, params.n0, params.stat) == (2.0, 0.5, StatKind.QUANTUM)
        assert RunConfig().steady_params(r=0.25).r == 0.25

    def test_correlators_use_vacuum_offset(self):
        config = RunConfig(scenario="correlators", n0=0.3)
        assert config.resolved()["n0_classical"] == pytest.approx(0.8)
        assert RunConfig(scenario="steady", n0_classical=1.0).classical_occupation == 1.0

    def test_context_out(self):
        assert RunConfig().context_out is None
        assert load_config(overrides={"context_out": "run.json"}).context_out == "run.json"

    def test_frozen(self):
        with pytest.raises(Exception):
            RunConfig().r = 2.0


class TestLoadConfig:
    def test_file_values(self, config_file):
        path = config_file("# sweep\nscenario=threshold\nn0_max=1.5\nLambda=0.05\nplot=true\n")
        config = load_config(path)
        assert config.scenario == Scenario.THRESHOLD
        assert config.n0_max == 1.5
        assert config.decay_rate == 0.05
        assert config.plot is True

    def test_overrides_win(self, config_file):
        path = config_file("r_points=11\nseed=7\n")
        config = load_config(path, {"seed": "9", "lambda": "0.3"})
        assert config.r_points == 11
        assert config.seed == 9
        assert config.loss_rate == 0.3

    def test_none_overrides_ignored(self):
        assert load_config(overrides={"r": None}).r == 1.0

    def test_unknown_key_line(self, config_file):
        path = config_file("r=1.0\n\nbogus=3\n")
        with pytest.raises(ConfigError) as excinfo:
            load_config(path)
        assert excinfo.value.line == 3
        assert "bogus" in str(excinfo.value)
        assert str(excinfo.value).startswith(f"{path}:3: ")

    def test_malformed_line(self, config_file):
        with pytest.raises(ConfigError) as excinfo:
            load_config(config_file("r=1.0\njust words\n"))
        assert excinfo.value.line == 2

    def test_invalid_value_line(self, config_file):
        with pytest.raises(ConfigError) as excinfo:
            load_config(config_file("scenario=lossy\nr_points=many\n"))
        assert excinfo.value.line == 2
        assert "r_points" in str(excinfo.value)

    def test_invalid_alias_value(self, config_file):
        with pytest.raises(ConfigError) as excinfo:
            load_config(config_file("Lambda=-1\n"))
        assert excinfo.value.line == 1
        assert "Lambda" in str(excinfo.value)

    def test_override_error_has_no_line(self, config_file):
        path = config_file("r=1.0\n")
        with pytest.raises(ConfigError) as excinfo:
            load_config(path, {"r": "-2"})
        assert excinfo.value.line is None

    def test_unknown_override(self):
        with pytest.raises(ConfigError):
            load_config(overrides={"radius": "1"})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.conf")

    @pytest.mark.parametrize("overrides", [
        {"r_min": "3", "r_max": "1"},
        {"n0_min": "2", "n0_max": "1"},
        {"dt": "2", "t_max": "1"},
        {"order_max": "9"},
        {"sweep_axis": "kappa"},
        {"scenario": "figure"},
        {"workers": "0"},
        {"scenario": "correlators", "n0_classical": "1.0"},
    ])
    def test_rejected_values(self, overrides):
        with pytest.raises(ConfigError):
            load_config(overrides=overrides)
