import pytest

from pdcsim.config import RunConfig, Scenario
from pdcsim.criteria.separability import entanglement_threshold
from pdcsim.errors import EXIT_FAILURE
from pdcsim.scenarios import CORRELATOR_COLUMNS, LOSSY_COLUMNS, STEADY_COLUMNS, ScenarioRunner, grid, ordered_map


def run(**values):
    config = RunConfig(**values)
    outcome = ScenarioRunner(config).execute(config.scenario)
    assert outcome["success"], outcome.get("error")
    return outcome["result"]


class TestHelpers:
    def test_grid(self):
        assert grid(0.0, 1.0, 5) == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert grid(0.3, 2.0, 1) == [0.3]

    @pytest.mark.parametrize("workers", [1, 3])
    def test_ordered_map(self, workers):
        assert ordered_map(lambda x: x * x, range(10), workers) == [x * x for x in range(10)]


class TestSteady:
    def test_columns_and_metadata(self):
        result = run(r_points=3)
        assert result.columns == ["r"] + STEADY_COLUMNS
        assert result.metadata["scenario"] == "steady"
        assert result.metadata["n0_classical"] == pytest.approx(0.8)

    def test_entanglement_onset(self):
        result = run(r_min=0.0, r_max=2.0, r_points=41, n0=0.3)
        r_star = entanglement_threshold(0.3)
        for r, flag, ratio in zip(result.column("r"), result.column("entangled"), result.column("ratio_quantum")):
            assert flag == (ratio < 0.5)
            if abs(r - r_star) > 1e-6:
                assert flag == (r > r_star)

    def test_classical_never_entangled_at_rest(self):
        result = run(r_points=1)
        assert result.column("ratio_classical")[0] == pytest.approx(0.6)
        assert result.column("ratio_quantum")[0] == pytest.approx(0.975)

    def test_n0_sweep(self):
        result = run(sweep_axis="n0", r=1.0, n0_min=0.0, n0_max=1.0, n0_points=5)
        assert result.columns[0] == "n0"
        quantum = result.column("ratio_quantum")
        assert quantum[0] == pytest.approx(0.0, abs=1e-9)
        assert all(b > a for a, b in zip(quantum, quantum[1:]))

    def test_workers_do_not_change_rows(self):
        assert run(r_points=9).rows == run(r_points=9, workers=3).rows


class TestLossy:
    def test_rows(self):
        result = run(scenario="lossy", t_max=1.0, dt=0.01, t_stride=30)
        assert result.columns == LOSSY_COLUMNS
        times = result.column("t")
        assert times[:4] == pytest.approx([0.0, 0.3, 0.6, 0.9])
        assert times[-1] == pytest.approx(1.0)
        first = result.rows[0]
        assert first[LOSSY_COLUMNS.index("ratio_q")] == pytest.approx(0.975, abs=1e-9)
        assert first[LOSSY_COLUMNS.index("ratio_c")] == pytest.approx(0.6, abs=1e-9)
        assert first[LOSSY_COLUMNS.index("delta_eff")] == pytest.approx(0.0, abs=1e-12)

    def test_accuracy_failure(self):
        config = RunConfig(scenario="lossy", t_max=20.0, dt=1.0)
        outcome = ScenarioRunner(config).execute(Scenario.LOSSY)
        assert not outcome["success"]
        assert outcome["exit_code"] == EXIT_FAILURE
        assert "AccuracyError" in outcome["error"]


class TestCorrelators:
    def test_rows(self):
        result = run(scenario="correlators", r_min=1.0, r_max=2.0, r_points=3, order_max=3)
        assert result.columns == CORRELATOR_COLUMNS
        assert len(result.rows) == 9
        assert [row[1] for row in result.rows[:3]] == [1, 2, 3]
        assert result.metadata["selection_rule_violations"] == 0
        assert all(0.0 < row[2] < 1.0 for row in result.rows)


class TestThreshold:
    def test_rows(self):
        result = run(scenario="threshold", n0_min=0.0, n0_max=1.0, n0_points=3)
        assert result.column("n0") == [0.0, 0.5, 1.0]
        assert result.column("r_star")[0] == 0.0
        assert result.column("r_star")[2] == pytest.approx(0.7455, abs=1e-4)
