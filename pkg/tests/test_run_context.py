import json

import pytest

from pdcsim.context.run_context import RunContextManager


@pytest.fixture
def manager():
    manager = RunContextManager()
    manager.create_context("run_1", "steady", {"r_points": 5})
    return manager


class TestRunContextManager:
    def test_create(self, manager):
        context = manager.get_context("run_1")
        assert context is manager.active_context
        assert context.status == "active"
        assert context.config == {"r_points": 5}

    def test_log_without_context(self):
        with pytest.raises(ValueError):
            RunContextManager().log_stage("Simulation", "steady", {}, {})

    def test_summary(self, manager):
        manager.log_stage("Simulation", "steady", {}, {})
        manager.log_stage("Output", "write_artifacts", {}, {})
        manager.log_stage("Output", "write_artifacts", {}, {})
        summary = manager.get_context_summary()
        assert summary["run_id"] == "run_1"
        assert summary["total_stages"] == 3
        assert summary["stages"] == ["Simulation", "Output"]
        assert summary["last_updated"] is not None

    def test_summary_unknown_run(self, manager):
        assert manager.get_context_summary("run_404") == {}

    def test_export(self, manager, tmp_path):
        manager.log_stage("Simulation", "steady", {"points": 5}, {"success": True})
        target = tmp_path / "ctx" / "run.json"
        text = manager.export_context("run_1", target)
        assert target.read_text(encoding="utf-8") == text
        exported = json.loads(text)
        assert exported["scenario"] == "steady"
        assert exported["stages"][0]["outputs"] == {"success": True}

    def test_export_unknown_run(self, manager, tmp_path):
        assert manager.export_context("run_404", tmp_path / "run.json") is None
        assert not (tmp_path / "run.json").exists()
