import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

logger = logging.getLogger(__name__)


@dataclass
class StageRecord:
    """One orchestration stage of a simulation run (simulation, output)."""
    timestamp: datetime
    stage: str
    action: str
    inputs: Dict[str, Any]
    outputs: Dict[str, Any]


@dataclass
class RunContext:
    """Resolved configuration and stage log of one scenario run."""
    run_id: str
    scenario: str
    config: Dict[str, Any] = field(default_factory=dict)
    stages: List[StageRecord] = field(default_factory=list)
    status: str = "active"  # active, completed, completed_with_errors, error

    def record(self, stage: str, action: str, inputs: Dict[str, Any], outputs: Dict[str, Any]) -> StageRecord:
        entry = StageRecord(timestamp=datetime.now(), stage=stage, action=action, inputs=inputs, outputs=outputs)
        self.stages.append(entry)
        return entry

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "scenario": self.scenario,
            "status": self.status,
            "config": self.config,
            "stages": [
                {
                    "timestamp": entry.timestamp.isoformat(),
                    "stage": entry.stage,
                    "action": entry.action,
                    "inputs": entry.inputs,
                    "outputs": entry.outputs,
                }
                for entry in self.stages
            ],
        }


class RunContextManager:
    """Keeps the contexts of the runs made by one simulator instance."""

    def __init__(self):
        self.contexts: Dict[str, RunContext] = {}
        self.active_context: Optional[RunContext] = None

    def create_context(self, run_id: str, scenario: str, config: Optional[Dict[str, Any]] = None) -> RunContext:
        context = RunContext(run_id=run_id, scenario=scenario, config=dict(config or {}))
        self.contexts[run_id] = context
        self.active_context = context
        logger.info("🚀 Created run context %s (scenario: %s)", run_id, scenario)
        return context

    def get_context(self, run_id: str) -> Optional[RunContext]:
        return self.contexts.get(run_id)

    def log_stage(self, stage: str, action: str, inputs: Dict[str, Any], outputs: Dict[str, Any]) -> StageRecord:
        """Record a stage on the active context."""
        if not self.active_context:
            raise ValueError("No active run context available")

        entry = self.active_context.record(stage, action, inputs, outputs)
        logger.info("⚡ %s: %s", stage, action)
        logger.debug("📤 Outputs: %s", json.dumps(outputs, default=str))
        return entry

    def get_context_summary(self, run_id: Optional[str] = None) -> Dict[str, Any]:
        context = self.active_context if run_id is None else self.get_context(run_id)
        if not context:
            return {}

        return {
            "run_id": context.run_id,
            "scenario": context.scenario,
            "total_stages": len(context.stages),
            "status": context.status,
            "stages": list(dict.fromkeys(entry.stage for entry in context.stages)),
            "last_updated": context.stages[-1].timestamp.isoformat() if context.stages else None,
        }

    def export_context(self, run_id: str, path: Optional[Union[str, Path]] = None) -> Optional[str]:
        """Run context as JSON; also written to path when given."""
        context = self.get_context(run_id)
        if not context:
            return None
        text = json.dumps(context.to_dict(), indent=2, default=str)
        if path is not None:
            target = Path(path)
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
            logger.info("🗂️  Run context written to %s", target)
        return text
