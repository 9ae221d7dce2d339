import argparse
import logging
import os
import sys
import uuid
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from pdcsim.config import RunConfig, Scenario, config_keys, load_config
from pdcsim.context.run_context import RunContextManager
from pdcsim.errors import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, ConfigError
from pdcsim.output.csv_writer import SweepResult, write_csv
from pdcsim.output.svg_plot import write_svg
from pdcsim.scenarios import ScenarioRunner

logger = logging.getLogger("pdcsim")

# result metadata counters that turn a completed run into exit status 2
FAILURE_COUNTERS = ["failed_checks", "selection_rule_violations"]

PLOT_SERIES = {
    Scenario.STEADY: ["ratio_quantum", "ratio_classical"],
    Scenario.LOSSY: ["ratio_q", "ratio_c"],
    Scenario.THRESHOLD: ["r_star"],
}


class EntanglementSimulator:
    """Main orchestrator: configuration, scenario run, artifacts."""

    def __init__(self):
        self.context_manager = RunContextManager()

    def run(self, config: RunConfig) -> Dict[str, Any]:
        """Run one configured scenario and write its artifacts."""
        run_id = f"run_{uuid.uuid4().hex[:8]}"
        context = self.context_manager.create_context(run_id, config.scenario.value, config.resolved())

        logger.info("🧮 Running scenario '%s'", config.scenario.value)
        outcome = ScenarioRunner(config).execute(config.scenario)
        self.context_manager.log_stage(
            stage="Simulation",
            action=config.scenario.value,
            inputs={"scenario": config.scenario.value},
            outputs={"success": outcome["success"], "error": outcome.get("error")},
        )

        if not outcome["success"]:
            context.status = "error"
            logger.error("❌ %s", outcome["error"])
            self._export_context(config, run_id)
            return {
                "run_id": run_id,
                "success": False,
                "error": outcome["error"],
                "exit_code": outcome["exit_code"],
            }

        result = outcome["result"]
        text = write_csv(result, config.out)
        artifacts = {"csv": config.out}
        if config.plot:
            artifacts["svg"] = str(self._write_plot(config, result))

        self.context_manager.log_stage(
            stage="Output",
            action="write_artifacts",
            inputs={"rows": len(result.rows)},
            outputs=artifacts,
        )

        failures = {key: int(result.metadata.get(key, 0)) for key in FAILURE_COUNTERS}
        failed = sum(failures.values())
        context.status = "completed" if not failed else "completed_with_errors"
        logger.info("✅ %d rows written", len(result.rows))
        for key, count in failures.items():
            if count:
                logger.error("❌ %s: %d", key, count)
        summary = self.context_manager.get_context_summary()
        logger.info("📊 Run %s: %d stages, status %s", run_id, summary["total_stages"], summary["status"])
        self._export_context(config, run_id)

        return {
            "run_id": run_id,
            "success": not failed,
            "csv": text,
            "artifacts": artifacts,
            "exit_code": EXIT_FAILURE if failed else EXIT_OK,
            "context_summary": self.context_manager.get_context_summary(),
        }

    def _export_context(self, config: RunConfig, run_id: str):
        if config.context_out:
            self.context_manager.export_context(run_id, config.context_out)

    def _write_plot(self, config: RunConfig, result: SweepResult) -> Path:
        base = Path(config.out) if config.out else Path(f"pdcsim_{config.scenario.value}.csv")
        target = base.with_suffix(".svg")
        if config.scenario == Scenario.CORRELATORS:
            # one series per order: pivot the long rows
            orders = sorted({row[1] for row in result.rows})
            wide = SweepResult(columns=["r"] + [f"n={n}" for n in orders])
            for r in dict.fromkeys(row[0] for row in result.rows):
                by_order = {row[1]: row[2] for row in result.rows if row[0] == r}
                wide.add_row([r] + [by_order[n] for n in orders])
            return write_svg(wide, target, "r", title="quantum / classical <B^dag B>")
        x_column = result.columns[0]
        series = PLOT_SERIES.get(config.scenario)
        return write_svg(result, target, x_column, series, title=config.scenario.value)


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports bad flags as configuration errors."""

    def error(self, message: str):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="pdcsim",
        description="Polarization-entangled down-conversion simulator",
        allow_abbrev=False,
    )
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--plot", action="store_true", default=None, help="also write an SVG line chart")
    for key in config_keys():
        if key == "plot":
            continue
        parser.add_argument(f"--{key}", dest=f"key_{key}", default=None, metavar=key.upper())
    return parser


def overrides_from(args: argparse.Namespace) -> Dict[str, Any]:
    values = {key: getattr(args, f"key_{key}") for key in config_keys() if key != "plot"}
    values["plot"] = args.plot
    return {key: value for key, value in values.items() if value is not None}


def configure_logging():
    level = os.getenv("PDCSIM_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config, overrides_from(args))
    except ConfigError as e:
        logger.error("❌ Configuration error: %s", e)
        return EXIT_CONFIG

    simulator = EntanglementSimulator()
    outcome = simulator.run(config)
    if "csv" in outcome and config.out is None:
        sys.stdout.write(outcome["csv"])
    return outcome["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
