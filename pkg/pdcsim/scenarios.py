import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from pdcsim.config import RunConfig, Scenario
from pdcsim.criteria.correlators import default_spec, qc_ratio
from pdcsim.criteria.separability import entanglement_threshold, separability_ratio
from pdcsim.dynamics.lossless import CLASSICAL_VACUUM_OFFSET, evolve_lossless
from pdcsim.dynamics.lossy import evolve_lossy
from pdcsim.dynamics.params import SteadyParams
from pdcsim.errors import SimulationError, exit_code_for
from pdcsim.gaussian.modes import ModeIndex, StatKind
from pdcsim.output.csv_writer import SweepResult
from pdcsim.selfcheck import run_all

logger = logging.getLogger(__name__)

STEADY_COLUMNS = ["n_quantum", "n_classical", "A_quantum", "A_classical",
                  "ratio_quantum", "ratio_classical", "entangled"]
LOSSY_COLUMNS = ["t", "delta_eff", "n_q", "n_c", "ratio_q", "ratio_c", "total_n_q"]
CORRELATOR_COLUMNS = ["r", "n", "ratio_qc"]
THRESHOLD_COLUMNS = ["n0", "r_star"]
SELFCHECK_COLUMNS = ["check", "passed", "detail"]


def grid(low: float, high: float, points: int) -> List[float]:
    if points == 1:
        return [low]
    return [float(x) for x in np.linspace(low, high, points)]


def ordered_map(func: Callable, items: Sequence, workers: int) -> List[Any]:
    """Evaluate func over items, possibly concurrently, keeping item order."""
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


class ScenarioRunner:
    """Turns a RunConfig into a SweepResult for each CLI scenario."""

    def __init__(self, config: RunConfig):
        self.config = config

        self.available_scenarios: Dict[Scenario, Callable[[], SweepResult]] = {
            Scenario.STEADY: self.steady,
            Scenario.LOSSY: self.lossy,
            Scenario.CORRELATORS: self.correlators,
            Scenario.THRESHOLD: self.threshold,
            Scenario.SELFCHECK: self.selfcheck,
        }

    def execute(self, scenario: Scenario) -> Dict[str, Any]:
        """Run a scenario and wrap the outcome in a result dict."""
        try:
            result = self.available_scenarios[scenario]()
            return {
                "success": True,
                "scenario": scenario,
                "result": result,
            }
        except (SimulationError, ValueError) as e:
            return {
                "success": False,
                "scenario": scenario,
                "error": f"{type(e).__name__}: {e}",
                "exit_code": exit_code_for(e),
                "result": None,
            }

    def _new_result(self, columns: List[str]) -> SweepResult:
        return SweepResult(columns=columns, metadata=dict(self.config.resolved()))

    def steady_row(self, x: float) -> List[Any]:
        config = self.config
        if config.sweep_axis == "r":
            r, n0, n0_classical = x, config.n0, config.classical_occupation
        else:
            r, n0, n0_classical = config.r, x, x + CLASSICAL_VACUUM_OFFSET

        quantum = evolve_lossless(SteadyParams(r=r, n0=n0))
        classical = evolve_lossless(SteadyParams(r=r, n0=n0_classical, stat=StatKind.CLASSICAL))
        report_q = separability_ratio(quantum, vacuum_limit=True)
        report_c = separability_ratio(classical, vacuum_limit=True)
        return [
            x,
            quantum.occupation(ModeIndex.AH),
            classical.occupation(ModeIndex.AH),
            abs(quantum.pair_amplitude(ModeIndex.AH, ModeIndex.BV)),
            abs(classical.pair_amplitude(ModeIndex.AH, ModeIndex.BV)),
            report_q.ratio,
            report_c.ratio,
            report_q.entangled_flag,
        ]

    def steady(self) -> SweepResult:
        config = self.config
        if config.sweep_axis == "r":
            axis = grid(config.r_min, config.r_max, config.r_points)
        else:
            axis = grid(config.n0_min, config.n0_max, config.n0_points)
        logger.info("📈 Steady sweep over %s: %d points", config.sweep_axis, len(axis))

        result = self._new_result([config.sweep_axis] + STEADY_COLUMNS)
        for row in ordered_map(self.steady_row, axis, config.workers):
            result.add_row(row)
        return result

    def lossy(self) -> SweepResult:
        config = self.config
        stats = [StatKind.QUANTUM, StatKind.CLASSICAL]
        quantum, classical = ordered_map(
            lambda stat: evolve_lossy(config.lossy_params(stat), self_test=config.self_test),
            stats, min(config.workers, 2))
        delta = quantum.delta_eff()

        result = self._new_result(LOSSY_COLUMNS)
        indices = list(range(0, len(quantum), config.t_stride))
        if indices[-1] != len(quantum) - 1:
            indices.append(len(quantum) - 1)
        for i in indices:
            report_q = separability_ratio(quantum.states[i], vacuum_limit=True)
            report_c = separability_ratio(classical.states[i], vacuum_limit=True)
            result.add_row([
                float(quantum.times[i]),
                float(delta[i]),
                quantum.states[i].occupation(ModeIndex.AH),
                classical.states[i].occupation(ModeIndex.AH),
                report_q.ratio,
                report_c.ratio,
                report_q.total_n,
            ])
        return result

    def correlators(self) -> SweepResult:
        config = self.config
        r_values = grid(config.r_min, config.r_max, config.r_points)
        specs = [default_spec(order) for order in range(1, config.order_max + 1)]
        logger.info("🔗 Correlator ratios for orders 1..%d over %d r values", config.order_max, len(r_values))

        reports = ordered_map(lambda spec: qc_ratio(spec, config.steady_params(), r_values),
                              specs, config.workers)
        result = self._new_result(CORRELATOR_COLUMNS)
        violations = sum(not check.vanishes for report in reports for check in report.selection_checks)
        result.metadata["selection_rule_violations"] = violations
        for i, r in enumerate(r_values):
            for spec, report in zip(specs, reports):
                result.add_row([r, spec.n, report.points[i].ratio])
        return result

    def threshold(self) -> SweepResult:
        config = self.config
        result = self._new_result(THRESHOLD_COLUMNS)
        for n0 in grid(config.n0_min, config.n0_max, config.n0_points):
            result.add_row([n0, entanglement_threshold(n0)])
        return result

    def selfcheck(self) -> SweepResult:
        config = self.config
        result = self._new_result(SELFCHECK_COLUMNS)
        checks = run_all(samples=config.samples, seed=config.seed, order_max=config.order_max)
        for check in checks:
            result.add_row([check.name, check.passed, check.detail])
        result.metadata["failed_checks"] = sum(not check.passed for check in checks)
        return result
