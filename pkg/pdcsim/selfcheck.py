"""Cross-oracle suites run by the `selfcheck` scenario."""
import logging
from dataclasses import dataclass
from functools import partial
from typing import Callable, List

import numpy as np

from pdcsim.criteria.correlators import CorrelatorSpec, b_correlator, default_spec, qc_ratio
from pdcsim.criteria.separability import (
    closed_form_ratio, entanglement_threshold, j_squared, separability_ratio, total_number,
)
from pdcsim.dynamics.lossless import classical_counterpart, evolve_lossless
from pdcsim.dynamics.lossy import evolve_lossy
from pdcsim.dynamics.params import LossyParams, SteadyParams
from pdcsim.dynamics.quadrature import quadrature_moments
from pdcsim.errors import SimulationError
from pdcsim.gaussian.modes import ModeIndex, StatKind
from pdcsim.oracles.fock import FockConfig, fock_expectation
from pdcsim.oracles.monte_carlo import McConfig, mc_estimate
from pdcsim.oracles.observables import Observable

logger = logging.getLogger(__name__)

R_GRID = [0.0, 0.5, 1.0, 2.0, 3.0]
N0_GRID = [0.0, 0.1, 0.3, 1.0, 5.0]
CAVITY_RUN = dict(kappa0=1.0, decay_rate=0.1, loss_rate=0.1, t_max=50.0, dt=0.01)
CAVITY_N0 = 0.3
CAVITY_N0_CLASSICAL = 0.8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _close(value: float, expected: float, rel: float, abs_tol: float = 0.0) -> bool:
    return abs(value - expected) <= rel * abs(expected) + abs_tol


def check_closed_forms() -> CheckResult:
    """Wick-path ratio against the closed forms on the (r, n0) grid."""
    worst, compared = 0.0, 0
    for stat in StatKind:
        for r in R_GRID:
            for n0 in N0_GRID:
                params = SteadyParams(r=r, n0=n0, stat=stat)
                wick = separability_ratio(evolve_lossless(params), vacuum_limit=True).ratio
                closed = closed_form_ratio(params)
                worst = max(worst, abs(wick - closed) / max(abs(closed), 1e-3))
                compared += 1
    return CheckResult("closed_form_equivalence", worst < 1e-9,
                       f"{compared} points, worst relative deviation {worst:.3g}")


def check_zero_noise_singlet() -> CheckResult:
    values = []
    passed = True
    for r in (0.0, 1.0, 3.0, 5.0):
        moments = evolve_lossless(SteadyParams(r=r, n0=0.0))
        j2 = j_squared(moments)
        passed &= j2 < 1e-9 + 1e-15 * total_number(moments) ** 2
        values.append(f"r={r}: {j2:.3g}")
    return CheckResult("zero_noise_j_squared", passed, ", ".join(values))


def check_wash_out() -> CheckResult:
    n0 = 2e-6
    low = separability_ratio(evolve_lossless(SteadyParams(r=1e-3, n0=n0))).ratio
    high = separability_ratio(evolve_lossless(SteadyParams(r=1e-2, n0=n0))).ratio
    return CheckResult("wash_out", low >= 0.5 and high < 0.5,
                       f"ratio(r=1e-3)={low:.9f}, ratio(r=1e-2)={high:.6f}")


def check_threshold() -> CheckResult:
    deviations = []
    for n0 in (0.01, 0.1, 1.0, 10.0):
        r_star = entanglement_threshold(n0)
        ratio = separability_ratio(evolve_lossless(SteadyParams(r=r_star, n0=n0))).ratio
        deviations.append(abs(ratio - 0.5))
    return CheckResult("threshold_consistency", max(deviations) < 1e-8,
                       f"worst |ratio(r*) - 1/2| = {max(deviations):.3g}")


def check_anomalous_bridge() -> CheckResult:
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        for n0 in (0.0, 0.3, 1.0):
            params = SteadyParams(r=r, n0=n0)
            quantum = abs(evolve_lossless(params).pair_amplitude(ModeIndex.AH, ModeIndex.BV))
            classical = abs(evolve_lossless(classical_counterpart(params)).pair_amplitude(ModeIndex.AH, ModeIndex.BV))
            worst = max(worst, abs(quantum - classical) / max(1.0, quantum))
    return CheckResult("anomalous_bridge", worst < 1e-12, f"worst |A^C| - |A| (scaled) = {worst:.3g}")


def check_correlator_convergence(order_max: int = 6) -> CheckResult:
    failures = []
    for order in range(1, order_max + 1):
        spec = default_spec(order)
        report = qc_ratio(spec, SteadyParams(r=0.0, n0=0.0), [1.0, 2.0, 3.0, 4.0], off_diagonal=2)
        gaps = [abs(point.ratio - 1.0) for point in report.points]
        if gaps[2] >= 0.05 or any(b >= a for a, b in zip(gaps, gaps[1:])):
            failures.append(f"{spec}: {', '.join(f'{g:.3g}' for g in gaps)}")
        if not all(check.vanishes for check in report.selection_checks):
            failures.append(f"{spec}: forbidden correlator did not vanish")
    return CheckResult("correlator_convergence", not failures,
                       "; ".join(failures) or f"orders 1..{order_max} converge")


def check_fock_agreement() -> CheckResult:
    specs = [default_spec(2), CorrelatorSpec(n=2, m=1, l=0, k=0)]
    worst = 0.0
    for r in (0.1, 0.3, 0.5):
        moments = evolve_lossless(SteadyParams(r=r, n0=0.0))
        config = FockConfig.for_radius(r)
        pairs = [
            (fock_expectation(config, Observable.TOTAL_N).value, total_number(moments)),
            (fock_expectation(config, Observable.J_SQUARED).value, j_squared(moments)),
        ]
        pairs += [(fock_expectation(config, Observable.B_CORRELATOR, spec).value, b_correlator(moments, spec))
                  for spec in specs]
        for fock, wick in pairs:
            worst = max(worst, abs(fock - wick) / max(abs(wick), 1e-3))
    return CheckResult("fock_agreement", worst < 1e-6, f"worst relative deviation {worst:.3g}")


def check_lossy_cross_oracle(stride: int = 250) -> CheckResult:
    worst_ratio, worst_moment = 0.0, 0.0
    for stat, n0 in ((StatKind.QUANTUM, CAVITY_N0), (StatKind.CLASSICAL, CAVITY_N0_CLASSICAL)):
        params = LossyParams(n0=n0, stat=stat, **CAVITY_RUN)
        trajectory = evolve_lossy(params)
        for t, state in list(zip(trajectory.times, trajectory.states))[::stride]:
            oracle = quadrature_moments(params, float(t))
            worst_moment = max(worst_moment, float(np.max(
                np.abs(oracle.pair_matrix() - state.pair_matrix()) / np.maximum(1.0, np.abs(oracle.pair_matrix())))))
            worst_ratio = max(worst_ratio, abs(separability_ratio(oracle).ratio - separability_ratio(state).ratio))
    return CheckResult("lossy_cross_oracle", worst_ratio < 1e-6 and worst_moment < 1e-6,
                       f"ratio {worst_ratio:.3g} abs, moments {worst_moment:.3g} rel")


def check_cavity_crossover() -> CheckResult:
    quantum = evolve_lossy(LossyParams(n0=CAVITY_N0, stat=StatKind.QUANTUM, **CAVITY_RUN), self_test=False)
    classical = evolve_lossy(LossyParams(n0=CAVITY_N0_CLASSICAL, stat=StatKind.CLASSICAL, **CAVITY_RUN), self_test=False)
    ratio_q = [separability_ratio(state).ratio for state in quantum.states]
    ratio_c = [separability_ratio(state).ratio for state in classical.states]
    delta = quantum.delta_eff()

    start_ok = _close(ratio_q[0], 0.975, 0.0, 1e-6) and _close(ratio_c[0], 0.6, 0.0, 1e-6)
    crosses = min(ratio_q) < 0.5
    late = [abs(q - c) / c for q, c, d in zip(ratio_q, ratio_c, delta) if d > 3.0]
    converged = bool(late) and max(late) < 0.05
    return CheckResult("cavity_crossover", start_ok and crosses and converged,
                       f"start {ratio_q[0]:.6f}/{ratio_c[0]:.6f}, min quantum {min(ratio_q):.4f}, "
                       f"worst late gap {max(late) if late else float('nan'):.3g}")


def check_monte_carlo(samples: int = 100_000, seed: int = 20240101) -> CheckResult:
    details = []
    passed = True
    for r in (0.0, 2.0):
        params = SteadyParams(r=r, n0=CAVITY_N0_CLASSICAL, stat=StatKind.CLASSICAL)
        config = McConfig(samples=samples, seed=seed, params=params)
        estimate = mc_estimate(config, Observable.RATIO)
        rerun = mc_estimate(config, Observable.RATIO)
        expected = closed_form_ratio(params)
        within = abs(estimate.mean - expected) <= 4.0 * estimate.standard_error
        passed &= within and estimate.mean == rerun.mean
        details.append(f"r={r}: {estimate.mean:.5f} +- {estimate.standard_error:.2g} (exact {expected:.5f})")
    return CheckResult("monte_carlo", passed, "; ".join(details))


def run_suite(name: str, suite: Callable[[], CheckResult]) -> CheckResult:
    """Run one suite, turning a raised simulation error into a failed check."""
    try:
        result = suite()
    except SimulationError as e:
        result = CheckResult(name, False, f"{type(e).__name__}: {e}")
    icon = "✅" if result.passed else "❌"
    logger.info("%s %s: %s", icon, result.name, result.detail)
    return result


def run_all(samples: int = 100_000, seed: int = 20240101, order_max: int = 6) -> List[CheckResult]:
    suites = [
        ("closed_form_equivalence", check_closed_forms),
        ("zero_noise_j_squared", check_zero_noise_singlet),
        ("wash_out", check_wash_out),
        ("threshold_consistency", check_threshold),
        ("anomalous_bridge", check_anomalous_bridge),
        ("correlator_convergence", partial(check_correlator_convergence, order_max)),
        ("fock_agreement", check_fock_agreement),
        ("lossy_cross_oracle", check_lossy_cross_oracle),
        ("cavity_crossover", check_cavity_crossover),
        ("monte_carlo", partial(check_monte_carlo, samples, seed)),
    ]
    return [run_suite(name, suite) for name, suite in suites]
