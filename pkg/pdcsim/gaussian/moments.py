import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from pdcsim.errors import DomainError
from pdcsim.gaussian.modes import NUM_MODES, ModeIndex, StatKind

logger = logging.getLogger(__name__)

SLACK_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GaussianMoments:
    """Complete second-moment description of the zero-mean four-mode state.

    normal[i, j] = <a_i^dagger a_j> and anomalous[i, j] = <a_i a_j> (amplitudes and
    their conjugates for classical statistics). Arrays are stored read-only.
    """
    normal: np.ndarray
    anomalous: np.ndarray
    stat: StatKind

    def __post_init__(self):
        for name in ("normal", "anomalous"):
            matrix = np.array(getattr(self, name), dtype=complex)
            if matrix.shape != (NUM_MODES, NUM_MODES):
                raise DomainError(f"{name} moments must be {NUM_MODES}x{NUM_MODES}, got {matrix.shape}")
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)
        object.__setattr__(self, "stat", StatKind(self.stat))

    def pair_matrix(self) -> np.ndarray:
        """Ordered pair expectations Gamma[p, q] = <xi_p xi_q> with xi = (a, a^dagger).

        Blocks: [[M, N^T + c*I], [N, conj(M)]] where c is the commutator weight of
        the statistics.
        """
        c = self.stat.commutator
        top = np.hstack([self.anomalous, self.normal.T + c * np.eye(NUM_MODES)])
        bottom = np.hstack([self.normal, self.anomalous.conj()])
        return np.vstack([top, bottom])

    @classmethod
    def from_pair_matrix(cls, pair: np.ndarray, stat: StatKind) -> "GaussianMoments":
        """Inverse of pair_matrix."""
        return cls(
            normal=pair[NUM_MODES:, :NUM_MODES],
            anomalous=pair[:NUM_MODES, :NUM_MODES],
            stat=stat,
        )

    def occupation(self, mode: ModeIndex) -> float:
        return float(self.normal[mode, mode].real)

    def pair_amplitude(self, left: ModeIndex, right: ModeIndex) -> complex:
        return complex(self.anomalous[left, right])

    def scaled(self, factor: float) -> "GaussianMoments":
        """Scale every second moment by a real factor."""
        return GaussianMoments(self.normal * factor, self.anomalous * factor, self.stat)


@dataclass(frozen=True)
class InvariantViolation:
    """One broken invariant of a GaussianMoments value."""
    invariant: str
    indices: Tuple[int, ...]
    detail: str = field(default="")

    def __str__(self) -> str:
        return f"{self.invariant} at {self.indices}: {self.detail}"


def thermal_state(n0: float, stat: StatKind = StatKind.QUANTUM) -> GaussianMoments:
    """Incoherent input state with occupation n0 in every mode."""
    if n0 < 0:
        raise DomainError(f"thermal occupation must be non-negative, got {n0}")
    return GaussianMoments(
        normal=n0 * np.eye(NUM_MODES),
        anomalous=np.zeros((NUM_MODES, NUM_MODES)),
        stat=stat,
    )


def _slack_ok(bound: float, value: float) -> bool:
    return bound - value >= -SLACK_TOLERANCE * max(1.0, abs(bound))


def validate(moments: GaussianMoments) -> List[InvariantViolation]:
    """Return every violated invariant of the moments (empty list means valid)."""
    violations: List[InvariantViolation] = []
    normal, anomalous = moments.normal, moments.anomalous

    for i in range(NUM_MODES):
        if normal[i, i].real < -SLACK_TOLERANCE or abs(normal[i, i].imag) > SLACK_TOLERANCE:
            violations.append(InvariantViolation(
                "non-negative occupation", (i,), f"N[{i}][{i}] = {normal[i, i]}"))
        for j in range(i + 1, NUM_MODES):
            if abs(normal[i, j] - np.conj(normal[j, i])) > SLACK_TOLERANCE:
                violations.append(InvariantViolation(
                    "hermitian normal moments", (i, j), f"N[{i}][{j}] = {normal[i, j]}, N[{j}][{i}] = {normal[j, i]}"))
            if abs(anomalous[i, j] - anomalous[j, i]) > SLACK_TOLERANCE:
                violations.append(InvariantViolation(
                    "symmetric anomalous moments", (i, j), f"M[{i}][{j}] = {anomalous[i, j]}, M[{j}][{i}] = {anomalous[j, i]}"))

    c = moments.stat.commutator
    for i in range(NUM_MODES):
        for j in range(NUM_MODES):
            if i == j:
                continue
            bound = normal[i, i].real * (normal[j, j].real + c)
            value = abs(anomalous[i, j]) ** 2
            if not _slack_ok(bound, value):
                violations.append(InvariantViolation(
                    f"{moments.stat.value} physicality", (i, j), f"|M|^2 = {value:.6g} > {bound:.6g}"))

    if violations:
        logger.debug("⚠️  %d invariant violation(s) found", len(violations))
    return violations
