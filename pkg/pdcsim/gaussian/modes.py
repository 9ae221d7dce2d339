from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import List


class Arm(str, Enum):
    """The two conjugate emission directions."""
    A = "A"
    B = "B"


class Polarization(str, Enum):
    H = "H"
    V = "V"


class ModeIndex(IntEnum):
    """The four field modes in canonical order Ah, Av, Bh, Bv."""
    AH = 0
    AV = 1
    BH = 2
    BV = 3

    @property
    def arm(self) -> Arm:
        return Arm.A if self in (ModeIndex.AH, ModeIndex.AV) else Arm.B

    @property
    def polarization(self) -> Polarization:
        return Polarization.H if self in (ModeIndex.AH, ModeIndex.BH) else Polarization.V

    @classmethod
    def of(cls, arm: Arm, polarization: Polarization) -> "ModeIndex":
        """Look up a mode from its arm and polarization."""
        offset = 0 if arm == Arm.A else 2
        return cls(offset + (0 if polarization == Polarization.H else 1))

    @property
    def label(self) -> str:
        return f"{self.arm.value.lower()}_{self.polarization.value.lower()}"


NUM_MODES = len(ModeIndex)


class StatKind(str, Enum):
    """Statistics of the field: operator (quantum) or stochastic amplitude (classical)."""
    QUANTUM = "quantum"
    CLASSICAL = "classical"

    @property
    def commutator(self) -> float:
        """Weight of the identity term in <a_i a_j^dagger>."""
        return 1.0 if self == StatKind.QUANTUM else 0.0


@dataclass(frozen=True)
class OperatorFactor:
    """One ladder operator (or amplitude) in an ordered product."""
    mode: ModeIndex
    dagger: bool = False

    @property
    def index(self) -> int:
        """Position of this factor in the 8-component vector (a, a^dagger)."""
        return int(self.mode) + (NUM_MODES if self.dagger else 0)

    def adjoint(self) -> "OperatorFactor":
        return OperatorFactor(self.mode, not self.dagger)

    def __str__(self) -> str:
        return f"{self.mode.label}{'†' if self.dagger else ''}"


def create(mode: ModeIndex) -> OperatorFactor:
    return OperatorFactor(ModeIndex(mode), True)


def destroy(mode: ModeIndex) -> OperatorFactor:
    return OperatorFactor(ModeIndex(mode), False)


def adjoint_string(factors: List[OperatorFactor]) -> List[OperatorFactor]:
    """Hermitian conjugate of an ordered product: reversed and dagger-flipped."""
    return [factor.adjoint() for factor in reversed(factors)]
