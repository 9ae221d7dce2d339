import pytest

from pdcsim.dynamics.lossless import evolve_lossless
from pdcsim.dynamics.params import LossyParams, SteadyParams
from pdcsim.gaussian.modes import StatKind

CAVITY_RATES = dict(kappa0=1.0, decay_rate=0.1, loss_rate=0.1)


@pytest.fixture
def tol():
    return 1e-9


@pytest.fixture
def squeezed_vacuum():
    """Lossless quantum state with n0 = 0 at a given r."""
    def make(r):
        return evolve_lossless(SteadyParams(r=r, n0=0.0))
    return make


@pytest.fixture
def noisy_state():
    """Generic lossless state with thermal input, both statistics."""
    def make(r=0.7, n0=0.3, stat=StatKind.QUANTUM):
        return evolve_lossless(SteadyParams(r=r, n0=n0, stat=stat))
    return make


@pytest.fixture
def cavity_quantum():
    return LossyParams(n0=0.3, t_max=50.0, dt=0.01, stat=StatKind.QUANTUM, **CAVITY_RATES)


@pytest.fixture
def cavity_classical():
    return LossyParams(n0=0.8, t_max=50.0, dt=0.01, stat=StatKind.CLASSICAL, **CAVITY_RATES)
