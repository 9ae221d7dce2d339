import numpy as np
import pytest

from pdcsim.dynamics.lossless import evolve_lossless
from pdcsim.dynamics.lossy import coupling, delta_kernel, evolve_lossy, rk4, step_halving_error
from pdcsim.dynamics.params import LossyParams, SteadyParams
from pdcsim.errors import AccuracyError, DomainError
from pdcsim.gaussian.modes import ModeIndex, StatKind
from pdcsim.gaussian.moments import validate


def cavity(**kwargs):
    values = dict(kappa0=1.0, decay_rate=0.1, loss_rate=0.1, n0=0.3, t_max=5.0, dt=0.01)
    values.update(kwargs)
    return LossyParams(**values)


class TestLossyParams:
    def test_aliases(self):
        params = LossyParams(**{"kappa0": 1.0, "Lambda": 0.2, "lambda": 0.05, "n0": 0.3, "t_max": 1.0, "dt": 0.1})
        assert params.decay_rate == 0.2
        assert params.loss_rate == 0.05

    def test_step_not_larger_than_span(self):
        with pytest.raises(ValueError):
            cavity(t_max=1.0, dt=2.0)

    def test_step_count(self):
        assert cavity(t_max=5.0, dt=0.01).n_steps == 500


class TestDeltaKernel:
    """Accumulated coupling"""

    def test_empty_interval(self):
        assert delta_kernel(cavity(), 2.0, 2.0) == 0.0

    def test_constant_coupling(self):
        assert delta_kernel(cavity(decay_rate=0.0), 2.0, 0.0) == 2.0

    def test_saturates_at_kappa_over_lambda(self):
        assert delta_kernel(cavity(t_max=1000.0), 1000.0, 0.0) == pytest.approx(10.0, rel=1e-12)

    @pytest.mark.parametrize("decay_rate", [1e-9, 1e-12, 1e-15])
    def test_small_decay_approaches_constant(self, decay_rate):
        assert delta_kernel(cavity(decay_rate=decay_rate), 2.0, 0.0) == pytest.approx(2.0, rel=1e-8)

    def test_small_decay_late_window(self):
        params = cavity(decay_rate=1e-10, t_max=100.0)
        assert delta_kernel(params, 50.0, 49.0) == pytest.approx(1.0 - 49.5e-10, rel=1e-12)

    @pytest.mark.parametrize("t, t_prime", [(1.0, 2.0), (1.0, -0.5)])
    def test_domain(self, t, t_prime):
        with pytest.raises(DomainError):
            delta_kernel(cavity(), t, t_prime)

    def test_coupling_decays(self):
        params = cavity()
        assert coupling(params, 0.0) == 1.0
        assert coupling(params, 10.0) == pytest.approx(np.exp(-1.0))


class TestIntegrator:
    def test_rk4_exponential(self):
        increment = rk4(0.0, np.array([1.0]), lambda t, x: x, 0.1)
        assert increment[0] == pytest.approx(np.exp(0.1) - 1.0, abs=1e-7)

    def test_step_halving_error_zero_for_identical_grids(self):
        coarse = np.ones((3, 2, 2))
        fine = np.ones((5, 2, 2))
        assert step_halving_error(coarse, fine) == 0.0


class TestEvolveLossy:
    """Moment ODE integration"""

    def test_pure_damping_stays_thermal(self):
        trajectory = evolve_lossy(cavity(kappa0=0.0, loss_rate=0.5, t_max=20.0))
        final = trajectory.states[-1]
        assert np.allclose(np.diag(final.normal).real, 0.3, atol=1e-12)
        assert np.allclose(final.anomalous, 0.0, atol=1e-12)

    def test_relaxes_to_bath_after_pumping(self):
        trajectory = evolve_lossy(cavity(kappa0=1.0, decay_rate=2.0, loss_rate=0.5, t_max=60.0, dt=0.02))
        final = trajectory.states[-1]
        assert final.occupation(ModeIndex.AH) == pytest.approx(0.3, abs=1e-6)
        assert abs(final.pair_amplitude(ModeIndex.AH, ModeIndex.BV)) < 1e-6

    @pytest.mark.parametrize("stat", list(StatKind))
    def test_lossless_limit(self, stat):
        params = cavity(decay_rate=0.0, loss_rate=0.0, t_max=2.0, dt=0.005, stat=stat)
        trajectory = evolve_lossy(params)
        for t, state in zip(trajectory.times[::40], trajectory.states[::40]):
            expected = evolve_lossless(SteadyParams(r=float(t), n0=0.3, stat=stat))
            assert np.allclose(state.normal, expected.normal, rtol=1e-8, atol=1e-12)
            assert np.allclose(state.anomalous, expected.anomalous, rtol=1e-8, atol=1e-12)

    def test_grid_and_delta_column(self):
        trajectory = evolve_lossy(cavity(t_max=2.0, dt=0.01))
        assert len(trajectory) == 201
        delta = trajectory.delta_eff()
        assert delta[0] == 0.0
        assert np.all(np.diff(delta) > 0)

    @pytest.mark.parametrize("stat, n0", [(StatKind.QUANTUM, 0.3), (StatKind.CLASSICAL, 0.8)])
    def test_physical_and_symmetric(self, cavity_quantum, stat, n0):
        params = cavity_quantum.model_copy(update={"stat": stat, "n0": n0})
        trajectory = evolve_lossy(params, self_test=False)
        for state in trajectory.states[::100]:
            assert validate(state) == []
            diagonal = np.diag(state.normal).real
            assert np.allclose(diagonal, diagonal[0], rtol=1e-12)
            assert abs(state.pair_amplitude(ModeIndex.AH, ModeIndex.BV)) == pytest.approx(
                abs(state.pair_amplitude(ModeIndex.AV, ModeIndex.BH)), rel=1e-12)

    def test_coarse_step_fails_self_test(self):
        with pytest.raises(AccuracyError):
            evolve_lossy(cavity(t_max=20.0, dt=1.0))

    def test_self_test_can_be_skipped(self):
        trajectory = evolve_lossy(cavity(t_max=20.0, dt=1.0), self_test=False)
        assert len(trajectory) == 21
