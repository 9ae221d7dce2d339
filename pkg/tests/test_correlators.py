import pytest
from pydantic import ValidationError

from pdcsim.criteria.correlators import (
    CorrelatorSpec, all_specs, b_correlator, correlator_allowed, cross_correlator, default_spec,
    forbidden_partners, qc_ratio, sample_spec_grid,
)
from pdcsim.dynamics.lossless import classical_counterpart, evolve_lossless, intensity
from pdcsim.dynamics.params import SteadyParams
from pdcsim.errors import CapacityError
from pdcsim.gaussian.modes import ModeIndex, StatKind
from pdcsim.gaussian.moments import thermal_state

PAIR_SPEC = default_spec(2)                      # b_v a_h
SWAPPED_PAIR_SPEC = CorrelatorSpec(n=2, m=2, l=1, k=0)  # b_h a_v
ORDERS = range(1, 7)


class TestCorrelatorSpec:
    """Index bookkeeping of B^(n)_{m,l,k}"""

    @pytest.mark.parametrize("indices", [(2, 3, 1, 0), (2, 1, 2, 0), (2, 1, 0, 1)])
    def test_ordering_enforced(self, indices):
        n, m, l, k = indices
        with pytest.raises(ValidationError):
            CorrelatorSpec(n=n, m=m, l=l, k=k)

    @pytest.mark.parametrize("spec", sample_spec_grid(4))
    def test_exponents_sum_to_order(self, spec):
        assert sum(power for _, power in spec.exponents()) == spec.n
        assert len(spec.annihilators()) == spec.n

    def test_default_specs(self):
        assert [m for m, p in default_spec(1).exponents() if p] == [ModeIndex.AH]
        assert dict(PAIR_SPEC.exponents()) == {ModeIndex.BV: 1, ModeIndex.BH: 0, ModeIndex.AV: 0, ModeIndex.AH: 1}

    def test_all_specs_count(self):
        # (n+1)(n+2)(n+3)/6 triples 0 <= k <= l <= m <= n
        assert len(all_specs(3)) == 20

    def test_alpha(self):
        assert SWAPPED_PAIR_SPEC.alpha == (0, 1, 2)


class TestBCorrelator:
    """<B^dagger B> through the Wick engine"""

    @pytest.mark.parametrize("r", [0.3, 1.0])
    def test_order_one_is_intensity(self, r):
        state = evolve_lossless(SteadyParams(r=r, n0=0.3))
        assert b_correlator(state, default_spec(1)) == pytest.approx(intensity(r, 0.3))

    @pytest.mark.parametrize("spec", sample_spec_grid(3))
    def test_vacuum(self, spec):
        assert b_correlator(thermal_state(0.0), spec) == 0.0

    @pytest.mark.parametrize("r", [0.3, 1.5])
    def test_pair_correlator(self, squeezed_vacuum, r):
        state = squeezed_vacuum(r)
        n = state.occupation(ModeIndex.AH)
        a = abs(state.pair_amplitude(ModeIndex.AH, ModeIndex.BV))
        assert b_correlator(state, PAIR_SPEC) == pytest.approx(n ** 2 + a ** 2, rel=1e-12)

    @pytest.mark.parametrize("spec", sample_spec_grid(4))
    @pytest.mark.parametrize("stat", list(StatKind))
    def test_non_negative_real(self, noisy_state, spec, stat):
        state = noisy_state(stat=stat)
        value = cross_correlator(state, spec, spec)
        assert value.real >= 0.0
        assert abs(value.imag) <= 1e-9 * max(1.0, abs(value))

    def test_capacity(self, noisy_state):
        with pytest.raises(CapacityError):
            b_correlator(noisy_state(), CorrelatorSpec(n=9, m=5, l=5, k=5))


class TestSelectionRule:
    """Charge-forbidden cross correlators vanish"""

    @pytest.mark.parametrize("spec", [default_spec(2), default_spec(3), SWAPPED_PAIR_SPEC])
    @pytest.mark.parametrize("stat", list(StatKind))
    def test_forbidden_partners_vanish(self, noisy_state, spec, stat):
        state = noisy_state(stat=stat)
        for other in forbidden_partners(spec, max_order=spec.n + 1):
            assert cross_correlator(state, spec, other) == 0j

    def test_partners_exclude_allowed(self):
        partners = forbidden_partners(PAIR_SPEC, max_order=3)
        assert PAIR_SPEC not in partners
        assert SWAPPED_PAIR_SPEC not in partners
        assert partners[0].n == PAIR_SPEC.n

    def test_odd_total_order_forbidden(self):
        assert not correlator_allowed(default_spec(1), PAIR_SPEC)

    def test_charge_neutral_off_diagonal_survives(self):
        assert correlator_allowed(PAIR_SPEC, SWAPPED_PAIR_SPEC)
        params = SteadyParams(r=1.0, n0=0.3)
        quantum = evolve_lossless(params)
        classical = evolve_lossless(classical_counterpart(params))
        a = abs(quantum.pair_amplitude(ModeIndex.AH, ModeIndex.BV))
        value_q = cross_correlator(quantum, PAIR_SPEC, SWAPPED_PAIR_SPEC)
        value_c = cross_correlator(classical, PAIR_SPEC, SWAPPED_PAIR_SPEC)
        assert value_q == pytest.approx(-a ** 2)
        assert value_c == pytest.approx(value_q)


class TestQCRatio:
    """Quantum/classical convergence of <B^dagger B>"""

    def test_intensity_ratio(self):
        report = qc_ratio(default_spec(1), SteadyParams(r=0.0, n0=0.0), [2.0])
        assert report.pairs()[0][0] == 2.0
        assert report.pairs()[0][1] == pytest.approx(0.9634, abs=1e-4)

    @pytest.mark.parametrize("order", ORDERS)
    def test_convergence(self, order):
        report = qc_ratio(default_spec(order), SteadyParams(r=0.0, n0=0.0), [1.0, 2.0, 3.0, 4.0])
        gaps = [abs(ratio - 1.0) for _, ratio in report.pairs()]
        assert gaps[2] < 0.05
        assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
        assert report.selection_checks
        assert all(check.vanishes for check in report.selection_checks)

    def test_large_r(self):
        report = qc_ratio(default_spec(4), SteadyParams(r=0.0, n0=0.3), [8.0])
        assert report.points[0].ratio == pytest.approx(1.0, abs=1e-3)
