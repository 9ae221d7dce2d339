import pytest

from pdcsim import selfcheck
from pdcsim.errors import CapacityError
from pdcsim.selfcheck import CheckResult, run_suite

SUITES = [
    selfcheck.check_closed_forms,
    selfcheck.check_zero_noise_singlet,
    selfcheck.check_wash_out,
    selfcheck.check_threshold,
    selfcheck.check_anomalous_bridge,
    selfcheck.check_correlator_convergence,
    selfcheck.check_fock_agreement,
    selfcheck.check_lossy_cross_oracle,
    selfcheck.check_cavity_crossover,
    selfcheck.check_monte_carlo,
]


@pytest.mark.parametrize("suite", SUITES, ids=lambda suite: suite.__name__)
def test_suite_passes(suite):
    result = suite()
    assert result.passed, result.detail


def test_raised_error_fails_suite():
    def broken():
        raise CapacityError("too many factors")

    result = run_suite("broken", broken)
    assert result == CheckResult("broken", False, "CapacityError: too many factors")
