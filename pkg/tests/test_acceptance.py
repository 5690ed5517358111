"""The fourteen acceptance criteria at their stated tolerances."""

from __future__ import annotations

import pytest

from discfrac.acceptance import CRITERIA, run_criterion

from helpers import ACCEPTANCE_LINES

IDS = {
    1: "kernel_recurrence_vs_loggamma",
    2: "kernel_convolution_identity",
    3: "kernel_difference_identity",
    4: "kernel_telescoping_tail_bound",
    5: "kernel_asymptotic_envelope",
    6: "semigroup_law_mass_contraction",
    7: "cauchy_second_order",
    8: "inverse_law",
    9: "composition_law",
    10: "series_vs_quadrature",
    11: "fft_vs_direct",
    12: "holder_homogeneity_slope_window",
    13: "schauder_sweeps",
    14: "regression_baselines",
}


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"c{n:02d}_{IDS[n]}" for n in sorted(CRITERIA)])
def test_criterion(number):
    result = run_criterion(number)
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.details
