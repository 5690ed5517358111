from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discfrac.acceptance import R1_BASELINE, R4_BASELINE
from discfrac.errors import CaseConstraintViolated
from discfrac.fracops import OperatorSpec, frac_apply_series, membership_ell
from discfrac.grid import Grid, GridFunction
from discfrac.holder import HolderIndex, holder_norm
from discfrac.schauder import (
    DEFAULT_FAMILIES,
    SchauderCase,
    case_ii_identity_residual,
    case_iii_identity_residual,
    family_function,
    run_sweep,
    schauder_ratio_case_i,
    schauder_ratio_case_ii,
    schauder_ratio_case_iii,
    schauder_ratio_case_iv,
)

H4 = [1.0, 0.5, 0.25, 0.125]
H5 = H4 + [1 / 16]


def _impulse(h: float = 1.0) -> GridFunction:
    return GridFunction.impulse(Grid(h, -128, 128))


def _spread(values) -> float:
    return max(values) / min(values)


# --- families -----------------------------------------------------------------------


@pytest.mark.parametrize("family", DEFAULT_FAMILIES, ids=lambda f: f.name)
def test_families_are_compact_and_admissible(family):
    for h in (1.0, 1 / 32):
        u = family_function(family, h, beta=0.5, k=1)
        assert u.is_compact()
        lo, hi = u.support()
        assert lo * h >= -4.0 - h and hi * h <= 4.0 + h
        assert membership_ell(u, 0.5).is_member
        assert u.grid.size <= 2048


def test_random_family_is_seeded():
    a = family_function("random", 0.25)
    b = family_function("random", 0.25)
    np.testing.assert_array_equal(a.samples, b.samples)


# --- case i ------------------------------------------------------------------------------


def test_case_i_baseline():
    assert schauder_ratio_case_i(_impulse(), 0.25, 0.5) == pytest.approx(R1_BASELINE, abs=1e-10)


def test_case_i_step_sweep():
    ratios = [schauder_ratio_case_i(_impulse(), 0.25, 0.5, h=h) for h in H4]
    assert all(math.isfinite(r) for r in ratios)
    assert _spread(ratios) <= 2


def test_case_i_constraint():
    with pytest.raises(CaseConstraintViolated):
        schauder_ratio_case_i(_impulse(), 0.6, 0.5)
    with pytest.raises(CaseConstraintViolated):
        schauder_ratio_case_i(_impulse(), 0.5, 0.5)


def test_case_i_matches_definition():
    u = family_function("bump", 0.25)
    v = frac_apply_series(u, OperatorSpec(-0.3))
    expected = holder_norm(v, HolderIndex(0, 0.7)).norm / holder_norm(u, HolderIndex(0, 0.4)).norm
    assert schauder_ratio_case_i(u, 0.3, 0.4) == expected


# --- case ii ---------------------------------------------------------------------------


def test_case_ii_impulse_and_identity():
    u = _impulse()
    assert math.isfinite(schauder_ratio_case_ii(u, 0.7, 0.5))
    assert case_ii_identity_residual(u, 0.7) <= 1e-9


def test_case_ii_step_sweep():
    ratios = [schauder_ratio_case_ii(_impulse(), 0.7, 0.5, h=h) for h in H5]
    assert _spread(ratios) <= 2


def test_case_ii_constraint():
    with pytest.raises(CaseConstraintViolated):
        schauder_ratio_case_ii(_impulse(), 0.3, 0.4)
    with pytest.raises(CaseConstraintViolated):
        schauder_ratio_case_ii(_impulse(), 0.5, 0.5 + 1e-7)


# --- case iii ---------------------------------------------------------------------------


def test_case_iii_first_layer():
    u = family_function("cusp", 0.125, beta=0.4, k=1)
    assert math.isfinite(schauder_ratio_case_iii(u, 1, 0.3, 0.4))


def test_case_iii_second_layer():
    u = family_function("cusp", 0.125, beta=0.5, k=1)
    r = schauder_ratio_case_iii(u, 1, 0.7, 0.5)
    v = frac_apply_series(u, OperatorSpec(-0.7))
    expected = holder_norm(v, HolderIndex(2, 0.2)).norm / holder_norm(u, HolderIndex(1, 0.5)).norm
    assert r == pytest.approx(expected, rel=1e-12)


def test_case_iii_reduces_to_cases_i_and_ii():
    u = family_function("random", 0.25)
    assert schauder_ratio_case_iii(u, 0, 0.3, 0.4) == schauder_ratio_case_i(u, 0.3, 0.4)
    assert schauder_ratio_case_iii(u, 0, 0.7, 0.5) == schauder_ratio_case_ii(u, 0.7, 0.5)


def test_case_iii_integer_total_refused():
    with pytest.raises(CaseConstraintViolated):
        schauder_ratio_case_iii(_impulse(), 1, 0.5, 0.5)


@pytest.mark.parametrize("family", ["bump", "cusp", "random", "impulse"])
def test_case_iii_commutation(family):
    u = family_function(family, 0.125, beta=0.5, k=1)
    assert case_iii_identity_residual(u, 0.3, k=1) <= 1e-9
    assert case_iii_identity_residual(u, 0.3, k=2) <= 1e-9


# --- case iv -----------------------------------------------------------------------------


def test_case_iv_baseline():
    assert schauder_ratio_case_iv(_impulse(), 0.5) == pytest.approx(R4_BASELINE, abs=1e-10)


def test_case_iv_step_sweep():
    ratios = [schauder_ratio_case_iv(_impulse(), 0.5, h=h) for h in H5]
    assert _spread(ratios) <= 2


def test_case_iv_sign_flip():
    u = family_function("random", 0.5)
    assert schauder_ratio_case_iv(u.scaled(-1.0), 0.4) == pytest.approx(schauder_ratio_case_iv(u, 0.4), rel=1e-12)


def test_zero_input_rejected():
    with pytest.raises(ValueError):
        schauder_ratio_case_iv(GridFunction.from_samples(np.zeros(8)), 0.5)


# --- homogeneity --------------------------------------------------------------------------


@given(st.sampled_from(["bump", "cusp", "random", "impulse"]), st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3))
def test_ratios_are_scale_invariant(family, c):
    u = family_function(family, 0.25, beta=0.5, k=1)
    v = u.scaled(c)
    pairs = [
        (schauder_ratio_case_i(u, 0.25, 0.5), schauder_ratio_case_i(v, 0.25, 0.5)),
        (schauder_ratio_case_ii(u, 0.7, 0.5), schauder_ratio_case_ii(v, 0.7, 0.5)),
        (schauder_ratio_case_iii(u, 1, 0.3, 0.4), schauder_ratio_case_iii(v, 1, 0.3, 0.4)),
        (schauder_ratio_case_iv(u, 0.5), schauder_ratio_case_iv(v, 0.5)),
    ]
    for a, b in pairs:
        assert b == pytest.approx(a, rel=1e-12)


# --- sweeps ----------------------------------------------------------------------------------


def test_case_i_sweep_report():
    h_list = [2.0**-i for i in range(6)]
    report = run_sweep("i", DEFAULT_FAMILIES, [0.3, 0.25, 0.1], [0.4, 0.5, 0.8], h_list)
    assert report.case is SchauderCase.I
    assert len(report.ratios) == 4 * 3 * 6
    assert report.all_finite()
    assert max(report.spreads().values()) <= 2
    assert report.max_ratio >= report.min_ratio > 0
    assert all(v <= 1e-3 for v in report.stability.values())
    data = report.as_dict()
    assert data["max_ratio_defined"] and len(data["ratios"]) == 72


def test_empty_family_list():
    report = run_sweep("iv", [], [0.5], None, [1.0])
    assert report.ratios == {}
    assert report.max_ratio is None
    assert report.as_dict()["max_ratio_defined"] is False


def test_sweep_rejects_bad_pairs_up_front():
    with pytest.raises(CaseConstraintViolated):
        run_sweep("i", DEFAULT_FAMILIES, [0.3, 0.6], [0.4, 0.6], [1.0])


def test_sweep_requires_paired_lists():
    with pytest.raises(ValueError):
        run_sweep("i", DEFAULT_FAMILIES, [0.3, 0.2], [0.4], [1.0])
