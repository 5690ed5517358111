from __future__ import annotations

import itertools

import numpy as np
import pytest
from helpers import compact_random
from hypothesis import given
from hypothesis import strategies as st

from discfrac.differences import mixed_difference
from discfrac.errors import ExtensionRequired
from discfrac.grid import Extension, Grid, GridFunction
from discfrac.holder import (
    HolderIndex,
    _pair_scan,
    double_window_stability,
    holder_norm,
    holder_seminorm,
    inflate_window,
)

betas = st.floats(0.05, 1.0)
steps = st.sampled_from([1.0, 0.5, 0.125])


def _brute_force(values: np.ndarray, h: float, beta: float, n_min: int):
    """Every pair (j, m), j < m, in lexicographic order; first maximum wins."""
    best, pair = 0.0, None
    for a, b in itertools.combinations(range(values.size), 2):
        q = abs(values[a] - values[b]) / (h * (b - a)) ** beta
        if pair is None or q > best:
            best, pair = q, (n_min + a, n_min + b)
    return best, pair


def test_index_validation():
    with pytest.raises(ValueError):
        HolderIndex(-1, 0.5)
    with pytest.raises(ValueError):
        HolderIndex(0, 0.0)
    with pytest.raises(ValueError):
        HolderIndex(0, 1.5)


@pytest.mark.parametrize("l, s", [(0, 0), (1, 0), (0, 2), (1, 1)])
def test_constant_has_zero_seminorm(l, s):
    u = GridFunction.from_samples(np.full(12, 3.0), extension="constant")
    assert holder_seminorm(u, l, s, 0.4)[0] == 0.0


@given(steps, st.floats(-5, 5).filter(lambda a: abs(a) > 1e-3))
def test_linear_slope(h, slope):
    n = np.arange(-20, 21)
    u = GridFunction.from_samples(slope * n * h, h=h, n_min=-20, extension="undefined")
    assert holder_seminorm(u, 0, 0, 1.0)[0] == pytest.approx(abs(slope), rel=1e-12)


def test_impulse_seminorm_by_exhaustive_scan():
    # neighbours of the spike give the largest quotient, |1 - 0| / 1^beta
    value, pair = holder_seminorm(GridFunction.impulse(Grid(1.0, -4, 4)), 0, 0, 0.5)
    assert value == 1.0
    assert pair == (-1, 0)


def test_constant_norm():
    u = GridFunction.from_samples(np.full(9, -2.5), extension="constant")
    assert holder_norm(u, HolderIndex(0, 0.7)).norm == 2.5


def test_linear_norm_order_one():
    n = np.arange(-5, 6)
    u = GridFunction.from_samples(n.astype(float), n_min=-5, extension="undefined")
    report = holder_norm(u, HolderIndex(1, 1.0))
    assert report.seminorms == {(1, 0): 0.0, (0, 1): 0.0}
    assert report.sup_terms[(0, 0)] == 5.0
    assert report.norm == max(5.0, 1.0) + 0.0


def test_impulse_norm():
    report = holder_norm(GridFunction.impulse(Grid(1.0, -16, 16)), HolderIndex(0, 0.5))
    assert report.norm == 2.0
    assert report.as_dict()["argmax_pairs"] == {"0,0": [-1, 0]}


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=24), betas, steps, st.integers(0, 2), st.integers(0, 2))
def test_pair_scan_matches_brute_force(values, beta, h, l, s):
    u = GridFunction.from_samples(values, h=h, n_min=-3)
    value, pair = holder_seminorm(u, l, s, beta)
    d = mixed_difference(inflate_window(u), l, s)
    expected, expected_pair = _brute_force(np.asarray(d.samples), h, beta, d.grid.n_min)
    assert value == pytest.approx(expected, rel=1e-12, abs=1e-300)
    if expected > 0:
        assert pair == expected_pair


@given(st.integers(0, 30), st.floats(-10, 10).filter(lambda c: abs(c) > 1e-6), st.integers(0, 2), betas)
def test_homogeneity(seed, c, k, beta):
    u = compact_random(seed, 16, 4, h=0.5)
    idx = HolderIndex(k, beta)
    a = holder_norm(u.scaled(c), idx).norm
    b = holder_norm(u, idx).norm
    assert a == pytest.approx(abs(c) * b, rel=1e-12)


@given(st.integers(0, 30), st.integers(0, 2), st.integers(0, 2), betas)
def test_composition_order_irrelevant(seed, l, s, beta):
    u = compact_random(seed, 16, 4)
    a = mixed_difference(u, l, s)
    b = mixed_difference(u, l, s, right_first=True)
    va = _pair_scan(a.samples, a.valid_mask, a.h, beta, a.grid.n_min)
    vb = _pair_scan(b.samples, b.valid_mask, b.h, beta, b.grid.n_min)
    assert va == vb


@given(st.integers(0, 30), betas, st.integers(1, 20), st.integers(1, 20))
def test_window_monotone(seed, beta, left, right):
    u = compact_random(seed, 16, 0).with_extension(Extension.undefined())
    wide = compact_random(seed, 16, 0).padded(left, right).with_extension(Extension.undefined())
    assert holder_seminorm(wide, 0, 0, beta, inflate=False)[0] >= holder_seminorm(u, 0, 0, beta, inflate=False)[0]


@given(st.integers(0, 30), betas, st.integers(0, 2))
def test_adjacent_pairs_lower_bound(seed, beta, l):
    u = compact_random(seed, 16, 4)
    d = mixed_difference(inflate_window(u), l, 0)
    adjacent = np.max(np.abs(np.diff(d.samples))) / d.h**beta
    assert holder_seminorm(u, l, 0, beta)[0] >= adjacent


def test_double_window_interior_support():
    grid = Grid.symmetric(1 / 8, 16.0)
    x = grid.points
    u = GridFunction(grid, np.where(np.abs(x) < 4, np.cos(np.pi * x / 8) ** 2, 0.0))
    assert double_window_stability(u, HolderIndex(0, 0.5)) <= 1e-3
    assert double_window_stability(u, HolderIndex(1, 0.5)) <= 1e-3


def test_double_window_edge_support_flagged():
    # a ramp ending at the window edge hides its drop to zero outside the window
    u = GridFunction.from_samples(np.concatenate([np.zeros(8), [0.25, 0.5, 0.75, 1.0]]))
    assert double_window_stability(u, HolderIndex(0, 0.5)) > 1e-3


def test_double_window_zero_function():
    u = GridFunction.from_samples(np.zeros(10))
    assert double_window_stability(u, HolderIndex(0, 0.5)) == 0.0


def test_double_window_needs_compact_input():
    u = GridFunction.from_samples(np.ones(10), extension="constant")
    with pytest.raises(ExtensionRequired):
        double_window_stability(u, HolderIndex(0, 0.5))


def test_inflation_pads_by_support_diameter():
    u = GridFunction.from_samples([0.0, 1.0, 2.0, 0.0], n_min=0)
    g = inflate_window(u).grid
    assert (g.n_min, g.n_max) == (1 - 2, 2 + 2)
