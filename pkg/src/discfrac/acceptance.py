"""Acceptance criteria shared by the test suite and ``discfrac selftest``.

Each criterion is a function returning a :class:`CriterionResult` with the
measured worst-case value next to the threshold it is held to.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fracops import (
    OperatorSpec,
    composition_residual,
    fft_apply,
    frac_apply_series,
    frac_derivative_quadrature,
    frac_integral_quadrature,
)
from .grid import Grid, GridFunction, max_abs_difference
from .holder import HolderIndex, double_window_stability, holder_norm, holder_seminorm
from .kernel import (
    _recurrence_values,
    asymptotic_check,
    convolve_kernels,
    fit_asymptotic_constant,
    forward_difference_kernel,
    kernel_loggamma,
    kernel_recurrence,
    lemma2_telescoping_check,
)
from .schauder import DEFAULT_FAMILIES, run_sweep, schauder_ratio_case_i, schauder_ratio_case_iv
from .semigroup import apply_semigroup, cauchy_residual, semigroup_law_residual

__all__ = ["CRITERIA", "CriterionResult", "R1_BASELINE", "R4_BASELINE", "run_criteria"]

# Frozen regression baselines: impulse on [-128, 128], h = 1.
R1_BASELINE = 1.0  # case i, alpha = 0.25, beta = 0.5
R4_BASELINE = 2.0  # case iv, alpha = 0.5


@dataclass
class CriterionResult:
    number: int
    name: str
    module: str
    passed: bool
    measured: float
    threshold: float
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.number:2d} {self.module:<9} {self.name}: "
            f"measured={self.measured:.3e} threshold={self.threshold:.3e} ({self.seconds:.2f}s)"
        )

    def as_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "module": self.module,
            "passed": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
            "seconds": self.seconds,
            "details": self.details,
        }


def _random_compact(rng: np.random.Generator, size: int = 48, pad: int = 16, h: float = 1.0) -> GridFunction:
    samples = np.zeros(size + 2 * pad)
    samples[pad:-pad] = rng.normal(size=size)
    return GridFunction.from_samples(samples, h=h, n_min=-(size // 2 + pad))


def _relative_gap(a: GridFunction, b: GridFunction) -> float:
    scale = float(np.max(np.abs(b.samples)))
    return max_abs_difference(a, b) / scale


# --- kernel ------------------------------------------------------------------


def criterion_01(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed)
    alphas = rng.uniform(-1, 1, 50)
    alphas[np.abs(alphas) < 1e-3] = 0.5
    M = 10**4
    _recurrence_values.cache_clear()
    start = time.perf_counter()
    worst = 0.0
    for a in alphas:
        rec = kernel_recurrence(float(a), M).values
        lg = kernel_loggamma(float(a), M).values
        worst = max(worst, float(np.max(np.abs(rec - lg) / np.abs(lg))))
    elapsed = time.perf_counter() - start
    return CriterionResult(
        1, "kernel recurrence vs log-Gamma", "kernel", worst <= 1e-9 and elapsed < 1.0, worst, 1e-9,
        {"runtime_s": elapsed, "runtime_limit_s": 1.0, "M": M, "n_alpha": 50},
    )


def criterion_02(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 2)
    N = 256
    pairs = [(float(a), float(b)) for a, b in rng.uniform(-1.5, 1.5, (20, 2))]
    pairs[0] = (0.7, -0.4)  # guarantee mixed signs are present
    pairs[1] = (-0.3, 1.2)
    _recurrence_values.cache_clear()
    start = time.perf_counter()
    worst = 0.0
    for a, b in pairs:
        product = convolve_kernels(a, b, N)
        direct = kernel_recurrence(a + b, N).values
        worst = max(worst, float(np.max(np.abs(product - direct) / np.maximum(1.0, np.abs(direct)))))
    elapsed = time.perf_counter() - start
    return CriterionResult(
        2, "convolution identity", "kernel", worst <= 1e-11 and elapsed < 1.0, worst, 1e-11,
        {"runtime_s": elapsed, "runtime_limit_s": 1.0, "N": N, "pairs": pairs},
    )


def criterion_03(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 3)
    M = 10**4
    worst = 0.0
    for a in rng.uniform(-1, 1, 10):
        diffs = forward_difference_kernel(kernel_recurrence(float(a), M), check=False)
        target = kernel_recurrence(float(a) - 1.0, M).values[1:]
        worst = max(worst, float(np.max(np.abs(diffs - target))))
    return CriterionResult(3, "kernel difference identity", "kernel", worst <= 1e-12, worst, 1e-12, {"M": M})


def criterion_04(seed: int = 0) -> CriterionResult:
    worst_ratio = 0.0
    failures = []
    for a in np.round(np.arange(1, 10) / 10, 1):
        for gap in range(1, 65):
            c = lemma2_telescoping_check(float(a), gap, 0)
            ratio = abs(c.truncated) / (c.tail_bound + c.roundoff)
            worst_ratio = max(worst_ratio, ratio)
            if not c.within_bound:
                failures.append((float(a), gap))
    return CriterionResult(
        4, "telescoping residual within tail bound", "kernel", not failures, worst_ratio, 1.0,
        {"failures": failures, "measured_is": "max |residual| / certified bound"},
    )


def criterion_05(seed: int = 0) -> CriterionResult:
    n = np.arange(10**3, 10**5 + 1)
    worst = 0.0
    constants = {}
    for a in (0.1, 0.5, 0.9):
        c_emp = fit_asymptotic_constant(a, 10, 100)
        constants[a] = c_emp
        err = asymptotic_check(a, n)
        worst = max(worst, float(np.max(err * n / (2.0 * c_emp))))
    return CriterionResult(
        5, "kernel asymptotics", "kernel", worst <= 1.0, worst, 1.0,
        {"C_emp": constants, "measured_is": "max n * error / (2 C_emp)"},
    )


# --- semigroup -----------------------------------------------------------------


def criterion_06(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 6)
    times = (0.5, 1.0, 2.5, 5.0, 10.0, 20.0)
    # windows reach far enough left to hold all mass moved by t + s <= 40
    random = np.zeros(201)
    random[160:192] = rng.normal(size=32)
    inputs = [GridFunction.impulse(Grid(1.0, -160, 40)), GridFunction.from_samples(random, n_min=-160)]
    law = 0.0
    for u in inputs:
        for t in times:
            for s in times:
                law = max(law, semigroup_law_residual(u, t, s))
    mass = 0.0
    contraction = 0.0
    for u in inputs:
        for t in times:
            v = apply_semigroup(u, t)
            mass = max(mass, abs(math.fsum(v.samples) - math.fsum(u.samples)))
            contraction = max(contraction, float(np.max(np.abs(v.samples))) - float(np.max(np.abs(u.samples))))
            contraction = max(contraction, float(np.sum(np.abs(v.samples)) - np.sum(np.abs(u.samples))))
    passed = law <= 1e-10 and mass <= 1e-10 and contraction <= 1e-12
    return CriterionResult(
        6, "semigroup law, mass, contraction", "semigroup", passed, law, 1e-10,
        {"mass_defect": mass, "contraction_excess": contraction},
    )


def criterion_07(seed: int = 0) -> CriterionResult:
    u = GridFunction.impulse(Grid(1.0, -40, 10))
    dts = [0.1 / 2**i for i in range(4)]
    residuals = [cauchy_residual(u, 1.0, dt) for dt in dts]
    ratios = [residuals[i] / residuals[i + 1] for i in range(len(dts) - 1)]
    worst = max(abs(r - 4.0) for r in ratios)
    passed = all(3.5 <= r <= 4.5 for r in ratios)
    return CriterionResult(
        7, "Cauchy problem second order", "semigroup", passed, worst, 0.5,
        {"dt": dts, "residuals": residuals, "ratios": ratios, "measured_is": "max |ratio - 4|"},
    )


# --- fracops -------------------------------------------------------------------


def criterion_08(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 8)
    u = _random_compact(rng)
    worst = 0.0
    for a in (0.1, 0.25, 0.5, 0.75, 0.9):
        v = frac_apply_series(frac_apply_series(u, OperatorSpec(a)), OperatorSpec(-a))
        worst = max(worst, max_abs_difference(v, u))
    return CriterionResult(8, "inverse law", "fracops", worst <= 1e-8, worst, 1e-8)


def criterion_09(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 9)
    u = _random_compact(rng)
    pairs = [(float(a), float(b)) for a, b in rng.uniform(-1.5, 1.5, (20, 2))]
    worst = max(composition_residual(u, a, b) for a, b in pairs)
    return CriterionResult(9, "composition law", "fracops", worst <= 1e-8, worst, 1e-8, {"pairs": pairs})


def criterion_10(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 10)
    inputs = {"impulse": GridFunction.impulse(Grid(1.0, -32, 8)), "random": _random_compact(rng, 24, 8)}
    worst = 0.0
    for u in inputs.values():
        for a in np.linspace(0.1, 0.9, 9):
            a = float(a)
            worst = max(worst, _relative_gap(frac_integral_quadrature(u, a), frac_apply_series(u, OperatorSpec(-a))))
            worst = max(worst, _relative_gap(frac_derivative_quadrature(u, a), frac_apply_series(u, OperatorSpec(a))))
    return CriterionResult(10, "series vs Gamma-formula quadrature", "fracops", worst <= 1e-7, worst, 1e-7)


def criterion_11(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 11)
    u = GridFunction.from_samples(rng.normal(size=4096))
    worst = 0.0
    for order in (-1.3, -0.75, -0.3, 0.4, 0.9, 1.6):
        spec = OperatorSpec(order)
        worst = max(worst, max_abs_difference(fft_apply(u, spec), frac_apply_series(u, spec)))
    return CriterionResult(11, "FFT vs direct summation", "fracops", worst <= 1e-10, worst, 1e-10, {"N": 4096})


# --- holder ----------------------------------------------------------------------


def criterion_12(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed + 12)
    u = _random_compact(rng, 32, 8, h=0.25)
    homogeneity = 0.0
    for idx in (HolderIndex(0, 0.5), HolderIndex(1, 0.3), HolderIndex(2, 1.0)):
        base = holder_norm(u, idx).norm
        for c in (-3.0, 0.1, 10.0):
            homogeneity = max(homogeneity, abs(holder_norm(u.scaled(c), idx).norm - abs(c) * base) / (abs(c) * base))

    slope = -0.37
    line = GridFunction.from_samples(slope * 0.25 * np.arange(-20, 21), h=0.25, n_min=-20, extension="undefined")
    linear_gap = abs(holder_seminorm(line, 0, 0, 1.0)[0] - abs(slope))

    grid = Grid.symmetric(1 / 8, 16.0)
    x = grid.points
    bump = np.where(np.abs(x) < 4, np.exp(1 - 1 / np.maximum(1 - (x / 4) ** 2, 1e-300)), 0.0)
    inner = GridFunction(grid, bump)
    stability = max(double_window_stability(inner, idx) for idx in (HolderIndex(0, 0.5), HolderIndex(1, 0.5)))

    passed = homogeneity <= 1e-12 and linear_gap <= 1e-12 and stability <= 1e-3
    return CriterionResult(
        12, "Hölder homogeneity, slope, window doubling", "holder", passed, homogeneity, 1e-12,
        {"linear_slope_gap": linear_gap, "double_window_change": stability},
    )


# --- schauder ------------------------------------------------------------------------


SWEEPS = (
    ("i", (0.3, 0.25, 0.1), (0.4, 0.5, 0.8)),
    ("ii", (0.7, 0.6, 0.9), (0.5, 0.7, 0.3)),
    ("iii", (0.3, 0.7, 0.25), (0.4, 0.5, 0.5)),
    ("iv", (0.25, 0.5, 0.75), None),
)
H_SWEEP = tuple(2.0**-i for i in range(6))


def criterion_13(seed: int = 0) -> CriterionResult:
    start = time.perf_counter()
    spreads = {}
    residuals = {}
    stability = {}
    finite = True
    largest_window = 0
    for case, alphas, betas in SWEEPS:
        report = run_sweep(case, DEFAULT_FAMILIES, alphas, betas, H_SWEEP, k=1)
        finite &= report.all_finite()
        spreads[case] = max(report.spreads().values())
        if report.identity_residuals:
            residuals[case] = max(report.identity_residuals.values())
        stability[case] = max(report.stability.values())
        largest_window = max(largest_window, Grid.symmetric(min(H_SWEEP), report.half_width).size)
    elapsed = time.perf_counter() - start
    worst_spread = max(spreads.values())
    passed = (
        finite
        and worst_spread <= 2.0
        and max(residuals.values()) <= 1e-9
        and max(stability.values()) <= 1e-3
        and elapsed < 120.0
        and largest_window <= 2048
    )
    return CriterionResult(
        13, "Schauder sweeps", "schauder", passed, worst_spread, 2.0,
        {
            "all_finite": finite,
            "max_spread_per_case": spreads,
            "identity_residual_per_case": residuals,
            "window_doubling_change_per_case": stability,
            "window_points": largest_window,
            "runtime_s": elapsed,
            "runtime_limit_s": 120.0,
        },
    )


def criterion_14(seed: int = 0) -> CriterionResult:
    u = GridFunction.impulse(Grid(1.0, -128, 128))
    r1 = schauder_ratio_case_i(u, 0.25, 0.5)
    r4 = schauder_ratio_case_iv(u, 0.5)
    worst = max(abs(r1 - R1_BASELINE), abs(r4 - R4_BASELINE))
    return CriterionResult(14, "regression baselines", "schauder", worst <= 1e-10, worst, 1e-10, {"r1": r1, "r4": r4})


CRITERIA: dict[int, tuple[str, Callable[..., CriterionResult]]] = {
    1: ("kernel", criterion_01),
    2: ("kernel", criterion_02),
    3: ("kernel", criterion_03),
    4: ("kernel", criterion_04),
    5: ("kernel", criterion_05),
    6: ("semigroup", criterion_06),
    7: ("semigroup", criterion_07),
    8: ("fracops", criterion_08),
    9: ("fracops", criterion_09),
    10: ("fracops", criterion_10),
    11: ("fracops", criterion_11),
    12: ("holder", criterion_12),
    13: ("schauder", criterion_13),
    14: ("schauder", criterion_14),
}


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    """Run one criterion; an exception counts as a failure carrying its message."""
    module, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        result = fn(seed)
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        result = CriterionResult(number, fn.__name__, module, False, float("nan"), float("nan"), {"error": repr(exc)})
    result.seconds = time.perf_counter() - start
    return result


def run_criteria(modules=None, seed: int = 0) -> list[CriterionResult]:
    """Run every criterion, or those whose module tag is in ``modules``."""
    selected = [n for n, (m, _) in CRITERIA.items() if modules is None or m in modules]
    return [run_criterion(n, seed) for n in selected]

