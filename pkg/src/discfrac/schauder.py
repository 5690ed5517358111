"""Empirical checks of the discrete Schauder estimates for fractional integrals.

Each case compares a Hölder-type norm of ``(delta_right)^{-alpha} u`` with a
norm of ``u``.  The estimates say the ratio stays bounded independently of the
mesh step and of ``u``; here that is probed by sweeping dyadic steps over a
few families of compactly supported inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .differences import delta_right
from .errors import CaseConstraintViolated, CrossCheckFailed
from .fracops import OperatorSpec, frac_apply_series
from .grid import Grid, GridFunction, common_window
from .holder import HolderIndex, holder_norm

__all__ = [
    "DEFAULT_FAMILIES",
    "SchauderCase",
    "SchauderSweepReport",
    "TestFamily",
    "case_ii_identity_residual",
    "case_iii_identity_residual",
    "family_function",
    "run_sweep",
    "schauder_ratio",
    "schauder_ratio_case_i",
    "schauder_ratio_case_ii",
    "schauder_ratio_case_iii",
    "schauder_ratio_case_iv",
]

BOUNDARY_GAP = 1e-6


class SchauderCase(enum.Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"

    @classmethod
    def parse(cls, value: SchauderCase | str) -> SchauderCase:
        if isinstance(value, SchauderCase):
            return value
        return cls(str(value).lower())


# --- input families --------------------------------------------------------


def _bump(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


def _gen_bump(x, radius, beta, k, rng):
    return _bump(x / radius)


def _gen_cusp(x, radius, beta, k, rng):
    # |x|^(k + beta) is exactly C^{k, beta} at the origin
    return np.abs(x / radius) ** (k + beta) * np.sign(x) ** k * _bump(x / radius)


def _gen_random(x, radius, beta, k, rng):
    centers = rng.uniform(-0.5, 0.5, 6) * radius
    widths = rng.uniform(0.25, 0.5, 6) * radius
    amps = rng.normal(size=6)
    return sum(a * _bump((x - c) / w) for a, c, w in zip(amps, centers, widths))


def _gen_impulse(x, radius, beta, k, rng):
    return (np.abs(x) < 0.5 * (x[1] - x[0])).astype(float)


@dataclass(frozen=True)
class TestFamily:
    """A recipe ``(points, radius, beta, k, rng) -> samples`` for compactly supported inputs."""

    __test__ = False  # not a pytest class

    name: str
    generator: Callable = field(repr=False)
    seed: int = 0


DEFAULT_FAMILIES = (
    TestFamily("bump", _gen_bump),
    TestFamily("cusp", _gen_cusp),
    TestFamily("random", _gen_random, seed=0),
    TestFamily("impulse", _gen_impulse),
)
FAMILIES_BY_NAME = {f.name: f for f in DEFAULT_FAMILIES}


def family_function(
    family: TestFamily | str,
    h: float,
    beta: float = 0.5,
    k: int = 0,
    half_width: float = 16.0,
    radius: float = 4.0,
) -> GridFunction:
    """Sample a family member on ``[-half_width, half_width]`` with step ``h``."""
    if isinstance(family, str):
        family = FAMILIES_BY_NAME[family]
    grid = Grid.symmetric(h, half_width)
    rng = np.random.default_rng(family.seed)
    samples = family.generator(grid.points, radius, beta, k, rng)
    return GridFunction(grid, samples)


# --- ratios ----------------------------------------------------------------


def _check_unit(name: str, value: float) -> None:
    if not 0 < value < 1:
        raise CaseConstraintViolated(f"{name} must lie in (0, 1), got {value}")


def _integral(u: GridFunction, alpha: float) -> GridFunction:
    return frac_apply_series(u, OperatorSpec(-alpha))


def _nonzero_norm(value: float) -> float:
    if value == 0:
        raise ValueError("ratio undefined for the zero function")
    return value


def schauder_ratio_case_i(u: GridFunction, alpha: float, beta: float, h: float | None = None) -> float:
    """``||I u||_{C^{0, beta+alpha}} / ||u||_{C^{0, beta}}`` for ``alpha + beta < 1``."""
    u = _at_step(u, h)
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    if alpha + beta > 1 - BOUNDARY_GAP:
        raise CaseConstraintViolated(f"case i needs alpha + beta < 1, got {alpha + beta}")
    den = _nonzero_norm(holder_norm(u, HolderIndex(0, beta)).norm)
    return holder_norm(_integral(u, alpha), HolderIndex(0, alpha + beta)).norm / den


def case_ii_identity_residual(u: GridFunction, alpha: float) -> float:
    """``delta_right I_alpha u`` against the order ``1 - alpha`` derivative, relative max-norm."""
    a = delta_right(_integral(u, alpha))
    b = frac_apply_series(u, OperatorSpec(1.0 - alpha))
    return _relative_gap(a, b)


def schauder_ratio_case_ii(
    u: GridFunction, alpha: float, beta: float, h: float | None = None, check_tol: float = 1e-9
) -> float:
    """``||I u||_{C^{1, beta+alpha-1}} / ||u||_{C^{0, beta}}`` for ``alpha + beta > 1``."""
    u = _at_step(u, h)
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    if alpha + beta < 1 + BOUNDARY_GAP:
        raise CaseConstraintViolated(f"case ii needs alpha + beta > 1, got {alpha + beta}")
    residual = case_ii_identity_residual(u, alpha)
    if residual > check_tol:
        raise CrossCheckFailed(f"first-difference layer disagrees with the order {1 - alpha} derivative: {residual:.2e}")
    den = _nonzero_norm(holder_norm(u, HolderIndex(0, beta)).norm)
    return holder_norm(_integral(u, alpha), HolderIndex(1, alpha + beta - 1)).norm / den


def _target_index(k: int, alpha: float, beta: float) -> HolderIndex:
    total = k + alpha + beta
    if abs(total - round(total)) < BOUNDARY_GAP:
        raise CaseConstraintViolated(f"k + beta + alpha = {total} is (numerically) an integer")
    l = int(math.floor(total))
    return HolderIndex(l, total - l)


def case_iii_identity_residual(u: GridFunction, alpha: float, k: int = 1) -> float:
    """Largest relative gap between ``delta^j I u`` and ``I delta^j u`` for ``j = 1..k``."""
    worst = 0.0
    du = u
    iu = _integral(u, alpha)
    for _ in range(k):
        du = delta_right(du)
        iu = delta_right(iu)
        worst = max(worst, _relative_gap(iu, _integral(du, alpha)))
    return worst


def schauder_ratio_case_iii(
    u: GridFunction, k: int, alpha: float, beta: float, h: float | None = None
) -> float:
    """``||I u||_{C^{l, s}} / ||u||_{C^{k, beta}}`` with ``l + s = k + beta + alpha``.

    For ``k = 0`` this is the case i or case ii ratio.
    """
    u = _at_step(u, h)
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    target = _target_index(k, alpha, beta)
    den = _nonzero_norm(holder_norm(u, HolderIndex(k, beta)).norm)
    return holder_norm(_integral(u, alpha), target).norm / den


def schauder_ratio_case_iv(u: GridFunction, alpha: float, h: float | None = None) -> float:
    """``||I u||_{C^{0, alpha}} / ||u||_inf``."""
    u = _at_step(u, h)
    _check_unit("alpha", alpha)
    den = _nonzero_norm(float(np.max(np.abs(u.samples))))
    return holder_norm(_integral(u, alpha), HolderIndex(0, alpha)).norm / den


def schauder_ratio(case: SchauderCase | str, u: GridFunction, alpha: float, beta: float | None = None, k: int = 1) -> float:
    case = SchauderCase.parse(case)
    if case is SchauderCase.I:
        return schauder_ratio_case_i(u, alpha, beta)
    if case is SchauderCase.II:
        return schauder_ratio_case_ii(u, alpha, beta)
    if case is SchauderCase.III:
        return schauder_ratio_case_iii(u, k, alpha, beta)
    return schauder_ratio_case_iv(u, alpha)


def check_case_constraint(case: SchauderCase | str, alpha: float, beta: float | None, k: int = 1) -> None:
    case = SchauderCase.parse(case)
    _check_unit("alpha", alpha)
    if case is SchauderCase.IV:
        return
    if beta is None:
        raise CaseConstraintViolated(f"case {case.value} needs beta")
    _check_unit("beta", beta)
    total = alpha + beta
    if case is SchauderCase.I and total > 1 - BOUNDARY_GAP:
        raise CaseConstraintViolated(f"case i needs alpha + beta < 1, got {total}")
    if case is SchauderCase.II and total < 1 + BOUNDARY_GAP:
        raise CaseConstraintViolated(f"case ii needs alpha + beta > 1, got {total}")
    if case is SchauderCase.III:
        _target_index(k, alpha, beta)


def _at_step(u: GridFunction, h: float | None) -> GridFunction:
    return u if h is None else u.with_step(h)


def _relative_gap(a: GridFunction, b: GridFunction) -> float:
    lo, hi = common_window(a, b)
    ra, rb = a.restricted(lo, hi), b.restricted(lo, hi)
    mask = ra.valid_mask & rb.valid_mask
    if not mask.any():
        return 0.0
    scale = max(1.0, float(np.max(np.abs(rb.samples[mask]))))
    return float(np.max(np.abs(ra.samples[mask] - rb.samples[mask]))) / scale


# --- sweeps ------------------------------------------------------------------


@dataclass
class SchauderSweepReport:
    case: SchauderCase
    alphas: list
    betas: list
    h_list: list
    k: int = 1
    half_width: float = 16.0
    ratios: dict = field(default_factory=dict)
    identity_residuals: dict = field(default_factory=dict)
    stability: dict = field(default_factory=dict)

    @property
    def max_ratio(self) -> float | None:
        return max(self.ratios.values()) if self.ratios else None

    @property
    def min_ratio(self) -> float | None:
        return min(self.ratios.values()) if self.ratios else None

    @property
    def argmax(self) -> tuple | None:
        if not self.ratios:
            return None
        return max(self.ratios, key=self.ratios.get)

    def spreads(self) -> dict:
        """``max/min`` of the ratio over the step sweep, per ``(family, alpha, beta)``."""
        grouped: dict = {}
        for (family, alpha, beta, h), r in self.ratios.items():
            grouped.setdefault((family, alpha, beta), []).append(r)
        return {key: max(v) / min(v) for key, v in grouped.items()}

    def all_finite(self) -> bool:
        return all(math.isfinite(r) and r > 0 for r in self.ratios.values())

    def as_dict(self) -> dict:
        def key(t):
            return "|".join(str(x) for x in t)

        return {
            "case": self.case.value,
            "grid": {
                "alphas": self.alphas,
                "betas": self.betas,
                "h_list": self.h_list,
                "k": self.k,
                "half_width": self.half_width,
            },
            "ratios": [
                {"family": f, "alpha": a, "beta": b, "h": h, "ratio": r}
                for (f, a, b, h), r in self.ratios.items()
            ],
            "spreads": {key(k): v for k, v in self.spreads().items()},
            "max_ratio": self.max_ratio,
            "min_ratio": self.min_ratio,
            "max_ratio_defined": self.max_ratio is not None,
            "identity_residuals": {key(k): v for k, v in self.identity_residuals.items()},
            "stability": {key(k): v for k, v in self.stability.items()},
        }


def run_sweep(
    case: SchauderCase | str,
    families,
    alphas,
    betas,
    h_list,
    k: int = 1,
    half_width: float = 16.0,
    radius: float = 4.0,
    check_stability: bool = True,
) -> SchauderSweepReport:
    """Evaluate the case ratio over families, ``(alpha, beta)`` pairs and mesh steps.

    ``alphas`` and ``betas`` are paired index-wise (``betas`` is ignored for
    case iv).  Every pair is checked against the case constraint before any
    work is done.  With ``check_stability`` the ratio at the global maximum
    is recomputed on a window twice as wide and the relative change stored.
    """
    case = SchauderCase.parse(case)
    alphas = [float(a) for a in alphas]
    if case is SchauderCase.IV:
        betas = [None] * len(alphas) if not betas else [float(b) for b in betas]
    else:
        betas = [float(b) for b in betas]
    if len(alphas) != len(betas):
        raise ValueError("alphas and betas are paired and must have equal length")
    for a, b in zip(alphas, betas):
        check_case_constraint(case, a, b, k)
    families = [FAMILIES_BY_NAME[f] if isinstance(f, str) else f for f in families]
    report = SchauderSweepReport(case, alphas, betas, [float(h) for h in h_list], k, half_width)

    def member(family, h, beta, width):
        fam_beta = beta if beta is not None else 0.5
        fam_k = k if case is SchauderCase.III else 0
        return family_function(family, h, fam_beta, fam_k, width, radius)

    for family in families:
        for a, b in zip(alphas, betas):
            for h in report.h_list:
                u = member(family, h, b, half_width)
                report.ratios[(family.name, a, b, h)] = schauder_ratio(case, u, a, b, k)
                if case is SchauderCase.II:
                    report.identity_residuals[(family.name, a, b, h)] = case_ii_identity_residual(u, a)
                elif case is SchauderCase.III:
                    report.identity_residuals[(family.name, a, b, h)] = case_iii_identity_residual(u, a, k)

    if check_stability and report.ratios:
        fam_name, a, b, h = report.argmax
        family = next(f for f in families if f.name == fam_name)
        wide = schauder_ratio(case, member(family, h, b, 2 * half_width), a, b, k)
        base = report.ratios[(fam_name, a, b, h)]
        report.stability[(fam_name, a, b, h)] = abs(wide - base) / base
    return report
