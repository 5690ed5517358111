r"""Discrete fractional integrals and derivatives on ``Z_h``.

For a right-sided operator of order ``a`` (``a < 0`` integrates, ``a > 0``
differentiates)

.. math::

    (\delta_{\rm right})^{a} u(nh) = h^{-a} \sum_{j \ge 0} \Lambda^{a}(j)\, u((n+j)h),

where :math:`\Lambda^{a} = \Lambda^{-(-a)}` is the kernel of
:mod:`discfrac.kernel`.  Left-sided operators are obtained by reflecting
``n -> -n``.  Two evaluation routes that never touch the kernel are provided
as oracles: Gamma-function integrals of the Poisson semigroup, computed by
Gauss-Jacobi and Gauss-Laguerre quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy import special

from .differences import delta, delta_left, delta_right, mixed_difference
from .errors import CrossCheckFailed, ExtensionRequired, NotInDomain, QuadratureNotConverged, WindowTooSmall
from .grid import UNDEFINED, ZERO, ExtensionKind, GridFunction, Side, common_window, max_abs_difference
from .kernel import is_gamma_pole, kernel_recurrence

__all__ = [
    "MembershipBasis",
    "MembershipReport",
    "OperatorSpec",
    "QuadratureConfig",
    "composition_residual",
    "delta",
    "delta_left",
    "delta_right",
    "fft_apply",
    "frac_apply",
    "frac_apply_general",
    "frac_apply_series",
    "frac_derivative_quadrature",
    "frac_integral_quadrature",
    "membership_ell",
    "mixed_difference",
    "series_tail_bound",
]

MAX_ORDER = 10.0


@dataclass(frozen=True)
class OperatorSpec:
    """A one-sided operator of signed ``order``; ``h`` defaults to the input's step."""

    order: float
    side: Side = Side.RIGHT
    h: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "side", Side.parse(self.side))
        object.__setattr__(self, "order", float(self.order))
        if not math.isfinite(self.order) or abs(self.order) >= MAX_ORDER:
            raise ValueError(f"order must be finite with |order| < {MAX_ORDER}, got {self.order}")
        if self.h is not None and not self.h > 0:
            raise ValueError("mesh step must be positive")

    @property
    def kernel_alpha(self) -> float:
        """The ``alpha`` of the kernel ``Lambda^{-alpha}`` carrying the weights."""
        return -self.order

    def with_order(self, order: float) -> OperatorSpec:
        return OperatorSpec(order, self.side, self.h)


class MembershipBasis(enum.Enum):
    COMPACT_SUPPORT = "CompactSupport"
    DECAY_EXPONENT = "DecayExponent"


@dataclass(frozen=True)
class MembershipReport:
    alpha: float
    weighted_sum: float
    is_member: bool
    basis: MembershipBasis


def membership_ell(u: GridFunction, alpha: float, side: Side | str = Side.RIGHT) -> MembershipReport:
    """Test whether ``u`` lies in the admissible class for the order-``alpha`` integral.

    The class asks ``sum_m |u(n + m)| / (1 + m)^(1 - alpha) < infinity`` in the
    direction the operator looks.  ``weighted_sum`` is the finite-window part
    of that series started at the near end of the window.
    """
    side = Side.parse(side)
    if alpha <= 0:
        raise ValueError("membership is defined for positive integral orders")
    samples = u.samples if side is Side.RIGHT else u.samples[::-1]
    m = np.arange(samples.size)
    weighted = float(np.sum(np.abs(samples) / (1.0 + m) ** (1.0 - alpha)))
    ext = u.side_extension(side)
    if ext.kind is ExtensionKind.ZERO:
        return MembershipReport(alpha, weighted, True, MembershipBasis.COMPACT_SUPPORT)
    if ext.kind is ExtensionKind.CONSTANT:
        edge = samples[-1]
        if edge == 0:
            return MembershipReport(alpha, weighted, True, MembershipBasis.COMPACT_SUPPORT)
        # constant tail: the series behaves like sum m^(alpha - 1), divergent
        return MembershipReport(alpha, weighted, False, MembershipBasis.DECAY_EXPONENT)
    if ext.kind is ExtensionKind.DECAY:
        # comparison with sum m^-(p + 1 - alpha)
        return MembershipReport(alpha, weighted, ext.p > alpha, MembershipBasis.DECAY_EXPONENT)
    raise ExtensionRequired(f"membership cannot be decided over an {ext} extension")


def _kernel_power_constant(alpha: float, table: np.ndarray) -> float:
    """``K`` with ``|Lambda^{-alpha}(j)| <= K j^(alpha - 1)`` for ``j >= 1``."""
    if 0 < alpha <= 1:
        # Gamma(j + alpha) / Gamma(j + 1) <= j^(alpha - 1) for 0 < alpha <= 1
        return 1.0 / special.gamma(alpha)
    j = np.arange(1, table.size)
    K = float(np.max(np.abs(table[1:]) * j ** (1.0 - alpha))) if j.size else 0.0
    if not is_gamma_pole(alpha):
        K = max(K, 1.0 / abs(special.gamma(alpha)))
    return K * (1.0 + 1e-3)


def series_tail_bound(u: GridFunction, spec: OperatorSpec, K0: int = 100_000) -> float:
    """Certified bound on the part of the series beyond the window for a decay extension.

    Uses ``|u(m)| <= c (1 + |m|)^-p`` and the power bound on the kernel.  Zero
    for exact extensions; raises for undefined ones.
    """
    side = spec.side
    if side is Side.LEFT:
        return series_tail_bound(u.reflected(), OperatorSpec(spec.order, Side.RIGHT, spec.h), K0)
    ext = u.right
    if ext.is_exact:
        return 0.0
    if ext.kind is ExtensionKind.UNDEFINED:
        raise ExtensionRequired("series needs values beyond the window")
    alpha = spec.kernel_alpha
    if alpha > 1:
        raise NotInDomain("decay extensions are supported for integral orders up to 1")
    if alpha > 0 and ext.p <= alpha:
        raise NotInDomain(f"decay exponent p={ext.p} must exceed the integral order {alpha}")
    if is_gamma_pole(alpha):
        # finite kernel of length -alpha + 1
        width = int(round(-alpha))
        if width == 0:
            return 0.0
        table = kernel_recurrence(alpha, width).values
        n_max = u.grid.n_max
        k = np.arange(1, width + 1)
        tail = float(np.sum(np.abs(table[1:]) * ext.c * (1.0 + np.abs(n_max + k)) ** (-ext.p)))
    else:
        table = kernel_recurrence(alpha, 10_000).values
        K = _kernel_power_constant(alpha, table)
        n_max = u.grid.n_max
        k = np.arange(1, K0 + 1, dtype=np.float64)
        near = np.sum(k ** (alpha - 1.0) * (1.0 + np.abs(n_max + k)) ** (-ext.p))
        # (1 + |n_max + k|) >= (1 + k) / (1 + |n_max|), then integral comparison
        far = (1.0 + abs(n_max)) ** ext.p * K0 ** (alpha - ext.p) / (ext.p - alpha)
        tail = ext.c * K * float(near + far)
    h = spec.h if spec.h is not None else u.h
    return h ** (-spec.order) * tail


def _step(u: GridFunction, spec: OperatorSpec) -> float:
    if spec.h is not None and not math.isclose(spec.h, u.h, rel_tol=1e-15):
        raise ValueError(f"operator step {spec.h} does not match the grid step {u.h}")
    return u.h


def _right_correlate(samples: np.ndarray, weights: np.ndarray, use_fft: bool) -> np.ndarray:
    """``v[i] = sum_{j <= N-1-i} weights[j] samples[i + j]``."""
    N = samples.size
    rev = samples[::-1]
    if use_fft:
        L = scipy.fft.next_fast_len(2 * N - 1, real=True)
        conv = scipy.fft.irfft(scipy.fft.rfft(rev, L) * scipy.fft.rfft(weights[:N], L), L)[:N]
    else:
        conv = np.convolve(rev, weights[:N])[:N]
    return conv[::-1]


def _series_right(u: GridFunction, spec: OperatorSpec, tol: float, use_fft: bool) -> GridFunction:
    h = _step(u, spec)
    alpha = spec.kernel_alpha
    N = u.grid.size
    weights = kernel_recurrence(alpha, N).values
    scale = h ** (-spec.order)
    ext = u.right
    valid = u.valid_mask.copy()
    v = _right_correlate(u.samples, weights, use_fft)
    right_out = UNDEFINED

    if ext.kind is ExtensionKind.ZERO:
        right_out = ZERO
    elif ext.kind is ExtensionKind.CONSTANT:
        c = float(u.samples[-1])
        if alpha > 0 and c != 0:
            raise NotInDomain("a nonzero constant tail is not summable against an integral kernel")
        if c != 0:
            total = 1.0 if alpha == 0 else 0.0  # (1 - z)^(-alpha) at z = 1
            partial = np.cumsum(weights)[: N][::-1]  # sum_{j <= N-1-i} weights[j]
            v = v + c * (total - partial)
        right_out = ZERO if alpha != 0 else u.right
    elif ext.kind is ExtensionKind.DECAY:
        bound = series_tail_bound(u, spec)
        if bound > tol:
            raise WindowTooSmall(f"series tail bound {bound:.3e} exceeds tolerance {tol:.1e}")
    else:
        if is_gamma_pole(alpha):
            width = int(round(-alpha))
            if width:
                valid[-width:] = False
                v[-width:] = np.nan
        else:
            raise ExtensionRequired("right-sided series needs values beyond the window")

    if u.valid is not None:
        # any invalid input sample spoils every output index to its left
        first_bad = np.flatnonzero(~u.valid)
        if first_bad.size:
            valid[: first_bad[-1] + 1] = False
    return GridFunction(u.grid, scale * v, UNDEFINED, right_out, None if valid.all() else valid)


def frac_apply_series(
    u: GridFunction, spec: OperatorSpec, tol: float = 1e-10, method: str = "direct"
) -> GridFunction:
    """Apply the operator by direct kernel summation.

    The output window equals the input window.  Right-sided results are
    undefined to the left of the window; their right extension is zero when
    the input's is.

    Raises
    ------
    NotInDomain
        For integral orders when ``u`` fails the admissibility test.
    WindowTooSmall
        When a decay extension leaves a tail bound above ``tol``.
    """
    if spec.order < 0 and u.side_extension(spec.side).kind is not ExtensionKind.UNDEFINED:
        report = membership_ell(u, -spec.order, spec.side)
        if not report.is_member:
            raise NotInDomain(f"input is not admissible for the order-{-spec.order} integral")
    use_fft = method == "fft"
    if spec.side is Side.RIGHT:
        return _series_right(u, spec, tol, use_fft)
    mirrored = OperatorSpec(spec.order, Side.RIGHT, spec.h)
    return _series_right(u.reflected(), mirrored, tol, use_fft).reflected()


def fft_apply(u: GridFunction, spec: OperatorSpec) -> GridFunction:
    """FFT evaluation of the same one-sided convolution; needs a zero extension on the read side."""
    if u.side_extension(spec.side).kind is not ExtensionKind.ZERO:
        raise ValueError("the FFT path requires a zero extension on the side the operator reads")
    return frac_apply_series(u, spec, method="fft")


def _integer_power(u: GridFunction, m: int, side: Side, sign: int, tol: float) -> GridFunction:
    v = u
    for _ in range(m):
        if sign > 0:
            v = delta(v, side)
        else:
            v = frac_apply_series(v, OperatorSpec(-1.0, side), tol)
    return v


def frac_apply_general(
    u: GridFunction, spec: OperatorSpec, tol: float = 1e-10, check_tol: float = 1e-9
) -> GridFunction:
    """Apply an operator of any order by peeling off its integer part.

    ``(delta)^a = (delta)^m (delta)^(a - m)`` with ``m = floor(a)`` for
    ``a > 0`` and the analogous split into repeated order-1 sums for
    ``a < 0``.  The result is cross-checked against the direct series of the
    full order (tolerance relative to ``max(1, |value|)``).
    """
    a = spec.order
    if a == 0:
        return u
    m = int(math.floor(abs(a)))
    frac = abs(a) - m
    sign = 1 if a > 0 else -1
    v = u
    if frac > 0:
        v = frac_apply_series(u, spec.with_order(sign * frac), tol)
    composed = _integer_power(v, m, spec.side, sign, tol)
    direct = frac_apply_series(u, spec, tol)
    lo, hi = common_window(composed, direct)
    a_r, d_r = composed.restricted(lo, hi), direct.restricted(lo, hi)
    mask = a_r.valid_mask & d_r.valid_mask
    if mask.any():
        scale = max(1.0, float(np.max(np.abs(d_r.samples[mask]))))
        err = float(np.max(np.abs(a_r.samples[mask] - d_r.samples[mask])))
        if err > check_tol * scale:
            raise CrossCheckFailed(f"integer-part composition and direct series differ by {err:.3e}")
    return composed


def frac_apply(u: GridFunction, spec: OperatorSpec, method: str = "series", tol: float = 1e-10, **kwargs) -> GridFunction:
    """Dispatch on ``method`` in ``{'series', 'fft', 'quadrature'}``."""
    if method == "series":
        if abs(spec.order) > 1:
            return frac_apply_general(u, spec, tol)
        return frac_apply_series(u, spec, tol)
    if method == "fft":
        return fft_apply(u, spec)
    if method == "quadrature":
        h = _step(u, spec)
        if spec.order < 0:
            return frac_integral_quadrature(u, -spec.order, spec.side, **kwargs)
        if spec.order > 0:
            return frac_derivative_quadrature(u, spec.order, spec.side, **kwargs)
        return u.with_step(h)
    raise ValueError(f"unknown method {method!r}")


def composition_residual(
    u: GridFunction, alpha: float, beta: float, side: Side | str = Side.RIGHT, tol: float = 1e-10
) -> float:
    """Max-norm of ``delta^alpha delta^beta u - delta^(alpha+beta) u`` over valid indices."""
    side = Side.parse(side)
    inner = frac_apply_general(u, OperatorSpec(beta, side), tol)
    two_step = frac_apply_general(inner, OperatorSpec(alpha, side), tol)
    one_step = frac_apply_general(u, OperatorSpec(alpha + beta, side), tol)
    return max_abs_difference(two_step, one_step)


# --- Gamma-formula quadrature oracles ---------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    """Node-count ladder for the Gauss rules and the agreement target between levels."""

    levels: tuple[int, ...] = (32, 64, 128, 256)
    target: float = 1e-9
    min_margin: float = 1e-3


_TINY = 1e-300


def _log_poisson(t: np.ndarray, j: np.ndarray, shift: float = 0.0) -> np.ndarray:
    """``log(e^{-t + shift} t^j / j!)`` for every (t, j) pair."""
    t = np.maximum(np.asarray(t, dtype=np.float64), _TINY)[:, None]
    shift = np.asarray(shift, dtype=np.float64).reshape(-1, 1)
    out = -t + shift + j[None, :] * np.log(t) - special.gammaln(j + 1.0)[None, :]
    return out


def _apply_rows(weights: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Row ``k`` of the result is ``sum_j weights[k, j] samples[i + j]`` over the window."""
    N = samples.size
    out = np.empty((weights.shape[0], N))
    for k in range(weights.shape[0]):
        out[k] = _right_correlate(samples, weights[k], use_fft=False)
    return out


def _gauss_laguerre(n: int) -> tuple[np.ndarray, np.ndarray]:
    y, w = special.roots_laguerre(n)
    return y, w


def _gauss_jacobi_unit(n: int, power: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^1 f(t) t^power dt``."""
    x, w = special.roots_jacobi(n, 0.0, power)
    return 0.5 * (1.0 + x), w * 2.0 ** (-1.0 - power)


def _refine(levels, target, evaluate) -> np.ndarray:
    previous = None
    change = math.inf
    for n in levels:
        current = evaluate(n)
        if previous is not None:
            scale = max(1.0, float(np.max(np.abs(current))))
            change = float(np.max(np.abs(current - previous))) / scale
            if change <= target:
                return current
        previous = current
    raise QuadratureNotConverged(f"quadrature levels {levels} still differ by {change:.2e}")


def _check_quadrature_inputs(
    u: GridFunction, alpha: float, side: Side, quad: QuadratureConfig, constant_ok: bool = False
) -> GridFunction:
    if not quad.min_margin <= alpha <= 1.0 - quad.min_margin:
        raise ValueError(f"quadrature needs {quad.min_margin} <= alpha <= {1 - quad.min_margin}, got {alpha}")
    if side is Side.LEFT:
        u = u.reflected()
    if constant_ok and u.right.kind is ExtensionKind.CONSTANT:
        # derivatives annihilate constants: work with u - u(edge), which is zero beyond
        return GridFunction(u.grid, u.samples - u.samples[-1], u.left, ZERO, u.valid)
    if u.right.kind is not ExtensionKind.ZERO:
        raise NotInDomain("quadrature oracles need zero data beyond the window on the read side")
    return u


def _semigroup_at(samples: np.ndarray, t: np.ndarray, shift: float = 0.0) -> np.ndarray:
    """``e^{shift} T_t u`` on the unit lattice for every node ``t`` (rows)."""
    j = np.arange(samples.size, dtype=np.float64)
    weights = np.exp(_log_poisson(t, j, shift))
    return _apply_rows(weights, samples)


def _difference_quotient_at(samples: np.ndarray, t: np.ndarray) -> np.ndarray:
    """``(T_t u - u) / t`` evaluated without cancellation for small ``t``."""
    t = np.maximum(np.asarray(t, dtype=np.float64), _TINY)
    j = np.arange(samples.size, dtype=np.float64)
    # e^{-t} t^(j-1) / j! for j >= 1; expm1(-t) / t for j = 0
    log_w = -t[:, None] + (j[None, :] - 1.0) * np.log(t)[:, None] - special.gammaln(j + 1.0)[None, :]
    weights = np.exp(log_w)
    weights[:, 0] = np.expm1(-t) / t
    if samples.size > 1:
        weights[:, 1] = np.exp(-t)
    return _apply_rows(weights, samples)


def frac_integral_quadrature(
    u: GridFunction,
    alpha: float,
    side: Side | str = Side.RIGHT,
    quad: QuadratureConfig | None = None,
) -> GridFunction:
    r"""Order-``alpha`` integral from the Gamma-function formula

    .. math::

        \frac{1}{\Gamma(\alpha)} \int_0^\infty T_{t}u(n)\, t^{\alpha-1}\, dt.

    The range is split at ``t = 1``.  ``T_t u(n)`` is entire in ``t``, so on
    ``(0, 1]`` Gauss-Jacobi quadrature absorbs the algebraic endpoint factor;
    on ``[1, inf)`` the ``e^{-t}`` of the Poisson weights is the Laguerre weight.
    """
    quad = quad or QuadratureConfig()
    side = Side.parse(side)
    w = _check_quadrature_inputs(u, alpha, side, quad)
    samples = w.samples

    def evaluate(n: int) -> np.ndarray:
        y, wts = _gauss_laguerre(n)
        keep = wts > 0
        y, wts = y[keep], wts[keep]
        x, jw = _gauss_jacobi_unit(n, alpha - 1.0)
        near = jw @ _semigroup_at(samples, x)
        far_vals = _semigroup_at(samples, 1.0 + y, shift=y)  # e^{y} T_{1+y} u
        far = (wts * (1.0 + y) ** (alpha - 1.0)) @ far_vals
        return (near + far) / special.gamma(alpha)

    values = _refine(quad.levels, quad.target, evaluate) * u.h**alpha
    out = GridFunction(w.grid, values, UNDEFINED, ZERO)
    return out.reflected() if side is Side.LEFT else out


def frac_derivative_quadrature(
    u: GridFunction,
    alpha: float,
    side: Side | str = Side.RIGHT,
    quad: QuadratureConfig | None = None,
) -> GridFunction:
    r"""Order-``alpha`` derivative from

    .. math::

        \frac{1}{\Gamma(-\alpha)} \int_0^\infty (T_t u(n) - u(n))\, t^{-1-\alpha}\, dt,

    split at ``t = 1`` like :func:`frac_integral_quadrature`; on ``(0, 1]`` the
    entire quotient ``(T_t u - u)/t`` is formed term-wise to avoid cancellation
    and integrated against ``t^-alpha``.  A constant extension is allowed on
    the read side since constants are annihilated.
    """
    quad = quad or QuadratureConfig()
    side = Side.parse(side)
    w = _check_quadrature_inputs(u, alpha, side, quad, constant_ok=True)
    samples = w.samples

    def evaluate(n: int) -> np.ndarray:
        y, wts = _gauss_laguerre(n)
        keep = wts > 0
        y, wts = y[keep], wts[keep]
        x, jw = _gauss_jacobi_unit(n, -alpha)
        near = jw @ _difference_quotient_at(samples, x)
        far_vals = _semigroup_at(samples, 1.0 + y, shift=y)
        far = (wts * (1.0 + y) ** (-1.0 - alpha)) @ far_vals - samples / alpha
        return (near + far) / special.gamma(-alpha)

    values = _refine(quad.levels, quad.target, evaluate) * u.h ** (-alpha)
    out = GridFunction(w.grid, values, UNDEFINED, ZERO)
    return out.reflected() if side is Side.LEFT else out
