r"""Poisson translation semigroups on ``Z`` and ``Z_h``.

.. math::

    T_{t,+}f(n) = \sum_{j\ge0} G_t(j) f(n+j), \quad
    T_{t,-}f(n) = \sum_{j\ge0} G_t(j) f(n-j), \quad
    G_t(j) = e^{-t}\frac{t^j}{j!}.

On ``Z_h`` the operator used for time ``t`` is ``T_{t/h}``, whose generator
is ``-delta_right`` (resp. ``-delta_left``) with the ``1/h`` scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .differences import delta
from .errors import ExtensionRequired
from .grid import UNDEFINED, ExtensionKind, GridFunction, Side, max_abs_difference

__all__ = [
    "PoissonWeights",
    "apply_semigroup",
    "cauchy_residual",
    "outside_mass",
    "poisson_weights",
    "semigroup_law_residual",
]

_LOG_SEED_THRESHOLD = 700.0


@dataclass(frozen=True, eq=False)
class PoissonWeights:
    """Weights ``G_t(0..J)`` and the probability mass beyond ``J``."""

    t: float
    weights: np.ndarray
    discarded_mass: float

    @property
    def cutoff(self) -> int:
        return self.weights.size - 1

    def tail_mass(self) -> np.ndarray:
        """``tail[k] = sum_{j >= k} G_t(j)`` (including the discarded part), ``k = 0..J+1``."""
        rev = np.cumsum(self.weights[::-1])[::-1]
        return np.append(rev, 0.0) + self.discarded_mass


def _raw_weights(t: float, J: int) -> np.ndarray:
    j = np.arange(1, J + 1, dtype=np.float64)
    if t <= _LOG_SEED_THRESHOLD:
        w = np.empty(J + 1)
        w[0] = math.exp(-t)
        np.cumprod(t / j, out=w[1:])
        w[1:] *= w[0]
        return w
    # e^{-t} underflows: seed at the mode in log space and recur both ways.
    mode = min(int(math.floor(t)), J)
    w = np.empty(J + 1)
    w[mode] = math.exp(-t + mode * math.log(t) - special.gammaln(mode + 1.0))
    if mode < J:
        w[mode + 1 :] = w[mode] * np.cumprod(t / np.arange(mode + 1, J + 1))
    if mode > 0:
        w[:mode] = (w[mode] * np.cumprod(np.arange(mode, 0, -1) / t))[::-1]
    return w


def poisson_weights(t: float, tol: float = 1e-12) -> PoissonWeights:
    """Poisson weights truncated where the cumulative mass first reaches ``1 - tol``.

    The first moment of the kept weights is exactly
    ``t * (1 - discarded_mass - weights[-1])``.

    Examples
    --------
    >>> poisson_weights(0.0).weights
    array([1.])
    """
    t = float(t)
    if not (t >= 0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and nonnegative, got {t}")
    if not 0 < tol < 1:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol}")
    if t == 0:
        return PoissonWeights(0.0, np.ones(1), 0.0)
    spread = math.sqrt(-2.0 * math.log(tol)) + 2.0
    J = int(math.ceil(t + 2.0 * spread * math.sqrt(t) + 2.0 * spread**2 + 10))
    w = _raw_weights(t, J)
    # The seed carries a relative error ~ t * ulp common to every weight; the
    # mass beyond J is negligible, so normalizing removes it.
    w /= math.fsum(w)
    # Cumulative mass >= 1 - tol  <=>  tail mass <= tol.  Tails summed from the
    # small end are accurate where a forward cumulative sum loses ~J ulps.
    tail = np.cumsum(w[::-1])[::-1]
    hit = np.flatnonzero(tail <= tol)
    cut = hit[0] - 1 if hit.size else J
    cut = max(cut, 0)
    discarded = float(tail[cut + 1]) if cut < J else 0.0
    w = w[: cut + 1].copy()
    w.setflags(write=False)
    return PoissonWeights(t, w, discarded)


def outside_mass(n_points: int, weights: PoissonWeights) -> np.ndarray:
    """Mass of right-looking weights that lands beyond the window, per window index."""
    tail = weights.tail_mass()
    reach = n_points - np.arange(n_points)  # first j that leaves the window
    return tail[np.minimum(reach, weights.cutoff + 1)]


def _apply_right(u: GridFunction, t: float, tol: float) -> GridFunction:
    g = u.grid
    w = poisson_weights(t / g.h, tol)
    J = w.cutoff
    N = g.size
    ext = u.right
    value = u.outside_value(Side.RIGHT)
    out_mass = outside_mass(N, w)
    valid = u.valid_mask.copy()
    if value is None:
        if ext.kind is ExtensionKind.UNDEFINED:
            if np.any(out_mass > tol):
                raise ExtensionRequired(
                    f"semigroup weights leave the window with mass {out_mass.max():.2e} > {tol:.1e}"
                )
            value = 0.0
        else:  # decay: unknown values bounded by c (1 + |m|)^-p beyond n_max
            bound_beyond = ext.c * (1.0 + max(g.n_max + 1, 0)) ** (-ext.p)
            valid &= out_mass * bound_beyond <= tol
            value = 0.0
    padded = np.concatenate([u.samples, np.full(J, value)])
    # v[i] = sum_j w[j] padded[i + j]
    v = np.correlate(padded, w.weights, mode="valid")[:N]
    # validity propagates from every sample the weights touch
    if u.valid is not None:
        bad = np.concatenate([~u.valid, np.zeros(J, bool)])
        touched = np.correlate(bad.astype(float), np.ones(J + 1), mode="valid")[:N] > 0
        valid &= ~touched
    right = u.right if u.right.is_exact else UNDEFINED
    return GridFunction(g, v, UNDEFINED, right, None if valid.all() else valid)


def apply_semigroup(u: GridFunction, t: float, side: Side | str = Side.RIGHT, tol: float = 1e-12) -> GridFunction:
    """``T_{t/h, +} u`` (``side='right'``) or ``T_{t/h, -} u`` on the window of ``u``.

    Values beyond the window come from the extension on the side the
    operator looks at.  Raises :class:`ExtensionRequired` when that side is
    undefined and the weights reach outside with mass above ``tol``.
    """
    side = Side.parse(side)
    if t < 0:
        raise ValueError("time must be nonnegative")
    if side is Side.RIGHT:
        return _apply_right(u, t, tol)
    return _apply_right(u.reflected(), t, tol).reflected()


def semigroup_law_residual(
    u: GridFunction, t: float, s: float, side: Side | str = Side.RIGHT, tol: float = 1e-12
) -> float:
    """Max-norm of ``T_t T_s u - T_{t+s} u`` over the indices flagged valid."""
    two_step = apply_semigroup(apply_semigroup(u, s, side, tol), t, side, tol)
    one_step = apply_semigroup(u, t + s, side, tol)
    return max_abs_difference(two_step, one_step)


def cauchy_residual(
    u0: GridFunction, t: float, dt: float, side: Side | str = Side.RIGHT, tol: float = 1e-14
) -> float:
    """Max-norm of the central-difference residual of ``d/dt u + delta u = 0`` at time ``t``.

    The residual is ``O(dt^2)``.
    """
    if not (t > 0 and 0 < dt < t):
        raise ValueError("need t > 0 and 0 < dt < t")
    side = Side.parse(side)
    fwd = apply_semigroup(u0, t + dt, side, tol)
    bwd = apply_semigroup(u0, t - dt, side, tol)
    mid = apply_semigroup(u0, t, side, tol)
    d_mid = delta(mid, side)
    time_derivative = fwd.with_samples((fwd.samples - bwd.samples) / (2 * dt), fwd.valid)
    lo = max(time_derivative.grid.n_min, d_mid.grid.n_min)
    hi = min(time_derivative.grid.n_max, d_mid.grid.n_max)
    a = time_derivative.restricted(lo, hi)
    b = d_mid.restricted(lo, hi)
    mask = a.valid_mask & b.valid_mask
    resid = np.abs(a.samples + b.samples)[mask]
    return float(resid.max()) if resid.size else 0.0
