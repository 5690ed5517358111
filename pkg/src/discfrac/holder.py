r"""Discrete Hölder seminorms and norms on finite windows.

.. math::

    [\delta^{l,s}u]_{C_h^{0,\beta}} = \sup_{m \ne j}
        \frac{|\delta^{l,s}u(jh) - \delta^{l,s}u(mh)|}{h^\beta |j - m|^\beta},
    \qquad
    \|u\|_{C_h^{k,\beta}} = \max_{l+s \le k} \sup_m |\delta^{l,s}u(mh)|
        + \max_{l+s = k} [\delta^{l,s}u]_{C_h^{0,\beta}}.

Suprema over ``Z`` are replaced by maxima over the window, so every value is a
lower bound of the true one.  For compactly supported inputs the window is
padded with zeros by the support diameter first, and
:func:`double_window_stability` quantifies the remaining window dependence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .differences import mixed_difference
from .errors import ExtensionRequired
from .grid import Grid, GridFunction

__all__ = [
    "HolderIndex",
    "HolderReport",
    "double_window_stability",
    "holder_norm",
    "holder_seminorm",
    "inflate_window",
]


@dataclass(frozen=True)
class HolderIndex:
    k: int
    beta: float

    def __post_init__(self) -> None:
        if self.k < 0 or int(self.k) != self.k:
            raise ValueError(f"k must be a nonnegative integer, got {self.k}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class HolderReport:
    index: HolderIndex
    seminorms: dict
    sup_terms: dict
    norm: float
    window: Grid
    argmax_pairs: dict

    def as_dict(self) -> dict:
        key = lambda ls: f"{ls[0]},{ls[1]}"  # noqa: E731
        return {
            "k": self.index.k,
            "beta": self.index.beta,
            "h": self.window.h,
            "window": [self.window.n_min, self.window.n_max],
            "seminorms": {key(ls): v for ls, v in self.seminorms.items()},
            "sup_terms": {key(ls): v for ls, v in self.sup_terms.items()},
            "argmax_pairs": {key(ls): list(p) if p else None for ls, p in self.argmax_pairs.items()},
            "norm": self.norm,
        }


def inflate_window(u: GridFunction) -> GridFunction:
    """Zero-pad a compactly supported function by its support diameter on both sides."""
    if not u.is_compact():
        return u
    support = u.support()
    if support is None:
        return u
    margin = support[1] - support[0] + 1
    g = u.grid
    need_left = max(0, g.n_min - (support[0] - margin))
    need_right = max(0, support[1] + margin - g.n_max)
    return u.padded(need_left, need_right)


def _pair_scan(values: np.ndarray, valid: np.ndarray, h: float, beta: float, n_min: int):
    """Max quotient over all index pairs, ties broken by the smallest ``(j, m)``."""
    N = values.size
    best = 0.0
    best_pair = None
    for lag in range(1, N):
        ok = valid[lag:] & valid[:-lag]
        q = np.abs(values[lag:] - values[:-lag])
        q = np.where(ok, q, -np.inf)
        i = int(np.argmax(q))
        top = float(q[i])
        if top == -np.inf:
            continue
        top /= (h * lag) ** beta
        pair = (n_min + i, n_min + i + lag)
        if best_pair is None or top > best or (top == best and pair < best_pair):
            best, best_pair = top, pair
    return best, best_pair


def holder_seminorm(
    u: GridFunction, l: int, s: int, beta: float, inflate: bool = True
) -> tuple[float, tuple[int, int] | None]:
    """Seminorm of ``delta^{l,s} u`` and the index pair attaining it.

    Examples
    --------
    >>> from discfrac.grid import Grid, GridFunction
    >>> holder_seminorm(GridFunction.impulse(Grid(1.0, -4, 4)), 0, 0, 0.5)
    (1.0, (-1, 0))
    """
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if inflate:
        u = inflate_window(u)
    d = mixed_difference(u, l, s)
    return _pair_scan(d.samples, d.valid_mask, d.h, beta, d.grid.n_min)


def _sup(u: GridFunction) -> float:
    vals = np.abs(u.samples[u.valid_mask])
    return float(vals.max()) if vals.size else 0.0


def holder_norm(u: GridFunction, idx: HolderIndex, inflate: bool = True) -> HolderReport:
    """Assemble the ``C_h^{k,beta}`` norm from all mixed differences of order ``<= k``."""
    if inflate:
        u = inflate_window(u)
    sup_terms = {}
    seminorms = {}
    pairs = {}
    for order in range(idx.k + 1):
        for l in range(order + 1):
            s = order - l
            d = mixed_difference(u, l, s)
            sup_terms[(l, s)] = _sup(d)
            if order == idx.k:
                value, pair = _pair_scan(d.samples, d.valid_mask, d.h, idx.beta, d.grid.n_min)
                seminorms[(l, s)] = value
                pairs[(l, s)] = pair
    norm = max(sup_terms.values()) + max(seminorms.values())
    return HolderReport(idx, seminorms, sup_terms, norm, u.grid, pairs)


def double_window_stability(u: GridFunction, idx: HolderIndex) -> float:
    """Relative change of the norm when the zero-extended window is doubled.

    Both norms are computed without automatic padding, so the number measures
    how much the reported value depends on where the window ends.
    """
    if not u.is_compact():
        raise ExtensionRequired("window doubling needs a zero extension on both sides")
    base = holder_norm(u, idx, inflate=False).norm
    n = u.grid.size
    wide = holder_norm(u.padded(n // 2, n - n // 2), idx, inflate=False).norm
    if base == 0.0:
        return 0.0 if wide == 0.0 else float("inf")
    return abs(wide - base) / base
