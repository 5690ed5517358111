"""First-order difference quotients on ``Z_h`` and their mixed compositions."""

from __future__ import annotations

import numpy as np

from .grid import UNDEFINED, ZERO, GridFunction, Side


def delta_right(u: GridFunction) -> GridFunction:
    """``(u(nh) - u((n+1)h)) / h``.

    Window bookkeeping: the right end is kept when the right extension is
    exact and dropped otherwise; when the left extension is exact the window
    grows by one index on the left, where the result can still be nonzero.
    Exact extensions become zero extensions (differences of constants vanish).
    """
    g = u.grid
    right_value = u.outside_value(Side.RIGHT)
    left_value = u.outside_value(Side.LEFT)

    samples = u.samples
    valid = u.valid_mask
    if right_value is None:
        nxt = samples[1:]
        cur = samples[:-1]
        n_max = g.n_max - 1
        new_valid = valid[:-1] & valid[1:]
        right_ext = UNDEFINED
    else:
        nxt = np.append(samples[1:], right_value)
        cur = samples
        n_max = g.n_max
        new_valid = valid & np.append(valid[1:], True)
        right_ext = ZERO
    out = (cur - nxt) / g.h
    n_min = g.n_min
    if left_value is None:
        left_ext = UNDEFINED
    else:
        out = np.concatenate([[(left_value - samples[0]) / g.h], out])
        new_valid = np.concatenate([[bool(valid[0])], new_valid])
        n_min -= 1
        left_ext = ZERO
    if n_min > n_max:
        raise ValueError("window too short to difference with undefined extensions")
    return GridFunction(
        g.with_window(n_min, n_max),
        out,
        left_ext,
        right_ext,
        None if new_valid.all() else new_valid,
    )


def delta_left(u: GridFunction) -> GridFunction:
    """``(u(nh) - u((n-1)h)) / h``; the mirror image of :func:`delta_right`."""
    return delta_right(u.reflected()).reflected()


def delta(u: GridFunction, side: Side | str) -> GridFunction:
    return delta_right(u) if Side.parse(side) is Side.RIGHT else delta_left(u)


def mixed_difference(u: GridFunction, l: int, s: int, right_first: bool = False) -> GridFunction:
    """``(delta_right)^l (delta_left)^s u``.

    The two difference operators commute, so ``right_first`` only changes the
    evaluation order (used to check that claim).
    """
    if l < 0 or s < 0:
        raise ValueError("difference counts must be nonnegative")
    v = u
    order = [delta_right] * l + [delta_left] * s if right_first else [delta_left] * s + [delta_right] * l
    for op in order:
        v = op(v)
    return v
