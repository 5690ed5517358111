"""Shared test inputs and the acceptance-line collector."""

from __future__ import annotations

import numpy as np

from discfrac.grid import GridFunction

ACCEPTANCE_LINES: list[str] = []


def compact_random(seed: int = 0, size: int = 40, pad: int = 12, h: float = 1.0) -> GridFunction:
    rng = np.random.default_rng(seed)
    samples = np.zeros(size + 2 * pad)
    samples[pad : pad + size] = rng.normal(size=size)
    return GridFunction.from_samples(samples, h=h, n_min=-(size // 2 + pad))
