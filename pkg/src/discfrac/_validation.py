"""Argument checks shared by the estimator wrappers and the command line."""

from __future__ import annotations

import math
import numbers

from .grid import Extension, Side

__all__ = ["check_extension", "check_positive", "check_side", "check_unit_open"]


def check_positive(name: str, value) -> float:
    if not isinstance(value, numbers.Real) or not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")
    return float(value)


def check_unit_open(name: str, value) -> float:
    if not isinstance(value, numbers.Real) or not 0 < value < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {value!r}")
    return float(value)


def check_side(value) -> Side:
    try:
        return Side.parse(value)
    except ValueError:
        raise ValueError(f"side must be 'right' or 'left', got {value!r}") from None


def check_extension(value) -> Extension:
    if isinstance(value, Extension):
        return value
    return Extension.parse(str(value))
