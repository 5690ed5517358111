"""Meshes ``Z_h``, finite windows on them and functions sampled on those windows."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np


class Side(enum.Enum):
    """Direction in which a one-sided operator looks."""

    RIGHT = "right"
    LEFT = "left"

    @classmethod
    def parse(cls, value: Side | str) -> Side:
        if isinstance(value, Side):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"side must be 'right' or 'left', got {value!r}") from None

    @property
    def opposite(self) -> Side:
        return Side.LEFT if self is Side.RIGHT else Side.RIGHT


@dataclass(frozen=True)
class Grid:
    """The window ``{n h : n_min <= n <= n_max}`` of the mesh ``Z_h``."""

    h: float
    n_min: int
    n_max: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.h) and self.h > 0):
            raise ValueError(f"mesh step must be positive and finite, got {self.h}")
        if int(self.n_min) != self.n_min or int(self.n_max) != self.n_max:
            raise ValueError("window bounds must be integers")
        object.__setattr__(self, "n_min", int(self.n_min))
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.n_min > self.n_max:
            raise ValueError(f"empty window [{self.n_min}, {self.n_max}]")

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    @property
    def points(self) -> np.ndarray:
        return self.h * self.indices

    def with_window(self, n_min: int, n_max: int) -> Grid:
        return Grid(self.h, n_min, n_max)

    def with_step(self, h: float) -> Grid:
        return Grid(h, self.n_min, self.n_max)

    @classmethod
    def symmetric(cls, h: float, half_width: float) -> Grid:
        """Window covering the physical interval ``[-half_width, half_width]``."""
        n = int(np.floor(half_width / h + 1e-9))
        return cls(h, -n, n)


class ExtensionKind(enum.Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    DECAY = "decay"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class Extension:
    """How a windowed function continues outside its window on one side.

    ``ZERO`` and ``CONSTANT`` (the edge value is replicated) define the values
    exactly.  ``DECAY`` leaves them unknown but bounded by
    ``c * (1 + |n|) ** -p``; operators treat them as zero and report a
    certified bound for the neglected part.  ``UNDEFINED`` carries no
    information at all.
    """

    kind: ExtensionKind
    p: float = 0.0
    c: float = 0.0

    def __post_init__(self) -> None:
        if self.kind is ExtensionKind.DECAY and not (self.p > 0 and self.c >= 0):
            raise ValueError("decay extension requires p > 0 and c >= 0")

    @classmethod
    def zero(cls) -> Extension:
        return cls(ExtensionKind.ZERO)

    @classmethod
    def constant(cls) -> Extension:
        return cls(ExtensionKind.CONSTANT)

    @classmethod
    def decay(cls, p: float, c: float) -> Extension:
        return cls(ExtensionKind.DECAY, float(p), float(c))

    @classmethod
    def undefined(cls) -> Extension:
        return cls(ExtensionKind.UNDEFINED)

    @classmethod
    def parse(cls, text: str) -> Extension:
        """Parse ``zero``, ``constant``, ``undefined`` or ``decay:p:c``."""
        parts = text.strip().lower().split(":")
        if parts[0] == "decay":
            if len(parts) != 3:
                raise ValueError("decay extension is written decay:p:c")
            return cls.decay(float(parts[1]), float(parts[2]))
        if len(parts) != 1:
            raise ValueError(f"unknown extension {text!r}")
        return cls(ExtensionKind(parts[0]))

    @property
    def is_exact(self) -> bool:
        """Whether outside values are known exactly."""
        return self.kind in (ExtensionKind.ZERO, ExtensionKind.CONSTANT)

    def __str__(self) -> str:
        if self.kind is ExtensionKind.DECAY:
            return f"decay:{self.p!r}:{self.c!r}"
        return self.kind.value


ZERO = Extension.zero()
UNDEFINED = Extension.undefined()


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of ``u: Z_h -> R`` on a window plus the extension on each side.

    ``valid`` flags output indices whose value does not depend on unknown
    outside data beyond tolerance; it is ``None`` when every index is valid.
    """

    grid: Grid
    samples: np.ndarray
    left: Extension = ZERO
    right: Extension = ZERO
    valid: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} samples for window "
                f"[{self.grid.n_min}, {self.grid.n_max}], got shape {samples.shape}"
            )
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if self.valid is not None:
            valid = np.array(self.valid, dtype=bool)
            if valid.shape != samples.shape:
                raise ValueError("validity mask must match the samples")
            valid.setflags(write=False)
            object.__setattr__(self, "valid", valid)

    @classmethod
    def from_samples(
        cls,
        samples,
        h: float = 1.0,
        n_min: int = 0,
        extension: Extension | str = ZERO,
    ) -> GridFunction:
        """Build a function whose window starts at ``n_min``; one extension for both sides."""
        if isinstance(extension, str):
            extension = Extension.parse(extension)
        samples = np.asarray(samples, dtype=np.float64)
        grid = Grid(h, n_min, n_min + samples.size - 1)
        return cls(grid, samples, extension, extension)

    @classmethod
    def impulse(cls, grid: Grid, at: int = 0, value: float = 1.0) -> GridFunction:
        samples = np.zeros(grid.size)
        samples[at - grid.n_min] = value
        return cls(grid, samples)

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def extension(self) -> Extension:
        """The common extension; raises if the two sides differ."""
        if self.left != self.right:
            raise ValueError(f"sides use different extensions ({self.left}, {self.right})")
        return self.left

    @property
    def valid_mask(self) -> np.ndarray:
        if self.valid is None:
            return np.ones(self.grid.size, dtype=bool)
        return self.valid

    def side_extension(self, side: Side) -> Extension:
        return self.right if side is Side.RIGHT else self.left

    def outside_value(self, side: Side) -> float | None:
        """Exact value beyond the window on ``side``, or ``None`` when not known exactly."""
        ext = self.side_extension(side)
        if ext.kind is ExtensionKind.ZERO:
            return 0.0
        if ext.kind is ExtensionKind.CONSTANT:
            return float(self.samples[-1] if side is Side.RIGHT else self.samples[0])
        return None

    def at(self, n: int) -> float:
        """Value at index ``n``, using the extension outside the window."""
        if self.grid.n_min <= n <= self.grid.n_max:
            return float(self.samples[n - self.grid.n_min])
        side = Side.RIGHT if n > self.grid.n_max else Side.LEFT
        value = self.outside_value(side)
        if value is None:
            raise KeyError(f"index {n} is outside the window and the extension is {self.side_extension(side)}")
        return value

    def is_compact(self) -> bool:
        return self.left.kind is ExtensionKind.ZERO and self.right.kind is ExtensionKind.ZERO

    def support(self) -> tuple[int, int] | None:
        """Smallest index range holding every nonzero sample, or ``None`` if all vanish."""
        nz = np.flatnonzero(self.samples)
        if nz.size == 0:
            return None
        return self.grid.n_min + int(nz[0]), self.grid.n_min + int(nz[-1])

    def with_samples(self, samples, valid=None) -> GridFunction:
        return replace(self, samples=samples, valid=valid)

    def with_step(self, h: float) -> GridFunction:
        return replace(self, grid=self.grid.with_step(h))

    def with_extension(self, extension: Extension) -> GridFunction:
        return replace(self, left=extension, right=extension)

    def scaled(self, factor: float) -> GridFunction:
        return replace(self, samples=factor * self.samples)

    def shifted(self, offset: int) -> GridFunction:
        """Same samples placed ``offset`` indices further right."""
        g = self.grid
        return replace(self, grid=g.with_window(g.n_min + offset, g.n_max + offset))

    def padded(self, left: int, right: int) -> GridFunction:
        """Widen the window, filling new indices from the (exact) extensions."""
        if left < 0 or right < 0:
            raise ValueError("padding must be nonnegative")
        parts = []
        if left:
            value = self.outside_value(Side.LEFT)
            if value is None:
                raise ValueError(f"cannot pad left over a {self.left} extension")
            parts.append(np.full(left, value))
        parts.append(self.samples)
        if right:
            value = self.outside_value(Side.RIGHT)
            if value is None:
                raise ValueError(f"cannot pad right over a {self.right} extension")
            parts.append(np.full(right, value))
        valid = None
        if self.valid is not None:
            valid = np.concatenate([np.ones(left, bool), self.valid, np.ones(right, bool)])
        g = self.grid
        return GridFunction(
            g.with_window(g.n_min - left, g.n_max + right),
            np.concatenate(parts),
            self.left,
            self.right,
            valid,
        )

    def restricted(self, n_min: int, n_max: int) -> GridFunction:
        """Sub-window; the dropped samples become unknown outside data."""
        g = self.grid
        if not (g.n_min <= n_min <= n_max <= g.n_max):
            raise ValueError(f"[{n_min}, {n_max}] is not inside [{g.n_min}, {g.n_max}]")
        lo, hi = n_min - g.n_min, n_max - g.n_min + 1
        valid = None if self.valid is None else self.valid[lo:hi]
        left = self.left if n_min == g.n_min else UNDEFINED
        right = self.right if n_max == g.n_max else UNDEFINED
        return GridFunction(g.with_window(n_min, n_max), self.samples[lo:hi], left, right, valid)

    def reflected(self) -> GridFunction:
        """``n -> -n``; swaps the window ends and the side extensions."""
        g = self.grid
        valid = None if self.valid is None else self.valid[::-1]
        return GridFunction(
            g.with_window(-g.n_max, -g.n_min), self.samples[::-1], self.right, self.left, valid
        )


def common_window(*functions: GridFunction) -> tuple[int, int]:
    """Intersection of the windows of ``functions``."""
    lo = max(f.grid.n_min for f in functions)
    hi = min(f.grid.n_max for f in functions)
    if lo > hi:
        raise ValueError("windows do not overlap")
    return lo, hi


def max_abs_difference(a: GridFunction, b: GridFunction, mask_valid: bool = True) -> float:
    """Max-norm of ``a - b`` over their common window (and common valid indices)."""
    lo, hi = common_window(a, b)
    ra, rb = a.restricted(lo, hi), b.restricted(lo, hi)
    diff = np.abs(ra.samples - rb.samples)
    if mask_valid:
        diff = diff[ra.valid_mask & rb.valid_mask]
    return float(diff.max()) if diff.size else 0.0
