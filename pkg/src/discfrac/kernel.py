r"""The binomial-type kernel :math:`\Lambda^{-\alpha}` and its identities.

For real :math:`\alpha`,

.. math::

    \Lambda^{-\alpha}(0) = 1, \qquad
    \Lambda^{-\alpha}(m) = \frac{\alpha(\alpha+1)\cdots(\alpha+m-1)}{m!},

which is the coefficient sequence of :math:`(1-z)^{-\alpha}`.  The default
generator is the multiplicative recurrence; the log-Gamma evaluation of
:math:`\Gamma(m+\alpha)/(\Gamma(\alpha)\,m!)` is kept as an independent check.
"""

from __future__ import annotations

import contextlib
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import CrossCheckFailed, PoleError, WindowTooSmall

__all__ = [
    "KernelMethod",
    "KernelTable",
    "TelescopingCheck",
    "asymptotic_check",
    "convolve_kernels",
    "fit_asymptotic_constant",
    "forward_difference_kernel",
    "generating_function_deviation",
    "is_gamma_pole",
    "kernel",
    "kernel_loggamma",
    "kernel_recurrence",
    "lemma2_telescoping_check",
    "partial_sums",
]


class KernelMethod(enum.Enum):
    RECURRENCE = "recurrence"
    LOGGAMMA = "loggamma"


@dataclass(frozen=True, eq=False)
class KernelTable:
    """Immutable table ``values[m] = Lambda^{-alpha}(m)`` for ``m = 0..M``."""

    alpha: float
    values: np.ndarray
    method: KernelMethod = KernelMethod.RECURRENCE

    @property
    def tail_exponent(self) -> float:
        """Exponent ``alpha - 1`` of the power-law decay ``Lambda(n) ~ n^(alpha - 1)``."""
        return self.alpha - 1.0

    @property
    def max_index(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, item):
        return self.values[item]


def is_gamma_pole(alpha: float, atol: float = 0.0) -> bool:
    """True for ``alpha`` in ``{0, -1, -2, ...}`` (within ``atol``)."""
    nearest = round(alpha)
    return nearest <= 0 and abs(alpha - nearest) <= atol


# Fault injection for the self-test harness: perturbs every recurrence table.
_FAULT_OFFSET = 0.0


@contextlib.contextmanager
def injected_fault(offset: float = 1e-6):
    """Corrupt ``values[3]`` of every recurrence table while the context is active."""
    global _FAULT_OFFSET
    previous = _FAULT_OFFSET
    _FAULT_OFFSET = offset
    _recurrence_values.cache_clear()
    try:
        yield
    finally:
        _FAULT_OFFSET = previous
        _recurrence_values.cache_clear()


@functools.lru_cache(maxsize=256)
def _recurrence_values(alpha: float, M: int) -> np.ndarray:
    m = np.arange(M, dtype=np.float64)
    values = np.empty(M + 1)
    values[0] = 1.0
    # values[m + 1] = values[m] * (alpha + m) / (m + 1)
    np.cumprod((alpha + m) / (m + 1.0), out=values[1:])
    if _FAULT_OFFSET and M >= 3:
        values[3] += _FAULT_OFFSET
    values.setflags(write=False)
    return values


def kernel_recurrence(alpha: float, M: int) -> KernelTable:
    """Kernel table by the product recurrence; valid for every real ``alpha``.

    Examples
    --------
    >>> kernel_recurrence(0.5, 2).values
    array([1.   , 0.5  , 0.375])
    >>> kernel_recurrence(-2.0, 4).values
    array([ 1., -2.,  1.,  0.,  0.])
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError(f"order must be finite, got {alpha}")
    M = int(M)
    if M < 0:
        raise ValueError(f"max index must be nonnegative, got {M}")
    return KernelTable(alpha, _recurrence_values(alpha, M), KernelMethod.RECURRENCE)


def _loggamma_values(alpha: float, n: np.ndarray) -> np.ndarray:
    if is_gamma_pole(alpha):
        raise PoleError(f"alpha={alpha} is a pole of Gamma; use kernel_recurrence")
    n = np.asarray(n, dtype=np.float64)
    log_mag = special.gammaln(n + alpha) - special.gammaln(alpha) - special.gammaln(n + 1.0)
    sign = special.gammasgn(n + alpha) * special.gammasgn(alpha)
    return sign * np.exp(log_mag)


def kernel_loggamma(alpha: float, M: int) -> KernelTable:
    """Kernel table from ``Gamma(m + alpha) / (Gamma(alpha) m!)`` in log space.

    Raises :class:`PoleError` when ``alpha`` is ``0, -1, -2, ...``.
    """
    alpha = float(alpha)
    M = int(M)
    if M < 0:
        raise ValueError(f"max index must be nonnegative, got {M}")
    values = _loggamma_values(alpha, np.arange(M + 1))
    values[0] = 1.0
    values.setflags(write=False)
    return KernelTable(alpha, values, KernelMethod.LOGGAMMA)


def kernel(alpha: float, M: int, method: KernelMethod | str = KernelMethod.RECURRENCE) -> KernelTable:
    method = KernelMethod(method)
    if method is KernelMethod.LOGGAMMA:
        return kernel_loggamma(alpha, M)
    return kernel_recurrence(alpha, M)


def forward_difference_kernel(table: KernelTable, check: bool = True, tol: float = 1e-12) -> np.ndarray:
    """Differences ``d[j] = values[j+1] - values[j]``.

    These equal ``Lambda^{-(alpha-1)}(j+1)``; with ``check`` the identity is
    verified index-wise against a fresh recurrence table (tolerance relative
    to ``max(1, |value|)``) and :class:`CrossCheckFailed` raised otherwise.
    """
    if len(table) < 2:
        raise ValueError("need at least two kernel values to difference")
    d = np.diff(table.values)
    if check:
        expected = kernel_recurrence(table.alpha - 1.0, table.max_index).values[1:]
        err = np.abs(d - expected) / np.maximum(1.0, np.abs(expected))
        if err.max() > tol:
            j = int(err.argmax())
            raise CrossCheckFailed(f"difference identity fails at j={j}: deviation {err[j]:.3e}")
    return d


def convolve_kernels(alpha: float, beta: float, N: int, check: bool = False, tol: float = 1e-11) -> np.ndarray:
    """Cauchy product of the ``alpha`` and ``beta`` kernels, entries ``0..N``.

    Equals the ``alpha + beta`` kernel; ``check`` enforces that against the
    recurrence (tolerance relative to ``max(1, |value|)``).
    """
    N = int(N)
    if N < 0:
        raise ValueError("N must be nonnegative")
    a = kernel_recurrence(alpha, N).values
    b = kernel_recurrence(beta, N).values
    out = np.convolve(a, b)[: N + 1]
    if check:
        expected = kernel_recurrence(alpha + beta, N).values
        err = np.abs(out - expected) / np.maximum(1.0, np.abs(expected))
        if err.max() > tol:
            raise CrossCheckFailed(f"convolution identity deviation {err.max():.3e} > {tol:.1e}")
    return out


def asymptotic_check(alpha: float, n_values) -> np.ndarray:
    """Deviations ``|Lambda(n) n^(1-alpha) Gamma(alpha) - 1|`` from the leading power law."""
    n = np.asarray(n_values, dtype=np.float64)
    if np.any(n < 1):
        raise ValueError("asymptotic check needs n >= 1")
    if is_gamma_pole(alpha):
        raise PoleError(f"alpha={alpha} is a pole of Gamma")
    lam = _loggamma_values(alpha, n)
    return np.abs(lam * n ** (1.0 - alpha) * special.gamma(alpha) - 1.0)


def fit_asymptotic_constant(alpha: float, lo: int = 10, hi: int = 100) -> float:
    """Smallest ``C`` with ``e(n) <= C / n`` on ``lo <= n <= hi``."""
    n = np.arange(lo, hi + 1)
    return float(np.max(n * asymptotic_check(alpha, n)))


def generating_function_deviation(alpha: float, z: complex, N: int | None = None) -> float:
    """``|sum_{n<=N} Lambda(n) z^n - (1 - z)^(-alpha)|`` for ``|z| < 1``."""
    if abs(z) >= 1:
        raise ValueError("generating function converges only for |z| < 1")
    if N is None:
        N = 64 if z == 0 else int(np.ceil(np.log(1e-17) / np.log(abs(z))))
    lam = kernel_recurrence(alpha, N).values
    # Horner keeps the partial sum free of large intermediate powers.
    s = np.polynomial.polynomial.polyval(z, lam)
    return float(abs(s - (1.0 - z) ** (-alpha)))


def partial_sums(alpha: float, N: int) -> np.ndarray:
    """``S[k] = sum_{n=0}^{k} Lambda^{-alpha}(n)`` for ``k = 0..N``."""
    return np.cumsum(kernel_recurrence(alpha, N).values)


@dataclass(frozen=True)
class TelescopingCheck:
    """Outcome of evaluating the telescoping kernel identity with a finite cut-off."""

    alpha: float
    gap: int
    M: int
    truncated: float
    tail_bound: float
    tail_estimate: float
    roundoff: float

    @property
    def corrected(self) -> float:
        """Truncated sum plus the leading-order estimate of the neglected tail."""
        return self.truncated + self.tail_estimate

    @property
    def within_bound(self) -> bool:
        return abs(self.truncated) <= self.tail_bound + self.roundoff


def lemma2_telescoping_check(
    alpha: float,
    n: int,
    l: int,
    M_tail: int = 10**6,
    tol: float | None = None,
    c_emp: float | None = None,
) -> TelescopingCheck:
    r"""Evaluate

    .. math::

        \sum_{m=n}^{n+M}\bigl(\Lambda^{-\alpha}(m-n)-\Lambda^{-\alpha}(m-l)\bigr)
        - \sum_{m=l}^{n-1}\Lambda^{-\alpha}(m-l)

    for ``n > l`` and ``0 < alpha < 1``.  The infinite version vanishes; the
    neglected tail is bounded by ``(n - l) K M^(alpha-1)`` with
    ``K = (1 + C_emp) / Gamma(alpha)``, using
    ``|Lambda^{-(alpha-1)}(m)| <= (1 - alpha) K m^(alpha-2)`` and an integral
    comparison for ``sum_{m>M} m^(alpha-2)``.

    Raises :class:`WindowTooSmall` when ``tol`` is given and the tail bound exceeds it.
    """
    if n <= l:
        raise ValueError(f"need n > l, got n={n}, l={l}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"need 0 < alpha < 1, got {alpha}")
    M = int(M_tail)
    if M < 1:
        raise ValueError("M_tail must be positive")
    gap = int(n - l)
    if c_emp is None:
        c_emp = fit_asymptotic_constant(alpha)
    K = (1.0 + c_emp) / special.gamma(alpha)
    tail_bound = gap * K * M ** (alpha - 1.0)
    if tol is not None and tail_bound > tol:
        raise WindowTooSmall(f"tail bound {tail_bound:.3e} exceeds tolerance {tol:.1e}; raise M_tail")

    # round the table length up so nearby gaps share one cached table
    lam = kernel_recurrence(alpha, M + 64 * -(-gap // 64)).values
    near = lam[: M + 1]  # Lambda(m - n) for m = n..n+M
    far = lam[gap : M + gap + 1]  # Lambda(m - l) for the same m
    head = lam[:gap]  # Lambda(m - l) for m = l..n-1
    truncated = float(np.sum(near - far) - np.sum(head))
    eps = np.finfo(float).eps
    roundoff = 8 * eps * math.log2(M + gap + 2) * float(np.sum(np.abs(near)) + np.sum(np.abs(far)) + np.sum(head))
    tail_estimate = gap * (M + 1.0 + 0.5 * gap) ** (alpha - 1.0) / special.gamma(alpha)
    return TelescopingCheck(alpha, gap, M, truncated, tail_bound, tail_estimate, roundoff)
