"""Discrete fractional calculus on the lattice ``Z_h``.

Binomial-type kernels, Poisson translation semigroups, one-sided fractional
sums and differences with independent quadrature oracles, discrete Hölder
norms and empirical Schauder-estimate sweeps.
"""

from __future__ import annotations

from .differences import delta, delta_left, delta_right, mixed_difference
from .errors import (
    CaseConstraintViolated,
    CrossCheckFailed,
    DiscFracError,
    DuplicateIndex,
    ExtensionRequired,
    NotInDomain,
    ParseError,
    PoleError,
    QuadratureNotConverged,
    WindowTooSmall,
)
from .estimators import FractionalDifference, HolderNorm, PoissonSemigroup
from .fracops import (
    OperatorSpec,
    QuadratureConfig,
    composition_residual,
    fft_apply,
    frac_apply,
    frac_apply_general,
    frac_apply_series,
    frac_derivative_quadrature,
    frac_integral_quadrature,
    membership_ell,
)
from .grid import Extension, ExtensionKind, Grid, GridFunction, Side
from .holder import HolderIndex, HolderReport, double_window_stability, holder_norm, holder_seminorm
from .kernel import (
    KernelMethod,
    KernelTable,
    convolve_kernels,
    forward_difference_kernel,
    kernel,
    kernel_loggamma,
    kernel_recurrence,
    lemma2_telescoping_check,
)
from .schauder import (
    SchauderCase,
    SchauderSweepReport,
    TestFamily,
    run_sweep,
    schauder_ratio_case_i,
    schauder_ratio_case_ii,
    schauder_ratio_case_iii,
    schauder_ratio_case_iv,
)
from .semigroup import apply_semigroup, cauchy_residual, poisson_weights, semigroup_law_residual

__version__ = "0.1.0"
