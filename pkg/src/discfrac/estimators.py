"""Scikit-learn transformers over batches of lattice signals.

Each row of ``X`` holds the samples of one signal on the window
``[n_min, n_min + n_features - 1]`` with step ``h``.  The operators are
fixed linear maps, so ``fit`` only validates input and records the width;
outputs keep the input shape, with ``NaN`` where a value depends on data
the extension does not determine.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from ._validation import check_extension, check_positive, check_side
from .fracops import OperatorSpec, frac_apply
from .grid import GridFunction
from .holder import HolderIndex, holder_norm
from .semigroup import apply_semigroup

__all__ = ["FractionalDifference", "HolderNorm", "PoissonSemigroup"]


class _RowwiseTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        self._check_params()
        validate_data(self, X, reset=True, dtype=np.float64)
        return self

    def _rows(self, X):
        check_is_fitted(self, "n_features_in_")
        X = validate_data(self, X, reset=False, dtype=np.float64)
        ext = check_extension(self.extension)
        for row in X:
            yield GridFunction.from_samples(row, self.h, self.n_min, ext)

    @staticmethod
    def _masked(f: GridFunction) -> np.ndarray:
        out = np.array(f.samples)
        out[~f.valid_mask] = np.nan
        return out

    def _check_params(self) -> None:
        check_positive("h", self.h)
        check_extension(self.extension)


class FractionalDifference(_RowwiseTransformer):
    """One-sided fractional difference (``order > 0``) or sum (``order < 0``).

    Parameters
    ----------
    order : float
        Signed order; ``-alpha`` is the order-``alpha`` fractional sum.
    side : {'right', 'left'}
    h : float
        Mesh step.
    n_min : int
        Lattice index of the first column.
    extension : str
        ``'zero'``, ``'constant'``, ``'undefined'`` or ``'decay:p:c'``.
    method : {'series', 'fft', 'quadrature'}
    tol : float

    Examples
    --------
    >>> import numpy as np
    >>> FractionalDifference(order=1.0).fit_transform(np.array([[0.0, 1.0, 0.0]]))
    array([[-1.,  1.,  0.]])
    """

    def __init__(self, order=0.5, side="right", h=1.0, n_min=0, extension="zero", method="series", tol=1e-10):
        self.order = order
        self.side = side
        self.h = h
        self.n_min = n_min
        self.extension = extension
        self.method = method
        self.tol = tol

    def _check_params(self) -> None:
        super()._check_params()
        OperatorSpec(self.order, check_side(self.side))
        if self.method not in ("series", "fft", "quadrature"):
            raise ValueError(f"unknown method {self.method!r}")

    def transform(self, X):
        spec = OperatorSpec(self.order, check_side(self.side))
        out = []
        for u in self._rows(X):
            v = frac_apply(u, spec, self.method, self.tol)
            out.append(self._masked(v.restricted(u.grid.n_min, u.grid.n_max)))
        return np.vstack(out)


class PoissonSemigroup(_RowwiseTransformer):
    """Poisson translation semigroup at time ``t`` (scaled to ``t / h`` steps)."""

    def __init__(self, t=1.0, side="right", h=1.0, n_min=0, extension="zero", tol=1e-12):
        self.t = t
        self.side = side
        self.h = h
        self.n_min = n_min
        self.extension = extension
        self.tol = tol

    def _check_params(self) -> None:
        super()._check_params()
        check_side(self.side)
        if not self.t >= 0:
            raise ValueError("t must be nonnegative")

    def transform(self, X):
        side = check_side(self.side)
        return np.vstack([self._masked(apply_semigroup(u, self.t, side, self.tol)) for u in self._rows(X)])


class HolderNorm(_RowwiseTransformer):
    """Discrete ``C_h^{k, beta}`` norm of each row; returns shape ``(n_samples, 1)``."""

    def __init__(self, k=0, beta=0.5, h=1.0, n_min=0, extension="zero"):
        self.k = k
        self.beta = beta
        self.h = h
        self.n_min = n_min
        self.extension = extension

    def _check_params(self) -> None:
        super()._check_params()
        HolderIndex(self.k, self.beta)

    def transform(self, X):
        idx = HolderIndex(self.k, self.beta)
        return np.array([[holder_norm(u, idx).norm] for u in self._rows(X)])
