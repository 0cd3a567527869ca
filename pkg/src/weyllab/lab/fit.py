from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residuals: tuple[float, ...]
    n_min: float
    n_max: float

    @property
    def points(self) -> int:
        return len(self.residuals)


def fit_exponent(pairs) -> FitResult:
    """Least-squares line through (log N, log value); residuals are kept per point."""
    pairs = [(float(n), float(v)) for n, v in pairs]
    if len(pairs) < 3:
        raise DomainError("a fit needs at least 3 (N, value) pairs")
    N = np.array([p[0] for p in pairs])
    V = np.array([p[1] for p in pairs])
    if (N <= 0).any() or (V <= 0).any() or not np.isfinite(V).all():
        raise DomainError("fit inputs must be positive and finite")
    if len(np.unique(N)) < 2:
        raise DomainError("fit needs at least two distinct N")
    X, Y = np.log(N), np.log(V)
    A = np.column_stack([X, np.ones_like(X)])
    (slope, icpt), *_ = np.linalg.lstsq(A, Y, rcond=None)
    res = Y - (slope * X + icpt)
    return FitResult(float(slope), float(icpt), tuple(float(r) for r in res),
                     float(N.min()), float(N.max()))
