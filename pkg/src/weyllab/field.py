"""Engine for sup over t of |w_N(x, t)|: separable sum models, x-FFT row scans
and the sampling bound that certifies sampled maxima.

A sum model is a product over axes of one-dimensional sums

    a_j(x_j, t) = sum_n e(n x_j + phi_j(n) t),

with integer frequencies n and real time frequencies phi_j.  The standard sum
has phi(n) = n^2 on n = 1..N, the rational line r = u/v has phi(n) = n^2 - r n,
and a generic torus has phi(n) = beta_j n^2 on n = -N..N.

Sampling bound.  Let g be any of these sums at fixed x and F = |g|^2.  F is a
real trigonometric (or almost periodic) polynomial with frequencies in
[-W, W], W the spread of the total time frequency, so Bernstein's inequality
gives |F''| <= (2 pi W)^2 sup_R F.  At an interior maximiser F' = 0, and the
nearest node of a grid of spacing 1/T is within 1/(2T), hence

    sup F <= max_nodes F + kappa * sup_R F,    kappa = pi^2 W^2 / (2 T^2).

For 1-periodic sums sup_R F is the sup itself; for the rational line it is the
maximum over the orbit x - k r; on a generic torus it is bounded by the product
of the per-axis sups, each certified the same way.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numba
import numpy as np
import scipy.fft

from .core import TorusShape, _as_fraction
from .errors import CapacityError, DomainError

FIELD_GUARD = 2**24
_ROUND_SLACK = 1e-9


@dataclass
class Axis:
    n: np.ndarray        # integer frequencies
    phi: np.ndarray      # time frequencies
    phi_num: np.ndarray | None = None  # integer numerators of phi over `period`

    @property
    def lo(self) -> float:
        return float(self.phi.min())

    @property
    def hi(self) -> float:
        return float(self.phi.max())


@dataclass
class SumModel:
    kind: str                      # "standard", "rational", "generic"
    N: int
    axes: list[Axis]
    period: int | None = 1         # t-period (None: not periodic)
    r: tuple[Fraction, ...] | None = None
    betas: tuple[float, ...] | None = None

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def spread(self) -> float:
        return sum(a.hi - a.lo for a in self.axes)

    @property
    def center(self) -> float:
        return sum(0.5 * (a.hi + a.lo) for a in self.axes)

    @property
    def n_terms(self) -> int:
        return int(np.prod([len(a.n) for a in self.axes]))

    def eval(self, x: Sequence[float], t: np.ndarray, derivative: bool = False):
        """Direct evaluation of the product (and its t-derivative) at times t."""
        t = np.atleast_1d(np.asarray(t, float))
        vals = []
        ders = []
        for xj, ax in zip(x, self.axes):
            v = np.empty(len(t), np.complex128)
            dv = np.empty(len(t), np.complex128)
            base = np.exp(2j * np.pi * np.mod(ax.n * xj, 1.0))
            step = max(1, 2**21 // max(len(ax.n), 1))
            for s in range(0, len(t), step):
                tt = t[s:s + step]
                ph = np.mod(np.multiply.outer(tt, ax.phi), 1.0)
                E = np.exp(2j * np.pi * ph) * base
                v[s:s + step] = E.sum(axis=1)
                if derivative:
                    dv[s:s + step] = (E * (2j * np.pi * ax.phi)).sum(axis=1)
            vals.append(v)
            ders.append(dv)
        P = np.prod(vals, axis=0)
        if not derivative:
            return P
        dP = np.zeros_like(P)
        for j in range(self.d):
            term = ders[j]
            for k in range(self.d):
                if k != j:
                    term = term * vals[k]
            dP += term
        return P, dP


def standard_model(N: int, d: int = 1) -> SumModel:
    n = np.arange(1, N + 1)
    axes = [Axis(n, (n * n).astype(float), n * n) for _ in range(d)]
    return SumModel("standard", N, axes, 1)


def rational_model(N: int, r: Sequence) -> SumModel:
    rs = tuple(_as_fraction(v) for v in r)
    v = math.lcm(*[f.denominator for f in rs])
    n = np.arange(1, N + 1)
    axes = []
    for f in rs:
        num = v * n * n - (f.numerator * (v // f.denominator)) * n
        axes.append(Axis(n, num / v, num))
    if all(f == 0 for f in rs):
        return SumModel("standard", N, axes, 1, rs)
    return SumModel("rational", N, axes, v, rs)


def generic_model(N: int, shape: TorusShape) -> SumModel:
    n = np.arange(-N, N + 1)
    axes = [Axis(n, b * (n * n).astype(float)) for b in shape.all_betas]
    return SumModel("generic", N, axes, None, betas=shape.all_betas)


def make_model(N: int, d: int = 1, r=None, shape: TorusShape | None = None) -> SumModel:
    if shape is not None:
        if r is not None:
            raise DomainError("choose either a rational line or a torus shape")
        if shape.d != d:
            raise DomainError(f"shape has d={shape.d}, expected {d}")
        return generic_model(N, shape)
    if r is not None:
        rs = list(np.atleast_1d(np.asarray(r, dtype=object)))
        if len(rs) != d:
            raise DomainError("r must have d components")
        return rational_model(N, rs)
    return standard_model(N, d)


def kappa(spread: float, T: int) -> float:
    return math.pi**2 * spread**2 / (2.0 * T * T)


def certified_upper(sampled: np.ndarray, orbit_sampled: np.ndarray, kap: float) -> np.ndarray:
    """Upper bound for the true sup from sampled sup and sampled sup over R."""
    if kap >= 1:
        raise DomainError("grid too coarse for the sampling bound")
    U2 = orbit_sampled.astype(float) ** 2 / (1.0 - kap)
    return np.sqrt(sampled.astype(float) ** 2 + kap * U2)


def t_resolution(spread: float, tol_rel: float) -> int:
    """Power-of-two grid density T (nodes per unit t) meeting tol_rel for periodic sums."""
    target = 1.0 - 1.0 / (1.0 + tol_rel) ** 2
    T = 8
    while kappa(spread, T) > target:
        T *= 2
    return T


# ---------------------------------------------------------------- row scans

@dataclass
class RowScan:
    """Per-x running maxima of a row scan over t."""
    best: np.ndarray              # max over scanned rows of |product|, shape (M,)*d
    best_row: np.ndarray          # row index achieving it
    axis_best: list[np.ndarray] = field(default_factory=list)  # per-axis maxima of |a_j|


class _RowSource:
    """Streams |a_j| for consecutive rows using a fixed step table.

    Row i0 + b has coefficients e(phi (i0 + b)/T) = e(phi i0/T) * e(phi b/T); the
    second factor is tabulated once, the first is computed exactly per block.
    """

    def __init__(self, ax: Axis, M: int, offset: float, T: int, block: int, dtype,
                 period: int | None):
        self.ax, self.M, self.T, self.block, self.dtype = ax, M, T, block, dtype
        self.period = period
        self.shift = np.exp(2j * np.pi * ax.n * (offset / M))
        self.table = self._phases(np.arange(block)).astype(dtype)
        self.buf = np.zeros((block, M), dtype)
        # n is a contiguous integer range; split it into slices of buf
        n = ax.n
        self.pieces = []
        neg = n < 0
        if neg.any():
            k = np.nonzero(neg)[0]
            self.pieces.append((slice(k[0], k[-1] + 1), slice(M + n[k[0]], M + n[k[-1]] + 1)))
        k = np.nonzero(~neg)[0]
        self.pieces.append((slice(k[0], k[-1] + 1), slice(n[k[0]], n[k[-1]] + 1)))

    def _phases(self, rows: np.ndarray) -> np.ndarray:
        ax = self.ax
        if ax.phi_num is not None:
            den = int(self.period) * self.T
            ph = np.mod(np.multiply.outer(rows.astype(np.int64), ax.phi_num.astype(np.int64)), den)
            return np.exp(2j * np.pi * (ph / den))
        ph = np.mod(np.multiply.outer(rows / self.T, ax.phi), 1.0)
        return np.exp(2j * np.pi * ph)

    def rows(self, i0: int, count: int) -> np.ndarray:
        base = (self._phases(np.array([i0]))[0] * self.shift).astype(self.dtype)
        buf = self.buf[:count]
        C = self.table[:count] * base
        for src, dst in self.pieces:
            buf[:, dst] = C[:, src]
        out = scipy.fft.ifft(buf, axis=1, norm="forward", overwrite_x=False)
        return np.abs(out)


@numba.njit(cache=True)
def _fold_rows_2d(A0, A1, best, best_row, i0):
    """Running max over rows r of the outer products A0[r] x A1[r]."""
    for r in range(A0.shape[0]):
        for i in range(A0.shape[1]):
            a = A0[r, i]
            for j in range(A1.shape[1]):
                v = a * A1[r, j]
                if v > best[i, j]:
                    best[i, j] = v
                    best_row[i, j] = i0 + r


def _mirror_full(half: np.ndarray, M: int) -> np.ndarray:
    """Extend arrays given on the first M/2 cells of every axis by x -> -x."""
    idx = np.arange(M)
    idx = np.where(idx < M // 2, idx, M - 1 - idx)
    return half[np.ix_(*[idx] * half.ndim)]


def scan_rows(model: SumModel, M: int, T: int, i_start: int, i_stop: int,
              cell_centered: bool = True, dtype=np.complex128, block: int = 256) -> RowScan:
    """Scan rows t_i = i/T for i_start <= i <= i_stop over the x-grid (k + o)/M.

    Sums over a symmetric range n = -N..N are even in every x_j, so on the
    cell-centred grid only the first half of each axis is folded and the rest
    is filled in by reflection.
    """
    d = model.d
    offset = 0.5 if cell_centered else 0.0
    for ax in model.axes:
        if 2 * int(np.abs(ax.n).max()) + 1 > M and ax.n.min() < 0:
            raise DomainError(f"grid M={M} too coarse for symmetric range N={model.N}")
        if ax.n.min() > 0 and ax.n.max() + 1 > M:
            raise DomainError(f"grid M={M} too coarse for N={model.N}")
    mirror = cell_centered and d >= 2 and all(
        np.array_equal(np.sort(-ax.n), ax.n) for ax in model.axes)
    W = M // 2 if mirror else M
    shape = (W,) * d
    real = np.float32 if dtype == np.complex64 else np.float64
    best = np.full(shape, -1.0, real)
    best_row = np.zeros(shape, np.int64)
    axis_best = [np.zeros(M) for _ in range(d)]
    sources = [_RowSource(ax, M, offset, T, block, dtype, model.period) for ax in model.axes]
    i = i_start
    while i <= i_stop:
        cnt = min(block, i_stop - i + 1)
        A = [src.rows(i, cnt) for src in sources]
        for j in range(d):
            np.maximum(axis_best[j], A[j].max(axis=0), out=axis_best[j])
        if d == 1:
            V = A[0]
            bmax = V.max(axis=0)
            upd = bmax > best
            if upd.any():
                best[upd] = bmax[upd]
                best_row[upd] = V[:, upd].argmax(axis=0) + i
        elif d == 2:
            _fold_rows_2d(np.ascontiguousarray(A[0][:, :W], real),
                          np.ascontiguousarray(A[1][:, :W], real), best, best_row, i)
        else:
            for r in range(cnt):
                V = A[0][r, :W]
                for j in range(1, d):
                    V = np.multiply.outer(V, A[j][r, :W])
                upd = V > best
                best[upd] = V[upd]
                best_row[upd] = i + r
        i += cnt
    best = best.astype(np.float64)
    if mirror:
        best, best_row = _mirror_full(best, M), _mirror_full(best_row, M)
    return RowScan(best, best_row, axis_best)


def rows_per_block(M: int, d: int) -> int:
    cells = M ** d
    return int(max(1, min(256, 2**22 // max(cells, 1))))
