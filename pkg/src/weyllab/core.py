"""Quadratic Weyl sums.

The basic object is the one-dimensional sum

    w_N(x, t) = sum_{n=1}^{N} e(x n + t n^2),     e(y) = exp(2 pi i y),

and its d-dimensional product form.  Phases are carried as 64-bit fixed-point
fractions of a turn, so n*x and n^2*t are reduced mod 1 exactly (up to the
2^-64 truncation of the inputs) before any trigonometric call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numba
import numpy as np
import scipy.fft

from .errors import CapacityError, DomainError, InvalidGridError

RESYNC = 4096
_TWO63 = 9223372036854775808.0
_TURN = 2.0 * math.pi / 18446744073709551616.0
VINOGRADOV_GUARD = 10**9
_TABLE_GUARD = 2**27


@dataclass(frozen=True)
class TorusPoint:
    x: tuple[float, ...]
    t: float

    def __post_init__(self):
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))
        if not 1 <= len(x) <= 4:
            raise DomainError(f"dimension must be 1..4, got {len(x)}")
        for v in x + (self.t,):
            if not 0.0 <= v < 1.0:
                raise DomainError(f"torus coordinate {v!r} not in [0,1)")

    @classmethod
    def wrap(cls, x, t) -> "TorusPoint":
        """Build a point after reducing every coordinate mod 1."""
        xs = [_wrap1(v) for v in np.atleast_1d(x)]
        return cls(tuple(xs), _wrap1(t))

    @property
    def d(self) -> int:
        return len(self.x)


def _wrap1(v: float) -> float:
    y = float(v) % 1.0
    return 0.0 if y >= 1.0 else y


@dataclass(frozen=True)
class WeylParams:
    N: int
    d: int = 1
    symmetric: bool = False  # True: n in [-N, N], False: n in [1, N]

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        if not 1 <= self.d <= 4:
            raise DomainError(f"d must be 1..4, got {self.d}")

    @property
    def range_tag(self) -> str:
        return "[-N,N]" if self.symmetric else "[1,N]"


@dataclass(frozen=True)
class TorusShape:
    """Shape (beta_2, ..., beta_d) of a rectangular torus; beta_1 = 1."""

    betas: tuple[float, ...]

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        object.__setattr__(self, "betas", betas)
        if not betas:
            raise DomainError("a torus shape needs at least one beta (d >= 2)")
        for b in betas:
            if not 1.0 <= b <= 2.0:
                raise DomainError(f"beta {b!r} outside [1,2]")

    @property
    def d(self) -> int:
        return len(self.betas) + 1

    @property
    def all_betas(self) -> tuple[float, ...]:
        return (1.0,) + self.betas


# ---------------------------------------------------------------- phases

def _fixed_scalar(x: float) -> int:
    """x mod 1 as an integer multiple of 2^-64 (truncated)."""
    y = _wrap1(x)
    return int(y * _TWO63) << 1


def phase_fraction(n: int, x: float) -> float:
    """Fractional part of n*x in [0, 1), reduced with exact integer arithmetic."""
    n = int(n)
    if abs(n) > 2**31:
        raise DomainError("|n| must be at most 2^31")
    ph = (n * _fixed_scalar(x)) % (1 << 64)
    y = ph / 18446744073709551616.0
    return 0.0 if y >= 1.0 else y


def fixed_point(x) -> np.ndarray:
    """Vectorised x mod 1 as uint64 fixed-point turns."""
    y = np.mod(np.asarray(x, dtype=np.float64), 1.0)
    y = np.where(y >= 1.0, 0.0, y)
    return np.floor(y * _TWO63).astype(np.int64).astype(np.uint64) << np.uint64(1)


def unit_from_fixed(ph: np.ndarray) -> np.ndarray:
    """e(ph / 2^64) for uint64 phases; the signed view keeps angles in [-pi, pi)."""
    ang = ph.view(np.int64).astype(np.float64) * _TURN
    return np.exp(1j * ang)


def square_phases(n: np.ndarray, t: float) -> np.ndarray:
    """e(n^2 t) for an integer array n, exact reduction of n^2 t mod 1."""
    n = np.asarray(n, dtype=np.int64)
    with np.errstate(over="ignore"):
        ph = (n * n).astype(np.uint64) * fixed_point(t)
    return unit_from_fixed(ph)


def linear_phases(n: np.ndarray, x: float) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    with np.errstate(over="ignore"):
        ph = n.astype(np.uint64) * fixed_point(x)
    return unit_from_fixed(ph)


# ---------------------------------------------------------------- kernels

@numba.njit(cache=True)
def _fix(x):
    y = x - np.floor(x)
    if y >= 1.0:
        y = 0.0
    return np.uint64(np.int64(y * _TWO63)) << np.uint64(1)


@numba.njit(cache=True)
def _unit(ph):
    a = np.int64(ph) * _TURN
    return complex(np.cos(a), np.sin(a))


@numba.njit(cache=True)
def _weyl_1d_kernel(x, t, N):
    # z_n = e(xn + tn^2) is advanced by w_n = e(x + t(2n+1)); w_n itself moves by
    # the constant factor e(2t).  Powers of e(2t) come from a table so that the
    # increment never drifts, and z and w are re-seeded from exact phases at the
    # start of every RESYNC-term block.
    X = _fix(x)
    T = _fix(t)
    L = min(N, RESYNC)
    tab = np.empty(L, np.complex128)
    T2 = T * np.uint64(2)
    for k in range(L):
        tab[k] = _unit(np.uint64(k) * T2)
    acc = 0j
    s = 1
    while s <= N:
        us = np.uint64(s)
        z = _unit(us * X + us * us * T)
        w0 = _unit(X + (np.uint64(2) * us + np.uint64(1)) * T)
        stop = min(N, s + RESYNC - 1)
        for k in range(stop - s + 1):
            acc += z
            z *= w0 * tab[k]
        s = stop + 1
    return acc


@numba.njit(cache=True)
def _weyl_1d_many(xs, ts, N):
    out = np.empty(xs.shape[0], np.complex128)
    for i in range(xs.shape[0]):
        out[i] = _weyl_1d_kernel(xs[i], ts[i], N)
    return out


def weyl_1d(x: float, t: float, N: int) -> complex:
    """Sum_{n=1}^N e(xn + tn^2)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return complex(_weyl_1d_kernel(float(x), float(t), int(N)))


def weyl_1d_many(xs, ts, N: int) -> np.ndarray:
    """Vectorised weyl_1d over paired arrays of x and t."""
    xs, ts = np.broadcast_arrays(np.asarray(xs, float), np.asarray(ts, float))
    flat = _weyl_1d_many(np.ascontiguousarray(xs.ravel()),
                         np.ascontiguousarray(ts.ravel()), int(N))
    return flat.reshape(xs.shape)


def _as_params(params, d: int | None = None) -> WeylParams:
    if isinstance(params, WeylParams):
        return params
    return WeylParams(int(params), d or 1)


def weyl_dd(p: TorusPoint, params) -> complex:
    """Product of the axis sums at p; params is WeylParams or a bare N."""
    params = _as_params(params, p.d)
    if params.symmetric:
        raise DomainError("weyl_dd uses the range [1,N]; see weyl_generic")
    out = 1.0 + 0j
    for xj in p.x:
        out *= weyl_1d(xj, p.t, params.N)
    return out


def weyl_dd_many(xs: np.ndarray, ts: np.ndarray, N: int) -> np.ndarray:
    """xs has shape (k, d); returns the k products."""
    xs = np.atleast_2d(np.asarray(xs, float))
    ts = np.asarray(ts, float).ravel()
    out = np.ones(xs.shape[0], np.complex128)
    for j in range(xs.shape[1]):
        out *= weyl_1d_many(xs[:, j], ts, N)
    return out


def _as_fraction(r) -> Fraction:
    if isinstance(r, Fraction):
        return r
    if hasattr(r, "a") and hasattr(r, "q"):
        return Fraction(r.a, r.q)
    if isinstance(r, str):
        return Fraction(r)
    return Fraction(r).limit_denominator(10**9)


def shift_rational_line(x: Sequence[float], t: float, r) -> tuple[float, ...]:
    rs = [_as_fraction(v) for v in np.atleast_1d(np.asarray(r, dtype=object))]
    xs = list(np.atleast_1d(x))
    if len(rs) != len(xs):
        raise DomainError("r and x must have the same length")
    return tuple(_wrap1(float(xj) - float(rj) * t) for xj, rj in zip(xs, rs))


def weyl_rational_line(x, t: float, r, params) -> complex:
    """w_N(x - r t, t): the sum along the rational direction r."""
    xs = tuple(np.atleast_1d(x))
    params = _as_params(params, len(xs))
    return weyl_dd(TorusPoint(shift_rational_line(xs, t, r), _wrap1(t)), params)


def weyl_generic(p: TorusPoint, params, shape: TorusShape) -> complex:
    """prod_j sum_{n=-N}^{N} e(x_j n + t beta_j n^2) with beta_1 = 1."""
    params = _as_params(params, p.d)
    if p.d != shape.d:
        raise DomainError(f"point has d={p.d} but shape has d={shape.d}")
    if p.d < 2:
        raise DomainError("generic tori need d >= 2")
    N = params.N
    out = 1.0 + 0j
    for xj, bj in zip(p.x, shape.all_betas):
        tj = _wrap1(bj * p.t)
        # n and -n share the quadratic phase, so the symmetric range is
        # 1 + (forward sum at x) + (forward sum at -x).
        out *= 1.0 + weyl_1d(xj, tj, N) + weyl_1d(_wrap1(-xj), tj, N)
    return out


def weyl_grid_x(t: float, N: int, M: int, d: int = 1, offset: float = 0.0) -> np.ndarray:
    """Values at x_k = (k + offset)/M on every axis, shape (M,)*d.

    One FFT of the zero-padded coefficients e(n^2 t), n = 1..N, gives the axis
    array; the d-dimensional field is its outer power.
    """
    if M < N + 1:
        raise InvalidGridError(f"grid M={M} is too coarse for N={N} (need M >= N+1)")
    if M & (M - 1):
        raise InvalidGridError(f"grid M={M} is not a power of two")
    n = np.arange(1, N + 1)
    c = square_phases(n, t)
    if offset:
        c = c * np.exp(2j * np.pi * n * (offset / M))
    buf = np.zeros(M, np.complex128)
    buf[1:N + 1] = c
    axis = scipy.fft.ifft(buf, norm="forward")
    out = axis
    for _ in range(d - 1):
        out = np.multiply.outer(out, axis)
    return out


def vinogradov_count(N: int, k: int, d: int = 1) -> int:
    """Number of pairs of k-tuples in [1,N]^d with equal vector sums and equal
    sums of squared norms.

    All k-tuples are bucketed by their signature (vector sum, square sum) in a
    dense table built by k rounds of shifted accumulation; the count is the sum
    of squared bucket sizes.
    """
    if N < 1 or k < 1 or d < 1:
        raise DomainError("N, k and d must be positive")
    if N ** (d * k) > VINOGRADOV_GUARD:
        raise CapacityError(f"N^(dk) = {N ** (d * k)} exceeds {VINOGRADOV_GUARD}")
    side = k * (N - 1) + 1          # vector-sum offsets 0..k(N-1) per axis
    qlen = k * d * (N * N - 1) + 1  # square-sum offsets
    if side**d * qlen > _TABLE_GUARD:
        raise CapacityError("signature table too large")
    vecs = np.array(np.meshgrid(*[np.arange(N)] * d, indexing="ij")).reshape(d, -1).T
    sq = ((vecs + 1) ** 2).sum(axis=1) - d
    table = np.zeros((side,) * d + (qlen,), dtype=np.int64)
    table[(0,) * d + (0,)] = 1
    for _ in range(k):
        nxt = np.zeros_like(table)
        lim = tuple(slice(0, side - (N - 1)) for _ in range(d)) + (slice(0, qlen - (N * N - 1) * d),)
        src = table[lim]
        for v, s in zip(vecs, sq):
            dst = tuple(slice(int(v[j]), int(v[j]) + src.shape[j]) for j in range(d))
            dst += (slice(int(s), int(s) + src.shape[d]),)
            nxt[dst] += src
        table = nxt
    flat = table.ravel()
    flat = flat[flat > 0]
    return int(sum(int(m) * int(m) for m in flat))
