"""Certified maximal functions sup_t |w_N(x, t)| and the quantities built on
them: L^p norms, level-set measures and space-time norms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.fft

from .core import TorusShape, vinogradov_count, VINOGRADOV_GUARD
from .errors import CapacityError, ClaimViolationError, DomainError, InvalidGridError
from .field import (FIELD_GUARD, SumModel, certified_upper, kappa, make_model,
                    scan_rows, t_resolution)


@dataclass(frozen=True)
class SupResult:
    t_star: float
    value: float
    error_radius: float

    @property
    def upper(self) -> float:
        return self.value + self.error_radius


@dataclass(frozen=True)
class SweepConfig:
    N: int
    d: int = 1
    alpha: float = 1.0
    eta: float = 0.05
    tol_rel: float = 0.01
    grid: int | None = None  # fixed M; None means adaptive

    def __post_init__(self):
        if not 0 < self.alpha <= self.d:
            raise DomainError("alpha must lie in (0, d]")
        if not 0 < self.eta <= 0.2:
            raise DomainError("eta must lie in (0, 0.2]")
        if not 0 < self.tol_rel < 0.5:
            raise DomainError("tol_rel must lie in (0, 0.5)")


def _pow2_at_least(n: int) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1))))


def _slack(model: SumModel, M: int, single: bool) -> float:
    eps = 6e-8 if single else 2.3e-16
    terms = max(len(a.n) for a in model.axes)
    return model.d * eps * (math.log2(M) + 8) * float(terms) ** model.d


# ---------------------------------------------------------------- single x

def _initial_cells(model: SumModel, x, T0: int):
    """|P| and |P' - 2 pi i c P| at cell centres (i + 1/2)/T0 over one t-period
    (or over [0, 1] for generic sums), plus per-axis maxima for generic sums."""
    c0 = model.center
    if model.period is not None:
        P = model.period
        L = P * T0
        centers = (np.arange(L) + 0.5) / T0
        vals, ders = [], []
        for xj, ax in zip(x, model.axes):
            m = ax.phi_num.astype(np.int64)
            coef = np.exp(2j * np.pi * np.mod(ax.n * xj, 1.0)) * np.exp(1j * np.pi * m / L)
            buf = np.zeros(L, np.complex128)
            np.add.at(buf, np.mod(m, L), coef)
            dbuf = np.zeros(L, np.complex128)
            np.add.at(dbuf, np.mod(m, L), coef * (2j * np.pi * m / P))
            vals.append(scipy.fft.ifft(buf, norm="forward"))
            ders.append(scipy.fft.ifft(dbuf, norm="forward"))
        axis_max = None
    else:
        centers = (np.arange(T0) + 0.5) / T0
        vals, ders = [], []
        for j in range(model.d):
            sub = SumModel("generic", model.N, [model.axes[j]], None)
            v, dv = sub.eval([x[j]], centers, derivative=True)
            vals.append(v)
            ders.append(dv)
        axis_max = [float(np.abs(v).max()) for v in vals]
    Pv = np.prod(vals, axis=0)
    dP = np.zeros_like(Pv)
    for j in range(model.d):
        term = ders[j]
        for k in range(model.d):
            if k != j:
                term = term * vals[k]
        dP += term
    return centers, np.abs(Pv), np.abs(dP - 2j * np.pi * c0 * Pv), axis_max


def sup_over_t(x, N: int, d: int = 1, tol_rel: float = 1e-3, *, r=None,
               shape: TorusShape | None = None, max_evals: int = 2**24) -> SupResult:
    """Certified sup over t in [0, 1] of |w_N(x, t)| by branch and bound.

    Cells carry the second-order Taylor bound |g(c)| + |g'(c)| h + (pi W)^2 U h^2 / 2,
    where g is the sum with its time frequencies centred, W the frequency spread
    and U a certified bound for sup over R of |g| obtained from the initial grid.
    """
    x = [float(v) for v in np.atleast_1d(x)]
    if len(x) != d:
        raise DomainError(f"x has {len(x)} coordinates, expected {d}")
    model = make_model(N, d, r, shape)
    W = model.spread
    c0 = model.center
    T0 = 2 * t_resolution(W, 0.25)
    centers, gv, dv, axis_max = _initial_cells(model, x, T0)
    kap = kappa(W, T0)
    if axis_max is None:
        U = float(gv.max()) / math.sqrt(1.0 - kap)
    else:
        U = 1.0
        for ax, am in zip(model.axes, axis_max):
            U *= am / math.sqrt(1.0 - kappa(ax.hi - ax.lo, T0))
    inside = centers < 1.0
    centers, gv, dv = centers[inside], gv[inside], dv[inside]
    slack = _slack(model, T0, False) + 1e-12 * U
    R2 = 0.5 * (math.pi * W) ** 2 * U

    # endpoints are admissible maximisers and cheap to include exactly
    ends = np.array([0.0, 1.0]) if model.period != 1 else np.array([0.0])
    ev = np.abs(model.eval(x, ends))
    i = int(np.argmax(gv))
    best, t_best = float(gv[i]), float(centers[i])
    j = int(np.argmax(ev))
    if ev[j] > best:
        best, t_best = float(ev[j]), float(ends[j])

    h = 0.5 / T0
    bound = gv + dv * h + R2 * h * h + slack
    pruned_max = 0.0
    evals = 0
    while True:
        active = bound >= best * (1.0 + tol_rel)
        if (~active).any():
            pruned_max = max(pruned_max, float(bound[~active].max()))
        if not active.any():
            break
        if evals + 2 * int(active.sum()) > max_evals:
            pruned_max = max(pruned_max, float(bound[active].max()))
            break
        parents = centers[active]
        h *= 0.5
        centers = np.concatenate([parents - h, parents + h])
        P, dP = model.eval(x, centers, derivative=True)
        evals += len(centers)
        gv = np.abs(P)
        dv = np.abs(dP - 2j * np.pi * c0 * P)
        i = int(np.argmax(gv))
        if gv[i] > best:
            best, t_best = float(gv[i]), float(centers[i])
        bound = gv + dv * h + R2 * h * h + slack
    if model.period == 1:
        t_best %= 1.0
    return SupResult(t_best, best, max(0.0, pruned_max - best))


# ---------------------------------------------------------------- fields

@dataclass
class MaximalField:
    N: int
    d: int
    M: int
    kind: str
    cell_centered: bool
    T: int
    value: np.ndarray
    t_star: np.ndarray
    error_radius: np.ndarray
    orbit: np.ndarray | None = None

    @property
    def shape(self):
        return self.value.shape

    def coords(self) -> np.ndarray:
        off = 0.5 if self.cell_centered else 0.0
        return (np.arange(self.M) + off) / self.M

    def point(self, index) -> tuple[float, ...]:
        c = self.coords()
        return tuple(float(c[k]) for k in np.atleast_1d(index))

    def result(self, index) -> SupResult:
        index = tuple(np.atleast_1d(index))
        return SupResult(float(self.t_star[index]), float(self.value[index]),
                         float(self.error_radius[index]))

    @property
    def upper(self) -> np.ndarray:
        return self.value + self.error_radius


def _symmetry_maps(model: SumModel, M: int, cell_centered: bool):
    """Index maps for x -> c - x and x -> x + s per axis, or None if off-grid."""
    maps = []
    k = np.arange(M)
    for ax_r in (model.r or (Fraction(0),) * model.d):
        c = (1 + ax_r) / 2
        s = (1 - ax_r) / 2
        cM, sM, rM = c * M, s * M, ax_r * M
        if any(v.denominator != 1 for v in (cM, sM, rM)):
            return None
        refl = (int(cM) - k - (1 if cell_centered else 0)) % M
        shift = (k + int(sM)) % M
        maps.append((refl, shift, int(rM)))
    return maps


def _take(a: np.ndarray, maps: list[np.ndarray]) -> np.ndarray:
    return a[np.ix_(*maps)]


def maximal_field(N: int, d: int = 1, M: int | None = None, tol_rel: float = 0.25, *,
                  r=None, shape: TorusShape | None = None, cell_centered: bool = True,
                  precision: str = "auto") -> MaximalField:
    """sup_t |w_N(x, t)| on the grid x_k = (k + 1/2)/M (or k/M) in every axis.

    Values are maxima over the t-nodes i/T, i = 0..T; error radii come from the
    sampling bound described in weyllab.field.  For the standard sum and
    rational lines only t in [0, 1/4] is scanned: the reflections
    x -> (1+r)/2 - x and shifts x -> x + (1-r)/2 map the other three quarters
    onto it.
    """
    model = make_model(N, d, r, shape)
    if M is None:
        M = _pow2_at_least(2 * N + 2 if model.kind == "generic" else N + 1)
    if M & (M - 1):
        raise InvalidGridError(f"M={M} is not a power of two")
    if M ** d > FIELD_GUARD:
        raise CapacityError(f"M^d = {M ** d} exceeds the field guard {FIELD_GUARD}")
    need = 2 * N + 1 if model.kind == "generic" else N + 1
    if M < need:
        raise InvalidGridError(f"M={M} too coarse for N={N}")
    if precision not in ("auto", "single", "double"):
        raise DomainError(f"precision must be auto, single or double, got {precision!r}")
    single = precision == "single" or (precision == "auto" and (N >= 128 or (d >= 2 and N >= 32)))
    dtype = np.complex64 if single else np.complex128
    T = max(8, t_resolution(model.spread, tol_rel))
    kap = kappa(model.spread, T)
    block = 64 if d <= 2 else int(max(1, min(64, 2**22 // M ** d)))
    slack = _slack(model, M, single)
    maps = None if model.kind == "generic" else _symmetry_maps(model, M, cell_centered)
    orbit = None

    if maps is not None:
        scan = scan_rows(model, M, T, 0, T // 4, cell_centered, dtype, block)
        G, rows = scan.best, scan.best_row
        refl = [m[0] for m in maps]
        shift = [m[1] for m in maps]
        refl_shift = [m[0][m[1]] for m in maps]  # k -> refl(shift(k))
        # c - x - s has index refl applied to (x + s)
        candidates = [
            (G, rows / T),
            (_take(G, refl), 0.5 - _take(rows, refl) / T),
            (_take(G, shift), 0.5 + _take(rows, shift) / T),
            (_take(G, refl_shift), 1.0 - _take(rows, refl_shift) / T),
        ]
        value = candidates[0][0].copy()
        t_star = candidates[0][1].astype(float)
        for v, t in candidates[1:]:
            upd = v > value
            value[upd] = v[upd]
            t_star[upd] = t[upd]
        if model.kind == "standard":
            t_star = np.mod(t_star, 1.0)
            orbit = value
        else:
            orbit = value.copy()
            v = model.period
            for kk in range(1, v):
                idx = [np.mod(np.arange(M) - kk * m[2], M) for m in maps]
                np.maximum(orbit, _take(value, idx), out=orbit)
        upper = certified_upper(value, orbit, kap)
    else:
        scan = scan_rows(model, M, T, 0, T, cell_centered, dtype, block,
                         ) if model.kind == "generic" else None
        if model.kind == "generic":
            value, t_star = scan.best, scan.best_row / T
            U = None
            for ax, ab in zip(model.axes, scan.axis_best):
                Uj = ab / math.sqrt(1.0 - kappa(ax.hi - ax.lo, T))
                U = Uj if U is None else np.multiply.outer(U, Uj)
            upper = np.sqrt(value**2 + kap * U**2)
            orbit = U
        else:  # rational line whose symmetries are off the grid
            first = scan_rows(model, M, T, 0, T, cell_centered, dtype, block)
            value, t_star = first.best, first.best_row / T
            rest = scan_rows(model, M, T, T + 1, model.period * T, cell_centered, dtype, block)
            orbit = np.maximum(value, rest.best)
            upper = certified_upper(value, orbit, kap)
    value = value.astype(float)
    radius = np.maximum(upper - value, 0.0) + slack
    return MaximalField(N, d, M, model.kind, cell_centered, T, value, t_star, radius, orbit)


# ---------------------------------------------------------------- L^p norms

P_SET_NAMES = ("1", "2", "2(d+1)/d", "4", "inf")


def _check_p(p, d: int) -> float:
    if isinstance(p, str) and p.lower() in ("inf", "infinity"):
        return math.inf
    p = float(p)
    if math.isinf(p):
        return p
    allowed = (1.0, 2.0, 2.0 * (d + 1) / d, 4.0)
    if not any(abs(p - a) < 1e-12 for a in allowed):
        raise DomainError(f"p={p} not in {{1, 2, 2(d+1)/d, 4, inf}}")
    return p


def lp_mean(values: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(values.max())
    v = values.astype(float).ravel()
    scale = float(v.max()) or 1.0
    return scale * float(np.mean((v / scale) ** p)) ** (1.0 / p)


@dataclass
class LpNormResult:
    N: int
    d: int
    p: float
    value: float
    upper: float
    ladder: list[tuple[int, float, float]]
    converged: bool
    kind: str = "standard"

    @property
    def flagged(self) -> bool:
        return not self.converged


def lp_norm_of_maximal(N: int, d: int = 1, p=4, M0: int | None = None, *,
                       rel_tol: float = 0.01, max_doublings: int = 4, tol_rel: float = 0.25,
                       r=None, shape: TorusShape | None = None, precision: str = "auto",
                       on_field=None) -> LpNormResult:
    """||sup_t |w_N(., t)| ||_{L^p(T^d)} by cell-centred quadrature on an M-doubling ladder."""
    p = _check_p(p, d)
    model = make_model(N, d, r, shape)
    if M0 is None:
        need = 2 * N + 1 if model.kind == "generic" else N + 1
        M0 = max(8, _pow2_at_least(need))
    ladder = []
    converged = False
    M = M0
    for level in range(max_doublings + 1):
        if M ** d > FIELD_GUARD:
            break
        f = maximal_field(N, d, M, tol_rel, r=r, shape=shape, precision=precision)
        if on_field is not None:
            on_field(f)
        est = lp_mean(f.value, p)
        up = lp_mean(f.upper, p)
        ladder.append((M, est, up))
        if level and abs(est - ladder[-2][1]) < rel_tol * est:
            converged = True
            break
        M *= 2
    M_last, est, up = ladder[-1]
    return LpNormResult(N, d, p, est, up, ladder, converged, model.kind)


# ---------------------------------------------------------------- level sets

@dataclass
class LevelSetEstimate:
    alpha: float
    measure: float
    cell_count: int
    cell_volume: float
    N: int
    d: int
    eta: float
    h: float
    M: int
    mask: np.ndarray = field(repr=False)

    @property
    def slope_inputs(self) -> tuple[int, float]:
        return (self.N, self.measure)


def level_threshold_alpha(d: int) -> float:
    return d / 2 + d / (2 * (d + 1))


def level_set_measure(N: int, d: int = 1, alpha: float = 0.85, eta: float = 0.05, *,
                      M: int | None = None, cell_centered: bool = True,
                      field_: MaximalField | None = None, tol_rel: float = 0.25) -> LevelSetEstimate:
    """Measure of {x : sup_t |w_N(x,t)| >= N^alpha} on the grid of spacing
    h = N^{-(d+1)+alpha-eta}, rounded down to a power of two."""
    if not level_threshold_alpha(d) < alpha <= d:
        raise DomainError(f"alpha={alpha} outside (d/2 + d/(2(d+1)), d]")
    if not 0 < eta <= 0.2:
        raise DomainError("eta must lie in (0, 0.2]")
    h = N ** (-(d + 1) + alpha - eta)
    if field_ is None:
        if M is None:
            M = max(_pow2_at_least(math.ceil(1.0 / h)), _pow2_at_least(N + 1))
        field_ = maximal_field(N, d, M, tol_rel, cell_centered=cell_centered)
    M = field_.M
    mask = field_.value >= N ** alpha
    count = int(mask.sum())
    vol = float(M) ** -d
    return LevelSetEstimate(alpha, count * vol, count, vol, N, d, eta, h, M, mask)


# ---------------------------------------------------------------- space-time norms

@dataclass
class StrichartzResult:
    N: int
    d: int
    p: float
    norm: float
    exact_count: int | None
    quadrature: float | None
    ladder: list[tuple[int, int, float]]
    flag: str = ""

    @property
    def method(self) -> str:
        return "exact" if self.exact_count is not None else "quadrature"


def spacetime_moment(N: int, d: int, p: float, Mx: int, Mt: int) -> float:
    """Mean of |w_N|^p over the grid (j/Mx, k/Mt)."""
    n = np.arange(1, N + 1)
    block = int(max(1, min(Mt, 2**22 // Mx ** d)))
    total = 0.0
    for s in range(0, Mt, block):
        rows = np.arange(s, min(Mt, s + block))
        ph = np.mod(np.multiply.outer(rows, n * n), Mt) / Mt
        buf = np.zeros((len(rows), Mx), np.complex128)
        np.add.at(buf, (slice(None), n % Mx), np.exp(2j * np.pi * ph))
        A = np.abs(scipy.fft.ifft(buf, axis=1, norm="forward"))
        V = A
        for _ in range(d - 1):
            V = V[..., None] * A.reshape((len(rows),) + (1,) * (V.ndim - 1) + (Mx,))
        total += float((V ** p).sum())
    return total / (Mt * Mx ** d)


def strichartz_norm(N: int, d: int = 1, p: float = 6, method: str = "auto", *,
                    rel_tol: float = 1e-9, max_doublings: int = 6) -> StrichartzResult:
    """||w_N||_{L^p(T^{d+1})}: exact count for even p, grid quadrature otherwise.

    With method="both" both paths are run.  The quadrature ladder starts at the
    smallest power-of-two grids exceeding the frequency support and doubles;
    for even p it is exact (up to rounding) from the first level on.
    """
    if p < 2:
        raise DomainError("p must be >= 2")
    even = float(p).is_integer() and int(p) % 2 == 0
    k = int(p) // 2 if even else None
    exact_ok = even and N ** (d * k) <= VINOGRADOV_GUARD
    count = None
    if method in ("auto", "exact", "both"):
        if exact_ok:
            count = vinogradov_count(N, k, d)
        elif method == "exact":
            raise DomainError("exact path needs an even p within the counting guard")
    quad = None
    ladder = []
    flag = ""
    if method in ("quadrature", "both") or count is None:
        mult = k if even else math.ceil(p / 2)
        Mx = max(4, _pow2_at_least(mult * (N - 1) + 1))
        Mt = max(4, _pow2_at_least(mult * d * (N * N - 1) + 1))
        prev = None
        for _ in range(max_doublings + 1):
            mom = spacetime_moment(N, d, p, Mx, Mt)
            ladder.append((Mx, Mt, mom ** (1.0 / p)))
            if prev is not None and abs(mom - prev) <= rel_tol * mom:
                break
            prev = mom
            Mx *= 2
            Mt *= 2
        else:
            flag = "not_converged"
        quad = ladder[-1][2]
    norm = count ** (1.0 / p) if count is not None else quad
    return StrichartzResult(N, d, float(p), norm, count, quad, ladder, flag)


# ---------------------------------------------------------------- rectangle families

RECT_GUARD = 2**26
RECT_WORK_GUARD = 2**36
RECT_CEILING = 1e3


@dataclass
class RectFamily:
    N: int
    d: int
    alpha: float
    C: float
    tiles_x: int                 # tiles per x-axis
    tiles_t: int
    flagged: int                 # tiles passing the centre+corner test
    rectangles: list[tuple[int, ...]]   # (jx_1, ..., jx_d, jt) of the extracted family
    d_dimensional: bool
    bound_exponent: float
    realized_constant: float

    @property
    def count(self) -> int:
        return len(self.rectangles)


def _x_rows(N: int, d: int, L: int, ts: np.ndarray) -> np.ndarray:
    """|w_N(x, t)| for x on the grid k/L in every axis, one block per t."""
    n = np.arange(1, N + 1)
    buf = np.zeros((len(ts), L), np.complex128)
    ph = np.mod(np.multiply.outer(ts, (n * n).astype(float)), 1.0)
    np.add.at(buf, (slice(None), n % L), np.exp(2j * np.pi * ph))
    A = np.abs(scipy.fft.ifft(buf, axis=1, norm="forward"))
    V = A
    for _ in range(d - 1):
        V = V[..., None] * A.reshape((len(ts),) + (1,) * (V.ndim - 1) + (L,))
    return V


def _tile_max(V: np.ndarray, d: int) -> np.ndarray:
    """Per-tile max over the 2^d x-corners; V has shape (rows, 2nx, ..., 2nx)."""
    E = V[(slice(None),) + (slice(None, None, 2),) * d]
    out = E
    for ax in range(1, d + 1):
        out = np.maximum(out, np.roll(out, -1, axis=ax))
    return out


def rect_family_count(N: int, d: int = 1, alpha: float = 0.9, C: float = 1.0,
                      block: int = 256) -> RectFamily:
    """Tile [0,1]^{d+1} by rectangles of side N^{-(d+1)+alpha} in x and
    N^{-2(d+1)+2alpha} in t, flag those where |w_N| >= C N^alpha at the centre
    or a corner, and keep at most two flagged tiles per x-column, earliest t first.

    Columns are half-open products, so tiles in different columns have disjoint
    x-projections and the at-most-two rule reduces to a per-column cap.  The
    tiling is streamed in blocks of tile rows; only the extracted family is stored.
    """
    if not 0 < alpha <= d:
        raise DomainError("alpha must lie in (0, d]")
    nx = max(1, math.ceil(N ** ((d + 1) - alpha) - 1e-9))
    nt = max(1, math.ceil(N ** (2 * (d + 1) - 2 * alpha) - 1e-9))
    while 2 * nx < N + 1:
        nx *= 2
    L = 2 * nx
    if (2 * nt + 1) * L ** d > RECT_WORK_GUARD:
        raise CapacityError(f"tiling of {nx}^{d} x {nt} tiles exceeds the work guard")
    block = max(1, min(block, 2**21 // L ** d))
    level = C * N ** alpha
    taken = np.zeros((nx,) * d, np.int64)
    family: list[tuple[int, ...]] = []
    flagged = 0
    for j0 in range(0, nt, block):
        j1 = min(nt, j0 + block)
        V = _x_rows(N, d, L, np.arange(2 * j0, 2 * j1 + 1) / (2.0 * nt))
        corners = _tile_max(V[0::2], d) >= level
        centres = V[(slice(1, None, 2),) + (slice(1, None, 2),) * d] >= level
        hit = corners[:-1] | corners[1:] | centres
        flagged += int(hit.sum())
        rank = taken + np.cumsum(hit, axis=0) - 1
        new = hit & (rank < 2)
        if new.any():
            taken += new.sum(axis=0)
            if len(family) + int(new.sum()) > RECT_GUARD:
                raise CapacityError("extracted family exceeds the rectangle guard")
            for idx in np.argwhere(new):
                family.append(tuple(int(v) for v in idx[1:]) + (int(idx[0]) + j0,))
    family.sort(key=lambda r: (r[-1],) + r[:-1])
    expo = (d * d + 2 * d + 2) * (1 - alpha / d)
    const = len(family) / N ** expo
    if const > RECT_CEILING:
        raise ClaimViolationError(f"family count {len(family)} exceeds {RECT_CEILING} N^{expo:.3g}")
    return RectFamily(N, d, alpha, C, nx, nt, flagged, family,
                      is_d_dimensional(family, d), expo, const)


def is_d_dimensional(rectangles, d: int) -> bool:
    """Exhaustive check that every x-column carries at most two rectangles."""
    cols: dict[tuple[int, ...], int] = {}
    for rect in rectangles:
        key = tuple(rect[:d])
        cols[key] = cols.get(key, 0) + 1
        if cols[key] > 2:
            return False
    return True


# ---------------------------------------------------------------- local constancy

@dataclass
class LocalConstancy:
    x0: tuple[float, ...]
    t0: float
    N: int
    alpha: float
    eta: float
    scale: float
    samples: int
    seed: int
    value0: float
    max_variation: float
    K: float


def locally_constant_check(x0, t0: float, N: int, d: int = 1, alpha: float = 0.85,
                           eta: float = 0.05, samples: int = 256, *, seed: int = 0,
                           scale: float = 1.0, c: float = 0.25, C: float = 4.0) -> LocalConstancy:
    """max |w_N(x,t) - w_N(x0,t0)| over scrambled-Sobol points of the rectangle
    (N^{-(d+1)+alpha-eta})^d x N^{-2(d+1)+2alpha-eta} centred at (x0, t0)."""
    from scipy.stats import qmc
    from .core import weyl_dd_many

    x0 = np.atleast_1d(np.asarray(x0, float))
    if len(x0) != d:
        raise DomainError(f"x0 has {len(x0)} coordinates, expected {d}")
    w0 = complex(weyl_dd_many(x0[None, :], np.array([t0]), N)[0])
    if not c * N ** alpha <= abs(w0) < C * N ** alpha:
        raise DomainError(f"|w_N(x0,t0)| = {abs(w0):.6g} is not at level N^{alpha}")
    hx = scale * N ** (-(d + 1) + alpha - eta)
    ht = scale * N ** (-2 * (d + 1) + 2 * alpha - eta)
    pts = qmc.Sobol(d + 1, scramble=True, seed=seed).random(samples) - 0.5
    xs = np.mod(x0[None, :] + hx * pts[:, :d], 1.0)
    ts = np.mod(t0 + ht * pts[:, d], 1.0)
    w = weyl_dd_many(xs, ts, N)
    var = float(np.abs(w - w0).max())
    return LocalConstancy(tuple(float(v) for v in x0), float(t0), N, alpha, eta, scale,
                          samples, seed, abs(w0), var, var / N ** (alpha - eta))
