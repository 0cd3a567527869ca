"""Explicit lower-bound constructions: major arcs, the split-dimension
counterexample, completion sums, G_tau sample points and box counting."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .core import weyl_1d, weyl_1d_many
from .diophantine import dist_to_int
from .errors import ClaimViolationError, DomainError

# floor from the main-term minus partial-summation split; sampled arcs sit near sqrt(2)
PROP41_C = 0.24
ARC_RADIUS = 100


def _torus_dist(a: float, b: float) -> float:
    return float(dist_to_int(a - b))


# ---------------------------------------------------------------- major arcs

@dataclass(frozen=True)
class Prop41Result:
    value: float
    ratio: float


def prop41_lower(q: int, a: int, b: int, N: int, x: float, t: float,
                 c: float = PROP41_C) -> Prop41Result:
    """|w_N(x, t)| against N / sqrt(q) on the major arc around (b/q, a/q)."""
    if q % 4:
        raise DomainError("q must be divisible by 4")
    if q > math.sqrt(N):
        raise DomainError(f"q={q} exceeds N^(1/2)")
    if b % 2 or not 1 <= b < q or not 1 <= a < q or math.gcd(a, q) != 1:
        raise DomainError("need b even, 1 <= a, b < q and gcd(a, q) = 1")
    if _torus_dist(x, b / q) > 1 / (ARC_RADIUS * N) + 1e-15:
        raise DomainError("x is outside the arc")
    if _torus_dist(t, a / q) > 1 / (ARC_RADIUS * N * N) + 1e-15:
        raise DomainError("t is outside the arc")
    value = abs(weyl_1d(x, t, N))
    ratio = value / (N / math.sqrt(q))
    if ratio < c:
        raise ClaimViolationError(f"ratio {ratio:.4g} below c={c}")
    return Prop41Result(value, ratio)


@dataclass(frozen=True)
class MajorArc:
    q: int
    a: int                    # time numerator achieving the recorded sup
    b: tuple[int, ...]
    value: float              # max over a coprime to q of |w_N(b/q, a/q)|

    @property
    def center(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(bj, self.q) for bj in self.b)


@dataclass
class ArcFamily:
    N: int
    d: int
    c1: float
    arcs: list[MajorArc]
    measure: float            # union of the x-boxes of radius 1/(100N)
    e3_measure: float         # sum of the wider boxes of radius 1/(q N^{1/(d+1)}), clipped at 1
    min_ratio: float          # min value / N^{d/2 + d/(2(d+1))}

    @property
    def exponent(self) -> float:
        return self.d / 2 + self.d / (2 * (self.d + 1))


def _arc_moduli(N: int, d: int, c1: float) -> list[int]:
    Q = N ** (d / (d + 1))
    lo = max(4, math.ceil(c1 * Q - 1e-9))
    return [q for q in range(lo, math.floor(Q + 1e-9) + 1) if q % 4 == 0]


def _weyl_prod(x: tuple[float, ...], t: float, N: int) -> float:
    v = 1.0
    for xj in x:
        v *= abs(weyl_1d(xj, t, N))
    return v


def major_arc_family(N: int, d: int = 1, c1: float = 0.125) -> ArcFamily:
    """Arcs around x = b/q (b even) with c1 N^{d/(d+1)} <= q <= N^{d/(d+1)}, q = 0 mod 4.

    Centres are deduplicated as reduced fractions (smallest q kept).  Two distinct
    centres differ by at least 1/q^2 >= N^{-2d/(d+1)} in some coordinate, which
    keeps the boxes disjoint at every size used here; this is checked.
    """
    if not 0 < c1 <= 0.25:
        raise DomainError("c1 must lie in (0, 1/4]")
    r = 1.0 / (ARC_RADIUS * N)
    moduli = _arc_moduli(N, d, c1)
    if moduli and 1.0 / moduli[-1] ** 2 < 2 * r:
        raise DomainError("arc boxes may overlap at this N")
    seen: set[tuple[Fraction, ...]] = set()
    arcs: list[MajorArc] = []
    e3 = 0.0
    for q in moduli:
        units = [a for a in range(1, q) if math.gcd(a, q) == 1]
        for b in product(range(2, q, 2), repeat=d):
            key = tuple(Fraction(bj, q) for bj in b)
            if key in seen:
                continue
            seen.add(key)
            x = tuple(bj / q for bj in b)
            vals = [_weyl_prod(x, a / q, N) for a in units]
            k = int(np.argmax(vals))
            arcs.append(MajorArc(q, units[k], b, float(vals[k])))
            e3 += (2.0 / (q * N ** (1 / (d + 1)))) ** d
    scale = N ** (d / 2 + d / (2 * (d + 1)))
    min_ratio = min((a.value for a in arcs), default=0.0) / scale
    measure = len(arcs) * (2 * r) ** d
    return ArcFamily(N, d, c1, arcs, measure, min(1.0, e3), min_ratio)


# ---------------------------------------------------------------- counterexample

@dataclass(frozen=True)
class CounterexampleSpec:
    d: int
    m: int
    kappa: float
    p: float

    def __post_init__(self):
        if not 1 <= self.m <= self.d - 1:
            raise DomainError("need 1 <= m <= d - 1")
        hi = self.m / (2 * (self.m + 1))
        if not 0 < self.kappa < hi:
            raise DomainError(f"kappa={self.kappa} outside (0, {hi:.6g})")
        if self.p < 1:
            raise DomainError("p must be >= 1")

    def D(self, N: int) -> int:
        return math.floor(N ** (1 - self.kappa))

    @property
    def exponent(self) -> float:
        return predicted_exponent(self.d, self.m, self.p, self.kappa)


def predicted_exponent(d: int, m: int, p: float, kappa: float) -> float:
    """m/(2(m+1)) + kappa (d-m)/2 + m/(p(m+1)) - (d-m)/p (no range check)."""
    return m / (2 * (m + 1)) + kappa * (d - m) / 2 + m / (p * (m + 1)) - (d - m) / p


@dataclass
class CounterexampleResult:
    spec: CounterexampleSpec
    N: int
    D: int
    ratio: float
    lp_norm: float
    f_norm: float
    region_measure: float
    boxes: int
    predicted_exponent: float

    @property
    def predicted_scale(self) -> float:
        return self.N ** self.predicted_exponent


def _lattice_sum(x: np.ndarray, t: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    ph = np.mod(np.multiply.outer(x, freqs) + np.multiply.outer(t, freqs * freqs), 1.0)
    return np.exp(2j * np.pi * ph).sum(axis=-1)


def counterexample_ratio(spec: CounterexampleSpec, N: int, c1: float = 0.125,
                         sub: int = 4) -> CounterexampleResult:
    """||u(x, t(x))||_{L^p(region)} / ||f||_2 for the split-dimension data.

    f = prod_{j<=m} sum_{n<=N} e(n x_j) * prod_{j>m} e(x_j) sum_{n<=N/D} e(D n x_j).
    On each arc of the m-dimensional family around b/q and each a coprime to q,
    t = a/q, and the last d-m coordinates range over the cube of radius
    1/(100N) around -2a/q, where the shifted block is coherent.  The integral
    over each box uses a midpoint rule with `sub` points per axis.
    """
    d, m, p = spec.d, spec.m, spec.p
    D = spec.D(N)
    if D < 2:
        raise DomainError("N too small: D < 2")
    K = N // D
    r = 1.0 / (ARC_RADIUS * N)
    head = np.arange(1, N + 1, dtype=np.int64)
    tail = 1 + D * np.arange(1, K + 1, dtype=np.int64)
    offs = (np.arange(sub) + 0.5) / sub * 2 * r - r
    grid = np.array(list(product(offs, repeat=d)))
    cell = (2 * r / sub) ** d
    integral = 0.0
    boxes = 0
    centres_seen: set = set()
    for q in _arc_moduli(N, m, c1):
        for b in product(range(2, q, 2), repeat=m):
            key = tuple(Fraction(bj, q) for bj in b)
            if key in centres_seen:
                continue
            centres_seen.add(key)
            for a in range(1, q):
                if math.gcd(a, q) != 1:
                    continue
                t = a / q
                centre = np.array([bj / q for bj in b] + [(-2 * a / q) % 1.0] * (d - m))
                pts = centre[None, :] + grid
                tt = np.full(len(pts), t)
                u = np.ones(len(pts))
                for j in range(d):
                    freqs = head if j < m else tail
                    u = u * np.abs(_lattice_sum(pts[:, j], tt, freqs))
                integral += float((u ** p).sum()) * cell
                boxes += 1
    lp = integral ** (1.0 / p)
    fnorm = N ** (m / 2) * K ** ((d - m) / 2)
    return CounterexampleResult(spec, N, D, lp / fnorm, lp, fnorm, boxes * (2 * r) ** d,
                                boxes, spec.exponent)


# ---------------------------------------------------------------- completion sums

@dataclass(frozen=True)
class CompletionResult:
    x: float
    t: float
    N: int
    M: int
    S: float
    omega: float
    ratio: float


def completion_sum(x: float, t: float, N: int, M: int) -> CompletionResult:
    """S_M(x, t) = sum_{h<=M} |w_M(x + h/M, t)| / h and the ratio |w_N(x,t)| / S_M."""
    if not 1 <= N <= M:
        raise DomainError("need 1 <= N <= M")
    h = np.arange(1, M + 1)
    xs = np.mod(x + h / M, 1.0)
    w = np.abs(weyl_1d_many(xs, np.full(M, t), M))
    S = float((w / h).sum())
    omega = abs(weyl_1d(x, t, N))
    return CompletionResult(x, t, N, M, S, omega, omega / S)


# ---------------------------------------------------------------- G_tau samples

@dataclass(frozen=True)
class GTauSample:
    tau: float
    q: int
    b: tuple[int, ...]
    x: tuple[float, ...]
    N_q: int
    a: int
    value: float
    ratio: float

    def approx_error(self) -> float:
        """max_j |q x_j - b_j|, which the construction makes zero."""
        return max(abs(self.q * xj - bj) for xj, bj in zip(self.x, self.b))


def gtau_points(alpha: float, d: int, qs) -> list[GTauSample]:
    """Arc-centre probes x_j = 2/q (b_j = 2) at the frequency N_q tied to q."""
    if not d / 2 + d / (2 * (d + 1)) < alpha < d:
        raise DomainError("alpha outside (d/2 + d/(2(d+1)), d)")
    gamma = 2 * (d - alpha) / d
    tau = d / (2 * (d - alpha))
    out = []
    for q in qs:
        q = int(q)
        if q < 3 or q % 2 == 0:
            raise DomainError(f"q={q} must be odd and >= 3")
        Nq = max(1, math.ceil(q ** (1 / gamma) / 100 - 1e-9))
        b = (2,) * d
        x = tuple(bj / q for bj in b)
        best, best_a = -1.0, 1
        for a in range(1, q):
            if math.gcd(a, q) != 1:
                continue
            v = _weyl_prod(x, a / q, Nq)
            if v > best:
                best, best_a = v, a
        out.append(GTauSample(tau, q, b, x, Nq, best_a, best, best / Nq ** alpha))
    return out


# ---------------------------------------------------------------- box counting

@dataclass
class BoxCount:
    alpha: float | None
    deltas: list[float]
    counts: list[int]
    slope: float
    target: float | None = None


def box_count(mask: np.ndarray, alpha: float | None = None, scales: int | None = None) -> BoxCount:
    """Occupied dyadic boxes of a boolean level mask on an M^d grid.

    Box side 2^j/M for j = 0 .. scales-1 (default: every dyadic scale).  The
    slope is the least-squares fit of log(count) against log(1/delta) over the
    scales with nonzero counts.
    """
    mask = np.asarray(mask, bool)
    d = mask.ndim
    M = mask.shape[0]
    if M & (M - 1) or any(s != M for s in mask.shape):
        raise DomainError("mask must be a power-of-two cube")
    levels = int(math.log2(M)) + 1 if scales is None else scales
    if levels < 3 or levels > int(math.log2(M)) + 1:
        raise DomainError("box counting needs at least 3 dyadic scales")
    deltas, counts = [], []
    cur = mask
    for j in range(levels):
        deltas.append(2.0 ** j / M)
        counts.append(int(cur.sum()))
        if j + 1 < levels:
            m = cur.shape[0] // 2
            cur = cur.reshape(sum(((m, 2) for _ in range(d)), ())).any(axis=tuple(range(1, 2 * d, 2)))
    good = [i for i, c in enumerate(counts) if c > 0]
    if len(good) >= 2:
        X = np.log(1.0 / np.array(deltas)[good])
        Y = np.log(np.array(counts, float)[good])
        slope = float(np.polyfit(X, Y, 1)[0])
    else:
        slope = 0.0
    target = None if alpha is None else 2 * (d + 1) * (d - alpha) / d
    return BoxCount(alpha, deltas, counts, slope, target)


@dataclass
class BoxCountSweep:
    results: list[BoxCount]
    counts_monotone: bool      # counts nonincreasing in alpha at every scale
    slopes_monotone: bool      # reported only


def box_count_sweep(values: np.ndarray, N: int, alphas, scales: int | None = None) -> BoxCountSweep:
    """Box counts of {values >= N^alpha} for increasing alpha on one field."""
    alphas = sorted(float(a) for a in alphas)
    res = [box_count(values >= N ** a, a, scales) for a in alphas]
    counts_ok = all(all(c1 >= c2 for c1, c2 in zip(r1.counts, r2.counts))
                    for r1, r2 in zip(res, res[1:]))
    slopes_ok = all(r1.slope >= r2.slope for r1, r2 in zip(res, res[1:]))
    return BoxCountSweep(res, counts_ok, slopes_ok)
