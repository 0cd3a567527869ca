"""Rational approximation, distances to the integers, genericity margins and
large-value certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import TorusPoint, TorusShape, weyl_dd
from .errors import CertificationFailure, ClaimViolationError, DomainError

CERTIFICATE_CEILING = 1e3
CONSTANT_LADDER = (1, 2, 4, 8, 16)


@dataclass(frozen=True, order=True)
class Rational:
    q: int
    a: int

    def __post_init__(self):
        if self.q < 1:
            raise DomainError("denominator must be positive")
        if math.gcd(self.a, self.q) != 1:
            raise DomainError(f"{self.a}/{self.q} is not reduced")
        if not 0 <= self.a <= self.q:
            raise DomainError(f"{self.a}/{self.q} is outside [0,1]")

    @classmethod
    def of(cls, a: int, q: int) -> "Rational":
        g = math.gcd(a, q) or 1
        return cls(q // g, a // g)

    def __float__(self) -> float:
        return self.a / self.q

    def fraction(self) -> Fraction:
        return Fraction(self.a, self.q)

    def __str__(self) -> str:
        return f"{self.a}/{self.q}"


def dist_to_int(y) -> float | np.ndarray:
    """Distance from y to the nearest integer (works elementwise on arrays)."""
    if np.ndim(y):
        y = np.asarray(y, float)
        return np.abs(y - np.round(y))
    return abs(y - round(y))


def _partial_quotients(t: Fraction) -> Iterator[int]:
    num, den = t.numerator, t.denominator
    while den:
        a, r = divmod(num, den)
        yield a
        num, den = den, r


def convergents(t: float, depth: int = 64) -> list[Rational]:
    """Continued-fraction convergents of t (exact expansion of the double)."""
    if depth > 64:
        raise DomainError("depth must be at most 64")
    out: list[Rational] = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in _partial_quotients(Fraction(t)):
        if len(out) >= depth:
            break
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Rational(q1, p1))
    return out


def _candidates(t: Fraction, qmax: int) -> list[int]:
    """Convergent and intermediate-fraction denominators up to qmax, ascending."""
    qs = {1}
    q_prev, q_cur = 1, 0
    for a in _partial_quotients(t):
        for j in range(1, a + 1):
            q = j * q_cur + q_prev
            if q > qmax:
                break
            qs.add(q)
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_cur > qmax:
            break
    return sorted(qs)


def smallest_denominator(t: float, eps: Fraction | float, qmax: int,
                         strict: bool = False) -> Rational | None:
    """Smallest q <= qmax with ||q t|| <= eps (or < eps), with its nearest numerator.

    The first q at which ||q t|| drops below a threshold is a record minimum of
    ||q t||, hence a continued-fraction denominator, so only convergents and
    intermediate fractions need to be scanned.
    """
    tf = Fraction(t) % 1
    eps = Fraction(eps)
    for q in _candidates(tf, qmax):
        a = round(q * tf)
        err = abs(q * tf - a)
        if err < eps or (not strict and err == eps):
            return Rational.of(a, q)
    return None


def best_approx(t: float, Qmax: int) -> Rational:
    """Reduced a/q with q <= Qmax and |t - a/q| <= 1/(q(Qmax+1)), smallest q first."""
    if Qmax < 1:
        raise DomainError("Qmax must be >= 1")
    r = smallest_denominator(t, Fraction(1, Qmax + 1), Qmax)
    if r is None:  # Dirichlet guarantees a hit; this is unreachable
        raise ArithmeticError("no Dirichlet approximation found")
    return r


# ---------------------------------------------------------------- genericity

def _weight(m: np.ndarray, d: int) -> np.ndarray:
    m = m.astype(float)
    return m ** (d - 1) * np.log(m + 1.0) ** (2 * d)


def _tails(d_rest: int, K: int) -> Iterator[np.ndarray]:
    """Yield blocks of integer vectors (k_2..k_d) with |k|_1 <= K."""
    if d_rest == 1:
        yield np.arange(-K, K + 1)[:, None]
        return
    for head in range(-K, K + 1):
        for block in _tails(d_rest - 1, K - abs(head)):
            yield np.column_stack([np.full(len(block), head), block])


def genericity_margin(shape: TorusShape, Kmax: int, return_argmin: bool = False):
    """min over 0 < |k|_1 <= Kmax of |k_1 + beta.k'| |k|_1^(d-1) log(|k|_1+1)^(2d).

    For each tail k' the two integers around -beta.k' are tried first; a second
    pass then enumerates every k_1 whose distance to -beta.k' could still beat
    the running minimum, which only happens for small |k'|_1.
    """
    d = shape.d
    if d > 3 or Kmax > 10**4:
        raise DomainError("exhaustive enumeration is limited to d <= 3, Kmax <= 1e4")
    beta = np.asarray(shape.betas)
    best = math.inf
    arg = None

    def consider(k1, tail, s):
        nonlocal best, arg
        m = np.abs(k1) + np.abs(tail).sum(axis=1)
        ok = (m > 0) & (m <= Kmax)
        if not ok.any():
            return
        val = np.abs(k1 + s) * _weight(m, d)
        val = np.where(ok, val, np.inf)
        i = int(np.lexsort((m, val))[0])
        if val[i] < best or (val[i] == best and arg is not None and m[i] < sum(map(abs, arg))):
            best = float(val[i])
            arg = (int(k1[i]),) + tuple(int(v) for v in tail[i])

    for tail in _tails(d - 1, Kmax):
        s = tail @ beta
        consider(np.floor(-s).astype(np.int64), tail, s)
        consider(np.ceil(-s).astype(np.int64), tail, s)
    for tail in _tails(d - 1, Kmax):
        s = tail @ beta
        mt = np.abs(tail).sum(axis=1)
        reach = best / np.maximum(_weight(np.maximum(mt, 1), d), 1e-300)
        for i in np.nonzero(reach > 1.0)[0]:
            lo = math.floor(-s[i] - reach[i])
            hi = math.ceil(-s[i] + reach[i])
            k1 = np.arange(max(lo, -Kmax), min(hi, Kmax) + 1)
            consider(k1, np.repeat(tail[i:i + 1], len(k1), axis=0), np.full(len(k1), s[i]))
    if return_argmin:
        return best, arg
    return best


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class LargeValueCertificate:
    x: tuple[float, ...]
    t: float
    N: int
    q: int
    a: int
    alpha: float
    c_t: float
    c_q: float
    c_x: float
    per_coord_dist: tuple[float, ...]
    value: float
    ladder_constant: int

    @property
    def product(self) -> float:
        return self.c_t * self.c_q * self.c_x

    def recompute(self) -> tuple[float, float, float]:
        c_t, c_q, c_x, _ = certificate_constants(self.x, self.t, self.N, self.q, self.a, self.alpha)
        return c_t, c_q, c_x


def certificate_constants(x, t, N, q, a, alpha):
    d = len(x)
    dists = tuple(float(dist_to_int(q * xi)) for xi in x)
    c_t = abs(t - a / q) * q * N ** (2 * alpha / d)
    c_q = q * N ** (-(2 - 2 * alpha / d))
    c_x = float(np.prod(dists)) * N ** (2 * alpha - d)
    return c_t, c_q, c_x, dists


def certify_large_value(p: TorusPoint, N: int, alpha: float) -> LargeValueCertificate:
    """Find q, a with |t - a/q|, q and prod ||q x_i|| all controlled at level N^alpha."""
    d = p.d
    if alpha < d / 2:
        raise DomainError(f"alpha={alpha} below d/2={d / 2}")
    value = abs(weyl_dd(p, N))
    if value < N ** alpha:
        raise ClaimViolationError(f"|w_N| = {value:.6g} < N^alpha = {N ** alpha:.6g}")
    best = None
    seen = set()
    for C in CONSTANT_LADDER:
        Qmax = math.ceil(C * N ** (2 - 2 * alpha / d))
        r = best_approx(p.t, Qmax)
        if (r.q, r.a) in seen:
            continue
        seen.add((r.q, r.a))
        c_t, c_q, c_x, dists = certificate_constants(p.x, p.t, N, r.q, r.a, alpha)
        if max(c_t, c_q, c_x) > CERTIFICATE_CEILING:
            continue
        cert = LargeValueCertificate(p.x, p.t, N, r.q, r.a, alpha, c_t, c_q, c_x,
                                     dists, value, C)
        if best is None or (cert.product, cert.q) < (best.product, best.q):
            best = cert
    if best is None:
        raise CertificationFailure(f"no certificate at x={p.x}, t={p.t}, N={N}, alpha={alpha}")
    return best
