"""Complete Gauss sums, oscillatory integrals and the classical major-arc
approximation of a one-dimensional Weyl sum."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import weyl_1d
from .diophantine import Rational, best_approx, dist_to_int, smallest_denominator
from .errors import CapacityError, DomainError

_CLASSES = (("zero", 0), ("sqrt_q", 1), ("sqrt_2q", 2))
_GL_LO = np.polynomial.legendre.leggauss(8)
_GL_HI = np.polynomial.legendre.leggauss(16)
PANEL_GUARD = 2**22


@dataclass(frozen=True)
class GaussSumValue:
    q: int
    a: int
    b_num: int
    b_den: int
    value: complex
    magnitude_class: str


def gauss_sum(q: int, a: int, b_num: int = 0, b_den: int = 1) -> GaussSumValue:
    """sum_{r=0}^{q-1} e((a r^2 + (b_num/b_den) r)/q) with integer phase reduction."""
    if q < 1:
        raise DomainError("q must be >= 1")
    if b_den not in (1, 2, 4):
        raise DomainError("b_den must be 1, 2 or 4")
    mod = q * b_den
    r = np.arange(q, dtype=np.int64)
    num = ((r * r) % mod * (a * b_den % mod) + (b_num % mod) * r) % mod
    value = complex(np.exp(2j * np.pi * num / mod).sum())
    mag2 = abs(value) ** 2
    cls = "other"
    for name, mult in _CLASSES:
        if abs(mag2 - mult * q) <= 1e-6:
            cls = name
            break
    return GaussSumValue(q, a, b_num, b_den, value, cls)


@dataclass(frozen=True)
class FresnelValue:
    beta1: float
    beta2: float
    N: float
    value: complex
    quad_error: float
    panels: int


def fresnel_integral(beta1: float, beta2: float, N: float) -> FresnelValue:
    """int_0^N e(beta1 s + beta2 s^2) ds.

    Panels are narrow enough that each sees under a tenth of an oscillation;
    every panel is integrated with 8- and 16-point Gauss-Legendre rules and the
    summed difference is reported as the error bound.
    """
    if abs(beta1) > 1 or abs(beta2) > 1:
        raise DomainError("fresnel_integral expects |beta1|, |beta2| <= 1")
    if beta1 == 0 and beta2 == 0:
        return FresnelValue(beta1, beta2, N, complex(N), 0.0, 0)
    if beta2 == 0:
        # e(b N/2) sin(pi b N)/(pi b) is the antiderivative difference without cancellation
        val = np.exp(1j * np.pi * beta1 * N) * math.sin(math.pi * beta1 * N) / (math.pi * beta1)
        return FresnelValue(beta1, beta2, N, complex(val), 4e-16 * max(1.0, N), 0)
    fmax = abs(beta1) + 2 * abs(beta2) * N
    panels = max(1, math.ceil(N * 10 * fmax))
    if panels > PANEL_GUARD:
        raise CapacityError(f"{panels} quadrature panels exceed the guard")
    edges = np.linspace(0.0, N, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = edges[:-1] + half
    total_lo = 0j
    total_hi = 0j
    err = 0.0
    for start in range(0, panels, 65536):
        sl = slice(start, start + 65536)
        lo = _panel_sums(mid[sl], half[sl], beta1, beta2, *_GL_LO)
        hi = _panel_sums(mid[sl], half[sl], beta1, beta2, *_GL_HI)
        total_lo += lo.sum()
        total_hi += hi.sum()
        err += float(np.abs(hi - lo).sum())
    err += 1e-15 * N
    return FresnelValue(beta1, beta2, N, complex(total_hi), err, panels)


def _panel_sums(mid, half, b1, b2, nodes, weights):
    s = mid[:, None] + half[:, None] * nodes[None, :]
    ph = np.mod(b1 * s + b2 * s * s, 1.0)
    return (np.exp(2j * np.pi * ph) * weights[None, :]).sum(axis=1) * half


@dataclass(frozen=True)
class VaughanDecomposition:
    x: float
    t: float
    N: int
    q: int
    a: int
    b: int
    beta1: float
    beta2: float
    gauss: complex
    main: complex
    weyl: complex
    residual: float
    bound: float
    realized_constant: float


def vaughan_decompose(x: float, t: float, N: int) -> VaughanDecomposition:
    """Split w_N(x, t) into q^{-1} S(q) I(beta1, beta2) plus a remainder."""
    r = best_approx(t, N)
    q, a = r.q, r.a
    bq = round(Fraction(x) * q)
    beta1 = float(Fraction(x) - Fraction(bq, q))
    beta2 = float(Fraction(t) - Fraction(a, q))
    b = bq % q
    S = gauss_sum(q, a, b, 1).value
    I = fresnel_integral(beta1, beta2, N).value
    main = S / q * I
    w = weyl_1d(x, t, N)
    residual = abs(w - main)
    bound = math.sqrt(q) + N * math.sqrt(abs(beta2)) * math.sqrt(q)
    return VaughanDecomposition(x, t, N, q, a, b if b else q, beta1, beta2, S, main, w,
                                residual, bound, residual / bound)


def dirichlet_pair(t: float, N: int) -> Rational:
    """a/q with q <= N and |t - a/q| < 1/(qN)."""
    return best_approx(t, N)


def weyl_upper_bound_L21(x: float, t: float, N: int, eps: float) -> float:
    """N^{1+eps} min(q^{-1/2}, N^{-1} |qt - a|^{-1/2}), constant-free."""
    if not 0 < eps < 1e-3:
        raise DomainError("eps must lie in (0, 1/1000)")
    r = dirichlet_pair(t, N)
    gap = abs(Fraction(t) * r.q - r.a)
    core = r.q ** -0.5
    if gap:
        core = min(core, 1.0 / (N * math.sqrt(float(gap))))
    return N ** (1 + eps) * core


@dataclass(frozen=True)
class SchmidtSum:
    direct: float
    bound: float
    q: int | None
    ratio: float

    @property
    def bound_finite(self) -> bool:
        return math.isfinite(self.bound)


def schmidt_min_sum(alpha: float, beta: float, N: int, c: int = 2) -> SchmidtSum:
    """sum_{n<=cN} min(N, ||alpha n + beta||^{-1}) next to (log N) min(N^2/q, N/||beta q||, 1/||alpha q||)."""
    if c not in (2, 4, 8):
        raise DomainError("c must be 2, 4 or 8")
    n = np.arange(1, c * N + 1)
    dist = dist_to_int(alpha * n + beta)
    with np.errstate(divide="ignore"):
        direct = float(np.minimum(N, 1.0 / dist).sum())
    r = smallest_denominator(alpha, Fraction(1, (1 + c) * N), N, strict=True)
    if r is None:
        return SchmidtSum(direct, math.inf, None, 0.0)
    q = r.q
    terms = [N * N / q]
    for v, scale in ((dist_to_int(beta * q), N), (dist_to_int(alpha * q), 1.0)):
        if v > 0:
            terms.append(scale / v)
    bound = math.log(N) * min(terms)
    return SchmidtSum(direct, bound, q, direct / bound)
