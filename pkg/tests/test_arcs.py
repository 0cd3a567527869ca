import math

import numpy as np
import pytest
from scipy.special import fresnel

from weyllab.arcs import (dirichlet_pair, fresnel_integral, gauss_sum, schmidt_min_sum,
                          vaughan_decompose, weyl_upper_bound_L21)
from weyllab.core import weyl_1d
from weyllab.errors import DomainError


def fresnel_closed_form(b1, b2, N):
    """int_0^N e(b1 s + b2 s^2) ds by completing the square (b2 > 0)."""
    a = 2 * math.sqrt(b2)
    shift = b1 / (2 * b2)
    u0, u1 = a * shift, a * (N + shift)
    S0, C0 = fresnel(u0)
    S1, C1 = fresnel(u1)
    core = ((C1 - C0) + 1j * (S1 - S0)) / a
    return core * np.exp(-2j * np.pi * b1 * b1 / (4 * b2))


def test_gauss_examples():
    g = gauss_sum(1, 0)
    assert g.value == pytest.approx(1) and g.magnitude_class == "sqrt_q"
    assert abs(gauss_sum(5, 1).value) == pytest.approx(math.sqrt(5))
    g = gauss_sum(4, 1, 1)
    direct = sum(np.exp(2j * np.pi * (r * r + r) / 4) for r in range(4))
    assert g.value == pytest.approx(direct)
    assert round(abs(g.value) ** 2) in (0, 4, 8)


def test_gauss_quarter_integer_phase():
    g = gauss_sum(3, 1, 1, 4)
    direct = sum(np.exp(2j * np.pi * (r * r + r / 4) / 3) for r in range(3))
    assert g.value == pytest.approx(direct)
    with pytest.raises(DomainError):
        gauss_sum(3, 1, 1, 3)


def test_gauss_multiplicative():
    for q1, q2 in [(3, 5), (7, 9), (5, 11)]:
        lhs = abs(gauss_sum(q1 * q2, 1).value)
        assert lhs == pytest.approx(abs(gauss_sum(q1, 1).value) * abs(gauss_sum(q2, 1).value), abs=1e-6)


def test_fresnel_trivial_cases():
    assert fresnel_integral(0, 0, 37.5).value == 37.5
    b, N = 0.013, 50
    expect = (np.exp(2j * np.pi * b * N) - 1) / (2j * np.pi * b)
    assert fresnel_integral(b, 0, N).value == pytest.approx(expect, abs=1e-13)


def test_fresnel_against_closed_form():
    for b1, b2, N in [(0.0, 0.001, 100), (0.01, 0.002, 80), (-0.3, 0.0005, 200), (0.2, 0.9, 3)]:
        v = fresnel_integral(b1, b2, N)
        assert abs(v.value - fresnel_closed_form(b1, b2, N)) < 1e-9 * max(1, N)
        assert v.quad_error <= 1e-9 * max(1, N)
        assert abs(v.value) <= N


def test_fresnel_against_trapezoid():
    b2, N = 0.001, 100
    s = np.linspace(0, N, 10**6 + 1)
    f = np.exp(2j * np.pi * b2 * s * s)
    trap = (f.sum() - 0.5 * (f[0] + f[-1])) * (N / 10**6)
    assert abs(fresnel_integral(0.0, b2, N).value - trap) < 1e-8


def test_fresnel_decay_constant():
    rng = np.random.default_rng(5)
    worst = 0.0
    for b1, b2 in rng.uniform(-1, 1, (200, 2)) * [[0.5, 0.05]]:
        N = 64
        v = abs(fresnel_integral(b1, b2, N).value)
        worst = max(worst, v / (N * max(1, N * abs(b1), N * N * abs(b2)) ** -0.5))
    assert worst <= 4


def test_fresnel_domain():
    with pytest.raises(DomainError):
        fresnel_integral(1.5, 0, 10)


def test_vaughan_examples():
    v = vaughan_decompose(0.0, 0.0, 32)
    assert v.q == 1 and v.main == pytest.approx(32) and v.residual <= 1e-6
    v = vaughan_decompose(0.5, 0.25, 64)
    assert v.q == 4
    assert v.main == pytest.approx(gauss_sum(4, 1, 2).value / 4 * 64)
    assert v.residual <= v.bound * v.realized_constant + 1e-12
    assert math.isfinite(v.realized_constant)


def test_vaughan_sampled_constant():
    rng = np.random.default_rng(6)
    worst = max(vaughan_decompose(x, t, 256).realized_constant for x, t in rng.random((300, 2)))
    assert 0 < worst < 1e3


def test_upper_bound_L21():
    N, eps = 1024, 1e-4
    assert weyl_upper_bound_L21(0.3, 0.0, N, eps) == pytest.approx(N ** (1 + eps))
    assert weyl_upper_bound_L21(0.3, 0.5, N, eps) == pytest.approx(N ** (1 + eps) / math.sqrt(2))
    r = dirichlet_pair(0.377, N)
    assert abs(0.377 - r.a / r.q) < 1 / (r.q * N)
    with pytest.raises(DomainError):
        weyl_upper_bound_L21(0.1, 0.1, N, 0.01)


def test_upper_bound_L21_sampled_ratio():
    rng = np.random.default_rng(7)
    N = 1024
    ratios = [abs(weyl_1d(x, t, N)) / weyl_upper_bound_L21(x, t, N, 1e-4) for x, t in rng.random((2000, 2))]
    assert max(ratios) <= 2


def test_schmidt_examples():
    s = schmidt_min_sum(0.0, 0.5, 10, 2)
    assert s.direct == pytest.approx(40) and s.bound_finite and s.q == 1
    s = schmidt_min_sum(0.5, 0.0, 8, 2)
    assert s.direct == pytest.approx(8 * 8 + 8 * 2)
    g = (math.sqrt(5) - 1) / 2
    s = schmidt_min_sum(g, 0.0, 64, 2)
    assert s.direct > 0 and (not s.bound_finite or s.ratio < 10)
    with pytest.raises(DomainError):
        schmidt_min_sum(0.1, 0.1, 10, 3)
