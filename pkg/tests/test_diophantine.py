import math
from fractions import Fraction

import numpy as np
import pytest

from weyllab.core import TorusPoint, TorusShape, weyl_1d
from weyllab.diophantine import (Rational, best_approx, certify_large_value, convergents,
                                 dist_to_int, genericity_margin, smallest_denominator)
from weyllab.errors import ClaimViolationError, DomainError

from oracles import best_approx_brute


def test_rational_invariants():
    with pytest.raises(DomainError):
        Rational(4, 2)
    with pytest.raises(DomainError):
        Rational(3, 4)
    assert Rational.of(6, 8) == Rational(4, 3)
    assert str(Rational(7, 1)) == "1/7"


@pytest.mark.parametrize("y,expect", [(0.5, 0.5), (3.9, 0.1), (-0.25, 0.25), (2.0, 0.0)])
def test_dist_to_int(y, expect):
    assert dist_to_int(y) == pytest.approx(expect)


def test_dist_to_int_array():
    assert np.allclose(dist_to_int(np.array([0.5, 3.9, -0.25])), [0.5, 0.1, 0.25])


def test_best_approx_examples(frozen):
    for row in frozen["best_approx"]:
        r = best_approx(row["t"], row["Q"])
        assert (r.a, r.q) == (row["a"], row["q"])
    assert best_approx(0.0, 5) == Rational(1, 0)
    assert best_approx(math.pi - 3, 100) == Rational(7, 1)
    # q=3 gives |0.3 - 1/3| = 1/30 > 1/33; the first admissible q is 10
    assert best_approx(0.3, 10) == Rational(10, 3)


def test_best_approx_dirichlet_and_minimal():
    rng = np.random.default_rng(3)
    for Q in (10, 100, 1000):
        for t in rng.random(2000):
            r = best_approx(float(t), Q)
            assert r.q <= Q
            assert abs(Fraction(float(t)) - r.fraction()) <= Fraction(1, r.q * (Q + 1))
        for t in rng.random(100):
            a, q = best_approx_brute(float(t), Q)
            assert best_approx(float(t), Q) == Rational(q, a)


def test_convergents():
    assert Rational(7, 2) in convergents(2 / 7)
    assert convergents(0.25)[-1] == Rational(4, 1)
    g = convergents((math.sqrt(5) - 1) / 2, 5)
    assert [(r.a, r.q) for r in g] == [(0, 1), (1, 1), (1, 2), (2, 3), (3, 5)]
    t = math.pi - 3
    cs = convergents(t, 6)
    for c0, c1 in zip(cs, cs[1:]):
        assert (c0.a / c0.q - t) * (c1.a / c1.q - t) <= 0
    with pytest.raises(DomainError):
        convergents(0.1, 65)


def test_smallest_denominator_strict():
    assert smallest_denominator(0.5, Fraction(0), 4) == Rational(2, 1)
    assert smallest_denominator(0.5, Fraction(0), 4, strict=True) is None


def test_genericity_margin(frozen):
    assert genericity_margin(TorusShape((1.0,)), 10) == 0.0
    val, arg = genericity_margin(TorusShape((1.5,)), 10, return_argmin=True)
    assert val == 0.0 and sorted(map(abs, arg)) == [2, 3]
    m = genericity_margin(TorusShape((math.sqrt(2),)), 100)
    assert m > 0
    assert m == pytest.approx(frozen["margin_sqrt2_100"], rel=1e-12)


def test_certificate_origin():
    c = certify_large_value(TorusPoint((0.0,), 0.0), 64, 1.0)
    assert (c.q, c.a) == (1, 0)
    assert max(c.c_t, c.c_q, c.c_x) <= 1


def test_certificate_quarter_point():
    p = TorusPoint((0.5,), 0.25)
    N = 64
    alpha = math.log(abs(weyl_1d(0.5, 0.25, N))) / math.log(N) - 1e-12
    c = certify_large_value(p, N, alpha)
    assert c.q == 4
    assert c.recompute() == (c.c_t, c.c_q, c.c_x)


def test_certificate_claim_gate():
    with pytest.raises(ClaimViolationError):
        certify_large_value(TorusPoint((0.123,), 0.456), 64, 1.0)
    with pytest.raises(DomainError):
        certify_large_value(TorusPoint((0.0,), 0.0), 64, 0.4)
