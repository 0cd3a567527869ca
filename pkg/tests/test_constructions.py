import math
from fractions import Fraction

import numpy as np
import pytest

from weyllab.constructions import (ARC_RADIUS, PROP41_C, CounterexampleSpec, box_count,
                                   box_count_sweep, completion_sum, counterexample_ratio,
                                   gtau_points, major_arc_family, predicted_exponent, prop41_lower)
from weyllab.core import weyl_1d
from weyllab.errors import ClaimViolationError, DomainError
from weyllab.sweep import maximal_field


def test_arc_lower_bound_examples():
    N = 1024
    rng = np.random.default_rng(4)
    ratios = []
    for q in (4, 8, 12, 16, 20, 24, 28, 32):
        for a in [a for a in range(1, q) if math.gcd(a, q) == 1][:3]:
            for b in range(2, q, 2):
                x = b / q + (rng.random() * 2 - 1) / (ARC_RADIUS * N)
                t = a / q + (rng.random() * 2 - 1) / (ARC_RADIUS * N * N)
                ratios.append(prop41_lower(q, a, b, N, x, t).ratio)
    assert min(ratios) >= PROP41_C


def test_arc_lower_bound_preconditions():
    with pytest.raises(DomainError):
        prop41_lower(6, 1, 2, 1024, 1 / 3, 1 / 6)
    with pytest.raises(DomainError):
        prop41_lower(64, 1, 2, 1024, 1 / 32, 1 / 64)
    with pytest.raises(DomainError):
        prop41_lower(8, 1, 3, 1024, 3 / 8, 1 / 8)
    with pytest.raises(DomainError):
        prop41_lower(8, 2, 2, 1024, 1 / 4, 1 / 4)
    with pytest.raises(DomainError):
        prop41_lower(8, 1, 2, 1024, 0.25 + 1e-3, 1 / 8)


def test_arc_lower_bound_claim_violation():
    with pytest.raises(ClaimViolationError):
        prop41_lower(4, 1, 2, 1024, 0.5, 0.25, c=100.0)


def test_major_arc_family_small():
    fam = major_arc_family(256, 1)
    assert len(fam.arcs) >= 1
    centres = [a.center for a in fam.arcs]
    assert len(set(centres)) == len(centres)
    for arc in fam.arcs:
        assert arc.q % 4 == 0 and all(b % 2 == 0 for b in arc.b)
        assert arc.value == pytest.approx(abs(weyl_1d(arc.b[0] / arc.q, arc.a / arc.q, 256)))
    assert fam.min_ratio >= 0.1
    assert fam.measure == pytest.approx(len(fam.arcs) * 2 / (ARC_RADIUS * 256))


def test_major_arc_family_d2():
    fam = major_arc_family(64, 2)
    assert fam.exponent == pytest.approx(4 / 3)
    assert fam.min_ratio > 0
    with pytest.raises(DomainError):
        major_arc_family(64, 1, c1=0.5)


def test_predicted_exponent_values():
    assert predicted_exponent(3, 2, 8 / 3, 1 / 3) == pytest.approx(3 / 8)
    assert predicted_exponent(3, 2, 10 / 3, 1 / 3) == pytest.approx(2 / 5)
    assert predicted_exponent(2, 1, 4, 0.2) == pytest.approx(0.25 + 0.1 + 0.125 - 0.25)


def test_counterexample_spec_ranges():
    CounterexampleSpec(3, 2, 0.3, 3)
    for args in [(3, 2, 1.0, 3), (3, 2, 0.0, 3), (2, 2, 0.2, 4), (3, 2, 0.2, 0.5)]:
        with pytest.raises(DomainError):
            CounterexampleSpec(*args)


def test_counterexample_ratio_small():
    spec = CounterexampleSpec(2, 1, 0.2, 4)
    r = counterexample_ratio(spec, 64)
    assert r.D == math.floor(64 ** 0.8) and r.boxes > 0
    assert r.f_norm == pytest.approx(64 ** 0.5 * (64 // r.D) ** 0.5)
    assert 0 < r.ratio < r.predicted_scale
    assert r.predicted_exponent == pytest.approx(spec.exponent)


def test_completion_examples():
    r = completion_sum(0.0, 0.0, 8, 8)
    assert r.S == pytest.approx(1.0, abs=1e-9)
    rng = np.random.default_rng(5)
    for _ in range(50):
        M = int(rng.integers(2, 200))
        N = int(rng.integers(1, M + 1))
        r = completion_sum(rng.random(), rng.random(), N, M)
        assert r.omega <= 4 * math.log(M + 2) * r.S + 1e-9
    with pytest.raises(DomainError):
        completion_sum(0.1, 0.2, 9, 8)


def test_gtau_points():
    pts = gtau_points(0.8, 1, [101, 201, 401, 801])
    for s in pts:
        assert s.approx_error() == 0
        assert s.N_q == max(1, math.ceil(s.q ** (1 / 0.4) / 100 - 1e-9))
        assert s.tau == pytest.approx(1 / 0.4)
        assert s.ratio >= 0.25
    with pytest.raises(DomainError):
        gtau_points(0.5, 1, [101])
    with pytest.raises(DomainError):
        gtau_points(0.8, 1, [100])


def test_box_count_basic():
    M = 64
    full = np.ones((M, M), bool)
    bc = box_count(full)
    assert bc.counts[0] == M * M and bc.slope == pytest.approx(2.0)
    pt = np.zeros(M, bool)
    pt[5] = True
    assert box_count(pt).counts == [1] * 7
    with pytest.raises(DomainError):
        box_count(np.ones(2, bool))
    with pytest.raises(DomainError):
        box_count(np.ones(48, bool))


def test_box_count_target():
    bc = box_count(np.ones(16, bool), alpha=0.8)
    assert bc.target == pytest.approx(4 * 0.2)


def test_box_count_sweep_monotone():
    f = maximal_field(128, 1, 512)
    sw = box_count_sweep(f.value, 128, [0.8, 0.85, 0.9, 0.95])
    assert sw.counts_monotone
    assert [r.alpha for r in sw.results] == [0.8, 0.85, 0.9, 0.95]


def test_counterexample_half_predicted_scale():
    r = counterexample_ratio(CounterexampleSpec(2, 1, 0.2, 4), 64)
    assert r.ratio >= 0.5 * r.predicted_scale
