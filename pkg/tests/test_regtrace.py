import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radialweyl.radialop import FocalData, FocalEntry, SingularPoint
from radialweyl.regtrace import (
    EigenSequence,
    FocalHit,
    PoleProximity,
    RegularizedValue,
    direct_sum,
    focal_spectrum,
    focal_trace_gap,
    parallel_trace_function,
    parallel_transform,
    rank_one_perturbation_check,
    reg_trace,
    secular_eigenvalues,
)


def harmonic():
    return EigenSequence.from_terms(lambda k: 1 / k, lambda k: -1 / k)


def test_harmonic_is_zero():
    s = harmonic()
    for n in (1, 2, 7, 1000, 10**5):
        r = reg_trace(s, n)
        assert r.value == 0.0


def test_finite_spectrum():
    s = EigenSequence.finite([3, -1, -1])
    assert reg_trace(s, 1).value == 2
    for n in (2, 3, 10):
        r = reg_trace(s, n)
        assert r.value == 1 and r.tail_bound == 0


def test_telescoping():
    s = EigenSequence.from_terms(lambda k: 1 / k, lambda k: -1 / (k + 1))
    r = reg_trace(s, 10**5)
    assert abs(r.value - 1.0) <= r.tail_bound
    assert r.tail_bound < 1e-3


def test_truncation_must_be_positive():
    with pytest.raises(ValueError):
        reg_trace(harmonic(), 0)
    with pytest.raises(ValueError):
        RegularizedValue(0.0, 1, -1.0)


def test_direct_sum_with_empty():
    a = EigenSequence.from_terms(lambda k: 2 / k, lambda k: -1 / k**2)
    b = direct_sum(a, EigenSequence.empty())
    assert np.array_equal(a.positive(50), b.positive(50))
    assert np.array_equal(a.negative(50), b.negative(50))


def test_merge_order():
    a = EigenSequence.from_terms(lambda k: 1 / k)
    b = EigenSequence.from_terms(lambda k: 1 / k**2)
    m = direct_sum(a, b)
    p = m.positive(10**4)
    assert len(p) == 10**4 and np.all(np.diff(p) <= 0)
    assert m.is_ordered(10**4)


@given(st.integers(0, 10_000))
def test_additivity(seed):
    rng = np.random.default_rng(seed)
    a = EigenSequence.from_terms(lambda k, c=rng.uniform(0.5, 2): c / k, lambda k, d=rng.uniform(0.5, 2): -d / (k + 1))
    b = EigenSequence.from_terms(lambda k, c=rng.uniform(0.5, 2): c / k**2, lambda k, d=rng.uniform(0.5, 2): -d / k)
    n = 2000
    ab = reg_trace(direct_sum(a, b), 2 * n)
    ra, rb = reg_trace(a, n), reg_trace(b, n)
    assert abs(ab.value - ra.value - rb.value) <= ab.tail_bound + ra.tail_bound + rb.tail_bound


def test_to_json():
    s = EigenSequence.finite([2, 2, 1, -1])
    assert s.to_json(5) == {"positive": [[2.0, 2], [1.0, 1]], "negative": [[-1.0, 1]]}


# -- rank one -------------------------------------------------------------------


def test_rank_one_zero_vector():
    d = np.array([-1.0, 0.5, 2.0])
    lhs, rhs = rank_one_perturbation_check(d, np.zeros(3), 1)
    assert lhs == rhs


@pytest.mark.parametrize("sign", [1, -1])
def test_rank_one_eigenvector(sign):
    d = np.sort(np.array([1 / k for k in range(1, 20)] + [-1 / k for k in range(1, 20)]))
    v = np.zeros_like(d)
    v[7] = 0.3
    lam = secular_eigenvalues(d, v, sign)
    want = d.copy()
    want[7] += sign * 0.09
    assert np.allclose(lam, np.sort(want), atol=1e-15)
    lhs, rhs = rank_one_perturbation_check(d, v, sign)
    assert abs(lhs - rhs) <= 1e-14


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("sign", [1, -1])
def test_secular_against_dense(seed, sign):
    rng = np.random.default_rng(seed)
    n = 400
    k = np.arange(1, n // 2 + 1)
    d = np.sort(np.concatenate([1 / k, -1 / k]))
    v = rng.normal(size=n) / math.sqrt(n)
    ref = np.linalg.eigvalsh(np.diag(d) + sign * np.outer(v, v))
    assert np.max(np.abs(secular_eigenvalues(d, v, sign) - ref)) <= 1e-12


def test_secular_repeated_poles():
    d = np.array([0.0, 0.0, 1.0, 1.0, 1.0, 3.0])
    v = np.array([0.5, 0.2, 0.1, 0.0, 0.7, 0.3])
    ref = np.linalg.eigvalsh(np.diag(d) + np.outer(v, v))
    assert np.allclose(secular_eigenvalues(d, v, 1), ref, atol=1e-13)


def test_secular_input_checks():
    with pytest.raises(ValueError):
        secular_eigenvalues([1.0, 2.0], [1.0], 1)
    with pytest.raises(ValueError):
        secular_eigenvalues([1.0], [1.0], 2)


# -- focal spectra ------------------------------------------------------------------


def test_focal_spectrum_empty():
    e = FocalEntry((1.0, 0.0), 0.5, 1, 1, (1, 0))
    s = focal_spectrum(e, [0.1, 0.0], [0.0, 1.0])
    assert len(s.positive(10)) == 0 and len(s.negative(10)) == 0


def test_focal_spectrum_cotangent():
    e = FocalEntry((1.0,), 0.5, 1, 0, (1,))
    xi = 0.7
    s = focal_spectrum(e, [0.25], [xi])
    r = reg_trace(s, 10**5)
    want = -math.pi * xi
    assert abs(r.value - want) <= 1e-3 * abs(want)
    assert s.is_ordered(1000)


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_focal_spectrum_values(sign):
    e = FocalEntry((1.0,), 0.5, 2, 1, (1,))
    s = focal_spectrum(e, [0.3], [sign])
    expected = []
    for n in range(-200, 200):
        expected += [sign / (n * 0.5 - 0.3)] * (2 if n % 2 == 0 else 1)
    expected = np.array(expected)
    pos = np.sort(expected[expected > 0])[::-1]
    neg = np.sort(expected[expected < 0])
    assert np.allclose(s.positive(50), pos[:50])
    assert np.allclose(s.negative(50), neg[:50])


def test_focal_singular():
    e = FocalEntry((1.0,), 0.5, 1, 1, (1,))
    with pytest.raises(SingularPoint):
        focal_spectrum(e, [0.5], [1.0])


def test_focal_against_closed_form_group_metric():
    from radialweyl.radialop import group_case_focal
    from conftest import root_system

    fd = group_case_focal(root_system("B2"), 2)
    out = focal_trace_gap(fd, [0.13, 0.31], [0.4, -0.9], 10**5)
    assert out["rel_gap"] <= 1e-3


# -- parallel manifolds -------------------------------------------------------------


def test_parallel_identity_and_single():
    s = harmonic()
    assert parallel_transform(s, 0.0) is s
    t = parallel_transform(EigenSequence.finite([0.5]), 1.0)
    assert list(t.positive(3)) == [1.0] and len(t.negative(3)) == 0


def test_parallel_crossing_order():
    t = parallel_transform(harmonic(), 2.5)
    assert t.is_ordered(500)
    assert np.allclose(t.negative(3), [-2.0, -2 / 3, -1 / 3.5])
    m = parallel_transform(harmonic(), -2.5)
    assert m.is_ordered(500)
    assert np.allclose(m.positive(3), [2.0, 2 / 3, 1 / 3.5])


def test_parallel_focal_hit():
    s = EigenSequence.finite([0.5, 0.25, -1.0])
    with pytest.raises(FocalHit):
        parallel_transform(s, 2.0).positive(5)
    with pytest.raises(FocalHit):
        parallel_transform(s, -1.0).negative(5)


def test_parallel_leading_value_diverges():
    s = EigenSequence.from_terms(lambda k: 1 / k, lambda k: -1 / k)
    ts = 1 - np.logspace(-1, -8, 20)
    lead = [parallel_transform(s, t).positive(1)[0] for t in ts]
    assert all(b > a for a, b in zip(lead, lead[1:]))
    assert lead[-1] > 1e7


def test_trace_function_examples():
    s = harmonic()
    assert parallel_trace_function(s, 0.0, 100).value == reg_trace(s, 100).value
    assert parallel_trace_function(EigenSequence.finite([0.5]), 1.0, 3).value == 1.0
    with pytest.raises(PoleProximity):
        parallel_trace_function(s, 1.0, 10)
    with pytest.raises(PoleProximity):
        parallel_trace_function(s, -2.0 + 1e-11, 10)


def test_trace_function_partial_fractions():
    # sum_k 1/(k - z) - 1/(k + z) = 1/z - pi cot(pi z)
    s = harmonic()
    for z in (0.5, 0.3, -0.7, 1.5):
        r = parallel_trace_function(s, z, 10**5)
        want = 1 / z - math.pi / math.tan(math.pi * z)
        assert abs(r.value - want) <= 1e-3 * abs(want)
        assert abs(r.value - want) <= r.tail_bound
