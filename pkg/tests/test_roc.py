import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rocbounds.extremal_dists import make_lemma2_atom, make_thm4_extremal, make_uniform_b, sample
from rocbounds.roc import (
    EmpiricalSample,
    Label,
    RocCurve,
    auc_mann_whitney,
    auc_power_integral,
    midranks,
    roc_curve,
    threshold_of_alpha,
)
from rocbounds.verify import prob_leq_shift


def S(values, label=Label.CLASS0):
    return EmpiricalSample.of(values, label)


def pair_count_auc(v0, v1) -> float:
    total = 0.0
    for a, b in itertools.product(v0, v1):
        total += 1.0 if a < b else 0.5 if a == b else 0.0
    return total / (len(v0) * len(v1))


def brute_threshold(v0, alpha):
    """sup{x : #{v > x}/n >= alpha}: scan a fine grid plus every sample value and its neighbours."""
    v0 = np.asarray(v0, float)
    cands = np.concatenate([np.linspace(v0.min() - 1, v0.max() + 1, 20001), v0, np.nextafter(v0, -np.inf)])
    upper = np.mean(v0[None, :] > cands[:, None], axis=1)
    return float(cands[upper >= alpha].max())


# thresholds -----------------------------------------------------------------------


def test_threshold_hand_case():
    # #{v > x} >= 2 holds for every x < 3, so the supremum is 3
    s0 = S([1, 2, 3, 4])
    assert threshold_of_alpha(s0, 0.5) == 3.0
    assert brute_threshold([1, 2, 3, 4], 0.5) == pytest.approx(3.0, abs=1e-12)


def test_threshold_limits():
    s0 = S([5.0, -1.0, 2.0, 7.5])
    assert threshold_of_alpha(s0, 1e-9) == 7.5
    assert threshold_of_alpha(s0, 1 - 1e-9) == -1.0
    with pytest.raises(ValueError):
        threshold_of_alpha(s0, 0.0)
    with pytest.raises(ValueError):
        threshold_of_alpha(s0, 1.0)


@given(
    st.lists(st.integers(-20, 20), min_size=1, max_size=12),
    st.floats(0.01, 0.99),
)
def test_threshold_matches_brute_force(vals, alpha):
    got = threshold_of_alpha(S(vals), alpha)
    assert got == pytest.approx(brute_threshold(vals, alpha), abs=1e-9)


# AUC ------------------------------------------------------------------------------


def test_auc_examples():
    assert roc_curve(S([1, 2]), S([3, 4])).auc_trapezoid == 1.0
    assert roc_curve(S([1, 3]), S([2, 4])).auc_trapezoid == 0.75
    assert auc_mann_whitney(S([1, 3]), S([2, 4])) == 0.75
    assert pair_count_auc([1, 3], [2, 4]) == 0.75
    assert auc_mann_whitney(S([5]), S([5])) == 0.5
    vals = [0.3, 1.7, -2.2, 4.1]
    assert auc_mann_whitney(S(vals), S(vals)) == 0.5
    assert roc_curve(S(vals), S(vals)).auc_trapezoid == 0.5


def test_roc_curve_shape():
    curve = roc_curve(S([1, 3, 3, 5]), S([2, 3, 6]))
    assert curve.points[0] == (0.0, 0.0)
    assert curve.points[-1] == (1.0, 1.0)
    assert np.all(np.diff(curve.alpha) >= 0) and np.all(np.diff(curve.power) >= 0)
    assert 0.0 <= curve.auc_trapezoid <= 1.0
    assert RocCurve.from_dict(curve.to_dict()).points == curve.points


def test_midranks():
    assert midranks(np.array([3.0, 1.0, 3.0, 2.0])).tolist() == [3.5, 1.0, 3.5, 2.0]


floats = st.floats(-1e3, 1e3, allow_nan=False)


@given(st.lists(floats, min_size=1, max_size=40), st.lists(floats, min_size=1, max_size=40))
def test_bamber_identity_with_ties(v0, v1):
    mw = auc_mann_whitney(S(v0), S(v1))
    assert mw == pytest.approx(pair_count_auc(v0, v1), abs=1e-12)
    assert roc_curve(S(v0), S(v1)).auc_trapezoid == pytest.approx(mw, abs=1e-12)
    assert auc_mann_whitney(S(v1), S(v0)) + mw == pytest.approx(1.0, abs=1e-12)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=30, unique=True), st.data())
def test_power_integral_equals_mann_whitney_without_ties(pool, data):
    # split a tie-free pool into two nonempty classes
    if len(pool) < 2:
        return
    k = data.draw(st.integers(1, len(pool) - 1))
    v0, v1 = pool[:k], pool[k:]
    assert auc_power_integral(S(v0), S(v1)) == pytest.approx(auc_mann_whitney(S(v0), S(v1)), abs=1e-12)


ints = st.lists(st.integers(-1000, 1000), min_size=1, max_size=30)


@given(ints, ints)
def test_monotone_transform_invariance(v0, v1):
    before = auc_mann_whitney(S(v0), S(v1))
    # strictly increasing and exact in floating point on this integer range
    f = lambda v: np.asarray(v, float) ** 3 + 7.0 * np.asarray(v, float) - 11.0
    assert auc_mann_whitney(S(f(v0)), S(f(v1))) == before


def test_sample_validation():
    with pytest.raises(ValueError):
        S([])
    with pytest.raises(ValueError):
        S([1.0, math.nan])


@pytest.mark.parametrize(
    "dx,dy,mu",
    [
        (make_uniform_b(1.0), make_uniform_b(1.0), 0.5),
        (make_lemma2_atom(2.0), make_lemma2_atom(2.0), 1.0),
        (make_thm4_extremal(3.0), make_lemma2_atom(1.5), -0.3),
    ],
)
def test_auc_converges_to_exact_probability(dx, dy, mu):
    n = 1_000_000
    x = sample(dx, n, 101)
    y = sample(dy, n, 202) + mu
    auc = auc_mann_whitney(S(x), S(y, Label.CLASS1))
    exact = prob_leq_shift(dx, dy, mu)
    # conservative U-statistic bound: Var <= p(1-p)/min(n0, n1)
    sigma = math.sqrt(exact * (1 - exact) / n)
    assert abs(auc - exact) <= 3 * sigma
