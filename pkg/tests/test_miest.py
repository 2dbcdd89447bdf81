"""Markov-mixture coder: code lengths, entropy H^P, pointwise MI."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infolaws import (
    MarkovMixtureModel,
    code_length,
    empirical_markov_entropy,
    hp,
    mi_curve,
    mixture_redundancy_bound,
    pointwise_mi,
)

LOG2_3 = math.log2(3)


def _binary_entropy(p: float) -> float:
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_first_symbol_is_uniform_binary():
    trace = code_length([0], alphabet_size=2, max_order=0)
    assert trace.bits[0] == pytest.approx(1.0, rel=1e-12)
    assert trace.total == pytest.approx(1.0, rel=1e-12)


def test_first_symbol_is_uniform_ternary():
    trace = code_length([2], alphabet_size=3, max_order=0)
    assert trace.bits[0] == pytest.approx(LOG2_3, rel=1e-12)


def test_second_symbol_kt_update():
    # KT posterior after one zero: P(0) = 1.5/2
    trace = code_length([0, 0], alphabet_size=2, max_order=0)
    assert trace.bits[1] == pytest.approx(-math.log2(0.75), rel=1e-12)


def test_trace_shapes():
    x = [0, 1, 2, 1, 0, 2]
    trace = code_length(x, alphabet_size=3, max_order=2)
    assert len(trace.bits) == len(x)
    assert trace.cumulative[-1] == pytest.approx(trace.total, rel=1e-12)
    assert np.all(trace.bits > 0)
    assert np.all(np.diff(trace.cumulative) > 0)


def test_out_of_alphabet_rejected():
    with pytest.raises(ValueError):
        code_length([0, 3], alphabet_size=3, max_order=1)
    with pytest.raises(ValueError):
        hp([-1, 0], 2, 1)


def test_empty_sequence_codes_to_zero():
    assert hp([], 3, 2) == 0.0


@pytest.mark.parametrize(
    "n,alphabet_size,max_order,seed",
    [(300, 2, 0, 0), (500, 2, 3, 1), (400, 3, 2, 2), (700, 4, 1, 3), (256, 2, 8, 4)],
)
def test_sequential_equals_closed_form(n, alphabet_size, max_order, seed):
    """One-pass coding and the per-order closed form agree to 1e-8."""
    rng = np.random.default_rng(seed)
    x = rng.integers(0, alphabet_size, n)
    total = code_length(x, alphabet_size=alphabet_size, max_order=max_order).total
    assert total == pytest.approx(hp(x, alphabet_size, max_order), abs=1e-8)


@given(st.lists(st.integers(0, 2), min_size=0, max_size=40))
@settings(max_examples=120, deadline=None)
def test_predictive_probabilities_conserve(history):
    model = MarkovMixtureModel(alphabet_size=3, max_order=2)
    for sym in history:
        model.update(sym)
    assert abs(model.predictive().sum() - 1.0) < 1e-12


def test_iid_ternary_rate():
    rng = np.random.default_rng(11)
    x = rng.integers(0, 3, 10**6)
    rate = hp(x, 3, 2) / len(x)
    assert LOG2_3 <= rate <= LOG2_3 + 0.01


def test_universal_on_bernoulli():
    rng = np.random.default_rng(100)
    x = (rng.random(10**5) < 0.3).astype(np.int64)
    rate = hp(x, 2, 8) / len(x)
    assert rate == pytest.approx(_binary_entropy(0.3), abs=0.01)


def test_kt_upper_bound_each_order():
    """H^P never exceeds the per-order KT redundancy bound."""
    rng = np.random.default_rng(7)
    n, big_m = 4000, 4
    x = (rng.random(n) < 0.3).astype(np.int64)
    total = hp(x, 2, big_m)
    prior_norm = sum(2.0**-m for m in range(big_m + 1))
    for m in range(big_m + 1):
        h_m = empirical_markov_entropy(x, 2, m)
        overhead = (
            (2**m * 1 / 2) * math.log2(n)
            + math.log2(prior_norm / 2.0**-m)
            + 2**m * 2
            + m * 1.0
        )
        assert total <= n * h_m + overhead + 1e-9


def test_redundancy_bound_shrinks_per_symbol():
    per_n = [mixture_redundancy_bound(n, 3, 8) / n for n in (10**3, 10**4, 10**5)]
    assert per_n == sorted(per_n, reverse=True)
    assert per_n[-1] < 0.1


def test_mi_identical_periodic_sequences():
    x = np.array([0, 1] * 5000)
    info = pointwise_mi(x, x, 2, 2)
    assert info >= 0.5 * hp(x, 2, 2)


def test_mi_independent_sequences_small():
    rng = np.random.default_rng(5)
    n = 10**5
    x = rng.integers(0, 2, n)
    y = rng.integers(0, 2, n)
    assert abs(pointwise_mi(x, y, 2, 2)) <= 3 * (2 + math.log2(2 * n))


def test_mi_constant_sequences():
    x = np.zeros(10**4, dtype=np.int64)
    assert abs(pointwise_mi(x, x, 2, 2)) <= 20.0


def test_mi_asymmetry_within_redundancy():
    rng = np.random.default_rng(17)
    x = rng.integers(0, 2, 2000)
    y = rng.integers(0, 2, 2000)
    gap = abs(pointwise_mi(x, y, 2, 4) - pointwise_mi(y, x, 2, 4))
    assert gap <= 2 * mixture_redundancy_bound(4000, 2, 4)


def test_mi_curve_tags_and_grid():
    rng = np.random.default_rng(9)
    sample = rng.integers(0, 3, 2**13)
    ns = [2**8, 2**9, 2**10, 2**11, 2**12]
    curve = mi_curve(sample, ns, alphabet_size=3, max_order=4)
    assert curve.source == "model-coder"
    assert [p[0] for p in curve.points] == ns
    # IID control: pointwise MI grows at most logarithmically
    c = max(p[1] / math.log2(p[0]) for p in curve.points)
    assert c <= 10.0


def test_mi_curve_rejects_short_sample():
    rng = np.random.default_rng(2)
    sample = rng.integers(0, 3, 100)
    with pytest.raises(ValueError):
        mi_curve(sample, [64], alphabet_size=3)
