import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from oracles import naive_runs
from trendirr import InsufficientDataError, InvalidInputError, empirical_distribution, extract_trend_durations
from trendirr.synth import gen_random_walk
from trendirr.trends import EmpiricalDistribution

series_st = st.lists(st.integers(-3, 3), min_size=2, max_size=40)


def test_hand_enumerated_example():
    d = extract_trend_durations([1, 2, 3, 2, 1, 1, 2])
    assert d.up.tolist() == [2, 1]
    assert d.down.tolist() == [2]
    assert d.constant.tolist() == [1]


def test_strictly_increasing_is_one_run():
    d = extract_trend_durations(np.arange(17.0))
    assert d.up.tolist() == [16]
    assert d.down.size == 0 and d.constant.size == 0


def test_constant_series():
    d = extract_trend_durations([5, 5, 5, 5])
    assert d.constant.tolist() == [3]
    assert d.up.size == 0 and d.down.size == 0


def test_too_short():
    with pytest.raises(InvalidInputError):
        extract_trend_durations([1.0])


@given(series_st)
def test_matches_naive_runs(xs):
    d = extract_trend_durations(xs)
    up, down, const = naive_runs(xs)
    assert (d.up.tolist(), d.down.tolist(), d.constant.tolist()) == (up, down, const)


@given(series_st)
def test_durations_partition_the_steps(xs):
    assert extract_trend_durations(xs).n_steps == len(xs) - 1


@given(series_st)
def test_reversal_swaps_up_and_down(xs):
    fwd = extract_trend_durations(xs)
    rev = extract_trend_durations(xs[::-1])
    assert sorted(rev.up.tolist()) == sorted(fwd.down.tolist())
    assert sorted(rev.down.tolist()) == sorted(fwd.up.tolist())
    assert sorted(rev.constant.tolist()) == sorted(fwd.constant.tolist())


@given(series_st)
def test_negation_swaps_up_and_down(xs):
    fwd = extract_trend_durations(xs)
    neg = extract_trend_durations([-x for x in xs])
    assert neg.up.tolist() == fwd.down.tolist()
    assert neg.down.tolist() == fwd.up.tolist()


def test_empirical_distribution_counts():
    d = empirical_distribution([1, 1, 2])
    assert d.support.tolist() == [1, 2]
    np.testing.assert_allclose(d.mass, [2 / 3, 1 / 3])
    assert d.n_samples == 3
    single = empirical_distribution([5])
    assert single.support.tolist() == [5] and single.mass.tolist() == [1.0]


def test_empirical_distribution_empty():
    with pytest.raises(InsufficientDataError):
        empirical_distribution([])


def test_distribution_invariants_enforced():
    with pytest.raises(InvalidInputError):
        EmpiricalDistribution([2, 1], [0.5, 0.5])
    with pytest.raises(InvalidInputError):
        EmpiricalDistribution([1, 2], [0.5, 0.6])


def test_walk_uptrend_law_is_geometric():
    # Runs counted in steps start at 1: P(k) = p**(k-1) (1-p). The walk's
    # P(n) = p**n (1-p) at n = 1 is the k = 2 entry here.
    walk = gen_random_walk(0.6, 10**5, seed=3)
    up = empirical_distribution(extract_trend_durations(walk).up)
    assert up.pmf(1) == pytest.approx(0.4, abs=0.01)
    assert up.pmf(2) == pytest.approx(0.24, abs=0.01)


def test_unbiased_walk_up_and_down_agree():
    d = extract_trend_durations(gen_random_walk(0.5, 10**5, seed=11))
    up, down = empirical_distribution(d.up), empirical_distribution(d.down)
    support = np.union1d(up.support, down.support)
    tv = 0.5 * sum(abs(up.pmf(k) - down.pmf(k)) for k in support)
    assert tv < 0.02


@pytest.mark.parametrize("p", [0.5, 0.6, 0.7, 0.9])
def test_walk_durations_chi_square(p):
    up = extract_trend_durations(gen_random_walk(p, 10**5, seed=int(p * 100))).up
    q = 1 - p
    # Pool the tail so every expected count is at least 5.
    kmax = 1
    while up.size * p**kmax >= 5:
        kmax += 1
    observed = np.array([np.sum(up == k) for k in range(1, kmax)] + [np.sum(up >= kmax)])
    expected = np.array([q * p ** (k - 1) for k in range(1, kmax)] + [p ** (kmax - 1)]) * up.size
    assert stats.chisquare(observed, expected).pvalue > 0.001
