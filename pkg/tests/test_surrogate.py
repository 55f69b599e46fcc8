import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trendirr import InsufficientDataError, InvalidInputError, shuffle_surrogate, significance_test
from trendirr.surrogate import _surrogate_value, make_statistic
from trendirr.synth import gen_nar2


def test_length_one_unchanged():
    assert shuffle_surrogate([3.5], 1).tolist() == [3.5]


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=60), st.integers(0, 2**32 - 1))
def test_shuffle_is_permutation(xs, seed):
    assert sorted(shuffle_surrogate(xs, seed).tolist()) == sorted(xs)


def test_shuffle_deterministic():
    x = np.arange(1000.0)
    a = shuffle_surrogate(x, 42)
    assert a.tobytes() == shuffle_surrogate(x, 42).tobytes()
    assert not np.array_equal(a, x)


def test_shuffle_empty():
    with pytest.raises(InvalidInputError):
        shuffle_surrogate([], 0)


def test_ensemble_fields_and_determinism():
    x = np.random.default_rng(1).standard_normal(2000)
    a = significance_test(x, n_surrogates=40, seed=9)
    b = significance_test(x, n_surrogates=40, seed=9)
    assert a.n_surrogates == len(a.statistic_values) == 40
    assert a.statistic_values.min() <= a.threshold_95 <= a.statistic_values.max()
    assert a.threshold_95 == pytest.approx(np.quantile(a.statistic_values, 0.95))
    assert a.mean == pytest.approx(a.statistic_values.mean())
    np.testing.assert_array_equal(a.statistic_values, b.statistic_values)
    assert a.threshold_95 == b.threshold_95 and a.observed == b.observed


def test_parallel_equals_sequential():
    x = np.random.default_rng(2).standard_normal(3000)
    seq = significance_test(x, "inefficiency", n_surrogates=30, seed=5)
    par = significance_test(x, "inefficiency", n_surrogates=30, seed=5, workers=4)
    np.testing.assert_array_equal(seq.statistic_values, par.statistic_values)


def test_rejects_small_ensembles_and_unknown_statistic():
    x = np.random.default_rng(0).standard_normal(100)
    with pytest.raises(InvalidInputError):
        significance_test(x, n_surrogates=10)
    with pytest.raises(InvalidInputError):
        make_statistic("hurst")


def test_undefined_surrogate_is_redrawn():
    calls = []

    def flaky(x):
        calls.append(x.copy())
        if len(calls) <= 3:
            raise InsufficientDataError("no downtrends")
        return 1.0

    assert _surrogate_value(np.arange(50.0), flaky, seed=0, index=0) == 1.0
    assert len(calls) == 4
    # Each retry draws a fresh permutation.
    assert not np.array_equal(calls[0], calls[1])


def test_undefined_surrogates_exhaust_retries():
    def never(x):
        raise InsufficientDataError("no downtrends")

    with pytest.raises(InsufficientDataError, match="after 10 retries"):
        _surrogate_value(np.arange(50.0), never, seed=0, index=3)


def test_iid_gaussian_not_significant():
    x = np.random.default_rng(123).standard_normal(10**5)
    assert not significance_test(x, seed=1).significant


def test_nar_significant():
    u = gen_nar2(10**5, seed=4, time_mode="scaled")
    res = significance_test(u, seed=4)
    assert res.significant


@pytest.mark.slow
def test_shuffled_nar_loses_significance():
    u = gen_nar2(10**4, seed=6, time_mode="scaled")
    flagged = 0
    for trial in range(100):
        shuffled = shuffle_surrogate(u, 10_000 + trial)
        flagged += significance_test(shuffled, n_surrogates=100, seed=trial).significant
    assert flagged <= 5


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_calibration_draws_are_reproducible(seed):
    x = np.random.default_rng(seed).standard_normal(500)
    a = significance_test(x, n_surrogates=20, seed=seed)
    b = significance_test(x, n_surrogates=20, seed=seed)
    assert a.significant == b.significant
