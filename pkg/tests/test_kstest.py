import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smurfdetect.errors import InsufficientDataError
from smurfdetect.kstest import kolmogorov_sf, ks_statistic, ks_two_sample


def edf_gap_oracle(a, b):
    """Exhaustive EDF-gap enumeration at every point and just left of it."""
    pts = sorted(set(a) | set(b))
    best = 0.0
    for p in pts:
        fa = sum(1 for x in a if x <= p) / len(a)
        fb = sum(1 for x in b if x <= p) / len(b)
        fa_left = sum(1 for x in a if x < p) / len(a)
        fb_left = sum(1 for x in b if x < p) / len(b)
        best = max(best, abs(fa - fb), abs(fa_left - fb_left))
    return best


def partial_sum(x, terms=100):
    return 2 * sum((-1) ** (k - 1) * math.exp(-2 * k * k * x * x) for k in range(1, terms + 1))


def test_identical_samples():
    a = [3.0, 1.0, 2.0, 2.0]
    r = ks_two_sample(a, list(a))
    assert (r.statistic, r.p_value) == (0.0, 1.0)


def test_disjoint_supports():
    assert ks_two_sample([1, 2, 3], [4, 5]).statistic == 1.0


def test_small_example():
    assert ks_statistic([1, 2, 3], [1.5, 2.5, 3.5]) == pytest.approx(1 / 3)
    assert edf_gap_oracle([1, 2, 3], [1.5, 2.5, 3.5]) == pytest.approx(1 / 3)


def test_empty_sample():
    with pytest.raises(InsufficientDataError):
        ks_two_sample([], [1.0])


def test_statistic_matches_enumeration_for_all_small_sizes():
    rng = np.random.default_rng(0)
    for n1, n2 in itertools.product(range(1, 9), repeat=2):
        for _ in range(5):
            a = rng.integers(0, 5, n1).tolist()
            b = rng.integers(0, 5, n2).tolist()
            assert ks_statistic(a, b) == pytest.approx(edf_gap_oracle(a, b), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=8),
       st.lists(st.integers(-3, 3), min_size=1, max_size=8))
def test_symmetry_and_oracle(a, b):
    ab, ba = ks_two_sample(a, b), ks_two_sample(b, a)
    assert (ab.statistic, ab.p_value) == (ba.statistic, ba.p_value)
    assert ks_statistic(a, b) == pytest.approx(edf_gap_oracle(a, b), abs=1e-15)


def test_kolmogorov_sf_limits():
    assert kolmogorov_sf(0.0) == 1.0
    assert kolmogorov_sf(1e-8) == 1.0
    assert kolmogorov_sf(4.0) < 1e-12
    assert 0.0 <= kolmogorov_sf(10.0) < 1e-80


@pytest.mark.parametrize("x", [1.0, 1.2, 1.5, 2.0, 3.0])
def test_kolmogorov_sf_matches_partial_sums(x):
    assert kolmogorov_sf(x) == pytest.approx(partial_sum(x), abs=1e-12)


@pytest.mark.parametrize("x", [0.3, 0.5, 0.8, 0.95])
def test_small_x_branch_agrees_with_long_series(x):
    assert kolmogorov_sf(x) == pytest.approx(partial_sum(x, terms=2_000), abs=1e-12)


def test_sf_decreasing():
    xs = np.linspace(0.01, 4, 400)
    vals = [kolmogorov_sf(x) for x in xs]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_p_value_decreases_with_statistic():
    a = np.arange(50.0)
    ps = [ks_two_sample(a, a + shift).p_value for shift in (0, 5, 10, 20, 30)]
    assert all(b <= a_ for a_, b in zip(ps, ps[1:]))


def test_detects_one_sd_shift(rng):
    r = ks_two_sample(rng.normal(0, 1, 10_000), rng.normal(1, 1, 10_000))
    assert r.p_value < 0.001


def test_null_p_value_not_tiny(rng):
    r = ks_two_sample(rng.normal(size=5_000), rng.normal(size=5_000))
    assert r.p_value > 0.001
