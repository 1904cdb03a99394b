import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smurfdetect.errors import DomainError, InsufficientDataError
from smurfdetect.transform import (
    TransactionSample, quantile, trim_and_transform, trim_z, z_transform,
)


def test_z_transform_centres_on_threshold():
    assert z_transform(250.0, 250.0) == 0.0
    assert z_transform(math.e * 40.0, 40.0) == pytest.approx(1.0, abs=1e-15)
    assert z_transform(100.0, 10.0) == pytest.approx(math.log(10.0), abs=1e-15)


@pytest.mark.parametrize("t,threshold", [(1.0, 10.0), (0.5, 10.0), (10.0, 1.0), (5.0, 0.9)])
def test_z_transform_rejects_amounts_at_or_below_one(t, threshold):
    with pytest.raises(DomainError):
        z_transform(t, threshold)


@given(st.floats(1.001, 1e9), st.floats(1.001, 1e9), st.floats(1.001, 1e9))
def test_z_transform_is_increasing(a, b, threshold):
    if a < b:
        assert z_transform(a, threshold) < z_transform(b, threshold)


def test_quantile_matches_numpy_linear(rng):
    x = rng.normal(size=997)
    for q in (0.0, 0.001, 0.05, 0.5, 0.999, 1.0):
        assert quantile(x, q) == pytest.approx(np.quantile(x, q, method="linear"), abs=1e-13)


def test_constant_sample_is_untouched():
    out = trim_and_transform(TransactionSample(np.full(1000, 200.0), 100.0))
    assert out.n == 1000
    np.testing.assert_allclose(out.values, math.log(2.0), rtol=0, atol=1e-15)


def test_trim_count_on_consecutive_integers():
    amounts = np.arange(2, 100_002, dtype=float)
    out = trim_and_transform(TransactionSample(amounts, 5_000.0))
    # brute-force oracle: count of amounts within numpy's linear quantiles
    lo, hi = np.quantile(amounts, [0.001, 0.999])
    expected = sum(1 for a in amounts.tolist() if lo <= a <= hi)
    assert expected == 99_800
    assert out.n == expected
    assert out.trim_bounds == pytest.approx((101.999, 99_901.001), abs=1e-6)


def test_extreme_outlier_removed(rng):
    amounts = np.append(rng.uniform(100, 1000, 10_000), 1e9)
    out = trim_and_transform(TransactionSample(amounts, 500.0))
    assert out.values.max() < z_transform(1e9, 500.0)
    assert out.values.max() <= z_transform(1000.0, 500.0)


def test_sample_validation():
    with pytest.raises(DomainError):
        TransactionSample(np.array([5.0, 1.0, 7.0]), 3.0)
    with pytest.raises(InsufficientDataError):
        TransactionSample(np.array([]), 3.0)
    with pytest.raises(InsufficientDataError):
        trim_and_transform(TransactionSample(np.arange(2, 8, dtype=float), 3.0))


def test_trim_removes_nothing_when_cutoffs_hit_tied_extremes(rng):
    body = np.exp(rng.normal(5, 1, 10_000))
    # 1% of mass tied at each extreme puts both quantiles on the extremes
    amounts = np.concatenate([np.full(100, body.min()), body, np.full(100, body.max())])
    first = trim_and_transform(TransactionSample(amounts, 100.0))
    assert first.n == amounts.size
    again = trim_and_transform(TransactionSample(np.exp(first.values) * 100.0, 100.0))
    assert again.n == first.n


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 1000.0))
def test_scale_invariance_of_z_values(c):
    rng = np.random.default_rng(5)
    amounts = np.exp(rng.normal(6, 1, 2_000)) + 2.0
    threshold = 400.0
    if (amounts * c).min() <= 1 or threshold * c <= 1:
        return
    a = trim_and_transform(TransactionSample(amounts, threshold))
    b = trim_and_transform(TransactionSample(amounts * c, threshold * c))
    assert a.n == b.n
    np.testing.assert_allclose(a.values, b.values, atol=1e-12, rtol=0)


def test_trim_z_reports_bounds_in_unit_threshold_amounts(rng):
    z = rng.normal(size=1_000)
    out = trim_z(z)
    assert out.trim_bounds[0] == pytest.approx(math.exp(np.quantile(z, 0.001)))
    assert out.n == 998
