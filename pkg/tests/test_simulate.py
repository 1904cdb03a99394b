import math

import numpy as np
import pytest

from smurfdetect.counterfactual import ManipulationWindow
from smurfdetect.errors import InsufficientDataError, PreconditionError
from smurfdetect.histogram import build_histogram
from smurfdetect.simulate import (
    SimulationConfig, inject_smurfing, preset, simulate, simulate_baseline, smurf_count,
    smurfed_total,
)


def test_presets_as_published():
    a, b = preset("typeA"), preset("B")
    assert (a.n_draws, a.mean, a.stddev) == (50_000, -2.5, 1.8)
    assert (b.n_draws, b.mean, b.stddev) == (250_000, -2.1, 2.1)
    with pytest.raises(PreconditionError):
        preset("typeC")


@pytest.mark.parametrize("bad", [
    dict(stddev=0.0), dict(stddev=-1.0), dict(smurf_fraction=1.5), dict(smurf_fraction=-0.1),
    dict(n_draws=5),
])
def test_config_validation(bad):
    with pytest.raises(PreconditionError):
        SimulationConfig(**{"n_draws": 100, "mean": 0.0, "stddev": 1.0, **bad})


def test_type_a_post_trim_size_band():
    ns = {simulate_baseline(preset("A", seed=s)).n for s in range(50)}
    assert ns <= set(range(49_880, 49_921))


def test_baseline_mean_within_three_standard_errors():
    cfg = preset("A")
    for seed in range(10):
        x = simulate_baseline(preset("A", seed=seed)).values
        assert abs(x.mean() - cfg.mean) < 3 * cfg.stddev / math.sqrt(x.size)


def test_smurf_count():
    assert smurf_count(0.0) == 1
    assert smurf_count(math.log(3.0)) == 3
    assert math.exp(1.4) == pytest.approx(4.0552, abs=1e-4)
    assert smurf_count(0.9 - (-0.5)) == 4


def test_smurfed_total_uses_floor():
    assert smurfed_total(0.001, 49_900) == 49
    assert smurfed_total(0.005, 249_500) == 1_247
    assert smurfed_total(0.1, 30) == 3


def test_null_injection(small_sim):
    out, rep = inject_smurfing(small_sim.baseline, small_sim.hist, 0.0, seed=1)
    np.testing.assert_array_equal(out.values, small_sim.baseline.values)
    assert rep.removed_count == rep.added_count == 0


@pytest.mark.parametrize("r", [0.001, 0.005, 0.02])
def test_injection_invariants(small_sim, r):
    base, hist = small_sim.baseline, small_sim.hist
    out, rep = inject_smurfing(base, hist, r, seed=7)
    w = hist.bin_width
    assert rep.removed_count == math.floor(r * base.n)
    assert rep.added_count == rep.splits.sum()
    assert np.all(rep.splits >= 1)
    assert np.unique(rep.removed_indices).size == rep.removed_count
    assert np.all((rep.originals >= 0) & (rep.originals < 2 * w))
    assert np.all((rep.smurf_sizes > -w) & (rep.smurf_sizes < 0))
    assert out.n == base.n - rep.removed_count + rep.added_count
    # the launderer keeps the remainder: d e^s <= e^m < (d + 1) e^s
    m, s, d = rep.originals, rep.smurf_sizes, rep.splits
    assert np.all(d * np.exp(s) <= np.exp(m) * (1 + 1e-12))
    assert np.all(np.exp(m) < (d + 1) * np.exp(s))
    # the untouched values survive
    kept = np.delete(base.values, rep.removed_indices)
    np.testing.assert_array_equal(out.values[: kept.size], kept)


def test_injection_is_seeded(small_sim):
    a, _ = inject_smurfing(small_sim.baseline, small_sim.hist, 0.005, seed=3)
    b, _ = inject_smurfing(small_sim.baseline, small_sim.hist, 0.005, seed=3)
    np.testing.assert_array_equal(a.values, b.values)


def test_insufficient_eligible_values(small_sim):
    with pytest.raises(InsufficientDataError):
        inject_smurfing(small_sim.baseline, small_sim.hist, 0.9, seed=3)


@pytest.mark.parametrize("name,r,expected", [
    ("A", 0.001, 49), ("B", 0.001, 249), ("A", 0.005, 249), ("B", 0.005, 1_247),
])
def test_table_counts(name, r, expected):
    data = simulate(preset(name, smurf_fraction=r, seed=0))
    assert data.injection.removed_count == expected
    ratio = data.injection.added_count / data.injection.removed_count
    assert 1.8 <= ratio <= 2.6


def test_baseline_independent_of_r():
    a = simulate(preset("A", smurf_fraction=0.0, seed=4))
    b = simulate(preset("A", smurf_fraction=0.005, seed=4))
    np.testing.assert_array_equal(a.baseline.values, b.baseline.values)
    np.testing.assert_array_equal(a.hist.edges, b.hist.edges)


def test_custom_window_injection(small_sim):
    hist = build_histogram(small_sim.baseline.values)
    _, rep = inject_smurfing(small_sim.baseline, hist, 0.002, seed=2,
                             window=ManipulationWindow(-2, 1))
    assert np.all(rep.smurf_sizes > -2 * hist.bin_width)
    assert np.all(rep.originals < hist.bin_width)
