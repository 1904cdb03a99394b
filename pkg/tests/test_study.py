import json

import numpy as np
import pytest

from smurfdetect.errors import InsufficientDataError, PreconditionError
from smurfdetect.study import (
    DEFAULT_GRIDS, StudyGrid, grids_from_config, run_study, write_study,
)

SMALL = dict(n_draws=20_000, mean=-2.5, stddev=1.8)


@pytest.fixture(scope="module")
def small_grid():
    return StudyGrid(preset="custom", custom=SMALL, r_values=(0.0, 0.005), u_values=(1, 2),
                     seeds=(0, 1, 2), replicate_count=300)


@pytest.fixture(scope="module")
def small_result(small_grid):
    return run_study(small_grid)


def test_default_grid_layout():
    a, b = DEFAULT_GRIDS
    assert a.label == "typeA" and tuple(a.u_values) == (1, 2)
    assert b.label == "typeB" and tuple(b.u_values) == (1, 2, 3)
    assert all(g.l == -1 and tuple(g.r_values) == (0.0, 0.001, 0.005) for g in DEFAULT_GRIDS)
    assert all(len(g.seeds) == 20 for g in DEFAULT_GRIDS)


def test_grid_validation():
    with pytest.raises(PreconditionError):
        StudyGrid(preset="A", l=0)
    with pytest.raises(PreconditionError):
        StudyGrid(preset="A", u_values=(0, 1))
    with pytest.raises(PreconditionError):
        StudyGrid(preset="Z")
    with pytest.raises(PreconditionError):
        StudyGrid(preset="A", r_values=(1.2,))
    with pytest.raises(PreconditionError):
        StudyGrid.from_dict({"preset": "A", "colour": "blue"})


def test_cells_cover_grid(small_result):
    assert len(small_result.cells) == 2 * 2 * 3
    keys = {(c.r, c.u, c.seed) for c in small_result.cells}
    assert len(keys) == 12


def test_detection_flag_consistent(small_result):
    for c in small_result.cells:
        assert c.detected == (c.lower_cl_pct > 0)
        if c.r == 0:
            assert c.removed == c.added == 0
        else:
            assert c.removed == int(0.005 * 19_960)


def test_reproducible_and_order_independent(small_grid, small_result):
    again = run_study(small_grid, workers=3)
    assert again.cells == small_result.cells


def test_summary_rows(small_result):
    rows = small_result.summary()
    assert [(r.r, r.u) for r in rows] == [(0.0, 1), (0.0, 2), (0.005, 1), (0.005, 2)]
    for row in rows:
        cells = small_result.select(row.type, row.r, row.u)
        assert row.seeds == 3
        assert row.mean_zeta_pct == pytest.approx(np.mean([c.zeta_pct for c in cells]))
        assert row.detection_rate == sum(c.detected for c in cells) / 3


def test_write_study(tmp_path, small_result):
    paths = write_study(small_result, tmp_path)
    header = paths["summary_csv"].read_text().splitlines()[0].split(",")
    assert header == ["type", "r", "u", "seeds", "mean_zeta_pct", "mean_lower_cl_pct",
                      "detection_rate", "mean_removed", "mean_added"]
    data = json.loads(paths["summary_json"].read_text())
    assert len(data["rows"]) == 4
    assert "multi-seed" in data["note"]
    assert len(paths["cells_csv"].read_text().splitlines()) == 13


def test_grids_from_config():
    grids = grids_from_config({"grids": [
        {"preset": "typeA", "n_seeds": 2, "u_values": [1]},
        {"custom": SMALL, "r_values": [0.0]},
    ]})
    assert grids[0].seeds == (0, 1) and grids[0].label == "typeA"
    assert grids[1].label == "custom"


def test_errors_annotated_with_cell():
    grid = StudyGrid(preset="custom", custom=dict(n_draws=200, mean=3.0, stddev=0.5),
                     r_values=(0.5,), u_values=(1,), seeds=(0,), replicate_count=100)
    with pytest.raises(PreconditionError, match=r"\[custom r=0.5 seed=0\]"):
        run_study(grid)


def test_insufficient_error_type_kept():
    grid = StudyGrid(preset="custom", custom=dict(n_draws=2_000, mean=-1.0, stddev=1.0),
                     r_values=(0.9,), u_values=(1,), seeds=(0,), replicate_count=100)
    with pytest.raises(InsufficientDataError):
        run_study(grid)
