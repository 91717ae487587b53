import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from knnpitch.grid import ControlGrid, GridFormatError, GridSpec, cell_center, export_grid, import_grid


@pytest.mark.parametrize("spec, ij, expected", [
    (GridSpec(), (0, 0), (0.5, 0.5)),
    (GridSpec(), (104, 67), (104.5, 67.5)),
    (GridSpec(210, 136), (0, 0), (0.25, 0.25)),
])
def test_cell_center(spec, ij, expected):
    assert cell_center(spec, *ij) == expected


@pytest.mark.parametrize("ij", [(-1, 0), (105, 0), (0, 68), (0, -1)])
def test_cell_center_bounds(ij):
    with pytest.raises(IndexError):
        cell_center(GridSpec(), *ij)


def test_centers_agree_with_cell_center():
    spec = GridSpec(7, 5, 21.0, 10.0)
    xs, ys = spec.centers()
    for j in range(5):
        for i in range(7):
            assert (xs[j, i], ys[j, i]) == cell_center(spec, i, j)


def test_defaults_match_pitch():
    spec = GridSpec()
    assert (spec.width_cells, spec.height_cells) == (105, 68)
    assert spec.shape == (68, 105)


@pytest.mark.parametrize("kwargs", [{"width_cells": 0}, {"height_cells": -2},
                                    {"width_cells": 2.5}, {"pitch_length": 0}])
def test_invalid_spec(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)


def test_grid_rejects_bad_values():
    with pytest.raises(ValueError):
        ControlGrid(GridSpec(2, 1), np.array([[0.0, np.nan]]))
    with pytest.raises(ValueError):
        ControlGrid(GridSpec(2, 1), np.zeros((2, 1)))


def test_grid_values_read_only():
    g = ControlGrid(GridSpec(1, 1), np.zeros((1, 1)))
    with pytest.raises(ValueError):
        g.values[0, 0] = 1.0


def _body(data: bytes) -> list[str]:
    return [l for l in data.decode().splitlines() if not l.startswith("#")]


def test_csv_single_zero():
    g = ControlGrid(GridSpec(1, 1, 1.0, 1.0), np.zeros((1, 1)))
    assert _body(export_grid(g, "csv")) == ["0"]


def test_csv_two_by_two():
    g = ControlGrid(GridSpec(2, 2), np.array([[1, -1], [0, 0.5]]))
    out = export_grid(g, "csv")
    assert _body(out) == ["1,-1", "0,0.5"]
    assert out.decode().startswith("# width_cells=2\n# height_cells=2\n")


def test_json_layout():
    import json
    g = ControlGrid(GridSpec(2, 2), np.array([[1, -1], [0, 0.5]]))
    doc = json.loads(export_grid(g, "json"))
    assert doc == {"width_cells": 2, "height_cells": 2, "pitch_length": 105.0,
                   "pitch_width": 68.0, "values": [1.0, -1.0, 0.0, 0.5]}


small_grids = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda wh: arrays(float, (wh[1], wh[0]),
                      elements=st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)))


@settings(max_examples=100, deadline=None)
@given(small_grids)
def test_json_round_trip_bit_exact(values):
    spec = GridSpec(values.shape[1], values.shape[0], 105.0, 68.0)
    g = ControlGrid(spec, values)
    back = import_grid(export_grid(g, "json"), "json")
    assert back.spec == spec
    assert np.array_equal(back.values, g.values)
    assert back.values.size == spec.width_cells * spec.height_cells


@settings(max_examples=100, deadline=None)
@given(small_grids)
def test_csv_round_trip(values):
    spec = GridSpec(values.shape[1], values.shape[0], 52.5, 34.0)
    g = ControlGrid(spec, values)
    back = import_grid(export_grid(g, "csv"), "csv")
    assert back.spec == spec
    np.testing.assert_allclose(back.values, g.values, rtol=0, atol=1e-9)


@pytest.mark.parametrize("text", [
    "# width_cells=2\n# height_cells=1\n# pitch_length=1\n# pitch_width=1\n1,2,3\n",
    "# width_cells=2\n# height_cells=2\n# pitch_length=1\n# pitch_width=1\n1,2\n",
    "# width_cells=2\n# height_cells=1\n# pitch_length=1\n# pitch_width=1\n1,x\n",
    "# width_cells=2\n# height_cells=1\n1,2\n",
    "1,2\n",
])
def test_csv_format_errors(text):
    with pytest.raises(GridFormatError):
        import_grid(text.encode(), "csv")


@pytest.mark.parametrize("text", [
    "[]",
    "{not json",
    '{"width_cells": 2, "height_cells": 1, "pitch_length": 1, "pitch_width": 1, "values": [1]}',
    '{"width_cells": 1, "height_cells": 1, "values": [1]}',
])
def test_json_format_errors(text):
    with pytest.raises(GridFormatError):
        import_grid(text.encode(), "json")
