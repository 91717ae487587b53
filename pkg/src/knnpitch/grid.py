"""Control-surface container, grid geometry and CSV/JSON serialization."""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass

import numpy as np


class GridFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """
    Regular grid of cells over the pitch. Cell ``(i, j)`` is column ``i``
    along the length of the pitch and row ``j`` along its width.
    """

    width_cells: int = 105
    height_cells: int = 68
    pitch_length: float = 105.0
    pitch_width: float = 68.0

    def __post_init__(self):
        if int(self.width_cells) != self.width_cells or self.width_cells < 1:
            raise ValueError(f"width_cells must be a positive integer, got {self.width_cells}")
        if int(self.height_cells) != self.height_cells or self.height_cells < 1:
            raise ValueError(f"height_cells must be a positive integer, got {self.height_cells}")
        if not (self.pitch_length > 0 and self.pitch_width > 0
                and math.isfinite(self.pitch_length) and math.isfinite(self.pitch_width)):
            raise ValueError("pitch dimensions must be positive and finite")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height_cells, self.width_cells)

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Return read-only ``(xs, ys)`` arrays of cell centers, each of shape ``self.shape``."""
        return _centers(self)


@functools.lru_cache(maxsize=32)
def _centers(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    xs = (np.arange(spec.width_cells) + 0.5) * (spec.pitch_length / spec.width_cells)
    ys = (np.arange(spec.height_cells) + 0.5) * (spec.pitch_width / spec.height_cells)
    gx, gy = np.meshgrid(xs, ys)
    gx.flags.writeable = False
    gy.flags.writeable = False
    return gx, gy


def cell_center(spec: GridSpec, i: int, j: int) -> tuple[float, float]:
    if not (0 <= i < spec.width_cells and 0 <= j < spec.height_cells):
        raise IndexError(f"cell ({i}, {j}) outside {spec.width_cells}x{spec.height_cells} grid")
    return ((i + 0.5) * (spec.pitch_length / spec.width_cells),
            (j + 0.5) * (spec.pitch_width / spec.height_cells))


@dataclass(frozen=True, eq=False)
class ControlGrid:
    """
    Signed control values, ``values[j, i]`` for cell ``(i, j)``. Positive
    values mean Home control, negative Away control; magnitude is confidence.
    """

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.spec.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.spec.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("control values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def _format_number(v: float) -> str:
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-2]
    return "0" if s == "-0" else s


def export_grid(grid: ControlGrid, fmt: str = "csv") -> bytes:
    """
    Serialize a grid. CSV has ``#``-prefixed metadata lines followed by one
    row per ``j`` (row 0 nearest ``y = 0``); JSON is an object with the spec
    fields and a flat row-major ``values`` list.
    """
    spec = grid.spec
    fmt = fmt.lower()
    if fmt == "csv":
        lines = [
            f"# width_cells={spec.width_cells}",
            f"# height_cells={spec.height_cells}",
            f"# pitch_length={_format_number(spec.pitch_length)}",
            f"# pitch_width={_format_number(spec.pitch_width)}",
        ]
        for row in grid.values:
            lines.append(",".join(_format_number(v) for v in row))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        doc = {
            "width_cells": spec.width_cells,
            "height_cells": spec.height_cells,
            "pitch_length": spec.pitch_length,
            "pitch_width": spec.pitch_width,
            "values": [float(v) for v in grid.values.ravel()],
        }
        return json.dumps(doc).encode("utf-8")
    raise ValueError(f"unknown grid format {fmt!r}")


_META_KEYS = {"width_cells": int, "height_cells": int, "pitch_length": float, "pitch_width": float}


def _spec_from(meta: dict) -> GridSpec:
    missing = [k for k in _META_KEYS if k not in meta]
    if missing:
        raise GridFormatError(f"missing metadata: {', '.join(missing)}")
    try:
        return GridSpec(**{k: conv(meta[k]) for k, conv in _META_KEYS.items()})
    except (TypeError, ValueError) as exc:
        raise GridFormatError(f"bad metadata: {exc}") from None


def import_grid(source: bytes, fmt: str = "csv") -> ControlGrid:
    """Inverse of :func:`export_grid`."""
    fmt = fmt.lower()
    text = source.decode("utf-8") if isinstance(source, bytes) else source
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GridFormatError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise GridFormatError("expected a JSON object")
        spec = _spec_from(doc)
        values = doc.get("values")
        if not isinstance(values, list) or len(values) != spec.width_cells * spec.height_cells:
            raise GridFormatError("values must be a list of width_cells*height_cells numbers")
        try:
            arr = np.array(values, dtype=float).reshape(spec.shape)
        except (TypeError, ValueError):
            raise GridFormatError("values must be numbers") from None
    elif fmt == "csv":
        meta = {}
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = (s.strip() for s in body.split("=", 1))
                    meta[k] = v
                continue
            try:
                rows.append([float(c) for c in line.split(",")])
            except ValueError:
                raise GridFormatError(f"line {lineno}: malformed row") from None
        spec = _spec_from(meta)
        if len(rows) != spec.height_cells:
            raise GridFormatError(f"expected {spec.height_cells} rows, found {len(rows)}")
        for n, row in enumerate(rows):
            if len(row) != spec.width_cells:
                raise GridFormatError(
                    f"row {n} has {len(row)} values, expected {spec.width_cells}")
        arr = np.array(rows, dtype=float)
    else:
        raise ValueError(f"unknown grid format {fmt!r}")
    try:
        return ControlGrid(spec, arr)
    except ValueError as exc:
        raise GridFormatError(str(exc)) from None
