"""
Potential-field pitch control baseline.

Every player contributes their team label (+1 Home, -1 Away) weighted by
``t ** -beta``, where ``t`` is a constant-speed straight-line arrival time to
the cell. The cell value is the weighted mean of the labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import ControlGrid, GridSpec
from .knn_engine import EmptyFrameError
from .tracking import Frame, PlayerState


@dataclass(frozen=True)
class SpearmanParams:
    beta: float = 2.5
    v_max: float = 5.0
    t_floor: float = 0.1
    spec: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        for name in ("beta", "v_max", "t_floor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")

    def describe(self) -> str:
        return (f"spearman beta={self.beta:g} v_max={self.v_max:g} t_floor={self.t_floor:g} "
                f"grid={self.spec.width_cells}x{self.spec.height_cells}")


def arrival_time(player: PlayerState, point: tuple[float, float],
                 params: SpearmanParams = SpearmanParams()) -> float:
    distance = math.hypot(point[0] - player.x, point[1] - player.y)
    return max(distance / params.v_max, params.t_floor)


def spearman_grid(frame: Frame, params: SpearmanParams = SpearmanParams()) -> ControlGrid:
    if not frame.players:
        raise EmptyFrameError("no players in frame")
    spec = params.spec
    cx, cy = spec.centers()
    pos = frame.positions()
    dist = np.sqrt((cx[None] - pos[:, 0, None, None]) ** 2
                   + (cy[None] - pos[:, 1, None, None]) ** 2)
    log_t = np.log(np.maximum(dist / params.v_max, params.t_floor))
    # weights relative to the fastest arrival per cell, so large beta cannot overflow
    weights = np.exp(-params.beta * (log_t - log_t.min(axis=0)))
    labels = frame.team_signs()[:, None, None]
    values = (labels * weights).sum(axis=0) / weights.sum(axis=0)
    return ControlGrid(spec, np.clip(values, -1.0, 1.0))
