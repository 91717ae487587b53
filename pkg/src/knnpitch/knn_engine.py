"""
Nearest-neighbour pitch control.

Each lag extrapolates every player along their current per-frame velocity
and assigns every grid cell to the team of the nearest extrapolated player.
Layers are optionally weighted by distance decay, summed, normalized to
[-1, 1] and optionally smoothed with a truncated moving average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import ControlGrid, GridSpec
from .tracking import Frame, Team


class EmptyFrameError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """
    lags: frame offsets used to extrapolate positions, one layer each.
    xi: distance-decay base; ``None`` or 1 disables decay.
    tau: smoothing window; ``None`` or 1 disables smoothing.
    decay_scale: distance (meters) at which the decay multiplier equals 1.
    """

    lags: tuple[int, ...] = (0,)
    xi: float | None = None
    tau: int | None = None
    decay_scale: float = 40.0
    spec: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        lags = tuple(int(eta) for eta in self.lags)
        if not lags:
            raise ValueError("lags must be non-empty")
        if any(eta < 0 for eta in lags) or any(eta != raw for eta, raw in zip(lags, self.lags)):
            raise ValueError(f"lags must be non-negative integers, got {self.lags!r}")
        object.__setattr__(self, "lags", lags)
        if self.xi is not None and not (math.isfinite(self.xi) and self.xi > 0):
            raise ValueError(f"xi must be positive and finite, got {self.xi}")
        if self.tau is not None and (int(self.tau) != self.tau or self.tau < 1):
            raise ValueError(f"tau must be an integer >= 1, got {self.tau}")
        if not (math.isfinite(self.decay_scale) and self.decay_scale > 0):
            raise ValueError("decay_scale must be positive and finite")

    @property
    def decay_active(self) -> bool:
        return self.xi is not None and self.xi != 1

    @property
    def smoothing_active(self) -> bool:
        return self.tau is not None and self.tau > 1

    def describe(self) -> str:
        lags = ",".join(str(eta) for eta in self.lags)
        return (f"lags=[{lags}] xi={self.xi} tau={self.tau} decay_scale={self.decay_scale:g} "
                f"grid={self.spec.width_cells}x{self.spec.height_cells}")


@dataclass(frozen=True)
class NearestResult:
    player_index: int
    distance: float


def lagged_positions(frame: Frame, eta: int) -> list[tuple[int, float, float, Team]]:
    """Positions extrapolated ``eta`` frames ahead: ``(x + eta*dx, y + eta*dy)``."""
    return [(k, p.x + eta * p.dx, p.y + eta * p.dy, p.team) for k, p in enumerate(frame.players)]


def nearest_player(point: tuple[float, float],
                   positions: list[tuple[int, float, float, Team]]) -> NearestResult:
    """Closest position to ``point``; equal distances go to the smaller player index."""
    if not positions:
        raise EmptyFrameError("no players to query")
    qx, qy = point
    best = None
    best_d2 = math.inf
    for k, x, y, _ in sorted(positions, key=lambda t: t[0]):
        d2 = (qx - x) ** 2 + (qy - y) ** 2
        if d2 < best_d2:
            best, best_d2 = k, d2
    return NearestResult(best, math.sqrt(best_d2))


def _nearest_arrays(points: np.ndarray, spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Index of the nearest point and its distance for every cell center."""
    if len(points) == 0:
        raise EmptyFrameError("no players to query")
    cx, cy = spec.centers()
    xs, ys = cx[0], cy[:, 0]
    # squared distance is separable: row term + column term per player
    dx2 = (xs[None, :] - points[:, 0, None]) ** 2
    dy2 = (ys[None, :] - points[:, 1, None]) ** 2
    best = dy2[0][:, None] + dx2[0][None, :]
    idx = np.zeros(spec.shape, dtype=np.intp)
    d2 = np.empty(spec.shape)
    closer = np.empty(spec.shape, dtype=bool)
    for k in range(1, len(points)):
        np.add(dy2[k][:, None], dx2[k][None, :], out=d2)
        # strict comparison keeps the smaller index on ties
        np.less(d2, best, out=closer)
        np.copyto(best, d2, where=closer)
        idx[closer] = k
    return idx, np.sqrt(best)


def voronoi_layer(frame: Frame, eta: int, spec: GridSpec) -> tuple[ControlGrid, np.ndarray]:
    """
    Team of the nearest lagged player per cell (+1 Home, -1 Away), together
    with the distance to that player in meters.
    """
    points = frame.positions() + eta * frame.velocities()
    idx, dist = _nearest_arrays(points, spec)
    return ControlGrid(spec, frame.team_signs()[idx]), dist


def decay_multiplier(distance, xi: float, decay_scale: float = 40.0):
    """``xi ** (1 - distance / decay_scale)``."""
    return np.power(float(xi), 1.0 - np.asarray(distance, dtype=float) / decay_scale)


def apply_distance_decay(values: np.ndarray, distances: np.ndarray, xi: float,
                         decay_scale: float = 40.0) -> np.ndarray:
    if not xi > 0:
        raise ValueError(f"xi must be positive, got {xi}")
    if xi == 1:
        return np.array(values, dtype=float)
    return np.asarray(values, dtype=float) * decay_multiplier(distances, xi, decay_scale)


def moving_average(values: np.ndarray, tau: int, axis: int) -> np.ndarray:
    """
    One smoothing pass along ``axis``: centered window of ``2*(tau//2) + 1``
    cells, truncated at the edges and divided by the number of cells it covers.
    """
    values = np.asarray(values, dtype=float)
    half = int(tau) // 2
    n = values.shape[axis]
    total = np.zeros_like(values)
    for off in range(-half, half + 1):
        lo, hi = max(0, -off), min(n, n - off)
        if lo >= hi:
            continue
        dst = [slice(None)] * values.ndim
        src = [slice(None)] * values.ndim
        dst[axis] = slice(lo, hi)
        src[axis] = slice(lo + off, hi + off)
        total[tuple(dst)] += values[tuple(src)]
    k = np.arange(n)
    counts = np.minimum(k + half, n - 1) - np.maximum(k - half, 0) + 1
    shape = [1] * values.ndim
    shape[axis] = n
    out = total / counts.reshape(shape)
    # rounding guard: an average never leaves the input range
    return np.clip(out, values.min(), values.max())


def smooth(values: np.ndarray, tau: int | None, passes: int = 2) -> np.ndarray:
    """
    Separable moving average with half-window ``tau // 2``: rows then
    columns, repeated ``passes`` times. ``tau`` of ``None`` or 1 is the identity.
    """
    out = np.array(values, dtype=float)
    if tau is None or tau <= 1:
        return out
    for _ in range(passes):
        out = moving_average(out, tau, axis=1)
        out = moving_average(out, tau, axis=0)
    return out


def compute_control(frame: Frame, params: ModelParams) -> ControlGrid:
    """Full pipeline: lagged layers, optional decay, sum, normalize, optional smoothing."""
    spec = params.spec
    positions = frame.positions()
    velocities = frame.velocities()
    signs = frame.team_signs()
    total = np.zeros(spec.shape)
    for eta in params.lags:
        idx, dist = _nearest_arrays(positions + eta * velocities, spec)
        layer = signs[idx]
        if params.decay_active:
            layer = layer * decay_multiplier(dist, params.xi, params.decay_scale)
        total += layer

    if params.decay_active:
        peak = np.abs(total).max()
        if peak > 0:
            total = total / peak
    else:
        total = total / len(params.lags)

    if params.smoothing_active:
        total = smooth(total, params.tau)
    return ControlGrid(spec, total)
