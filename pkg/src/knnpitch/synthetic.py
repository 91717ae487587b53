"""Random frames for tests, benchmarks and demos."""

from __future__ import annotations

import numpy as np

from .tracking import Frame, PlayerState, Team


def random_frame(rng: np.random.Generator, n_home: int = 11, n_away: int = 11,
                 max_step: float = 0.4, pitch_length: float = 105.0,
                 pitch_width: float = 68.0, frame_index: int = 0) -> Frame:
    """
    Players uniform on the pitch with per-frame velocities uniform in
    ``[-max_step, max_step]`` meters on each axis (0.4 m/frame is 8 m/s at 20 fps).
    """
    players = []
    for k in range(n_home + n_away):
        team = Team.HOME if k < n_home else Team.AWAY
        x, y = rng.uniform(0, pitch_length), rng.uniform(0, pitch_width)
        dx, dy = rng.uniform(-max_step, max_step, size=2)
        players.append(PlayerState(f"{team.value}{k}", team, float(x), float(y),
                                   float(dx), float(dy)))
    ball = (float(rng.uniform(0, pitch_length)), float(rng.uniform(0, pitch_width)))
    return Frame(frame_index, tuple(players), ball)
