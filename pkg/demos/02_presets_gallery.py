# The three presets next to the potential-field baseline
# ======================================================
#
# voronoi        lags [0]          no decay   no smoothing
# spearman_like  lags [0, 10, 25]  no decay   tau 6
# fernandez_like lags [0, 10, 25]  xi 350     tau 6
#
# Each surface is rendered to demos/output/ with players and ball drawn on top.

from pathlib import Path

import numpy as np

from knnpitch import SpearmanParams, compute_control, render_png, spearman_grid
from knnpitch.cli import PRESETS
from knnpitch.render import RenderOptions
from knnpitch.synthetic import random_frame

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

frame = random_frame(np.random.default_rng(12))
opts = RenderOptions(output_pixels_per_cell=6)

surfaces = {name: compute_control(frame, params) for name, params in PRESETS.items()}
surfaces["potential_field_beta2.5"] = spearman_grid(frame, SpearmanParams(beta=2.5))

for name, grid in surfaces.items():
    v = grid.values
    print(f"{name:24s} min {v.min():+.3f}  max {v.max():+.3f}  "
          f"uncertain (|v| < 0.2) {np.mean(np.abs(v) < 0.2):.1%}")
    with open(out_dir / f"02_{name}.png", "wb") as fh:
        render_png(grid, frame, opts, fh)
