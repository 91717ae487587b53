# Voronoi layers from nearest-neighbour queries
# =============================================
#
# A single frame of 22 players, assigned cell by cell to the nearest player.
# Extrapolating positions with a lag gives a second diagram; averaging several
# lags is what makes the lagged models react to player movement.

from pathlib import Path

import numpy as np

from knnpitch import GridSpec, ModelParams, compute_control, render_png, voronoi_layer
from knnpitch.render import RenderOptions
from knnpitch.synthetic import random_frame

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

rng = np.random.default_rng(3)
frame = random_frame(rng)
spec = GridSpec()  # 105 x 68 one-metre cells

# %% one layer per lag
for eta in (0, 10, 25):
    layer, dist = voronoi_layer(frame, eta, spec)
    home_share = np.mean(layer.values > 0)
    print(f"lag {eta:2d}: home owns {home_share:.1%} of the pitch, "
          f"mean distance to owner {dist.mean():.1f} m")

# %% averaging lags: cells where the owner changes over time get intermediate values
combined = compute_control(frame, ModelParams(lags=(0, 10, 25)))
levels, counts = np.unique(combined.values, return_counts=True)
for level, count in zip(levels, counts):
    print(f"value {level:+.3f}: {count} cells")

with open(out_dir / "01_lagged_layers.png", "wb") as fh:
    render_png(combined, frame, RenderOptions(output_pixels_per_cell=6), fh)
print("wrote", out_dir / "01_lagged_layers.png")
