# How close is the potential-field baseline to a Voronoi diagram?
# ===============================================================
#
# As beta grows, the fastest player's weight dominates and the sign of the
# surface converges to the nearest-player assignment. Cells almost on a
# bisector (nearest Home and nearest Away within 0.5 m) are left out.

import numpy as np

from knnpitch import GridSpec, SpearmanParams, spearman_grid, voronoi_layer
from knnpitch.cli import compare_grids
from knnpitch.synthetic import random_frame

spec = GridSpec()
rng = np.random.default_rng(0)
frames = [random_frame(rng) for _ in range(20)]

xs, ys = spec.centers()


def contested(frame):
    d = np.hypot(xs[None] - frame.positions()[:, 0, None, None],
                 ys[None] - frame.positions()[:, 1, None, None])
    signs = frame.team_signs()
    return np.abs(d[signs > 0].min(axis=0) - d[signs < 0].min(axis=0)) <= 0.5


for beta in (1.0, 2.5, 5.0, 10.0, 20.0, 50.0):
    agree = []
    for frame in frames:
        layer, _ = voronoi_layer(frame, 0, spec)
        pcf = spearman_grid(frame, SpearmanParams(beta=beta)).values
        keep = ~contested(frame)
        agree.append(compare_grids(layer.values[keep], pcf[keep])["sign_agreement"])
    print(f"beta {beta:5.1f}: mean sign agreement {np.mean(agree):.4f}, worst frame {min(agree):.4f}")
