"""Nearest-neighbour pitch control for soccer tracking data."""

from .baseline_spearman import SpearmanParams, arrival_time, spearman_grid
from .grid import ControlGrid, GridFormatError, GridSpec, cell_center, export_grid, import_grid
from .knn_engine import (EmptyFrameError, ModelParams, NearestResult, apply_distance_decay,
                         compute_control, decay_multiplier, lagged_positions, nearest_player,
                         smooth, voronoi_layer)
from .render import RenderOptions, colormap, render_image, render_png
from .tracking import (ColumnMapping, DuplicateRowError, Frame, ParseError, Play, PlayerState,
                       SchemaError, Team, TrackingError, derive_velocities, parse_tracking,
                       write_tracking)

__version__ = "0.1.0"
