"""PNG heatmaps of control grids: Home blue, Away red, white where uncertain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import BinaryIO

import numpy as np
from PIL import Image, ImageDraw

from .grid import ControlGrid
from .tracking import Frame, Team

RGB = tuple[int, int, int]
WHITE = (255, 255, 255)


@dataclass(frozen=True)
class RenderOptions:
    output_pixels_per_cell: int = 8
    draw_players: bool = True
    draw_ball: bool = True
    home_color: RGB = (0, 0, 255)
    away_color: RGB = (255, 0, 0)

    def __post_init__(self):
        if int(self.output_pixels_per_cell) != self.output_pixels_per_cell \
                or self.output_pixels_per_cell < 1:
            raise ValueError("output_pixels_per_cell must be an integer >= 1")
        for color in (self.home_color, self.away_color):
            if len(color) != 3 or any(not (0 <= int(c) <= 255) or int(c) != c for c in color):
                raise ValueError(f"invalid RGB color {color!r}")


def _colorize(values: np.ndarray, home: RGB, away: RGB) -> np.ndarray:
    v = np.clip(np.asarray(values, dtype=float), -1.0, 1.0)[..., None]
    white = np.array(WHITE, dtype=float)
    target = np.where(v >= 0, np.array(home, dtype=float), np.array(away, dtype=float))
    rgb = white + np.abs(v) * (target - white)
    # truncate, with a small tolerance so exact endpoints survive rounding
    return np.floor(rgb + 1e-9).astype(np.uint8)


def colormap(value: float, home_color: RGB = (0, 0, 255),
             away_color: RGB = (255, 0, 0)) -> RGB:
    """Linear blend from white at 0 to ``home_color`` at +1 / ``away_color`` at -1."""
    return tuple(int(c) for c in _colorize(np.array(value), home_color, away_color))


def render_image(grid: ControlGrid, frame: Frame | None = None,
                 opts: RenderOptions = RenderOptions()) -> Image.Image:
    spec = grid.spec
    ppc = int(opts.output_pixels_per_cell)
    # row 0 of the grid is y nearest 0, which belongs at the bottom of the image
    rgb = _colorize(grid.values[::-1], opts.home_color, opts.away_color)
    rgb = np.repeat(np.repeat(rgb, ppc, axis=0), ppc, axis=1)
    img = Image.fromarray(np.ascontiguousarray(rgb))
    if frame is None or not (opts.draw_players or opts.draw_ball):
        return img

    draw = ImageDraw.Draw(img)
    width, height = img.size
    px_per_m = width / spec.pitch_length

    def to_px(x, y):
        return x * px_per_m, height - y * (height / spec.pitch_width)

    if opts.draw_players:
        r = max(2.0, 0.9 * px_per_m)
        for p in frame.players:
            cx, cy = to_px(p.x, p.y)
            fill = opts.home_color if p.team is Team.HOME else opts.away_color
            draw.ellipse((cx - r, cy - r, cx + r, cy + r), fill=fill, outline=(0, 0, 0),
                         width=max(1, int(r // 4)))
    if opts.draw_ball and frame.ball is not None:
        r = max(1.5, 0.5 * px_per_m)
        cx, cy = to_px(*frame.ball)
        draw.ellipse((cx - r, cy - r, cx + r, cy + r), fill=(255, 215, 0), outline=(0, 0, 0),
                     width=1)
    return img


def render_png(grid: ControlGrid, frame: Frame | None, opts: RenderOptions,
               sink: BinaryIO) -> None:
    """Write an 8-bit RGB PNG of ``grid`` (optionally with player/ball markers) to ``sink``."""
    img = render_image(grid, frame, opts)
    # fixed encoder settings and no metadata chunks keep output byte-stable
    img.save(sink, format="PNG", optimize=False, compress_level=6)
