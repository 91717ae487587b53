"""
Command-line interface: ``knnpitch {compute,render,compare,bench}``.

Exit codes: 0 success, 1 bad usage, 2 data problems (unknown play or frame,
unreadable or malformed input).
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .baseline_spearman import SpearmanParams, spearman_grid
from .grid import ControlGrid, GridFormatError, GridSpec, export_grid, import_grid
from .knn_engine import ModelParams, compute_control
from .render import RenderOptions, render_png
from .synthetic import random_frame
from .tracking import ColumnMapping, Play, TrackingError, parse_tracking

PRESETS: dict[str, ModelParams] = {
    "voronoi": ModelParams(lags=(0,), xi=None, tau=None),
    "spearman_like": ModelParams(lags=(0, 10, 25), xi=None, tau=6),
    "fernandez_like": ModelParams(lags=(0, 10, 25), xi=350.0, tau=6),
}


_UNSET = object()


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- arguments

def _grid_dims(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)[xX](\d+)", text.strip())
    if not m or int(m.group(1)) < 1 or int(m.group(2)) < 1:
        raise argparse.ArgumentTypeError(f"expected WxH, e.g. 105x68, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _lags(text: str) -> tuple[int, ...]:
    try:
        lags = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"lags must be comma-separated integers, got {text!r}")
    if not lags or any(eta < 0 for eta in lags):
        raise argparse.ArgumentTypeError("lags must be non-empty and non-negative")
    return lags


def _optional_float(text: str) -> float | None:
    if text.lower() == "none":
        return None
    return float(text)


def _optional_int(text: str) -> int | None:
    if text.lower() == "none":
        return None
    return int(text)


def _add_data_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("tracking data")
    g.add_argument("--input", required=required, help="tracking CSV file")
    g.add_argument("--play", help="play id (may be omitted when the file holds one play)")
    g.add_argument("--mapping", help="column mapping config file (key=value lines)")
    g.add_argument("--units", choices=["percent", "meters"])
    g.add_argument("--home-token")
    g.add_argument("--away-token")
    g.add_argument("--ball-token")


def _add_model_args(p: argparse.ArgumentParser, suffix: str = "", label: str = "") -> None:
    g = p.add_argument_group(f"model{label}")
    dest = suffix.replace("-", "_")
    g.add_argument(f"--preset{suffix}", dest=f"preset{dest}", choices=sorted(PRESETS))
    g.add_argument(f"--lags{suffix}", dest=f"lags{dest}", type=_lags, help="e.g. 0,10,25")
    g.add_argument(f"--xi{suffix}", dest=f"xi{dest}", type=_optional_float, default=_UNSET,
                   help="decay base; 'none' or 1 disables")
    g.add_argument(f"--tau{suffix}", dest=f"tau{dest}", type=_optional_int, default=_UNSET,
                   help="smoothing window; 'none' or 1 disables")
    g.add_argument(f"--decay-scale{suffix}", dest=f"decay_scale{dest}", type=float,
                   default=_UNSET)


def _add_grid_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=_grid_dims, default=(105, 68), help="cells, WxH (default 105x68)")


def _mapping(args) -> ColumnMapping:
    try:
        mapping = ColumnMapping.from_file(args.mapping) if args.mapping else ColumnMapping()
    except OSError as exc:
        raise DataError(f"cannot read mapping: {exc}")
    except ValueError as exc:
        raise UsageError(f"bad mapping config: {exc}")
    overrides = {k: getattr(args, k) for k in ("units", "home_token", "away_token", "ball_token")
                 if getattr(args, k, None) is not None}
    return replace(mapping, **overrides) if overrides else mapping


def _model(args, suffix: str = "") -> ModelParams:
    preset = getattr(args, f"preset{suffix}")
    lags = getattr(args, f"lags{suffix}")
    if preset is None and lags is None:
        raise UsageError(f"give --preset{suffix.replace('_', '-')} or --lags{suffix.replace('_', '-')}")
    base = PRESETS[preset] if preset else ModelParams()
    changes = {"spec": GridSpec(*args.grid)}
    if lags is not None:
        changes["lags"] = lags
        if preset is None:
            changes.update(xi=None, tau=None)
    for name in ("xi", "tau", "decay_scale"):
        value = getattr(args, f"{name}{suffix}")
        if value is not _UNSET:
            changes[name] = value
    try:
        return replace(base, **changes)
    except ValueError as exc:
        raise UsageError(str(exc))


def _load_play(args) -> Play:
    try:
        plays = parse_tracking(args.input, _mapping(args))
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc}")
    except TrackingError as exc:
        raise DataError(str(exc))
    if args.play is None:
        if len(plays) != 1:
            raise UsageError(f"--play is required; file holds {len(plays)} plays")
        return plays[0]
    for play in plays:
        if play.play_id == args.play:
            return play
    known = ", ".join(repr(p.play_id) for p in plays[:10])
    raise DataError(f"unknown play {args.play!r}; available: {known}")


def _select_frames(play: Play, spec: str | None):
    """``spec`` is ``None`` (all), ``N`` or ``A:B`` (inclusive) in frame-index units."""
    if spec is None:
        return list(play.frames)
    m = re.fullmatch(r"(\d+)(?::(\d+))?", spec.strip())
    if not m:
        raise UsageError(f"bad frame selector {spec!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    frames = [f for f in play.frames if lo <= f.frame_index <= hi]
    if not frames:
        raise DataError(f"play {play.play_id!r} has no frame in {spec}")
    return frames


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_") or "play"


def _write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def _map_frames(fn, frames, threads: int):
    if threads <= 1 or len(frames) <= 1:
        return [fn(f) for f in frames]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, frames))


# ---------------------------------------------------------------- commands

def cmd_compute(args) -> int:
    params = _model(args)
    play = _load_play(args)
    if args.all_frames:
        frames = list(play.frames)
    elif args.frame is not None:
        try:
            frames = [play.frame(args.frame)]
        except KeyError:
            raise DataError(f"play {play.play_id!r} has no frame {args.frame}")
    else:
        raise UsageError("give --frame N or --all-frames")
    _log(f"model: {params.describe()}")

    out = Path(args.out)
    single_file = len(frames) == 1 and not args.all_frames and out.suffix != ""
    grids = _map_frames(lambda f: compute_control(f, params), frames, args.threads)
    for frame, grid in zip(frames, grids):
        path = out if single_file else out / f"{_slug(play.play_id)}_f{frame.frame_index:05d}.{args.format}"
        _write(path, export_grid(grid, args.format))
        _log(f"wrote {path}")
    return 0


def cmd_render(args) -> int:
    opts = RenderOptions(output_pixels_per_cell=args.ppc, draw_players=not args.no_players,
                         draw_ball=not args.no_ball)
    frame = None
    if args.input:
        if args.frame is None:
            raise UsageError("--frame is required with --input")
        play = _load_play(args)
        try:
            frame = play.frame(args.frame)
        except KeyError:
            raise DataError(f"play {play.play_id!r} has no frame {args.frame}")

    if args.grid_file:
        fmt = args.grid_format or Path(args.grid_file).suffix.lstrip(".").lower() or "csv"
        try:
            grid = import_grid(Path(args.grid_file).read_bytes(), fmt)
        except OSError as exc:
            raise DataError(f"cannot read {args.grid_file}: {exc}")
        except GridFormatError as exc:
            raise DataError(f"{args.grid_file}: {exc}")
    elif frame is not None:
        if args.baseline == "spearman":
            sp = SpearmanParams(beta=args.beta, v_max=args.v_max, spec=GridSpec(*args.grid))
            _log(f"model: {sp.describe()}")
            grid = spearman_grid(frame, sp)
        else:
            params = _model(args)
            _log(f"model: {params.describe()}")
            grid = compute_control(frame, params)
    else:
        raise UsageError("give --grid-file or --input/--frame with model flags")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(out, "wb") as fh:
            render_png(grid, frame, opts, fh)
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc}")
    _log(f"wrote {out}")
    return 0


def compare_grids(a: np.ndarray, b: np.ndarray) -> dict[str, float]:
    """Sign agreement fraction, mean and max absolute difference of two grids."""
    a, b = np.asarray(a), np.asarray(b)
    diff = np.abs(a - b)
    return {
        "sign_agreement": float(np.mean(np.sign(a) == np.sign(b))),
        "mad": float(diff.mean()),
        "max_abs_diff": float(diff.max()),
    }


def _format_stats(stats: dict[str, float]) -> str:
    return " ".join(f"{k}={v:.6f}" for k, v in stats.items())


def cmd_compare(args) -> int:
    params_a = _model(args)
    if args.baseline == "spearman":
        model_b = SpearmanParams(beta=args.beta, v_max=args.v_max, t_floor=args.t_floor,
                                 spec=GridSpec(*args.grid))
        run_b = lambda f: spearman_grid(f, model_b)
    else:
        model_b = _model(args, "_b")
        run_b = lambda f: compute_control(f, model_b)
    play = _load_play(args)
    frames = _select_frames(play, args.frames)
    _log(f"model A: {params_a.describe()}")
    _log(f"model B: {model_b.describe()}")

    def run(frame):
        return compute_control(frame, params_a).values, run_b(frame).values

    results = _map_frames(run, frames, args.threads)
    per_frame = []
    for frame, (ga, gb) in zip(frames, results):
        stats = compare_grids(ga, gb)
        per_frame.append(stats)
        print(f"frame {frame.frame_index}: {_format_stats(stats)}")
        if args.diff_out:
            diff = ControlGrid(GridSpec(*args.grid), ga - gb)
            path = Path(args.diff_out) / f"{_slug(play.play_id)}_f{frame.frame_index:05d}_diff.{args.format}"
            _write(path, export_grid(diff, args.format))
    aggregate = {
        "sign_agreement": float(np.mean([s["sign_agreement"] for s in per_frame])),
        "mad": float(np.mean([s["mad"] for s in per_frame])),
        "max_abs_diff": float(np.max([s["max_abs_diff"] for s in per_frame])),
    }
    print(f"aggregate: frames={len(per_frame)} {_format_stats(aggregate)}")
    return 0


def cmd_bench(args) -> int:
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.baseline == "spearman":
        model = SpearmanParams(beta=args.beta, spec=GridSpec(*args.grid))
        fn = lambda f: spearman_grid(f, model)
    else:
        if args.preset is None and args.lags is None:
            args.preset = "spearman_like"
        model = _model(args)
        fn = lambda f: compute_control(f, model)
    _log(f"model: {model.describe()}")
    rng = np.random.default_rng(args.seed)
    frames = [random_frame(rng, frame_index=k) for k in range(args.frames)]
    fn(frames[0])  # warm-up: grid centers are cached per spec

    def timed(frame):
        t0 = time.perf_counter()
        fn(frame)
        return time.perf_counter() - t0

    start = time.perf_counter()
    latencies = np.array(_map_frames(timed, frames, args.threads))
    elapsed = time.perf_counter() - start
    p50, p95, p99 = np.percentile(latencies * 1e3, [50, 95, 99])
    print(f"frames: {len(latencies)}")
    print(f"threads: {args.threads}")
    print(f"total_seconds: {elapsed:.6f}")
    print(f"frames_per_second: {len(latencies) / elapsed:.2f}")
    print(f"latency_p50_ms: {p50:.4f}")
    print(f"latency_p95_ms: {p95:.4f}")
    print(f"latency_p99_ms: {p99:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="knnpitch", description="Nearest-neighbour pitch control surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="compute control grids for tracking frames")
    _add_data_args(p)
    _add_model_args(p)
    _add_grid_arg(p)
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--frame", type=int)
    sel.add_argument("--all-frames", action="store_true")
    p.add_argument("--out", required=True, help="output file, or directory for several frames")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("render", help="render a control grid as a PNG heatmap")
    _add_data_args(p, required=False)
    _add_model_args(p)
    _add_grid_arg(p)
    p.add_argument("--frame", type=int)
    p.add_argument("--grid-file", help="previously exported grid (csv or json)")
    p.add_argument("--grid-format", choices=["csv", "json"])
    p.add_argument("--baseline", choices=["spearman"])
    p.add_argument("--beta", type=float, default=2.5)
    p.add_argument("--v-max", type=float, default=5.0)
    p.add_argument("--out", required=True)
    p.add_argument("--ppc", type=int, default=8, help="output pixels per grid cell")
    p.add_argument("--no-players", action="store_true")
    p.add_argument("--no-ball", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("compare", help="compare two models frame by frame")
    _add_data_args(p)
    _add_model_args(p, label=" A")
    _add_model_args(p, "-b", label=" B")
    _add_grid_arg(p)
    p.add_argument("--frames", help="frame index N or inclusive range A:B (default: all)")
    p.add_argument("--baseline", choices=["spearman"], help="use the potential-field baseline as model B")
    p.add_argument("--beta", type=float, default=2.5)
    p.add_argument("--v-max", type=float, default=5.0)
    p.add_argument("--t-floor", type=float, default=0.1)
    p.add_argument("--diff-out", help="directory for per-frame difference grids (A - B)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="time the pipeline on synthetic 22-player frames")
    _add_model_args(p)
    _add_grid_arg(p)
    p.add_argument("--frames", type=int, default=200)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--baseline", choices=["spearman"])
    p.add_argument("--beta", type=float, default=2.5)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _log(f"knnpitch: error: {exc}")
        return 1
    except DataError as exc:
        _log(f"knnpitch: error: {exc}")
        return 2
    except (TrackingError, GridFormatError) as exc:
        _log(f"knnpitch: error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
