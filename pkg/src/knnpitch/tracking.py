"""
Tracking-data ingestion.

Rows of a tracking CSV are grouped into plays and frames, coordinates are
converted to meters on a 105 x 68 pitch, and per-frame velocities (meters per
frame) are derived from consecutive frames of the same player.

The default :class:`ColumnMapping` targets the Friends of Tracking "Last Row"
files, which store positions as percent of the pitch and mark the ball with
an empty ``team`` field.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import os
from dataclasses import dataclass, fields, replace
from typing import BinaryIO, Iterable

import numpy as np

PITCH_LENGTH = 105.0
PITCH_WIDTH = 68.0


class TrackingError(ValueError):
    """Base class for ingestion failures."""


class SchemaError(TrackingError):
    pass


class ParseError(TrackingError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DuplicateRowError(TrackingError):
    pass


class Team(enum.Enum):
    HOME = "home"
    AWAY = "away"

    @property
    def sign(self) -> int:
        return 1 if self is Team.HOME else -1

    def swapped(self) -> "Team":
        return Team.AWAY if self is Team.HOME else Team.HOME


@dataclass(frozen=True)
class PlayerState:
    player_id: str
    team: Team
    x: float
    y: float
    dx: float = 0.0
    dy: float = 0.0


@dataclass(frozen=True)
class Frame:
    """All players (and optionally the ball) at one time-sample."""

    frame_index: int
    players: tuple[PlayerState, ...]
    ball: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not self.players:
            raise TrackingError(f"frame {self.frame_index} has no players")
        ids = [p.player_id for p in self.players]
        if len(set(ids)) != len(ids):
            raise TrackingError(f"frame {self.frame_index} has duplicate player ids")

    def positions(self) -> np.ndarray:
        """(n, 2) array of player positions in meters."""
        return np.array([(p.x, p.y) for p in self.players], dtype=float)

    def velocities(self) -> np.ndarray:
        return np.array([(p.dx, p.dy) for p in self.players], dtype=float)

    def team_signs(self) -> np.ndarray:
        """+1 for Home players, -1 for Away players."""
        return np.array([p.team.sign for p in self.players], dtype=float)

    def swap_teams(self) -> "Frame":
        players = tuple(replace(p, team=p.team.swapped()) for p in self.players)
        return replace(self, players=players)


@dataclass(frozen=True)
class Play:
    play_id: str
    frames: tuple[Frame, ...]
    frame_rate: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        idx = [f.frame_index for f in self.frames]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise TrackingError(f"play {self.play_id!r}: frame indices not strictly increasing")

    def frame(self, frame_index: int) -> Frame:
        for f in self.frames:
            if f.frame_index == frame_index:
                return f
        raise KeyError(frame_index)


@dataclass(frozen=True)
class ColumnMapping:
    """
    Names of the CSV columns and how to interpret their values.

    ``units`` is either ``"percent"`` (0-100 along each pitch axis) or
    ``"meters"``. Rows whose team value is empty or equals ``ball_token`` are
    taken as the ball position for that frame.
    """

    play: str = "play"
    frame: str = "frame"
    player: str = "player"
    team: str = "team"
    x: str = "x"
    y: str = "y"
    units: str = "percent"
    ball_token: str = "ball"
    home_token: str = "attack"
    away_token: str = "defense"
    frame_rate: float = 20.0
    pitch_length: float = PITCH_LENGTH
    pitch_width: float = PITCH_WIDTH

    def __post_init__(self):
        if self.units not in ("percent", "meters"):
            raise ValueError(f"units must be 'percent' or 'meters', got {self.units!r}")
        if self.home_token == self.away_token:
            raise ValueError("home_token and away_token must differ")

    @classmethod
    def from_config(cls, text: str) -> "ColumnMapping":
        """
        Build a mapping from ``key=value`` lines. Blank lines and lines
        starting with ``#`` are ignored; unknown keys are an error.
        """
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in types:
                raise ValueError(f"config line {lineno}: unknown key {key!r}")
            kwargs[key] = float(value) if types[key] == "float" else value
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ColumnMapping":
        with open(path, encoding="utf-8") as fh:
            return cls.from_config(fh.read())


# Schema written by write_tracking: meters, explicit home/away labels.
CANONICAL_MAPPING = ColumnMapping(units="meters", home_token="home", away_token="away")


def _to_float(value: str, column: str, row: int) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ParseError(f"non-numeric {column!r} value {value!r}", row) from None
    if not math.isfinite(out):
        raise ParseError(f"non-finite {column!r} value {value!r}", row)
    return out


def _to_frame_index(value: str, column: str, row: int) -> int:
    f = _to_float(value, column, row)
    if f != int(f) or f < 0:
        raise ParseError(f"frame index must be a non-negative integer, got {value!r}", row)
    return int(f)


def parse_tracking(source: BinaryIO | bytes | str | os.PathLike,
                   mapping: ColumnMapping = ColumnMapping()) -> list[Play]:
    """
    Parse a tracking CSV into plays, one per distinct play value, in order of
    first appearance. Frames are sorted by index and velocities derived.

    ``source`` may be a binary stream, raw bytes or a filesystem path.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    text = io.StringIO(data.decode("utf-8-sig"), newline="")
    reader = csv.DictReader(text)
    if reader.fieldnames is None:
        raise SchemaError("missing header row")
    header = set(reader.fieldnames)
    for attr in ("play", "frame", "player", "team", "x", "y"):
        column = getattr(mapping, attr)
        if column not in header:
            raise SchemaError(f"missing column {column!r} (mapped as {attr})")

    if mapping.units == "percent":
        sx, sy = mapping.pitch_length / 100.0, mapping.pitch_width / 100.0
    else:
        sx = sy = 1.0

    # play -> frame -> {player_id: PlayerState}, plus ball positions
    players: dict[str, dict[int, dict[str, PlayerState]]] = {}
    balls: dict[tuple[str, int], tuple[float, float]] = {}
    # header is line 1, so the first data row is line 2
    for rownum, row in enumerate(reader, start=2):
        play_id = row[mapping.play]
        if play_id is None:
            raise ParseError("short row", rownum)
        frame_index = _to_frame_index(row[mapping.frame], mapping.frame, rownum)
        x = _to_float(row[mapping.x], mapping.x, rownum) * sx
        y = _to_float(row[mapping.y], mapping.y, rownum) * sy
        team_value = (row[mapping.team] or "").strip()
        frames = players.setdefault(play_id, {})
        by_player = frames.setdefault(frame_index, {})

        if team_value == "" or team_value == mapping.ball_token:
            if (play_id, frame_index) in balls:
                raise DuplicateRowError(
                    f"row {rownum}: duplicate ball row for play {play_id!r} frame {frame_index}")
            balls[(play_id, frame_index)] = (x, y)
            continue
        if team_value == mapping.home_token:
            team = Team.HOME
        elif team_value == mapping.away_token:
            team = Team.AWAY
        else:
            raise ParseError(f"unknown team value {team_value!r}", rownum)

        player_id = (row[mapping.player] or "").strip()
        if player_id in by_player:
            raise DuplicateRowError(
                f"row {rownum}: duplicate row for play {play_id!r} frame {frame_index} "
                f"player {player_id!r}")
        by_player[player_id] = PlayerState(player_id, team, x, y)

    plays = []
    for play_id, frames in players.items():
        built = []
        for frame_index in sorted(frames):
            by_player = frames[frame_index]
            if not by_player:
                raise TrackingError(
                    f"play {play_id!r} frame {frame_index} contains only a ball row")
            built.append(Frame(frame_index, tuple(by_player.values()),
                               balls.get((play_id, frame_index))))
        plays.append(derive_velocities(Play(play_id, tuple(built), mapping.frame_rate)))
    return plays


def derive_velocities(play: Play) -> Play:
    """
    Set each player's dx/dy to the displacement since the preceding frame.
    Players missing from the preceding frame (and everyone in the first frame)
    get zero velocity.
    """
    frames = []
    previous: dict[str, PlayerState] = {}
    for frame in play.frames:
        updated = []
        for p in frame.players:
            prev = previous.get(p.player_id)
            if prev is None:
                updated.append(replace(p, dx=0.0, dy=0.0))
            else:
                updated.append(replace(p, dx=p.x - prev.x, dy=p.y - prev.y))
        frames.append(replace(frame, players=tuple(updated)))
        previous = {p.player_id: p for p in frame.players}
    return replace(play, frames=tuple(frames))


def write_tracking(plays: Iterable[Play], sink: BinaryIO,
                   mapping: ColumnMapping = CANONICAL_MAPPING) -> None:
    """Write plays as CSV using ``mapping`` (meters by default)."""
    if mapping.units == "percent":
        sx, sy = 100.0 / mapping.pitch_length, 100.0 / mapping.pitch_width
    else:
        sx = sy = 1.0
    text = io.StringIO(newline="")
    writer = csv.writer(text, lineterminator="\n")
    writer.writerow([mapping.play, mapping.frame, mapping.player, mapping.team,
                     mapping.x, mapping.y])
    for play in plays:
        for frame in play.frames:
            for p in frame.players:
                token = mapping.home_token if p.team is Team.HOME else mapping.away_token
                writer.writerow([play.play_id, frame.frame_index, p.player_id, token,
                                 repr(p.x * sx), repr(p.y * sy)])
            if frame.ball is not None:
                writer.writerow([play.play_id, frame.frame_index, "ball", mapping.ball_token,
                                 repr(frame.ball[0] * sx), repr(frame.ball[1] * sy)])
    sink.write(text.getvalue().encode("utf-8"))
