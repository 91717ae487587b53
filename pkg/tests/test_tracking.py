import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knnpitch.tracking import (CANONICAL_MAPPING, ColumnMapping, DuplicateRowError, Frame,
                               ParseError, Play, PlayerState, SchemaError, Team, TrackingError,
                               derive_velocities, parse_tracking, write_tracking)

from pathlib import Path

SAMPLE = Path(__file__).parent / "data" / "lastrow_sample.csv"


def _csv(*rows, header="play,frame,player,team,x,y"):
    return ("\n".join([header, *rows]) + "\n").encode()


@pytest.fixture
def sample():
    return parse_tracking(SAMPLE)


def test_groups_plays_in_order_of_appearance(sample):
    assert [p.play_id for p in sample] == ["Liverpool [1] - 0 Test",
                                           "Barcelona 1 - [2] Real Madrid"]
    assert [f.frame_index for f in sample[0].frames] == [0, 1, 2]
    assert sample[0].frame_rate == 20.0


def test_percent_midpoint_is_pitch_center():
    play, = parse_tracking(_csv("a,0,1,attack,50,50"))
    p = play.frames[0].players[0]
    assert (p.x, p.y) == (52.5, 34.0)
    assert p.team is Team.HOME


def test_velocity_after_scaling(sample):
    p = sample[0].frames[1].players[0]
    assert p.dx == pytest.approx(1.05, abs=1e-12)
    assert p.dy == pytest.approx(1.36, abs=1e-12)


def test_first_frame_is_at_rest(sample):
    for play in sample:
        assert all(p.dx == 0 and p.dy == 0 for p in play.frames[0].players)


def test_ball_rows_become_frame_ball(sample):
    f0 = sample[0].frames[0]
    assert f0.ball == pytest.approx((48.0 * 1.05, 51.0 * 0.68))
    assert all(p.player_id != "0" for p in f0.players)
    assert sample[0].frames[2].ball is None


def test_ball_token_also_marks_ball():
    play, = parse_tracking(_csv("a,0,1,attack,50,50", "a,0,b,ball,10,10"))
    assert play.frames[0].ball == pytest.approx((10.5, 6.8))
    assert len(play.frames[0].players) == 1


def test_player_appearing_mid_play_has_zero_velocity(sample):
    late = [p for p in sample[0].frames[2].players if p.player_id == "11"][0]
    assert (late.dx, late.dy) == (0.0, 0.0)


def test_meters_mode_leaves_coordinates():
    mapping = ColumnMapping(units="meters")
    play, = parse_tracking(_csv("a,0,1,attack,50,34", "a,1,1,attack,51,33.5"), mapping)
    p = play.frames[1].players[0]
    assert (p.x, p.y, p.dx, p.dy) == (51.0, 33.5, 1.0, -0.5)


def test_custom_mapping_from_config():
    text = """
    # provider B
    play = match
    frame = t
    player = pid
    team = side
    units = meters
    home_token = H
    away_token = A
    ball_token = B
    frame_rate = 25
    """
    mapping = ColumnMapping.from_config(text)
    data = _csv("m,3,7,H,1,2", "m,3,8,A,3,4", "m,3,ball,B,5,6", header="match,t,pid,side,x,y")
    play, = parse_tracking(data, mapping)
    assert play.frame_rate == 25.0
    f = play.frames[0]
    assert [p.team for p in f.players] == [Team.HOME, Team.AWAY]
    assert f.ball == (5.0, 6.0)


def test_config_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown key"):
        ColumnMapping.from_config("colour=blue")


def test_missing_column_named():
    with pytest.raises(SchemaError, match="'y'"):
        parse_tracking(_csv("a,0,1,attack,5", header="play,frame,player,team,x"))


def test_non_numeric_coordinate_reports_row():
    with pytest.raises(ParseError, match="row 3") as info:
        parse_tracking(_csv("a,0,1,attack,5,5", "a,0,2,attack,five,5"))
    assert info.value.row == 3


def test_duplicate_row_rejected():
    with pytest.raises(DuplicateRowError):
        parse_tracking(_csv("a,0,1,attack,5,5", "a,0,1,attack,6,6"))


def test_unknown_team_value():
    with pytest.raises(ParseError, match="unknown team"):
        parse_tracking(_csv("a,0,1,referee,5,5"))


def test_frame_requires_players():
    with pytest.raises(TrackingError):
        Frame(0, ())
    with pytest.raises(TrackingError):
        parse_tracking(_csv("a,0,1,attack,5,5", "a,1,b,,5,5"))


def test_duplicate_ids_in_frame_rejected():
    p = PlayerState("x", Team.HOME, 1.0, 1.0)
    with pytest.raises(TrackingError):
        Frame(0, (p, p))


def test_play_frames_strictly_increasing():
    f = Frame(3, (PlayerState("x", Team.HOME, 1.0, 1.0),))
    with pytest.raises(TrackingError):
        Play("p", (f, f))


def test_derive_velocities_subtracts():
    a = Frame(0, (PlayerState("x", Team.HOME, 50.0, 34.0),))
    b = Frame(1, (PlayerState("x", Team.HOME, 51.0, 33.5),))
    play = derive_velocities(Play("p", (a, b)))
    p = play.frames[1].players[0]
    assert (p.dx, p.dy) == (1.0, -0.5)


def test_stationary_player():
    a = Frame(0, (PlayerState("x", Team.AWAY, 20.0, 20.0),))
    b = Frame(1, (PlayerState("x", Team.AWAY, 20.0, 20.0),))
    p = derive_velocities(Play("p", (a, b))).frames[1].players[0]
    assert (p.dx, p.dy) == (0.0, 0.0)


coords = st.floats(-5, 110, allow_nan=False)


@st.composite
def plays(draw):
    n_frames = draw(st.integers(1, 6))
    n_players = draw(st.integers(1, 5))
    frames = []
    for k in range(n_frames):
        players = tuple(PlayerState(f"p{i}", Team.HOME if i % 2 else Team.AWAY,
                                    draw(coords), draw(coords)) for i in range(n_players))
        frames.append(Frame(k * 2, players))
    return derive_velocities(Play("generated", tuple(frames)))


@settings(max_examples=50, deadline=None)
@given(plays())
def test_derive_velocities_idempotent(play):
    assert derive_velocities(play) == play


@settings(max_examples=50, deadline=None)
@given(plays())
def test_velocities_telescope(play):
    for k in range(len(play.frames[0].players)):
        total_dx = sum(f.players[k].dx for f in play.frames)
        total_dy = sum(f.players[k].dy for f in play.frames)
        first, last = play.frames[0].players[k], play.frames[-1].players[k]
        assert total_dx == pytest.approx(last.x - first.x, abs=1e-9)
        assert total_dy == pytest.approx(last.y - first.y, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(plays())
def test_canonical_round_trip(play):
    buf = io.BytesIO()
    write_tracking([play], buf)
    back, = parse_tracking(buf.getvalue(), CANONICAL_MAPPING)
    for fa, fb in zip(play.frames, back.frames):
        a = np.array([(p.x, p.y) for p in fa.players])
        b = np.array([(p.x, p.y) for p in fb.players])
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)


def test_percent_round_trip(sample):
    buf = io.BytesIO()
    write_tracking(sample, buf, ColumnMapping())
    back = parse_tracking(buf.getvalue())
    for pa, pb in zip(sample, back):
        for fa, fb in zip(pa.frames, pb.frames):
            np.testing.assert_allclose(fa.positions(), fb.positions(), rtol=0, atol=1e-9)
            assert fa.ball == pytest.approx(fb.ball) if fa.ball else fb.ball is None
