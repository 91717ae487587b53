import numpy as np
import pytest

from knnpitch.synthetic import random_frame
from knnpitch.tracking import Frame, PlayerState, Team


@pytest.fixture
def rng():
    return np.random.default_rng(20240419)


def make_frame(*players, ball=None, frame_index=0):
    """``players`` are ``(team, x, y)`` or ``(team, x, y, dx, dy)`` tuples."""
    states = []
    for k, spec in enumerate(players):
        team, x, y, *vel = spec
        dx, dy = vel if vel else (0.0, 0.0)
        states.append(PlayerState(f"p{k}", team, float(x), float(y), float(dx), float(dy)))
    return Frame(frame_index, tuple(states), ball)


@pytest.fixture
def frames22(rng):
    return [random_frame(rng, frame_index=k) for k in range(10)]


H, A = Team.HOME, Team.AWAY


# ---------------------------------------------------------------- acceptance report

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        if report.skipped and isinstance(report.longrepr, tuple):
            title = f"{title} ({report.longrepr[2]})"
        _ACCEPTANCE[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
