from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def build_world(layout, rows=10, cols=10, chromosome=(False, False, False), **cfg):
    """World with agents pinned at given cells.

    ``layout`` is a list of (role, row, col, emotion). Returns the world and
    the agent ids in layout order.
    """
    from antcrowd.domain import Placement, Role, ScenarioConfig, init_state

    counts = {r: 0 for r in Role}
    for role, *_ in layout:
        counts[role] += 1
    config = ScenarioConfig(
        counts[Role.CIVILIAN], counts[Role.ACTIVIST], counts[Role.COP], rows=rows, cols=cols,
        placements=tuple(Placement(role, r, c, e) for role, r, c, e in layout), **cfg,
    )
    world = init_state(config, np.random.default_rng(0))
    ids = [int(world.grid.occupancy[r, c]) for _, r, c, _ in layout]
    world.chromosome[:] = np.array(chromosome, dtype=bool)
    return world, ids


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
