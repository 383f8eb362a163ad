from __future__ import annotations

import json

import numpy as np
import pytest

from antcrowd.cli import resolve_scenario
from antcrowd.domain import (
    CapacityError,
    Grid,
    Placement,
    Role,
    ScenarioConfig,
    ScenarioError,
    ScenarioValidationError,
    Situation,
    Snapshot,
    StrategyChromosome,
    init_state,
    load_scenario,
    parse_scenario,
)


def doc(**over):
    d = {
        "counts": {"civilians": 80, "activists": 50, "cops": 40},
        "grid": {"rows": 20, "cols": 20},
        "emotions": {"civilian": 0.1, "activist": -0.5, "cop": 0.5},
        "thresholds": {"t_a2c": 0.1, "t_c2a": -0.5},
    }
    d.update(over)
    return d


def test_no1_file_loads_exactly(tmp_path):
    p = tmp_path / "no1.json"
    p.write_text(json.dumps(doc()))
    cfg = load_scenario(p)
    assert (cfg.n_civilians, cfg.n_activists, cfg.n_cops) == (80, 50, 40)
    assert (cfg.rows, cfg.cols) == (20, 20)
    assert (cfg.t_a2c, cfg.t_c2a) == (0.1, -0.5)
    assert (cfg.emotion_civilian, cfg.emotion_activist, cfg.emotion_cop) == (0.1, -0.5, 0.5)
    assert cfg.pr == 10 and cfg.a == 0.8 and cfg.delta == 0.1


def test_bundled_no1_matches_table():
    cfg = resolve_scenario("no1")
    assert (cfg.n_civilians, cfg.n_activists, cfg.n_cops, cfg.rows) == (80, 50, 40, 20)


@pytest.mark.parametrize("name", [f"no{k}" for k in range(1, 10)])
def test_every_bundled_scenario_validates_and_initialises(name):
    cfg = resolve_scenario(name)
    w = init_state(cfg, np.random.default_rng(0))
    assert w.n == cfg.n_total
    w.check_occupancy()


def test_empty_world_is_valid():
    cfg = parse_scenario(doc(counts={"civilians": 0, "activists": 0, "cops": 0}))
    assert cfg.n_total == 0
    w = init_state(cfg, np.random.default_rng(1))
    assert w.n == 0


def test_negative_t_a2c_reports_violation():
    with pytest.raises(ScenarioValidationError) as ei:
        parse_scenario(doc(thresholds={"t_a2c": -0.1, "t_c2a": -0.5}))
    assert "T_a2c must be > 0" in ei.value.violations


def test_all_violations_are_listed():
    bad = doc(thresholds={"t_a2c": -0.1, "t_c2a": 0.2, "delta": 0.0}, contagion={"pr": 0})
    with pytest.raises(ScenarioValidationError) as ei:
        parse_scenario(bad)
    v = ei.value.violations
    assert {"T_a2c must be > 0", "T_c2a must be < 0", "delta must be > 0", "PR must be > 0"} <= set(v)


def test_unknown_key_is_named():
    with pytest.raises(ScenarioError) as ei:
        parse_scenario(doc(grid={"rows": 20, "cols": 20, "wrap": True}))
    assert ei.value.field == "grid.wrap"


def test_wrong_type_is_named():
    with pytest.raises(ScenarioError) as ei:
        parse_scenario(doc(counts={"civilians": "80", "activists": 50, "cops": 40}))
    assert ei.value.field == "counts.civilians"


def test_unreadable_file_names_path(tmp_path):
    missing = tmp_path / "absent.json"
    with pytest.raises(ScenarioError, match="absent.json"):
        load_scenario(missing)


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{ nope")
    with pytest.raises(ScenarioError, match="malformed JSON"):
        load_scenario(p)


def test_document_round_trip():
    cfg = resolve_scenario("no8")
    again = parse_scenario(json.loads(json.dumps(cfg.to_document())))
    assert again == cfg


def test_init_three_agents_reproducible():
    cfg = ScenarioConfig(1, 1, 1)
    a = init_state(cfg, np.random.default_rng(42))
    b = init_state(cfg, np.random.default_rng(42))
    assert len({tuple(p) for p in a.pos}) == 3
    assert np.array_equal(a.pos, b.pos)
    assert np.array_equal(a.t_warn, b.t_warn)


def test_init_no4_counts_and_emotions():
    cfg = resolve_scenario("no4")
    w = init_state(cfg, np.random.default_rng(3))
    assert w.n == 90
    for role, n, e in ((Role.CIVILIAN, 10, 0.1), (Role.ACTIVIST, 50, -0.5), (Role.COP, 30, 0.5)):
        m = w.role == int(role)
        assert m.sum() == n
        assert np.all(w.emotion[m] == e)
    assert np.all((w.t_warn >= 0.7) & (w.t_warn <= 0.9))
    assert np.all((w.t_warn_time >= 8) & (w.t_warn_time <= 20))
    assert np.all(w.warn_count == 0) and w.alive.all()
    assert np.all(w.benefit_cur == 0) and np.all(w.benefit_prev == 0)


def test_capacity_error():
    with pytest.raises(CapacityError):
        init_state(ScenarioConfig(401, 0, 0), np.random.default_rng(0))


def test_zero_initial_emotion_is_nudged():
    w = init_state(resolve_scenario("no7"), np.random.default_rng(0))
    assert np.all(w.emotion != 0)


def test_paired_activist_emotions_alternate():
    w = init_state(resolve_scenario("no6"), np.random.default_rng(0))
    act = w.emotion[w.role == int(Role.ACTIVIST)]
    assert set(act.tolist()) == {-0.1, -0.3}
    assert abs(int((act == -0.1).sum()) - int((act == -0.3).sum())) <= 1


def test_placements_pin_cells_and_emotions():
    cfg = ScenarioConfig(
        0, 1, 1, rows=5, cols=5,
        placements=(Placement(Role.COP, 0, 0, 0.9), Placement(Role.ACTIVIST, 4, 4)),
    )
    w = init_state(cfg, np.random.default_rng(0))
    cop = int(np.flatnonzero(w.role == int(Role.COP))[0])
    act = int(np.flatnonzero(w.role == int(Role.ACTIVIST))[0])
    assert tuple(w.pos[cop]) == (0, 0) and w.emotion[cop] == 0.9
    assert tuple(w.pos[act]) == (4, 4) and w.emotion[act] == -0.5


def test_grid_walls_and_neighbours():
    g = Grid(3, 3)
    assert len(g.neighbors((0, 0))) == 3
    assert len(g.neighbors((1, 1))) == 8
    assert not g.in_bounds((3, 0))
    g.place(7, (1, 1))
    assert g.occupant((1, 1)) == 7
    with pytest.raises(ValueError):
        g.place(8, (1, 1))


def test_chromosome_decoding():
    ch = StrategyChromosome((True, False, True))
    assert ch.strategy(Situation.STRONGER).name == "DEFECTION"
    assert ch.strategy(Situation.BALANCED).name == "COOPERATION"
    assert Situation.STRONGER.flipped() is Situation.WEAKER


def test_snapshot_record_round_trip():
    w = init_state(ScenarioConfig(3, 3, 3, rows=6, cols=6), np.random.default_rng(5))
    from antcrowd.engine import snapshot

    s = snapshot(w)
    back = Snapshot.from_record(json.loads(json.dumps(s.to_record())))
    for f in ("role", "pos", "emotion", "force", "strategy", "alive"):
        assert np.array_equal(getattr(s, f), getattr(back, f))
