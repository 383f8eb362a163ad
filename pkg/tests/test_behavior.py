from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antcrowd.behavior import (
    MoveDecision,
    Rationale,
    choose_move,
    choose_moves,
    commit_moves,
    death_phase,
    death_probabilities,
    death_probability,
    expected_cell_benefit,
    must_move,
    update_warning,
)
from antcrowd.domain import Agent, Role, StrategyChromosome
from antcrowd.game import deterrent_force, game_phase, total_forces
from conftest import build_world

CIV, ACT, COP = Role.CIVILIAN, Role.ACTIVIST, Role.COP
DEFECT = (True, True, True)


def agent(i, role, pos, e, **kw):
    return Agent(id=i, role=role, position=pos, emotion=e,
                 chromosome=StrategyChromosome((False, False, False)), **kw)


def e_for(force):
    return 2 * math.asin(force) / math.pi


def test_must_move_examples():
    me = agent(0, COP, (5, 5), e_for(0.7))
    assert not must_move(me, [me])
    crowd = [me, agent(1, ACT, (5, 6), -e_for(0.7)), agent(2, ACT, (4, 4), -e_for(0.7))]
    assert must_move(me, crowd)
    act = agent(0, ACT, (5, 5), -0.5)
    assert not must_move(act, [act, agent(1, ACT, (5, 6), -0.9), agent(2, ACT, (6, 6), -0.9)])


def test_must_move_ignores_distance_two():
    me = agent(0, COP, (5, 5), 0.1)
    assert not must_move(me, [me, agent(1, ACT, (5, 7), -0.9)])


def test_expected_benefit_at_own_cell_equals_game():
    w, ids = build_world([(COP, 2, 2, 0.5), (ACT, 2, 4, -0.5), (ACT, 3, 4, -0.5)], chromosome=DEFECT)
    force = deterrent_force(w.emotion)
    game_phase(w, force)
    cop = ids[0]
    assert expected_cell_benefit(w, cop, (2, 2), force) == w.benefit_cur[cop]


def test_expected_benefit_out_of_range_is_zero():
    w, ids = build_world([(COP, 0, 0, 0.5), (ACT, 0, 9, -0.5)], pr=3.0)
    assert expected_cell_benefit(w, ids[0], (1, 1)) == 0.0


def test_attack_steps_toward_lone_activist(rng):
    w, (cop, act) = build_world([(COP, 5, 2, 0.5), (ACT, 5, 5, -0.5)], chromosome=DEFECT)
    d = choose_move(w, cop, rng)
    assert d == MoveDecision(cop, (5, 3), Rationale.ATTACK)


def test_protect_and_harass_head_for_civilians(rng):
    w, (cop, act, civ) = build_world([(COP, 0, 0, 0.5), (ACT, 9, 9, -0.5), (CIV, 0, 4, 0.1)])
    d = choose_move(w, cop, rng)
    assert d.rationale is Rationale.PROTECT and d.target == (0, 1)
    w2, (cop2, act2, civ2) = build_world([(COP, 9, 0, 0.5), (ACT, 4, 4, -0.5), (CIV, 4, 7, 0.1)])
    d = choose_move(w2, act2, rng)
    assert d.rationale is Rationale.HARASS and d.target == (4, 5)


def test_drift_searches_whole_grid(rng):
    w, (cop, act) = build_world([(COP, 0, 0, 0.5), (ACT, 19, 19, -0.5)], rows=20, cols=20,
                                pr=5.0, chromosome=DEFECT)
    d = choose_move(w, cop, rng)
    assert d == MoveDecision(cop, (1, 1), Rationale.DRIFT)


def test_cooperator_without_civilians_stays(rng):
    w, (cop, act) = build_world([(COP, 0, 0, 0.5), (ACT, 5, 5, -0.5)])
    assert choose_move(w, cop, rng).stays


def test_civilian_moves_toward_cops(rng):
    layout = [(CIV, 5, 5, 0.1), (COP, 1, 4, 0.5), (COP, 1, 5, 0.5), (COP, 1, 6, 0.5)]
    w, ids = build_world(layout, pr=3.5)
    force = deterrent_force(w.emotion)
    # brute force the safety score of all 9 candidates
    best, score = None, -1.0
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            cell = (5 + dr, 5 + dc)
            s = sum(force[i] for i in ids[1:] if math.dist(cell, w.pos[i]) <= 3.5)
            if s > score:
                best, score = cell, s
    d = choose_move(w, ids[0], rng)
    assert d.rationale is Rationale.SEEK_SAFETY
    assert d.target == best and best[0] == 4


def test_civilian_with_no_cops_stays(rng):
    w, ids = build_world([(CIV, 5, 5, 0.1), (ACT, 5, 6, -0.5)])
    assert choose_move(w, ids[0], rng).stays


def test_enclosed_agent_stays(rng):
    layout = [(COP, 1, 1, 0.1)] + [(ACT, 1 + dr, 1 + dc, -0.9)
                                   for dr in (-1, 0, 1) for dc in (-1, 0, 1) if dr or dc]
    w, ids = build_world(layout, rows=3, cols=3)
    d = choose_move(w, ids[0], rng)
    assert d.rationale is Rationale.FORCED and d.stays


def test_forced_agent_takes_best_empty_cell(rng):
    layout = [(COP, 5, 5, 0.1), (ACT, 5, 6, -0.9), (ACT, 4, 6, -0.9)]
    w, ids = build_world(layout, pr=1.5)
    force = deterrent_force(w.emotion)
    d = choose_move(w, ids[0], rng, force)
    assert d.rationale is Rationale.FORCED and d.target is not None
    scores = {c: expected_cell_benefit(w, ids[0], c, force) for c in w.grid.empty_neighbors((5, 5))}
    assert scores[d.target] == max(scores.values())


def test_targets_are_moore_neighbours_or_stay():
    from antcrowd.domain import ScenarioConfig, init_state

    w = init_state(ScenarioConfig(60, 40, 40, rows=15, cols=15), np.random.default_rng(3))
    for d in choose_moves(w, np.random.default_rng(4)):
        if d.target is not None:
            r, c = w.pos[d.agent_id]
            assert max(abs(d.target[0] - r), abs(d.target[1] - c)) == 1
            assert w.grid.is_empty(d.target)


def test_commit_conflict_one_winner():
    w, (a, b) = build_world([(CIV, 0, 0, 0.1), (CIV, 0, 2, 0.1)])
    moves = [MoveDecision(a, (0, 1), Rationale.SEEK_SAFETY), MoveDecision(b, (0, 1), Rationale.SEEK_SAFETY)]
    commit_moves(w, moves, np.random.default_rng(0))
    winner = w.grid.occupant((0, 1))
    assert winner in (a, b)
    loser = b if winner == a else a
    assert tuple(w.pos[loser]) in ((0, 0), (0, 2))
    w.check_occupancy()


def test_commit_same_seed_same_winner():
    winners = set()
    for _ in range(3):
        w, (a, b) = build_world([(CIV, 0, 0, 0.1), (CIV, 0, 2, 0.1)])
        moves = [MoveDecision(a, (0, 1), Rationale.SEEK_SAFETY), MoveDecision(b, (0, 1), Rationale.SEEK_SAFETY)]
        commit_moves(w, moves, np.random.default_rng(99))
        winners.add(w.grid.occupant((0, 1)))
    assert len(winners) == 1


def test_commit_all_stay_is_identity(rng):
    w, ids = build_world([(CIV, 0, 0, 0.1), (COP, 3, 3, 0.5)])
    before = w.grid.occupancy.copy()
    commit_moves(w, [MoveDecision(i, None, Rationale.DRIFT) for i in ids], rng)
    assert np.array_equal(before, w.grid.occupancy)


def test_death_probability_examples():
    assert death_probability(1.3, 1.3) == pytest.approx(0.9, abs=1e-12)
    assert death_probability(1.0, 0.0) == 0.0
    assert death_probability(1.0, 2.0) == pytest.approx(0.99, abs=1e-12)
    assert death_probability(0.0, 1.0) < 1.0


@settings(max_examples=10_000)
@given(
    same=st.floats(1e-3, 50), opp=st.floats(0, 50), bump=st.floats(0, 10),
)
def test_death_probability_range_and_monotone(same, opp, bump):
    p = death_probability(same, opp)
    assert 0.0 <= p < 1.0
    assert death_probability(same, opp + bump) >= p


def test_vector_death_matches_scalar():
    from antcrowd.domain import ScenarioConfig, init_state

    w = init_state(ScenarioConfig(30, 30, 30, rows=12, cols=12, pr=4.0), np.random.default_rng(8))
    w.alive[[3, 40]] = False
    force = deterrent_force(w.emotion)
    p = death_probabilities(w, force)
    agents = w.agents()
    for a in agents:
        if not a.alive or a.role is CIV:
            assert p[a.id] == 0
        else:
            f, fh = total_forces(a, agents, 4.0)
            assert p[a.id] == pytest.approx(death_probability(f, fh), abs=1e-12)


def test_warning_examples():
    a = agent(0, COP, (0, 0), 0.5, warn_count=7, t_warn=0.9, t_warn_time=8)
    assert update_warning(a, 0.95) and a.warn_count == 8
    assert not update_warning(a, 0.95) and a.warn_count == 9
    b = agent(1, COP, (0, 0), 0.5, warn_count=3, t_warn=0.7)
    update_warning(b, 0.5)
    assert b.warn_count == 3


def test_death_phase_frees_cell_and_freezes_agent():
    w, (cop, act) = build_world([(COP, 0, 0, 0.1), (ACT, 0, 1, -0.9)])
    w.t_warn[:] = 0.5
    w.t_warn_time[:] = 0
    dead = death_phase(w, deterrent_force(w.emotion))
    assert dead.tolist() == [cop]
    assert not w.alive[cop] and w.grid.is_empty((0, 0))
    assert tuple(w.pos[cop]) == (0, 0)
    w.check_occupancy()


def test_cooperators_without_opponents_never_die():
    w, ids = build_world([(COP, 0, 0, 0.5), (COP, 0, 1, 0.5), (CIV, 2, 2, 0.1)])
    w.t_warn[:] = 0.0
    w.t_warn_time[:] = 0
    assert len(death_phase(w, deterrent_force(w.emotion))) == 0
