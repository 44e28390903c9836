import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_schedulers
from lazymatch.bounds import max_sum_exact, sample_solution
from lazymatch.builders import (
    AdversaryBuilder,
    AdversaryError,
    AdversarySolution,
    AdversaryState,
    MinimaxBuilder,
    RandomBuilder,
    ScriptedBuilder,
    check_star,
    choose_d0,
    choose_di,
    make_builder,
    minimax_value,
    random_builder,
    validate_solution,
    worst_case_moves,
)
from lazymatch.game import GameConfig, RoundMove, new_game, run_game
from lazymatch.matching import has_perfect_matching
from lazymatch.schedulers import BalanceScheduler, GreedyScheduler, NoopScheduler


def state_with(alpha, d_count, rounds):
    state = new_game(GameConfig(alpha, d_count))
    for nb, chosen in rounds:
        state.apply_round(RoundMove.of(state.round, nb), chosen)
    return state


@pytest.mark.parametrize("n,alpha,x,ok", [
    (18, 2, (6, 1, 1), True),
    (18, 2, (6, 2, 1), False),   # (6+2)*3 = 24 > 17
    (5, 1, (2, 0), True),
    (5, 1, (3, 0), False),       # 2*3 > 5
    (9, 2, (3, 1), True),
    (9, 2, (3, 1, 2), False),    # not non-increasing
    (4, 1, (-1, 1), True),       # negative x_0 is allowed by the system
    (4, 1, (-2, 1), False),      # total sum negative
    (4, 1, (), False),
])
def test_validate_solution(n, alpha, x, ok):
    assert validate_solution(n, alpha, x) is ok


def test_solution_rejects_negative_x0():
    with pytest.raises(ValueError):
        AdversarySolution(4, 1, (-1, 1))
    with pytest.raises(ValueError):
        AdversarySolution(18, 2, (6, 2, 1))


def test_adversary_phase_layout():
    sol = AdversarySolution(18, 2, (6, 1, 1))
    builder = AdversaryBuilder(sol)
    _, transcript = run_game(NoopScheduler(), builder, sol.config())
    sizes = [len(p) for p in builder.adv.u_sets]
    assert sizes == [6, 2, 2, 8]
    nbs = [mv.neighbors for mv in transcript.moves]
    assert all(nb == frozenset(range(18)) for nb in nbs[:6])
    # with noop every server stays free, so D_0 = 0..5 and the blocks come from X
    assert builder.adv.d_sets[0] == set(range(6))
    assert all(nb == frozenset(range(6, 18)) for nb in nbs[6:8])
    assert len(builder.adv.d_sets[1]) == 2 and len(builder.adv.d_sets[2]) == 2
    s = builder.adv.s
    assert len(s) == 8 and all(nb == frozenset(s) for nb in nbs[10:])
    assert builder.star_checks == 4


def test_choose_d0_skips_held_servers():
    state = state_with(2, 6, [(range(6), {0, 1}), (range(6), {3})])
    assert choose_d0(state, [0, 1], 2) == {2, 4}
    with pytest.raises(AdversaryError):
        choose_d0(state, [0, 1], 4)


def test_choose_di_prefers_free_servers():
    # u0 holds {0, 1}, u1 holds {2}; servers 3, 4 are free
    state = state_with(2, 5, [(range(5), {0, 1}), (range(5), {2})])
    adv = AdversaryState(phase=1, u_sets=[[0], [1]], d_sets=[set()])
    y, block = choose_di(state, adv, 3)
    assert adv.x_free == {3, 4}
    assert y == 0 and block == {0, 3, 4}


def test_choose_di_takes_largest_group():
    state = state_with(2, 4, [(range(4), {0}), (range(4), {1, 2}), (range(4), {3})])
    adv = AdversaryState(phase=1, u_sets=[[0, 1], [2]], d_sets=[set()])
    y, block = choose_di(state, adv, 2)
    assert y == 1 and block == {1, 2}


def test_choose_di_fails_without_candidate():
    # every live server is held by a singleton, so no block of 3 fits
    state = state_with(2, 2, [(range(2), {0}), (range(2), {1})])
    adv = AdversaryState(phase=1, u_sets=[[0], [1]], d_sets=[set()])
    with pytest.raises(AdversaryError):
        choose_di(state, adv, 3)


def test_check_star():
    state = state_with(2, 4, [(range(4), {0, 1}), (range(4), {2})])
    adv = AdversaryState(phase=1, u_sets=[[0, 1]], d_sets=[{2}], y=[])
    with pytest.raises(AdversaryError):
        check_star(state, adv)
    adv.y = [1]
    check_star(state, adv)


def test_adversary_graph_always_has_perfect_matching():
    for n, alpha in [(7, 1), (18, 2), (30, 3), (12, 5)]:
        sol = AdversarySolution(n, alpha, max_sum_exact(n, alpha).x)
        state_graph = run_game(BalanceScheduler(), AdversaryBuilder(sol), sol.config())[0]
        assert state_graph.game_size_n == n


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_adversary_dominates_every_scheduler(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 40)
    alpha = rng.randint(1, 5)
    sol = AdversarySolution(n, alpha, sample_solution(rng, n, alpha))
    for scheduler in all_schedulers(seed):
        builder = AdversaryBuilder(sol)
        result, transcript = run_game(scheduler, builder, sol.config())
        assert result.matched_count <= sol.bound
        assert result.game_size_n == n
        assert len(transcript.moves) == n
        assert builder.star_checks == sol.k + 2


def test_random_builder():
    full = RandomBuilder(3, 5, 1.0)
    assert all(nb == frozenset(range(5)) for nb in full.neighborhoods)
    sparse = RandomBuilder(3, 5, 0.0)
    assert sorted(min(nb) for nb in sparse.neighborhoods) == list(range(5))
    assert all(len(nb) == 1 for nb in sparse.neighborhoods)
    assert RandomBuilder(9, 8, 0.3).neighborhoods == random_builder(9, 8, 0.3).neighborhoods
    with pytest.raises(ValueError):
        RandomBuilder(0, 3, 1.5)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 15), st.floats(0, 1))
def test_random_builder_is_perfect(seed, n, p):
    result, _ = run_game(GreedyScheduler(), RandomBuilder(seed, n, p), GameConfig(1, n))
    assert result.game_size_n == n


def test_scripted_builder():
    result, transcript = run_game(GreedyScheduler(), ScriptedBuilder([{1}, {0, 1}]), GameConfig(1, 2))
    assert [mv.neighbors for mv in transcript.moves] == [frozenset({1}), frozenset({0, 1})]
    assert result.matched_count == 2


@pytest.mark.parametrize("n,alpha,scheduler,value", [
    (1, 1, BalanceScheduler(), 1),
    (2, 1, GreedyScheduler(), 1),
    (2, 2, BalanceScheduler(), 2),
    (3, 2, BalanceScheduler(), 2),
    (3, 1, NoopScheduler(), 0),
])
def test_minimax_examples(n, alpha, scheduler, value):
    assert minimax_value(n, alpha, scheduler) == value


def test_minimax_moves_realise_the_value():
    value, moves = worst_case_moves(3, 1, GreedyScheduler())
    result, _ = run_game(GreedyScheduler(), ScriptedBuilder(moves), GameConfig(1, 3))
    assert result.matched_count == value and result.game_size_n == 3
    builder = MinimaxBuilder(3, 1, GreedyScheduler())
    assert builder.value == value
    with pytest.raises(ValueError):
        minimax_value(5, 1, GreedyScheduler())


def test_minimax_graphs_are_perfect():
    _, moves = worst_case_moves(3, 2, BalanceScheduler())
    state = new_game(GameConfig(2, 3))
    for nb in moves:
        state.apply_round(RoundMove.of(state.round, nb), ())
    assert has_perfect_matching(state.graph())


def test_make_builder():
    b = make_builder("adversary:k=2,x=6,1,1", 18, 2)
    assert isinstance(b, AdversaryBuilder) and b.solution.x == (6, 1, 1)
    default = make_builder("adversary", 18, 2)
    assert sum(default.solution.x) == max_sum_exact(18, 2).best_sum
    r = make_builder("random:seed=4,p=0.5", 6, 1)
    assert isinstance(r, RandomBuilder) and (r.seed, r.p) == (4, 0.5)
    assert isinstance(make_builder("minimax", 2, 1, GreedyScheduler()), MinimaxBuilder)
    for bad in ["adversary:k=1,x=6,1,1", "random:q=1", "minimax", "oracle", "adversary:x=9,9"]:
        with pytest.raises(ValueError):
            make_builder(bad, 18, 2)


class MirroredBalance(BalanceScheduler):
    """Balance with server indices reversed, so every tie goes to the highest index."""
    name = "balance-mirrored"

    def decide(self, state, move):
        last = state.config.d_count - 1
        flip = lambda ds: {last - d for d in ds}  # noqa: E731
        mirrored = new_game(state.config)
        for nb, group in zip(state.neighbors, state.m):
            mirrored.neighbors.append(frozenset(flip(nb)))
            mirrored.m.append(flip(group))
        for d, u in enumerate(state.owner):
            mirrored.owner[last - d] = u
        decision = super().decide(mirrored, RoundMove(move.u_id, frozenset(flip(move.neighbors))))
        return type(decision)(frozenset(flip(decision.chosen)))


@pytest.mark.parametrize("n,alpha", [(2, 1), (3, 1), (2, 2), (3, 2), (4, 2)])
def test_balance_worst_case_ignores_tie_breaks(n, alpha):
    val = n - max_sum_exact(n, alpha).best_sum
    assert minimax_value(n, alpha, MirroredBalance()) == val
