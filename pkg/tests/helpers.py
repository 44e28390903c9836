"""Shared fixtures-by-value for the test suite."""
import random

from lazymatch.builders import ScriptedBuilder
from lazymatch.game import GameConfig, GameTranscript, replay, run_game
from lazymatch.schedulers import (
    BalanceScheduler,
    GreedyScheduler,
    NoopScheduler,
    RandomScheduler,
)

# Balance against the phased adversary for x = (6, 1, 1), n = 18, alpha = 2.
# Hand trace: phase 0 hands out pairs {0,1}..{10,11}; D_0 = 12..17.  Each
# phase-1 vertex steals one element from the earliest pair (u6 <- 0 from u0,
# u7 <- 2 from u1).  y_1 = u2 and D_1 = {4,5}.  Phase 2 steals 6 and 8 from
# u3, u4 (u2 is outside the new neighbourhood).  y_2 = u5 and D_2 = {10,11}.
# The 8 vertices on S = {0,1,2,3,6,7,8,9} find only singletons and get nothing.
GOLDEN_GROUPS = (
    (1,), (3,), (4, 5), (7,), (9,), (10, 11), (0,), (2,), (6,), (8,),
    (), (), (), (), (), (), (), (),
)
GOLDEN_DECISIONS = [
    {0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11},
    {0}, {2}, {6}, {8},
    set(), set(), set(), set(), set(), set(), set(), set(),
]
GOLDEN_NEIGHBORHOODS = (
    [set(range(18))] * 6
    + [set(range(12))] * 2
    + [set(range(12)) - {4, 5}] * 2
    + [{0, 1, 2, 3, 6, 7, 8, 9}] * 8
)


def all_schedulers(seed=0):
    return [BalanceScheduler(), GreedyScheduler(), NoopScheduler(), RandomScheduler(seed)]


def play_checked(rng: random.Random, max_rounds: int = 40):
    """Play one random game, checking every engine invariant after every round.

    Returns the number of rounds played.
    """
    d_count = rng.randint(1, 10)
    config = GameConfig(alpha=rng.randint(1, 4), d_count=d_count, infinite_mode=rng.random() < 0.15)
    scheduler = rng.choice(all_schedulers(rng.randint(0, 10**6)))
    rounds = rng.randint(0, max_rounds)
    density = rng.random()
    moves = [
        {d for d in range(d_count) if rng.random() < density}
        for _ in range(rounds)
    ]

    result, transcript = run_game(scheduler, ScriptedBuilder(moves), config, record_snapshots=True)

    previous: tuple = ()
    for t, groups in enumerate(transcript.snapshots):
        sets = [set(g) for g in groups]
        # disjointness, capacity, containment
        owner = {}
        for u, s in enumerate(sets):
            assert len(s) <= config.effective_alpha
            assert s <= transcript.moves[u].neighbors
            for d in s:
                assert d not in owner, f"round {t}: d{d} shared by u{owner[d]} and u{u}"
                owner[d] = u
        # groups only shrink after their round
        for u, old in enumerate(previous):
            assert set(groups[u]) <= set(old), f"round {t}: m(u{u}) grew"
        assert set(groups[t]) == set(transcript.decisions[t])
        previous = groups

    assert result.matched_count <= result.game_size_n
    assert replay(transcript) == result
    assert replay(GameTranscript.from_json(transcript.to_json())) == result
    return rounds
