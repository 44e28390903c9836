"""Scheduler strategies.

``BalanceScheduler`` is the optimal deterministic strategy: it grabs free
neighbours first, then keeps pulling elements out of the largest group that
can spare one until the new group is within one of every donor it could still
take from.  With alpha = 1 it degenerates to plain greedy matching.
"""
from __future__ import annotations

import random
from typing import AbstractSet

from .game import GameState, RoundMove, Scheduler, SchedulerDecision


def available(state: GameState, d: int, neighbors: AbstractSet[int]) -> bool:
    """d is a neighbour of the new vertex and not the last element of some group."""
    if d not in neighbors:
        return False
    x = state.owner[d]
    return x is None or len(state.m[x]) != 1


def strongly_available(state: GameState, d: int, neighbors: AbstractSet[int]) -> bool:
    return d in neighbors and state.owner[d] is None


def ready(state: GameState, e: int, neighbors: AbstractSet[int]) -> bool:
    """Group of e holds at least one element available for the new vertex."""
    return any(available(state, d, neighbors) for d in state.m[e])


def balance_decide(state: GameState, neighbors: AbstractSet[int], alpha: int) -> SchedulerDecision:
    u = state.round
    work = state.copy(share_groups=True)
    picks = sorted(d for d in neighbors if strongly_available(work, d, neighbors))[:alpha]
    mine = set(picks)
    work.neighbors.append(frozenset(neighbors))
    work.m.append(mine)
    for d in picks:
        work.owner[d] = u

    transfers = []
    while True:
        donor = None
        for e in range(u):
            size = len(work.m[e])
            if size < len(mine) + 2 or not ready(work, e, neighbors):
                continue
            if donor is None or size > len(work.m[donor]):
                donor = e
        if donor is None:
            break
        d = min(d for d in work.m[donor] if available(work, d, neighbors))
        work.m[donor] = work.m[donor] - {d}
        mine.add(d)
        work.owner[d] = u
        transfers.append((donor, d))
    return SchedulerDecision(frozenset(mine), tuple(transfers))


def greedy_decide(state: GameState, neighbors: AbstractSet[int]) -> SchedulerDecision:
    """Classical greedy: the lowest free neighbour, or nothing.

    In an alpha = 1 game this is exactly ``balance_decide`` (no group ever
    exceeds one element, so no transfer can fire).  In larger games it still
    never steals.
    """
    free = [d for d in neighbors if strongly_available(state, d, neighbors)]
    return SchedulerDecision(frozenset([min(free)]) if free else frozenset())


class BalanceScheduler(Scheduler):
    name = "balance"

    def decide(self, state, move):
        return balance_decide(state, move.neighbors, state.alpha)


class GreedyScheduler(Scheduler):
    name = "greedy"

    def decide(self, state, move):
        return greedy_decide(state, move.neighbors)


class NoopScheduler(Scheduler):
    name = "noop"

    def decide(self, state, move):
        return SchedulerDecision(frozenset())


class RandomScheduler(Scheduler):
    """Takes a random subset of N(u) of random size up to alpha, stealing freely.

    The RNG is reseeded from (seed, round) on every call, so decisions depend
    only on the position.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.name = f"random:seed={seed}"

    def decide(self, state, move):
        rng = random.Random(f"{self.seed}:{state.round}")
        pool = sorted(move.neighbors)
        size = rng.randint(0, min(state.alpha, len(pool)))
        return SchedulerDecision(frozenset(rng.sample(pool, size)))


def make_scheduler(selector: str) -> Scheduler:
    name, _, params = selector.partition(":")
    if name == "balance":
        return BalanceScheduler()
    if name == "greedy":
        return GreedyScheduler()
    if name == "noop":
        return NoopScheduler()
    if name == "random":
        seed = 0
        for item in filter(None, params.split(",")):
            key, _, value = item.partition("=")
            if key != "seed":
                raise ValueError(f"unknown random scheduler parameter {key!r}")
            seed = int(value)
        return RandomScheduler(seed)
    raise ValueError(f"unknown scheduler {selector!r}")
