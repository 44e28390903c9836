"""Rules of the alpha-lazy matching game.

Builder reveals vertices of U one at a time together with their neighbourhoods
in D.  Scheduler answers each vertex u with a group m(u) of at most alpha
neighbours; any element it takes is removed from the groups of earlier
vertices.  Scheduler scores one point per vertex whose group is nonempty at
the end.

The engine only enforces those rules.  Strategy-specific restrictions (such as
the availability rule of the balance scheduler) live with the strategies.
"""
from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .matching import BipartiteGraph, max_matching


class RuleViolation(ValueError):
    """A move or decision broke the rules of the game."""


@dataclass(frozen=True)
class GameConfig:
    alpha: int = 1
    d_count: int = 1
    infinite_mode: bool = False

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.d_count < 1:
            raise ValueError(f"d_count must be >= 1, got {self.d_count}")

    @property
    def effective_alpha(self) -> int:
        return self.d_count if self.infinite_mode else self.alpha

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "d_count": self.d_count, "infinite_mode": self.infinite_mode}


@dataclass(frozen=True)
class RoundMove:
    u_id: int
    neighbors: frozenset[int]

    @classmethod
    def of(cls, u_id: int, neighbors: Iterable[int]) -> "RoundMove":
        return cls(u_id, frozenset(neighbors))


class GameState:
    """Mutable position of a game: revealed graph plus the current groups.

    ``m[u]`` is the group of the u-th presented vertex and ``owner[d]`` the
    vertex whose group holds d (None when d is free).
    """

    __slots__ = ("config", "neighbors", "m", "owner")

    def __init__(self, config: GameConfig):
        self.config = config
        self.neighbors: list[frozenset[int]] = []
        self.m: list[set[int]] = []
        self.owner: list[Optional[int]] = [None] * config.d_count

    @property
    def round(self) -> int:
        return len(self.neighbors)

    @property
    def alpha(self) -> int:
        return self.config.effective_alpha

    def copy(self, share_groups: bool = False) -> "GameState":
        """Independent copy; with ``share_groups`` the group sets are shared and
        the caller must replace, not mutate, any group it changes."""
        new = GameState.__new__(GameState)
        new.config = self.config
        new.neighbors = list(self.neighbors)
        new.m = list(self.m) if share_groups else [set(s) for s in self.m]
        new.owner = list(self.owner)
        return new

    def check_move(self, move: RoundMove) -> None:
        if move.u_id != self.round:
            raise RuleViolation(f"expected u_id={self.round}, got {move.u_id}")
        bad = [d for d in move.neighbors if not 0 <= d < self.config.d_count]
        if bad:
            raise RuleViolation(f"u{move.u_id}: neighbours out of range: {sorted(bad)}")

    def apply_round(self, move: RoundMove, chosen: Iterable[int]) -> "GameState":
        """Present ``move`` and give it ``chosen``, stripping those elements from earlier groups.

        Mutates in place and returns self.
        """
        self.check_move(move)
        chosen = set(chosen)
        if not chosen <= move.neighbors:
            raise RuleViolation(
                f"u{move.u_id}: chosen {sorted(chosen - move.neighbors)} not in N(u)")
        if len(chosen) > self.alpha:
            raise RuleViolation(f"u{move.u_id}: |chosen|={len(chosen)} exceeds alpha={self.alpha}")
        u = move.u_id
        for d in chosen:
            prev = self.owner[d]
            if prev is not None:
                self.m[prev].discard(d)
            self.owner[d] = u
        self.neighbors.append(move.neighbors)
        self.m.append(chosen)
        return self

    def matched_count(self) -> int:
        return sum(1 for s in self.m if s)

    def graph(self) -> BipartiteGraph:
        return BipartiteGraph.from_neighbors(self.neighbors, self.config.d_count)

    def groups(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.m)

    def check_invariants(self) -> None:
        """Raise AssertionError if the position is not one the rules can reach."""
        seen: dict[int, int] = {}
        for u, s in enumerate(self.m):
            assert len(s) <= self.alpha, f"|m(u{u})| = {len(s)} > alpha"
            assert s <= self.neighbors[u], f"m(u{u}) not inside N(u{u})"
            for d in s:
                assert d not in seen, f"d{d} in both m(u{seen[d]}) and m(u{u})"
                seen[d] = u
                assert self.owner[d] == u, f"owner[d{d}] out of sync"
        for d, u in enumerate(self.owner):
            assert u is None or d in self.m[u], f"owner[d{d}] = u{u} is stale"


def new_game(config: GameConfig) -> GameState:
    return GameState(config)


def apply_round(state: GameState, move: RoundMove, chosen: Iterable[int]) -> GameState:
    return state.apply_round(move, chosen)


def matched_count(state: GameState) -> int:
    return state.matched_count()


@dataclass(frozen=True)
class SchedulerDecision:
    chosen: frozenset[int]
    # (donor u, element d) in the order the transfers happened
    transfers: tuple[tuple[int, int], ...] = ()


class Scheduler(ABC):
    name = "scheduler"

    @abstractmethod
    def decide(self, state: GameState, move: RoundMove) -> SchedulerDecision:
        """Answer ``move`` given the position before it; must not mutate ``state``."""


class Builder(ABC):
    name = "builder"

    @abstractmethod
    def next_move(self, state: GameState) -> Optional[RoundMove]:
        """Return the next vertex to present, or None when done."""


@dataclass(frozen=True)
class GameResult:
    matched_count: int
    game_size_n: int
    per_u_groups: tuple[tuple[int, ...], ...]

    @property
    def ratio(self) -> float:
        return self.matched_count / self.game_size_n if self.game_size_n else 1.0


@dataclass
class GameTranscript:
    config: GameConfig
    moves: list[RoundMove] = field(default_factory=list)
    decisions: list[frozenset[int]] = field(default_factory=list)
    snapshots: Optional[list[tuple[tuple[int, ...], ...]]] = None

    def to_json(self) -> str:
        return json.dumps({
            "config": self.config.to_dict(),
            "moves": [{"u": mv.u_id, "neighbors": sorted(mv.neighbors)} for mv in self.moves],
            "decisions": [sorted(c) for c in self.decisions],
        })

    @classmethod
    def from_json(cls, text: str) -> "GameTranscript":
        raw = json.loads(text)
        cfg = raw["config"]
        config = GameConfig(int(cfg["alpha"]), int(cfg["d_count"]), bool(cfg.get("infinite_mode", False)))
        moves = [RoundMove.of(int(mv["u"]), mv["neighbors"]) for mv in raw["moves"]]
        decisions = [frozenset(c) for c in raw["decisions"]]
        if len(moves) != len(decisions):
            raise RuleViolation(f"{len(moves)} moves but {len(decisions)} decisions")
        return cls(config, moves, decisions)


def score(state: GameState) -> GameResult:
    return GameResult(state.matched_count(), max_matching(state.graph()).size, state.groups())


def run_game(
    scheduler: Scheduler,
    builder: Builder,
    config: GameConfig,
    max_rounds: Optional[int] = None,
    record_snapshots: bool = False,
) -> tuple[GameResult, GameTranscript]:
    if max_rounds is not None and max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    state = new_game(config)
    transcript = GameTranscript(config, snapshots=[] if record_snapshots else None)
    while max_rounds is None or state.round < max_rounds:
        move = builder.next_move(state)
        if move is None:
            break
        state.check_move(move)
        decision = scheduler.decide(state, move)
        try:
            state.apply_round(move, decision.chosen)
        except RuleViolation as exc:
            raise RuleViolation(f"scheduler {scheduler.name!r} broke the rules: {exc}") from exc
        transcript.moves.append(move)
        transcript.decisions.append(frozenset(decision.chosen))
        if record_snapshots:
            transcript.snapshots.append(state.groups())
    return score(state), transcript


def replay(transcript: GameTranscript) -> GameResult:
    if len(transcript.moves) != len(transcript.decisions):
        raise RuleViolation("moves and decisions differ in length")
    state = new_game(transcript.config)
    for move, chosen in zip(transcript.moves, transcript.decisions):
        state.apply_round(move, chosen)
    return score(state)
