"""Builder strategies.

``AdversaryBuilder`` turns a feasible solution x of the integer system into an
adaptive attack that keeps every Scheduler at or below n - sum(x).  It works
in phases: phase 0 shows x_0 vertices adjacent to all of D, phase i shows
1 + x_i vertices adjacent to whatever servers have not been retired yet, and
after each phase a block D_i of servers is retired so that only the special
vertices y_1..y_i may still hold retired servers.  The last phase shows the
remaining vertices adjacent only to the never-retired leftovers S.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .bounds import max_sum_exact, validate_solution
from .game import Builder, GameConfig, GameState, RoundMove, Scheduler
from .matching import max_matching

__all__ = [
    "AdversaryError", "AdversarySolution", "AdversaryState", "AdversaryBuilder",
    "choose_d0", "choose_di", "check_star", "validate_solution",
    "RandomBuilder", "ScriptedBuilder", "MinimaxBuilder", "minimax_value",
    "worst_case_moves", "make_builder",
]


class AdversaryError(AssertionError):
    """The adversary's bookkeeping broke; the construction guarantees it cannot."""


@dataclass(frozen=True)
class AdversarySolution:
    n: int
    alpha: int
    x: tuple[int, ...]

    def __post_init__(self):
        if not validate_solution(self.n, self.alpha, self.x):
            raise ValueError(f"x={self.x} is not feasible for n={self.n}, alpha={self.alpha}")
        if self.x[0] < 0:
            raise ValueError("the construction needs x_0 >= 0; normalize the solution first")

    @property
    def k(self) -> int:
        return len(self.x) - 1

    @property
    def bound(self) -> int:
        return self.n - sum(self.x)

    def config(self, infinite_mode: bool = False) -> GameConfig:
        return GameConfig(alpha=self.alpha, d_count=self.n, infinite_mode=infinite_mode)


@dataclass
class AdversaryState:
    phase: int = 0
    u_sets: list[list[int]] = field(default_factory=list)
    d_sets: list[set[int]] = field(default_factory=list)
    y: list[int] = field(default_factory=list)
    x_free: set[int] = field(default_factory=set)
    s: Optional[set[int]] = None

    def retired(self) -> set[int]:
        return set().union(*self.d_sets)


def choose_d0(state: GameState, u0: Sequence[int], size: int) -> set[int]:
    """Lowest ``size`` servers outside every group of the phase-0 vertices."""
    held = set().union(*(state.m[u] for u in u0))
    free = [d for d in range(state.config.d_count) if d not in held]
    if len(free) < size:
        raise AdversaryError(f"only {len(free)} servers outside m(U_0), need {size}")
    return set(free[:size])


def choose_di(state: GameState, adv: AdversaryState, size: int) -> tuple[int, set[int]]:
    """Pick the special vertex y_i and the block D_i of ``size`` servers.

    Candidates are the presented vertices outside Y.  Let X be the live servers
    (not yet retired) that no candidate holds.  Some candidate holds more than
    size - 1 - |X| servers; the largest such (earliest on ties) becomes y_i and
    D_i is filled from X first, then from m(y_i), lowest indices first.
    """
    live = set(range(state.config.d_count)) - adv.retired()
    ys = set(adv.y)
    candidates = [u for part in adv.u_sets for u in part if u not in ys]
    held = set().union(*(state.m[u] for u in candidates))
    x_free = live - held
    need = size - len(x_free)
    y_i = None
    for u in candidates:
        if len(state.m[u]) >= need and (y_i is None or len(state.m[u]) > len(state.m[y_i])):
            y_i = u
    if y_i is None:
        raise AdversaryError(f"no vertex holds {need} servers (|X|={len(x_free)}, need |D_i|={size})")
    pool = sorted(x_free) + sorted(state.m[y_i])
    adv.x_free = x_free
    return y_i, set(pool[:size])


def check_star(state: GameState, adv: AdversaryState) -> None:
    """Only y_1..y_i may hold servers from the retired blocks."""
    retired = adv.retired()
    ys = set(adv.y)
    for part in adv.u_sets:
        for u in part:
            if u not in ys and state.m[u] & retired:
                raise AdversaryError(
                    f"phase {adv.phase}: u{u} holds retired servers {sorted(state.m[u] & retired)}")


class AdversaryBuilder(Builder):
    def __init__(self, solution: AdversarySolution):
        self.solution = solution
        self.name = "adversary:x=" + ",".join(map(str, solution.x))
        self.adv = AdversaryState()
        self.star_checks = 0
        self.finished = False

    def _phase_size(self, phase: int) -> int:
        x = self.solution.x
        if phase == 0:
            return x[0]
        if phase <= self.solution.k:
            return 1 + x[phase]
        return self.solution.n - self.solution.k - sum(x)

    def _close_phase(self, state: GameState) -> None:
        adv = self.adv
        i = adv.phase
        size = self._phase_size(i)
        if i == 0:
            adv.d_sets.append(choose_d0(state, adv.u_sets[0], size))
        else:
            y_i, block = choose_di(state, adv, size)
            adv.y.append(y_i)
            adv.d_sets.append(block)
        check_star(state, adv)
        self.star_checks += 1
        adv.phase += 1
        if adv.phase == self.solution.k + 1:
            adv.s = set(range(self.solution.n)) - adv.retired()

    def neighbourhood(self) -> frozenset[int]:
        if self.adv.s is not None:
            return frozenset(self.adv.s)
        return frozenset(set(range(self.solution.n)) - self.adv.retired())

    def next_move(self, state: GameState) -> Optional[RoundMove]:
        adv = self.adv
        k = self.solution.k
        while True:
            if len(adv.u_sets) == adv.phase:
                adv.u_sets.append([])
            current = adv.u_sets[adv.phase]
            if len(current) < self._phase_size(adv.phase):
                break
            if adv.phase == k + 1:
                if not self.finished:
                    check_star(state, adv)
                    self.star_checks += 1
                    self.finished = True
                return None
            self._close_phase(state)
        u = state.round
        current.append(u)
        return RoundMove(u, self.neighbourhood())


class ScriptedBuilder(Builder):
    """Presents a fixed list of neighbourhoods."""

    def __init__(self, neighborhoods: Sequence[Sequence[int]], name: str = "scripted"):
        self.neighborhoods = [frozenset(n) for n in neighborhoods]
        self.name = name

    def next_move(self, state):
        if state.round >= len(self.neighborhoods):
            return None
        return RoundMove(state.round, self.neighborhoods[state.round])


class RandomBuilder(ScriptedBuilder):
    """n vertices over n servers with a hidden planted perfect matching.

    Vertex u always sees server perm[u]; every other edge appears
    independently with probability ``p``.
    """

    def __init__(self, seed: int, n: int, p: float = 0.0):
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        rng = random.Random(seed)
        perm = list(range(n))
        rng.shuffle(perm)
        rows = [{perm[u]} | {d for d in range(n) if rng.random() < p} for u in range(n)]
        super().__init__(rows, name=f"random:seed={seed},p={p}")
        self.seed, self.n, self.p = seed, n, p


def random_builder(seed: int, n: int, extra_edge_prob: float) -> RandomBuilder:
    return RandomBuilder(seed, n, extra_edge_prob)


# ---------------------------------------------------------------------------
# Exhaustive builder: ground truth for tiny games.

MINIMAX_CAP = 4


def _neighborhoods(n: int) -> Iterator[frozenset[int]]:
    for mask in range(1, 1 << n):
        yield frozenset(d for d in range(n) if mask >> d & 1)


def _completable(state: GameState) -> bool:
    # the remaining vertices can finish a perfect matching iff the
    # vertices shown so far can all be matched
    return max_matching(state.graph()).size == state.round


def worst_case_moves(
    n: int, alpha: int, scheduler: Scheduler, cap: int = MINIMAX_CAP
) -> tuple[int, list[frozenset[int]]]:
    """Minimum matched count ``scheduler`` can be held to, with the moves that do it.

    Builder shows exactly n vertices over n servers, each with a nonempty
    neighbourhood, and the final graph must have a perfect matching.
    Branches that can no longer reach a perfect matching are cut.
    """
    if n > cap:
        raise ValueError(f"n={n} is above the exhaustive-search cap {cap}")
    config = GameConfig(alpha=alpha, d_count=n)
    options = list(_neighborhoods(n))

    def search(state: GameState) -> tuple[int, list[frozenset[int]]]:
        if state.round == n:
            return state.matched_count(), []
        top: tuple[int, list] = (n + 1, [])
        for nb in options:
            move = RoundMove(state.round, nb)
            child = state.copy()
            child.apply_round(move, scheduler.decide(state, move).chosen)
            if not _completable(child):
                continue
            value, tail = search(child)
            if value < top[0]:
                top = (value, [nb] + tail)
        return top

    value, moves = search(GameState(config))
    return value, moves


def minimax_value(n: int, alpha: int, scheduler: Scheduler, cap: int = MINIMAX_CAP) -> int:
    return worst_case_moves(n, alpha, scheduler, cap)[0]


class MinimaxBuilder(ScriptedBuilder):
    """Replays the worst sequence found by exhaustive search against one scheduler."""

    def __init__(self, n: int, alpha: int, scheduler: Scheduler, cap: int = MINIMAX_CAP):
        self.value, moves = worst_case_moves(n, alpha, scheduler, cap)
        super().__init__(moves, name="minimax")


def _parse_params(text: str) -> dict[str, str]:
    # "k=2,x=6,1,1" -> {"k": "2", "x": "6,1,1"}: bare items extend the previous key
    params: dict[str, str] = {}
    key = None
    for item in filter(None, text.split(",")):
        if "=" in item:
            key, _, value = item.partition("=")
            params[key] = value
        elif key is not None:
            params[key] += "," + item
        else:
            raise ValueError(f"cannot parse builder parameter {item!r}")
    return params


def make_builder(
    selector: str, n: int, alpha: int, scheduler: Optional[Scheduler] = None, seed: int = 0
) -> Builder:
    """Build from a CLI selector: adversary[:k=..,x=..], random[:seed=..,p=..], minimax."""
    name, _, rest = selector.partition(":")
    params = _parse_params(rest)
    if name == "adversary":
        if "x" in params:
            x = tuple(int(v) for v in params["x"].split(","))
        else:
            x = max_sum_exact(n, alpha).x
        if "k" in params and int(params["k"]) != len(x) - 1:
            raise ValueError(f"k={params['k']} does not match x of length {len(x)}")
        return AdversaryBuilder(AdversarySolution(n, alpha, x))
    if name == "random":
        unknown = set(params) - {"seed", "p"}
        if unknown:
            raise ValueError(f"unknown random builder parameters {sorted(unknown)}")
        return RandomBuilder(int(params.get("seed", seed)), n, float(params.get("p", 0.0)))
    if name == "minimax":
        if scheduler is None:
            raise ValueError("the minimax builder needs the scheduler it plays against")
        return MinimaxBuilder(n, alpha, scheduler)
    raise ValueError(f"unknown builder {selector!r}")
