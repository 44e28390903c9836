"""Simulation and exact analysis of the alpha-lazy on-line bipartite matching game."""
from .bounds import (
    F,
    bal_bounds,
    competitive_ratio,
    max_sum_exact,
    normalize_solution,
    ratio_infinity,
    validate_solution,
)
from .builders import AdversaryBuilder, AdversarySolution, RandomBuilder, minimax_value
from .game import GameConfig, GameResult, GameTranscript, RoundMove, RuleViolation, replay, run_game
from .matching import BipartiteGraph, has_perfect_matching, max_matching
from .schedulers import BalanceScheduler, GreedyScheduler, NoopScheduler, RandomScheduler

__version__ = "0.1.0"
