"""Worst-case values of the lazy matching game, computed from the integer system.

A pair (k, x) with x = (x_0, ..., x_k) is *feasible* for (n, alpha) when

    (1 + alpha) * x_0 <= n
    (x_0 + ... + x_i) * (1 + x_i) <= n - i      for i = 1..k
    x_1 >= x_2 >= ... >= x_k >= 0
    x_0 + ... + x_k >= 0

Every feasible pair gives a Builder strategy holding any Scheduler to
n - sum(x) matched vertices, and the balance scheduler always reaches
n - sum(x) for some feasible pair.  So the worst case of balance at size n is
n minus the largest feasible sum.

The relaxation over "how many x_i take each value" is a triangular LP with
closed-form primal and dual solutions; all LP quantities here are exact
``Fraction``s.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence


def validate_solution(n: int, alpha: int, x: Sequence[int]) -> bool:
    """Check (k, x) against the system, with k = len(x) - 1."""
    if not x:
        return False
    if (1 + alpha) * x[0] > n:
        return False
    prefix = x[0]
    for i in range(1, len(x)):
        if x[i] < 0 or (i > 1 and x[i] > x[i - 1]):
            return False
        prefix += x[i]
        if prefix * (1 + x[i]) > n - i:
            return False
    return prefix >= 0


def normalized_x0(n: int, alpha: int) -> int:
    return n // (1 + alpha)


def normalize_solution(n: int, alpha: int, x: Sequence[int]) -> tuple[int, ...]:
    """Lift a feasible solution to one with x_0 = n // (1 + alpha) and no smaller sum.

    Repeatedly moves one unit from the last entry equal to x_1 onto x_0; when
    x_1 reaches 0 the answer is simply (n // (1 + alpha), 0).
    """
    if not validate_solution(n, alpha, x):
        raise ValueError(f"infeasible solution {tuple(x)} for n={n}, alpha={alpha}")
    target = normalized_x0(n, alpha)
    x = list(x)
    while x[0] < target:
        if len(x) == 1 or x[1] == 0:
            return (target, 0)
        j = max(i for i in range(1, len(x)) if x[i] == x[1])
        x[0] += 1
        x[j] -= 1
    return tuple(x)


class MaxSum(NamedTuple):
    best_sum: int
    k: int
    x: tuple[int, ...]


def max_sum_exact(n: int, alpha: int) -> MaxSum:
    """Largest x_0 + ... + x_k over feasible pairs, with a witness.

    x_0 is pinned to n // (1 + alpha).  The tail is searched block by block:
    a run of c equal values v only needs the inequality at its last index,
    since (P + c'v)(1 + v) <= n - i - c' is weaker for every c' < c.
    Among equal sums the witness with larger leading values wins.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x0 = normalized_x0(n, alpha)

    @lru_cache(maxsize=None)
    def best(prefix: int, used: int, cap: int) -> tuple[int, tuple[int, ...]]:
        top: tuple[int, tuple[int, ...]] = (0, ())
        for v in range(cap, 0, -1):
            room = n - used - prefix * (1 + v)
            if room <= 0:
                continue
            for c in range(room // (v * (1 + v) + 1), 0, -1):
                gain, tail = best(prefix + c * v, used + c, v - 1)
                if c * v + gain > top[0]:
                    top = (c * v + gain, (v,) * c + tail)
        return top

    gain, tail = best(x0, 0, math.isqrt(n) + 1)
    best.cache_clear()
    x = (x0,) + (tail or (0,))
    return MaxSum(x0 + gain, len(x) - 1, x)


def sample_solution(rng: random.Random, n: int, alpha: int) -> tuple[int, ...]:
    """Draw a random feasible x with x_0 >= 0 and k >= 1."""
    x0 = rng.randint(0, normalized_x0(n, alpha))
    x = [x0]
    prefix, cap = x0, n
    while True:
        i = len(x)
        options = [v for v in range(cap + 1) if (prefix + v) * (1 + v) <= n - i]
        if not options:
            break
        v = rng.choice(options)
        x.append(v)
        prefix += v
        cap = v
        if rng.random() < 0.3:
            break
    return tuple(x)


# ---------------------------------------------------------------------------
# Counting representation: y_j = number of i > 0 with x_i = j - 1.

@dataclass(frozen=True)
class PsiSystem:
    n: int
    m: int
    x0: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.x0 < 0 or self.n - self.m * self.x0 < 0:
            raise ValueError(f"need 0 <= x0 and n - m*x0 >= 0 (n={self.n}, m={self.m}, x0={self.x0})")


def psi_transform(x: Sequence[int]) -> tuple[int, ...]:
    """Counts (y_1, ..., y_m) with m = 1 + x_1."""
    if len(x) < 2:
        raise ValueError("need k >= 1")
    y = [0] * (1 + x[1])
    for xi in x[1:]:
        y[xi] += 1
    return tuple(y)


def psi_inverse(x0: int, y: Sequence[int]) -> tuple[int, ...]:
    tail = [j for j in range(len(y) - 1, -1, -1) for _ in range(y[j])]
    return (x0, *tail)


def psi_feasible(n: int, x0: int, y: Sequence) -> bool:
    m = len(y)
    return all(
        t * x0 + sum((1 + (i - 1) * t) * y[i - 1] for i in range(t, m + 1)) <= n
        for t in range(1, m + 1)
    )


def primal_row(y: Sequence, i: int) -> Fraction:
    """P_i(y) = sum_{j>=i} (1 + (j-1) i) y_j."""
    return sum(((1 + (j - 1) * i) * y[j - 1] for j in range(i, len(y) + 1)), Fraction(0))


def dual_row(z: Sequence, j: int) -> Fraction:
    """D_j(z) = sum_{i<=j} (1 + (j-1) i) z_i."""
    return sum(((1 + (j - 1) * i) * z[i - 1] for i in range(1, j + 1)), Fraction(0))


@dataclass(frozen=True)
class PrimalSolution:
    y: tuple[Fraction, ...]
    y0: Fraction

    @property
    def objective(self) -> Fraction:
        return sum(((j - 1) * yj for j, yj in enumerate(self.y, 1)), Fraction(0))


@dataclass(frozen=True)
class DualSolution:
    z: tuple[Fraction, ...]


def primal_closed_form(sys: PsiSystem, check: bool = True) -> PrimalSolution:
    n, m, x0 = sys.n, sys.m, sys.x0
    y = [Fraction(0)] * (m + 1)
    y[m] = Fraction(n - m * x0, 1 + m * (m - 1))
    if m >= 2:
        y[m - 1] = (x0 + (m - 1) * y[m]) / (1 + (m - 1) * (m - 2))
    for i in range(m - 2, 0, -1):
        y[i] = y[i + 1] * Fraction((i + 1) ** 2, 1 - i + i * i)
    y = tuple(y[1:])
    sol = PrimalSolution(y, x0 + sum((j - 1) * yj for j, yj in enumerate(y, 1)))
    if check:
        for i in range(1, m + 1):
            if primal_row(y, i) != n - i * x0:
                raise ArithmeticError(f"P_{i}(y) != n - {i}*x0 for {sys}")
        if min(y) < 0:
            raise ArithmeticError(f"negative primal entry for {sys}")
    return sol


def dual_closed_form(m: int, check: bool = True) -> DualSolution:
    if m < 1:
        raise ValueError("m must be >= 1")
    z = [Fraction(0), Fraction(1, 3)][:m]
    for j in range(2, m):
        z.append(z[j - 1] * Fraction((j - 1) ** 2, 1 + j + j * j))
    if check:
        for j in range(1, m + 1):
            if dual_row(z, j) != j - 1:
                raise ArithmeticError(f"D_{j}(z) != {j - 1} for m={m}")
        if min(z) < 0:
            raise ArithmeticError(f"negative dual entry for m={m}")
    return DualSolution(tuple(z))


def strong_duality_check(sys: PsiSystem) -> bool:
    y = primal_closed_form(sys).y
    z = dual_closed_form(sys.m).z
    primal = sum(((j - 1) * yj for j, yj in enumerate(y, 1)), Fraction(0))
    dual = sum(((sys.n - i * sys.x0) * zi for i, zi in enumerate(z, 1)), Fraction(0))
    return primal == dual


def product_term(i: int) -> Fraction:
    return Fraction(i + i * i, 1 + i + i * i)


def F(z, m: int) -> Fraction:
    """((m - 1) + z) / m * prod_{i<m} (i + i^2) / (1 + i + i^2)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    value = (m - 1 + Fraction(z)) / m
    for i in range(1, m):
        value *= product_term(i)
    return value


def lp_value(n: int, x0: int, m: int) -> Fraction:
    """Optimum of the LP relaxation, x_0 included: n * F(x0/n, m)."""
    return n * F(Fraction(x0, n), m)


def admissible_ms(n: int, x0: int) -> range:
    return range(1, (n // x0 if x0 else n) + 1)


def rounded_sum(n: int, x0: int, m: int) -> int:
    """x_0 plus the objective of the floored LP optimum (an integer-feasible point)."""
    y = primal_closed_form(PsiSystem(n, m, x0), check=False).y
    return x0 + sum((j - 1) * math.floor(yj) for j, yj in enumerate(y, 1))


def bal_bounds(n: int, alpha: int) -> tuple[int, int]:
    """Integer bracket lower <= worst case of balance at size n <= upper.

    lower uses the LP optimum as a ceiling on the feasible sum; upper uses the
    best floored LP optimum as a feasible sum the adversary can realise.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x0 = normalized_x0(n, alpha)
    ms = admissible_ms(n, x0)
    # incremental F: avoid recomputing the product for every m
    best_lp = Fraction(x0)
    prod = Fraction(1)
    for m in ms:
        if m > 1:
            prod *= product_term(m - 1)
        best_lp = max(best_lp, ((m - 1) * n + x0) * prod / m)
    # beyond 1 + m(m-1) > n the top coordinate floors to zero
    best_rounded = max(rounded_sum(n, x0, m) for m in ms if 1 + m * (m - 1) <= n or m == 1)
    return n - math.floor(best_lp), n - best_rounded


# ---------------------------------------------------------------------------
# Competitive ratios.

@dataclass(frozen=True)
class RatioResult:
    alpha: int
    exact_ratio: Fraction

    @property
    def float_ratio(self) -> float:
        return float(self.exact_ratio)


def competitive_ratio(alpha: int) -> RatioResult:
    """1 - alpha/(1+alpha) * prod_{i<alpha} (i + i^2)/(1 + i + i^2)."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    value = Fraction(alpha, 1 + alpha)
    for i in range(1, alpha):
        value *= product_term(i)
    return RatioResult(alpha, 1 - value)


@dataclass(frozen=True)
class InfinityRatio:
    terms: int
    product: float
    analytic: float

    @property
    def difference(self) -> float:
        return abs(self.product - self.analytic)

    @property
    def ratio(self) -> float:
        return 1 - self.analytic

    @property
    def truncated_ratio(self) -> float:
        return 1 - self.product


def ratio_infinity(terms: int = 10_000) -> InfinityRatio:
    """Limit of the ratio as alpha grows: 1 - pi / cosh(sqrt(3) pi / 2).

    Also returns the infinite product truncated to ``terms`` factors; the
    truncation overshoots by roughly a relative 1/terms.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    product = 1.0
    for i in range(1, terms + 1):
        product *= 1.0 - 1.0 / (1 + i + i * i)
    analytic = math.pi / math.cosh(math.sqrt(3) * math.pi / 2)
    return InfinityRatio(terms, product, analytic)
