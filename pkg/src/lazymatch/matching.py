"""Maximum-cardinality bipartite matching.

Used to measure the size of a finished game and to sanity-check graphs
produced by builders.  The search is Kuhn's augmenting-path method with a
fixed ascending visiting order, so results are reproducible run to run.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BipartiteGraph:
    u_count: int
    d_count: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adj) != self.u_count:
            raise ValueError(f"adj has {len(self.adj)} rows, expected {self.u_count}")
        for u, row in enumerate(self.adj):
            if len(set(row)) != len(row):
                raise ValueError(f"duplicate neighbours for u={u}")
            for d in row:
                if not 0 <= d < self.d_count:
                    raise ValueError(f"neighbour {d} of u={u} out of range")

    @classmethod
    def from_neighbors(cls, neighbors: Sequence[Iterable[int]], d_count: int) -> "BipartiteGraph":
        return cls(len(neighbors), d_count, tuple(tuple(sorted(set(n))) for n in neighbors))


@dataclass(frozen=True)
class Matching:
    pairs: dict[int, int]

    @property
    def size(self) -> int:
        return len(self.pairs)


def _augment(adj, root, match_d, seen) -> bool:
    # explicit-stack DFS: stack holds (u, next neighbour position, d used to reach u)
    stack = [(root, 0, None)]
    while stack:
        u, pos, via = stack[-1]
        row = adj[u]
        while pos < len(row) and seen[row[pos]]:
            pos += 1
        if pos == len(row):
            stack.pop()
            continue
        d = row[pos]
        seen[d] = True
        stack[-1] = (u, pos + 1, via)
        if match_d[d] is None:
            # flip the path: each stacked u takes the d that led to its successor
            match_d[d] = u
            for i in range(len(stack) - 1, 0, -1):
                match_d[stack[i][2]] = stack[i - 1][0]
            return True
        stack.append((match_d[d], 0, d))
    return False


def max_matching(g: BipartiteGraph) -> Matching:
    match_d: list[int | None] = [None] * g.d_count
    for u in range(g.u_count):
        _augment(g.adj, u, match_d, [False] * g.d_count)
    return Matching({u: d for d, u in enumerate(match_d) if u is not None})


def has_augmenting_path(g: BipartiteGraph, m: Matching) -> bool:
    """Return True if some free u reaches a free d by an alternating path.

    Berge's theorem: a matching is maximum exactly when this is False.
    """
    match_d: list[int | None] = [None] * g.d_count
    for u, d in m.pairs.items():
        match_d[d] = u
    seen = [False] * g.d_count
    frontier = [u for u in range(g.u_count) if u not in m.pairs]
    while frontier:
        nxt = []
        for u in frontier:
            for d in g.adj[u]:
                if seen[d]:
                    continue
                seen[d] = True
                if match_d[d] is None:
                    return True
                nxt.append(match_d[d])
        frontier = nxt
    return False


def has_perfect_matching(g: BipartiteGraph) -> bool:
    if g.u_count != g.d_count:
        raise ValueError(f"part sizes differ: {g.u_count} vs {g.d_count}")
    return max_matching(g).size == g.u_count
