"""Simple undirected graphs, their path metric, and Erdős–Rényi sampling.

Vertices are the dense integers ``0..n-1``.  Distances are plain ``int`` with
a dedicated :data:`INFINITY` sentinel for disconnected pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class _Infinity:
    """Extended-integer infinity.  Compares above every int, absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("eulermag.INFINITY")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class GraphError(ValueError):
    """Invalid graph input (self-loop, out-of-range vertex, malformed file)."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        dm = path_metric(self)
        return all(dm[0][v] is not INFINITY for v in range(self.n))


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> Graph:
    """Build a graph on ``0..n-1``; duplicate edges collapse, orientation is ignored."""
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    edges = set()
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if u == v:
            raise GraphError(f"self-loop ({u}, {v}) not allowed in a simple graph")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
        edges.add((min(u, v), max(u, v)))
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return Graph(n, frozenset(edges), tuple(tuple(sorted(a)) for a in adj))


def complete_graph(n: int) -> Graph:
    return from_edge_list(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


class DistanceMatrix:
    """All-pairs hop distances; rows are tuples so the matrix is read-only."""

    __slots__ = ("n", "_rows")

    def __init__(self, rows: Sequence[Sequence]):
        self._rows = tuple(tuple(r) for r in rows)
        self.n = len(self._rows)

    def __getitem__(self, u: int) -> tuple:
        return self._rows[u]

    def __call__(self, u: int, v: int):
        return self._rows[u][v]

    def __eq__(self, other) -> bool:
        return isinstance(other, DistanceMatrix) and self._rows == other._rows

    def __repr__(self) -> str:
        return f"DistanceMatrix(n={self.n})"

    def rows(self) -> tuple[tuple, ...]:
        return self._rows

    def max_finite(self) -> int:
        return max((d for r in self._rows for d in r if d is not INFINITY), default=0)


def path_metric(g: Graph) -> DistanceMatrix:
    """Breadth-first search from every vertex."""
    rows = []
    for s in range(g.n):
        dist: list = [INFINITY] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if dist[w] is INFINITY:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        rows.append(dist)
    return DistanceMatrix(rows)


def trail_length(dm: DistanceMatrix, word: Sequence[int]):
    """Sum of consecutive distances; INFINITY if any hop is disconnected."""
    total = 0
    for u, v in zip(word, word[1:]):
        d = dm[u][v]
        if d is INFINITY:
            return INFINITY
        total += d
    return total


@dataclass(frozen=True)
class ErParams:
    n: int
    alpha: float
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def p(self) -> float:
        return float(self.n) ** (-self.alpha)


def sample_er(params: ErParams) -> Graph:
    """Draw G(n, n^-alpha) with PCG64; pairs are drawn in lexicographic order."""
    n, p = params.n, params.p
    rng = np.random.Generator(np.random.PCG64(params.seed))
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    return from_edge_list(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format: first line ``n``, then ``u v`` per line."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise GraphError("empty graph file: expected vertex count on the first line")
    lineno, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise GraphError(f"line {lineno}: expected vertex count, got {first!r}") from None
    pairs = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex in {line!r}") from None
    return from_edge_list(n, pairs)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]) + "\n"


# Butterfly graph: two triangles 0-1-2 and 2-3-4 glued at vertex 2.
BUTTERFLY_EDGES = [(0, 1), (1, 2), (0, 2), (2, 3), (2, 4), (3, 4)]


def butterfly_graph() -> Graph:
    return from_edge_list(5, BUTTERFLY_EDGES)
