"""Undirected simple social graphs: construction, parsing, generation, queries.

Vertices are the integers 1..n.  Edges are unordered pairs stored canonically
as (min, max) tuples, which fixes the iteration order used by every
downstream sum.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .rng import Xoshiro256StarStar

GRAPH_KINDS = ("path", "cycle", "star", "complete", "erdos_renyi")


class GraphError(ValueError):
    """Invalid graph structure or unparsable edge-list input."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices 1..n.

    ``edges`` may be given as any iterable of vertex pairs; it is normalised
    to a frozenset of (min, max) tuples.  Self-loops and out-of-range
    endpoints are rejected.
    """

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        canonical = set()
        for edge in self.edges:
            u, v = edge
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 1..{self.n}")
            canonical.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(canonical))

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        """Edges in canonical (lexicographic) order."""
        return tuple(sorted(self.edges))

    @cached_property
    def _edges0(self) -> tuple[tuple[int, int], ...]:
        """Canonically ordered edges with 0-based endpoints (internal hot path)."""
        return tuple((u - 1, v - 1) for u, v in self.edge_list)

    @cached_property
    def _neighbor_table(self) -> tuple[tuple[int, ...], ...]:
        table: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edge_list:
            table[u - 1].append(v)
            table[v - 1].append(u)
        return tuple(tuple(sorted(nbrs)) for nbrs in table)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        if not (1 <= v <= self.n):
            raise GraphError(f"vertex {v} outside 1..{self.n}")
        return self._neighbor_table[v - 1]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self._neighbor_table)

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.n else 0


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format into a Graph.

    Format: optional '#' comment lines, then a header line ``n <count>``,
    then one ``<u> <v>`` line per edge.  Blank lines are ignored.  Raises
    GraphError with a line number for malformed lines, out-of-range ids,
    self-loops, and duplicate edges (in either order).
    """
    n: int | None = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "n":
                raise GraphError(f"line {lineno}: expected header 'n <count>', got {raw!r}")
            try:
                n = int(tokens[1])
            except ValueError:
                raise GraphError(f"line {lineno}: vertex count {tokens[1]!r} is not an integer") from None
            if n < 1:
                raise GraphError(f"line {lineno}: vertex count must be positive, got {n}")
            continue
        if len(tokens) != 2:
            raise GraphError(f"line {lineno}: expected '<u> <v>', got {raw!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex id in {raw!r}") from None
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"line {lineno}: vertex id outside 1..{n}")
        key = (u, v) if u < v else (v, u)
        if key in edges:
            raise GraphError(f"line {lineno}: duplicate edge ({u}, {v})")
        edges.add(key)
    if n is None:
        raise GraphError("missing header line 'n <count>'")
    return Graph(n, frozenset(edges))


def render_edge_list(g: Graph) -> str:
    """Canonical renderer for the edge-list format; inverse of parse_edge_list."""
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_list)
    return "\n".join(lines) + "\n"


def generate_graph(kind: str, order: int, p: float | None = None, seed: int = 0) -> Graph:
    """Generate a canonical-family or Erdos-Renyi graph.

    Args:
        kind: one of 'path', 'cycle', 'star', 'complete', 'erdos_renyi'.
        order: number of vertices (>= 1).
        p: edge probability, required for (and only valid for) 'erdos_renyi'.
        seed: PRNG seed, used only by 'erdos_renyi'.

    The result is deterministic for fixed (kind, order, p, seed): the
    Erdos-Renyi variant makes one uniform draw per vertex pair in
    lexicographic order and keeps the edge when the draw is below p.
    Vertex 1 is the center of 'star'.
    """
    if not isinstance(order, int) or order < 1:
        raise GraphError(f"order must be a positive integer, got {order!r}")
    if kind != "erdos_renyi" and p is not None:
        raise GraphError(f"edge probability is only valid for erdos_renyi, not {kind!r}")
    if kind == "path":
        edges = {(i, i + 1) for i in range(1, order)}
    elif kind == "cycle":
        edges = {(i, i + 1) for i in range(1, order)}
        if order >= 3:
            edges.add((1, order))
    elif kind == "star":
        edges = {(1, k) for k in range(2, order + 1)}
    elif kind == "complete":
        edges = {(u, v) for u in range(1, order + 1) for v in range(u + 1, order + 1)}
    elif kind == "erdos_renyi":
        if p is None:
            raise GraphError("erdos_renyi requires an edge probability p")
        if not (0.0 <= p <= 1.0):
            raise GraphError(f"edge probability must be in [0, 1], got {p}")
        rng = Xoshiro256StarStar(seed)
        edges = set()
        for u in range(1, order + 1):
            for v in range(u + 1, order + 1):
                if rng.random() < p:
                    edges.add((u, v))
    else:
        raise GraphError(f"unknown graph kind {kind!r}; expected one of {GRAPH_KINDS}")
    return Graph(order, frozenset(edges))


def is_connected(g: Graph) -> bool:
    """True iff every vertex pair is joined by a path; a single vertex counts."""
    if g.n == 1:
        return True
    seen = [False] * g.n
    seen[0] = True
    queue = deque([1])
    count = 1
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if not seen[v - 1]:
                seen[v - 1] = True
                count += 1
                queue.append(v)
    return count == g.n


def is_star(g: Graph) -> bool:
    """True iff g is a star: one center adjacent to every other vertex, all
    other degrees 1.

    A single edge on two vertices is a star; a single vertex is not.
    """
    if g.n < 2:
        return False
    degs = g.degrees
    center_count = sum(1 for d in degs if d == g.n - 1)
    leaf_count = sum(1 for d in degs if d == 1)
    if g.n == 2:
        return center_count == 2  # one edge: both endpoints have degree 1 = n-1
    return center_count == 1 and leaf_count == g.n - 1


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian L = D - A as an integer matrix (row sums zero)."""
    L = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edge_list:
        L[u - 1, v - 1] = -1
        L[v - 1, u - 1] = -1
        L[u - 1, u - 1] += 1
        L[v - 1, v - 1] += 1
    return L
