"""Synchronous dynamics of the threshold-constrained garbage disposal game.

Each agent holds a nonnegative amount of garbage.  At every step the agents
whose amounts differ by at most the confidence threshold, and who are social
neighbors, exchange a fixed share: along each active edge both endpoints
dump the fraction 1/|E_t| of their garbage onto each other, where E_t is the
set of active edges.  The update is column-stochastic, so the total amount
is conserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class Threshold:
    """Confidence threshold; positive real or +infinity (no threshold)."""

    epsilon: float

    def __post_init__(self) -> None:
        eps = float(self.epsilon)
        if math.isnan(eps) or eps <= 0.0:
            raise ValueError(f"threshold must be positive, got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", eps)

    @classmethod
    def infinite(cls) -> "Threshold":
        return cls(math.inf)

    @classmethod
    def parse(cls, text: str) -> "Threshold":
        """Parse a CLI token: 'inf' (or 'infinity') or a positive real."""
        token = text.strip().lower()
        if token in ("inf", "infinity"):
            return cls.infinite()
        try:
            return cls(float(token))
        except ValueError:
            raise ValueError(f"invalid threshold {text!r}: expected a positive real or 'inf'") from None

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.epsilon)


def as_threshold(eps: "Threshold | float") -> Threshold:
    return eps if isinstance(eps, Threshold) else Threshold(eps)


@dataclass(frozen=True, eq=False)
class GarbageState:
    """Garbage amounts of all agents at one time step.

    ``values`` is stored as a read-only float64 vector; every entry must be
    finite and nonnegative.
    """

    values: np.ndarray
    time: int = 0

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("state must be a nonempty 1-D vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("garbage amounts must be finite")
        if np.any(arr < 0.0):
            i = int(np.argmin(arr))
            raise ValueError(f"negative garbage amount {float(arr[i])!r} at agent {i + 1}")
        if not isinstance(self.time, int) or self.time < 0:
            raise ValueError(f"time must be a nonnegative integer, got {self.time!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def max_pairwise_diff(self) -> float:
        """Largest difference between any two agents' amounts."""
        return float(self.values.max() - self.values.min())


@dataclass(frozen=True)
class ActiveTopology:
    """Active edge set at one time step, with per-vertex neighborhoods."""

    active_edges: frozenset[tuple[int, int]]
    neighborhoods: tuple[tuple[int, ...], ...]
    edge_count: int

    @property
    def n(self) -> int:
        return len(self.neighborhoods)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.neighborhoods[v - 1]

    def laplacian(self) -> np.ndarray:
        """Laplacian of the active graph as a float matrix."""
        n = self.n
        L = np.zeros((n, n))
        for u, v in self.active_edges:
            L[u - 1, v - 1] = -1.0
            L[v - 1, u - 1] = -1.0
            L[u - 1, u - 1] += 1.0
            L[v - 1, v - 1] += 1.0
        return L

    def components(self) -> list[frozenset[int]]:
        """Connected components of the active graph (isolated vertices included)."""
        seen = [False] * self.n
        comps: list[frozenset[int]] = []
        for start in range(1, self.n + 1):
            if seen[start - 1]:
                continue
            seen[start - 1] = True
            stack = [start]
            comp = [start]
            while stack:
                u = stack.pop()
                for v in self.neighborhoods[u - 1]:
                    if not seen[v - 1]:
                        seen[v - 1] = True
                        comp.append(v)
                        stack.append(v)
            comps.append(frozenset(comp))
        return comps


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-state trajectory diagnostics."""

    z: float
    active_edges: int
    max_diff: float


@dataclass
class Trajectory:
    """Ordered states of one run plus per-state diagnostics."""

    graph: Graph
    threshold: Threshold
    states: list[GarbageState]
    diagnostics: list[StepDiagnostics] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.diagnostics and len(self.diagnostics) != len(self.states):
            raise ValueError("diagnostics must align one-to-one with states")

    @property
    def initial_state(self) -> GarbageState:
        return self.states[0]

    @property
    def final_state(self) -> GarbageState:
        return self.states[-1]

    @property
    def steps_run(self) -> int:
        return len(self.states) - 1

    def values_matrix(self) -> np.ndarray:
        """States stacked as a (steps+1, n) array, row k = time index k."""
        return np.stack([s.values for s in self.states])


def _check_compatible(g: Graph, s: GarbageState) -> None:
    if s.n != g.n:
        raise ValueError(f"state has {s.n} entries but graph has {g.n} vertices")


def effective_edges(g: Graph, s: GarbageState, eps: "Threshold | float") -> ActiveTopology:
    """Active topology: social edges whose endpoint amounts differ by at most
    the threshold (inclusive comparison)."""
    threshold = as_threshold(eps).epsilon
    _check_compatible(g, s)
    x = s.values
    active = []
    table: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edge_list:
        if abs(x[u - 1] - x[v - 1]) <= threshold:
            active.append((u, v))
            table[u - 1].append(v)
            table[v - 1].append(u)
    return ActiveTopology(
        active_edges=frozenset(active),
        neighborhoods=tuple(tuple(nbrs) for nbrs in table),
        edge_count=len(active),
    )


def transition_matrix(g: Graph, s: GarbageState, eps: "Threshold | float") -> np.ndarray:
    """Column-stochastic transition matrix of one step.

    Off-diagonal entries are 1/|E_t| on active edges; the diagonal keeps the
    remainder 1 - |N_i|/|E_t|.  With no active edges the matrix is the
    identity.
    """
    topo = effective_edges(g, s, eps)
    n = g.n
    if topo.edge_count == 0:
        return np.eye(n)
    m = topo.edge_count
    A = np.zeros((n, n))
    w = 1.0 / m
    for u, v in topo.active_edges:
        A[u - 1, v - 1] = w
        A[v - 1, u - 1] = w
    for i in range(n):
        A[i, i] = 1.0 - len(topo.neighborhoods[i]) / m
    return A


def step(g: Graph, s: GarbageState, eps: "Threshold | float") -> GarbageState:
    """Advance one synchronous step.

    Each agent receives 1/|E_t| of every active neighbor's garbage and keeps
    the fraction 1 - |N_i|/|E_t| of its own.  Neighbor contributions
    accumulate in ascending neighbor id so results are reproducible.
    Runs in O(n + |E_t|).
    """
    threshold = as_threshold(eps).epsilon
    _check_compatible(g, s)
    x = s.values.tolist()
    n = g.n
    recv = [0.0] * n
    deg = [0] * n
    m = 0
    for u, v in g._edges0:  # lexicographic order: per-vertex sums ascend in neighbor id
        xu = x[u]
        xv = x[v]
        if abs(xu - xv) <= threshold:
            recv[u] += xv
            recv[v] += xu
            deg[u] += 1
            deg[v] += 1
            m += 1
    if m == 0:
        return GarbageState(s.values, time=s.time + 1)
    out = [recv[i] / m + (1.0 - deg[i] / m) * x[i] for i in range(n)]
    return GarbageState(out, time=s.time + 1)


def _diagnose(g: Graph, s: GarbageState, threshold: Threshold) -> StepDiagnostics:
    from .analysis import lyapunov_z  # local import, analysis depends on this module

    return StepDiagnostics(
        z=lyapunov_z(g, s, threshold),
        active_edges=effective_edges(g, s, threshold).edge_count,
        max_diff=s.max_pairwise_diff(),
    )


def run(
    g: Graph,
    s0: GarbageState,
    eps: "Threshold | float",
    max_steps: int = 100_000,
    convergence_tol: float = 1e-9,
) -> Trajectory:
    """Iterate the step up to max_steps, recording diagnostics each step.

    Stops early once the amounts agree within convergence_tol AND every
    social edge is active (the post-threshold regime); oscillation on a
    proper subgraph is never reported as converged.
    """
    threshold = as_threshold(eps)
    _check_compatible(g, s0)
    if not isinstance(max_steps, int) or max_steps < 0:
        raise ValueError(f"max_steps must be a nonnegative integer, got {max_steps!r}")
    if not (convergence_tol > 0.0):
        raise ValueError(f"convergence_tol must be positive, got {convergence_tol!r}")
    states = [s0]
    diags = [_diagnose(g, s0, threshold)]
    total_edges = g.edge_count
    for _ in range(max_steps):
        d = diags[-1]
        if d.max_diff <= convergence_tol and d.active_edges == total_edges:
            break
        nxt = step(g, states[-1], threshold)
        states.append(nxt)
        diags.append(_diagnose(g, nxt, threshold))
    return Trajectory(graph=g, threshold=threshold, states=states, diagnostics=diags)
