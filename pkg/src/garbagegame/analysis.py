"""Descent certificates and convergence reporting for the disposal dynamics.

The central object is a nonincreasing energy over trajectories: the sum of
thresholded squared differences over ordered vertex pairs.  Its per-step
decrease admits an explicit lower bound, which the verification suites check
on every step of every run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dynamics import GarbageState, Threshold, Trajectory, _check_compatible, as_threshold, effective_edges, step
from .graph import Graph


@dataclass(frozen=True)
class LyapunovRecord:
    """Energy at one state, its measured one-step decrease, and the certified
    lower bound on that decrease."""

    z: float
    decrement: float
    bound: float


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    limit_estimate: float
    initial_average: float
    max_deviation_from_average: float
    trivialization_time: int | None
    steps_run: int
    conservation_error: float


def lyapunov_z(g: Graph, s: GarbageState, eps: "Threshold | float") -> float:
    """Energy of a state: sum over ordered vertex pairs i != j.

    Finite threshold: social-edge pairs contribute min(eps^2, diff^2) and
    non-edge pairs contribute the constant eps^2.  Infinite threshold: the
    reduced form, plain squared differences over social-edge pairs only
    (the capped form would be infinite; the dropped terms are constant).
    """
    threshold = as_threshold(eps)
    _check_compatible(g, s)
    x = s.values.tolist()
    if threshold.is_infinite:
        total = 0.0
        for u, v in g._edges0:
            d = x[u] - x[v]
            total += d * d
        return 2.0 * total
    e2 = threshold.epsilon * threshold.epsilon
    total = 0.0
    for u, v in g._edges0:
        d = x[u] - x[v]
        total += min(e2, d * d)
    non_edge_ordered = g.n * (g.n - 1) - 2 * g.edge_count
    return 2.0 * total + non_edge_ordered * e2


def decrement_lower_bound(g: Graph, s: GarbageState, eps: "Threshold | float") -> float:
    """Certified lower bound on the one-step energy decrease:
    4 * sum_i (|E_t| - |N_i|) * (x_i - x_i')^2.  Zero when no edge is active."""
    threshold = as_threshold(eps)
    topo = effective_edges(g, s, threshold)
    if topo.edge_count == 0:
        return 0.0
    nxt = step(g, s, threshold)
    x = s.values
    y = nxt.values
    m = topo.edge_count
    total = 0.0
    for i in range(g.n):
        d = x[i] - y[i]
        total += (m - len(topo.neighborhoods[i])) * d * d
    return 4.0 * total


def lyapunov_record(g: Graph, s: GarbageState, eps: "Threshold | float") -> LyapunovRecord:
    """Energy, measured decrease, and bound for one step from s."""
    z = lyapunov_z(g, s, eps)
    z_next = lyapunov_z(g, step(g, s, eps), eps)
    return LyapunovRecord(z=z, decrement=z - z_next, bound=decrement_lower_bound(g, s, eps))


def is_trivial(s: GarbageState, vertices: Iterable[int], delta: float) -> bool:
    """True iff all amounts on the given vertices lie within delta of each
    other (inclusive)."""
    delta = float(delta)
    if math.isnan(delta) or delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    ids = sorted(set(vertices))
    if not ids:
        raise ValueError("vertex set must be nonempty")
    if ids[0] < 1 or ids[-1] > s.n:
        raise ValueError(f"vertex ids must lie in 1..{s.n}")
    vals = s.values[[v - 1 for v in ids]]
    return float(vals.max() - vals.min()) <= delta


def hull_bounds(s: GarbageState) -> tuple[float, float]:
    """The interval [min, max] spanned by the state; it never grows under a step."""
    return float(s.values.min()), float(s.values.max())


def convergence_report(traj: Trajectory, tol: float = 1e-9) -> ConvergenceReport:
    """Summarise a trajectory against the convergence-to-average prediction.

    converged requires the final amounts to agree within tol AND the final
    active graph to be the whole social graph, so threshold-locked
    oscillations are reported honestly.
    """
    if not traj.states:
        raise ValueError("trajectory has no states")
    if not (tol > 0.0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    g = traj.graph
    threshold = traj.threshold
    first = traj.states[0]
    final = traj.states[-1]
    initial_average = float(first.values.mean())
    max_dev = float(np.max(np.abs(final.values - initial_average)))
    sums = [float(s.values.sum()) for s in traj.states]
    conservation_error = max(
        (abs(b - a) for a, b in zip(sums, sums[1:])), default=0.0
    )
    trivialization_time: int | None = None
    for state in traj.states:
        if state.max_pairwise_diff() <= threshold.epsilon:
            trivialization_time = state.time
            break
    final_topology_full = effective_edges(g, final, threshold).edge_count == g.edge_count
    converged = final.max_pairwise_diff() <= tol and final_topology_full
    return ConvergenceReport(
        converged=converged,
        limit_estimate=float(final.values.mean()),
        initial_average=initial_average,
        max_deviation_from_average=max_dev,
        trivialization_time=trivialization_time,
        steps_run=traj.steps_run,
        conservation_error=conservation_error,
    )
