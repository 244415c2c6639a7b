"""Command-line front end.

Subcommands:
    simulate   run the dynamics from a config, emit trajectory CSV + summary JSON
    verify     run a named property suite on randomized instances
    spectral   print the spectral certificate of one graph as JSON

Numbers in emitted files use 17 significant digits, which round-trips
float64 exactly, so identical flags and seed give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Callable

import numpy as np

from .analysis import (
    convergence_report,
    decrement_lower_bound,
    hull_bounds,
    is_trivial,
    lyapunov_z,
)
from .dynamics import (
    GarbageState,
    Threshold,
    Trajectory,
    effective_edges,
    run,
    step,
    transition_matrix,
)
from .graph import Graph, GraphError, generate_graph, is_connected, is_star, parse_edge_list
from .rng import Xoshiro256StarStar, derive_seed
from .spectral import ISOPERIMETRIC_MAX_ORDER, cheeger_check, nontrivial_displacement_bound

VERIFY_SUITES = (
    "conservation",
    "lyapunov",
    "triviality",
    "hull",
    "equivalence",
    "cheeger",
    "displacement",
)

_GENERAL_MAX_ORDER = 200  # dense eigen/step work stays desk-scale


class CliError(Exception):
    """Operational CLI failure; message goes to stderr, exit is nonzero."""


# ---------------------------------------------------------------------------
# deterministic serialization


def format_float(x: float) -> str:
    """17 significant digits; round-trip exact for float64."""
    return format(x, ".17g")


def to_json(value: Any) -> str:
    """Deterministic JSON with float64-exact number formatting."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def trajectory_csv(traj: Trajectory) -> str:
    """Per-step CSV: t, x_1..x_n, energy, active edge count, max difference."""
    n = traj.graph.n
    header = "t," + ",".join(f"x_{i}" for i in range(1, n + 1)) + ",z,active_edges,max_diff"
    lines = [header]
    for state, diag in zip(traj.states, traj.diagnostics):
        cells = [str(state.time)]
        cells.extend(format_float(v) for v in state.values.tolist())
        cells.append(format_float(diag.z))
        cells.append(str(diag.active_edges))
        cells.append(format_float(diag.max_diff))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# config parsing


def parse_generate_spec(spec: str, seed: int) -> Graph:
    """Parse a '--generate kind:params' token, e.g. cycle:4 or erdos_renyi:8:0.5."""
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind in ("path", "cycle", "star", "complete"):
            if len(parts) != 2:
                raise CliError(f"--generate {kind} takes exactly one parameter: {kind}:<order>")
            return generate_graph(kind, int(parts[1]))
        if kind == "erdos_renyi":
            if len(parts) != 3:
                raise CliError("--generate erdos_renyi takes two parameters: erdos_renyi:<order>:<p>")
            return generate_graph(kind, int(parts[1]), p=float(parts[2]), seed=seed)
    except ValueError as exc:
        raise CliError(f"bad --generate spec {spec!r}: {exc}") from None
    raise CliError(f"unknown graph kind {kind!r} in --generate spec")


def _load_graph(args: argparse.Namespace) -> Graph:
    if (args.graph is None) == (args.generate is None):
        raise CliError("exactly one of --graph or --generate is required")
    if args.graph is not None:
        try:
            text = open(args.graph, encoding="utf-8").read()
        except OSError as exc:
            raise CliError(f"cannot read graph file: {exc}") from None
        return parse_edge_list(text)
    return parse_generate_spec(args.generate, seed=derive_seed(args.seed, 0))


def random_uniform_state(n: int, lo: float, hi: float, seed: int) -> GarbageState:
    """Independent uniform(lo, hi) amount per agent from the seeded stream."""
    if not (0.0 <= lo <= hi):
        raise CliError(f"uniform bounds must satisfy 0 <= lo <= hi, got {lo}:{hi}")
    rng = Xoshiro256StarStar(seed)
    return GarbageState([rng.uniform(lo, hi) for _ in range(n)])


def _initial_state(args: argparse.Namespace, n: int) -> GarbageState:
    if (args.init is None) == (args.init_random is None):
        raise CliError("exactly one of --init or --init-random is required")
    if args.init is not None:
        try:
            values = [float(tok) for tok in args.init.split(",")]
        except ValueError:
            raise CliError(f"bad --init list {args.init!r}") from None
        if len(values) != n:
            raise CliError(f"--init has {len(values)} values but the graph has {n} vertices")
        return GarbageState(values)
    parts = args.init_random.split(":")
    if len(parts) != 3 or parts[0] != "uniform":
        raise CliError("--init-random expects uniform:<lo>:<hi>")
    try:
        lo, hi = float(parts[1]), float(parts[2])
    except ValueError:
        raise CliError(f"bad --init-random bounds in {args.init_random!r}") from None
    return random_uniform_state(n, lo, hi, seed=derive_seed(args.seed, 1))


# ---------------------------------------------------------------------------
# randomized instances for the verify suites


def roundoff_slack(scale: float) -> float:
    """Headroom for checking real-arithmetic identities in float64.

    The step is a convex combination evaluated in floating point, so hull
    bounds and pairwise spreads can overshoot their true values by a unit
    in the last place.  Four ulps of the value scale covers the observed
    worst case with margin while staying far below every stated tolerance.
    """
    return 4.0 * math.ulp(max(1.0, abs(scale)))


def random_connected_graph(order: int, rng: Xoshiro256StarStar, extra_edge_prob: float = 0.3) -> Graph:
    """Random connected graph: a random recursive tree plus independent extra
    edges with the given probability."""
    edges = set()
    for v in range(2, order + 1):
        parent = 1 + rng.randrange(v - 1)
        edges.add((parent, v))
    for u in range(1, order + 1):
        for v in range(u + 1, order + 1):
            if rng.random() < extra_edge_prob:
                edges.add((u, v))
    return Graph(order, frozenset(edges))


def random_connected_nonstar_graph(order: int, rng: Xoshiro256StarStar) -> Graph:
    """Connected non-star instance; resamples until the star shape is avoided."""
    if order < 3:
        raise ValueError("non-star instances need at least 3 vertices")
    for _ in range(1000):
        g = random_connected_graph(order, rng)
        if not is_star(g):
            return g
    raise RuntimeError("failed to sample a non-star graph")  # pragma: no cover


def _random_instance(rng: Xoshiro256StarStar, lo: int, hi: int) -> tuple[Graph, GarbageState, Threshold]:
    n = lo + rng.randrange(hi - lo + 1)
    g = random_connected_graph(n, rng)
    s = GarbageState([10.0 * rng.random() for _ in range(n)])
    if rng.random() < 0.5:
        eps = Threshold.infinite()
    else:
        spread = s.max_pairwise_diff()
        eps = Threshold((0.25 + rng.random()) * spread) if spread > 0 else Threshold(1.0)
    return g, s, eps


def _short_run(g: Graph, s: GarbageState, eps: Threshold, steps: int = 25) -> list[GarbageState]:
    states = [s]
    for _ in range(steps):
        states.append(step(g, states[-1], eps))
    return states


def _suite_conservation(rng, lo, hi) -> list[str]:
    g, s, eps = _random_instance(rng, lo, hi)
    states = _short_run(g, s, eps)
    out = []
    for a, b in zip(states, states[1:]):
        budget = 1e-12 * g.n * float(a.values.max())
        drift = abs(float(b.values.sum()) - float(a.values.sum()))
        if drift > budget:
            out.append(f"conservation drift {drift:.3e} exceeds {budget:.3e} at t={a.time}")
    return out


def _suite_lyapunov(rng, lo, hi) -> list[str]:
    g, s, eps = _random_instance(rng, lo, hi)
    out = []
    for a in _short_run(g, s, eps):
        z = lyapunov_z(g, a, eps)
        z_next = lyapunov_z(g, step(g, a, eps), eps)
        bound = decrement_lower_bound(g, a, eps)
        if z - z_next < bound - 1e-9:
            out.append(f"decrement {z - z_next!r} below bound {bound!r} at t={a.time}")
    return out


def _suite_triviality(rng, lo, hi) -> list[str]:
    g, s, eps = _random_instance(rng, lo, hi)
    states = _short_run(g, s, eps)
    out = []
    vertices = range(1, g.n + 1)
    for a, b in zip(states, states[1:]):
        slack = roundoff_slack(hull_bounds(a)[1])
        delta = max(a.max_pairwise_diff() * (0.5 + rng.random()), 1e-9)
        if is_trivial(a, vertices, delta) and not is_trivial(b, vertices, delta + slack):
            out.append(f"delta-triviality lost at t={a.time} for delta={delta!r}")
        if a.max_pairwise_diff() <= eps.epsilon:
            if effective_edges(g, b, eps).edge_count != g.edge_count:
                out.append(f"active graph shrank after threshold-trivial state at t={a.time}")
    return out


def _suite_hull(rng, lo, hi) -> list[str]:
    g, s, eps = _random_instance(rng, lo, hi)
    states = _short_run(g, s, eps)
    out = []
    for a, b in zip(states, states[1:]):
        lo_a, hi_a = hull_bounds(a)
        lo_b, hi_b = hull_bounds(b)
        slack = roundoff_slack(hi_a)
        if lo_b < lo_a - slack or hi_b > hi_a + slack:
            out.append(f"hull grew at t={a.time}: [{lo_a},{hi_a}] -> [{lo_b},{hi_b}]")
    return out


def _suite_equivalence(rng, lo, hi) -> list[str]:
    g, s, eps = _random_instance(rng, lo, hi)
    out = []
    for a in _short_run(g, s, eps, steps=5):
        direct = step(g, a, eps).values
        A = transition_matrix(g, a, eps)
        via_matrix = A @ a.values
        if float(np.max(np.abs(via_matrix - direct))) > 1e-12:
            out.append(f"matrix form disagrees with direct step at t={a.time}")
        topo = effective_edges(g, a, eps)
        if topo.edge_count > 0:
            via_laplacian = (np.eye(g.n) - topo.laplacian() / topo.edge_count) @ a.values
            if float(np.max(np.abs(via_laplacian - direct))) > 1e-12:
                out.append(f"laplacian form disagrees with direct step at t={a.time}")
        col_err = float(np.max(np.abs(A.sum(axis=0) - 1.0)))
        if col_err > 1e-12:
            out.append(f"column sums off by {col_err:.3e} at t={a.time}")
    return out


def _suite_cheeger(rng, lo, hi) -> list[str]:
    n = lo + rng.randrange(hi - lo + 1)
    g = random_connected_graph(n, rng)
    report = cheeger_check(g)
    out = []
    if not report.sandwich_ok:
        out.append(
            f"sandwich violated on n={n}: lambda2={report.lambda2!r} i={report.isoperimetric!r}"
        )
    if not report.floor_ok:
        out.append(f"lambda2 {report.lambda2!r} not above floor {report.lambda2_floor!r}")
    return out


def _suite_displacement(rng, lo, hi) -> list[str]:
    n = lo + rng.randrange(hi - lo + 1)
    g = random_connected_graph(n, rng)
    s = GarbageState([10.0 * rng.random() for _ in range(n)])
    spread = s.max_pairwise_diff()
    if spread <= 0.0:
        return []
    delta = spread / 2.0
    res = nontrivial_displacement_bound(g, s, Threshold.infinite(), range(1, n + 1), delta)
    if not res.ok:
        return [f"displacement {res.lhs!r} not above bound {res.rhs!r} on n={n}"]
    return []


_SUITE_FUNCS: dict[str, Callable[[Xoshiro256StarStar, int, int], list[str]]] = {
    "conservation": _suite_conservation,
    "lyapunov": _suite_lyapunov,
    "triviality": _suite_triviality,
    "hull": _suite_hull,
    "equivalence": _suite_equivalence,
    "cheeger": _suite_cheeger,
    "displacement": _suite_displacement,
}


def run_verify(suite: str, trials: int, seed: int, size_lo: int, size_hi: int) -> dict:
    """Run one property suite on seeded random instances; returns the report."""
    if suite not in _SUITE_FUNCS:
        raise CliError(f"unknown suite {suite!r}; expected one of {VERIFY_SUITES}")
    if trials < 1:
        raise CliError(f"trials must be >= 1, got {trials}")
    max_order = ISOPERIMETRIC_MAX_ORDER if suite == "cheeger" else _GENERAL_MAX_ORDER
    if not (2 <= size_lo <= size_hi):
        raise CliError(f"sizes must satisfy 2 <= lo <= hi, got {size_lo}:{size_hi}")
    if size_hi > max_order:
        raise CliError(f"size budget exceeded for suite {suite!r}: {size_hi} > {max_order}")
    violations = []
    for trial in range(trials):
        trial_seed = derive_seed(seed, trial)
        rng = Xoshiro256StarStar(trial_seed)
        for message in _SUITE_FUNCS[suite](rng, size_lo, size_hi):
            violations.append({"trial": trial, "seed": trial_seed, "message": message})
    return {
        "suite": suite,
        "trials": trials,
        "seed": seed,
        "sizes": [size_lo, size_hi],
        "violations": violations,
        "passed": not violations,
    }


# ---------------------------------------------------------------------------
# trajectory re-validation (--validate)


def validate_trajectory(traj: Trajectory) -> None:
    """Re-check the dynamics invariants on an emitted trajectory; raises on violation."""
    g = traj.graph
    eps = traj.threshold
    for a, b in zip(traj.states, traj.states[1:]):
        recomputed = step(g, a, eps)
        if not np.array_equal(recomputed.values, b.values):
            raise CliError(f"trajectory mismatch: step from t={a.time} does not reproduce t={b.time}")
        drift = abs(float(b.values.sum()) - float(a.values.sum()))
        if drift > 1e-12 * g.n * float(a.values.max()):
            raise CliError(f"conservation violated at t={a.time}: drift {drift:.3e}")
        lo_a, hi_a = hull_bounds(a)
        lo_b, hi_b = hull_bounds(b)
        slack = roundoff_slack(hi_a)
        if lo_b < lo_a - slack or hi_b > hi_a + slack:
            raise CliError(f"hull bounds grew at t={a.time}")


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    s0 = _initial_state(args, g.n)
    threshold = Threshold.parse(args.epsilon)
    traj = run(g, s0, threshold, max_steps=args.max_steps, convergence_tol=args.tol)
    if args.validate:
        validate_trajectory(traj)
    report = convergence_report(traj, tol=args.tol)
    summary = {
        "n": g.n,
        "epsilon": "inf" if threshold.is_infinite else threshold.epsilon,
        "steps_run": report.steps_run,
        "converged": report.converged,
        "limit_estimate": report.limit_estimate,
        "initial_average": report.initial_average,
        "max_abs_dev_from_average": report.max_deviation_from_average,
        "conservation_error": report.conservation_error,
        "trivialization_time": report.trivialization_time,
        "is_star": is_star(g),
        "is_connected": is_connected(g),
    }
    summary_text = to_json(summary) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(trajectory_csv(traj))
    if args.summary:
        with open(args.summary, "w", encoding="utf-8", newline="") as fh:
            fh.write(summary_text)
    sys.stdout.write(summary_text)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        lo_text, hi_text = args.sizes.split(":")
        size_lo, size_hi = int(lo_text), int(hi_text)
    except ValueError:
        raise CliError(f"bad --sizes {args.sizes!r}; expected lo:hi") from None
    report = run_verify(args.suite, args.trials, args.seed, size_lo, size_hi)
    sys.stdout.write(to_json(report) + "\n")
    return 0 if report["passed"] else 1


def cmd_spectral(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    if g.n > ISOPERIMETRIC_MAX_ORDER:
        raise CliError(f"graph too large for exact certificates: n = {g.n} > {ISOPERIMETRIC_MAX_ORDER}")
    if not is_connected(g):
        raise CliError("graph is disconnected; spectral certificates need a connected graph")
    report = cheeger_check(g)
    payload = {
        "lambda2": report.lambda2,
        "isoperimetric": report.isoperimetric,
        "max_degree": report.max_degree,
        "sandwich_ok": report.sandwich_ok,
        "lambda2_floor": report.lambda2_floor,
    }
    sys.stdout.write(to_json(payload) + "\n")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_graph_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", help="path to an edge-list file")
    parser.add_argument("--generate", help="generator spec, e.g. cycle:4 or erdos_renyi:8:0.5")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="garbagegame",
        description="Simulate and verify the threshold-constrained garbage disposal game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the dynamics and emit CSV + summary JSON")
    _add_graph_source(sim)
    sim.add_argument("--init", help="comma-separated initial amounts, e.g. 0,1,2,3")
    sim.add_argument("--init-random", help="seeded distribution spec uniform:<lo>:<hi>")
    sim.add_argument("--epsilon", required=True, help="confidence threshold: positive real or 'inf'")
    sim.add_argument("--max-steps", type=int, default=100_000)
    sim.add_argument("--tol", type=float, default=1e-9, help="convergence tolerance on the spread")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", help="trajectory CSV output path")
    sim.add_argument("--summary", help="summary JSON output path (always printed to stdout)")
    sim.add_argument("--validate", action="store_true", help="re-check invariants before writing")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="run a property suite on randomized instances")
    ver.add_argument("--suite", required=True, choices=VERIFY_SUITES)
    ver.add_argument("--trials", type=int, default=100)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--sizes", default="3:10", help="graph order range lo:hi")
    ver.set_defaults(func=cmd_verify)

    spec = sub.add_parser("spectral", help="print the spectral certificate of a graph")
    _add_graph_source(spec)
    spec.add_argument("--seed", type=int, default=0)
    spec.set_defaults(func=cmd_spectral)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
