"""Command-line interface.

::

    otcut partition --graph G.edges --k 2 --variant ncut [--out report.json]
    otcut baseline  --graph G.edges --k 2 --variant ncut --method spectral
    otcut toy       --dataset moons --n 300 --seed 0 --knn 10 --out data/moons
    otcut metrics   --partition P.txt --labels Y.txt [--graph G.edges]

Exit codes: 0 success, 2 bad arguments or input files, 3 solver failure.
Output is plain text (no ANSI colors), so ``NO_COLOR`` is honored trivially.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import baseline, graph, metrics, solver
from .errors import (ConfigError, InfeasibleMarginals, LengthMismatch,
                     NumericalFailure, OTCutError, TooLarge)
from .report import RunReport

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 2, 3
TARGET_SUM_TOL = 1e-9


class UsageError(Exception):
    pass


def _load_graph(path, fmt):
    if fmt == "mtx":
        return graph.load_matrix_market(path)
    return graph.load_edge_list(path)


def load_distribution(path):
    """One probability per line; must sum to 1 within 1e-9."""
    vals = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                vals.append(float(line))
    p = np.asarray(vals, dtype=np.float64)
    if p.size == 0 or p.min() < 0:
        raise UsageError(f"{path}: expected nonnegative probabilities")
    if abs(p.sum() - 1.0) > TARGET_SUM_TOL:
        raise UsageError(f"{path}: probabilities sum to {p.sum()!r}, not 1")
    return p / p.sum()


def _size_weights(g, variant, source):
    if variant == "ncut":
        return g.degrees
    if variant == "rcut":
        return None
    return source


def _metrics_block(g, assignment, k, weights, target, labels):
    sizes = solver.cluster_size_distribution(solver.Partition(assignment, k),
                                             weights)
    return sizes, {
        "ari": None if labels is None else metrics.ari(labels, assignment),
        "kl": None if target is None else metrics.kl_divergence(target, sizes),
        "cut": metrics.cut_value(g, assignment),
        "ncut": metrics.ncut_value(g, assignment),
        "rcut": metrics.rcut_value(g, assignment),
    }


def _read_labels(path, n):
    if path is None:
        return None
    labels = graph.load_labels(path)
    if labels.size != n:
        raise UsageError(f"{path}: {labels.size} labels for {n} nodes")
    return labels


def cmd_partition(args):
    tic = time.perf_counter()
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    if args.variant == "custom" and args.target_dist is None:
        raise UsageError("--variant custom requires --target-dist")
    g = _load_graph(args.graph, args.format)
    source = target = None
    if args.variant == "custom":
        target = load_distribution(args.target_dist)
        source = (load_distribution(args.source_dist) if args.source_dist
                  else graph.uniform_distribution(g.n))
    labels = _read_labels(args.labels, g.n)
    cfg = solver.SolverConfig(alpha=args.alpha, max_iter=args.iters,
                              tol=args.tol, variant=args.variant, source=source,
                              target=target, seed=args.seed,
                              laplacian_kind=args.laplacian,
                              safe_step=args.safe_step, restarts=args.restarts)
    plan, part, trace = solver.solve(g, args.k, cfg)
    if args.dump_plan:
        with open(args.dump_plan, "w") as fh:
            fh.write(plan.to_triplet_text())
    constraints = solver.size_constraints(g, args.k, cfg)
    sizes, block = _metrics_block(g, part.assignment, args.k,
                                  _size_weights(g, args.variant, source),
                                  constraints.target, labels)
    return RunReport(
        command="partition",
        config={"graph": args.graph, "format": args.format, "k": args.k,
                "variant": args.variant, "alpha": args.alpha,
                "alpha_used": trace.alpha, "lambda": 1.0 / (2.0 * trace.alpha),
                "iters": args.iters, "tol": args.tol, "seed": args.seed,
                "restarts": args.restarts, "safe_step": args.safe_step,
                "laplacian": cfg.laplacian_kind.value,
                "target_dist": args.target_dist,
                "source_dist": args.source_dist},
        graph={"n": g.n, "edges": g.num_edges},
        objective=trace.objectives[-1],
        iterations=trace.iterations_run,
        objectives=list(trace.objectives),
        assignment=part.assignment.tolist(),
        cluster_sizes=sizes.tolist(),
        target=constraints.target.tolist(),
        metrics=block,
        timings={"total_seconds": time.perf_counter() - tic,
                 "per_iter_seconds": list(trace.per_iter_seconds)},
    )


def cmd_baseline(args):
    tic = time.perf_counter()
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    if args.variant not in ("ncut", "rcut"):
        raise UsageError("spectral baseline supports --variant ncut or rcut")
    g = _load_graph(args.graph, args.format)
    labels = _read_labels(args.labels, g.n)
    part = baseline.spectral_clustering(g, args.k, args.variant, seed=args.seed,
                                        restarts=args.restarts)
    target = graph.uniform_distribution(args.k)
    sizes, block = _metrics_block(g, part.assignment, args.k,
                                  _size_weights(g, args.variant, None),
                                  target, labels)
    return RunReport(
        command="baseline",
        config={"graph": args.graph, "format": args.format, "k": args.k,
                "variant": args.variant, "method": args.method,
                "seed": args.seed, "restarts": args.restarts},
        graph={"n": g.n, "edges": g.num_edges},
        objective=None,
        iterations=0,
        objectives=[],
        assignment=part.assignment.tolist(),
        cluster_sizes=sizes.tolist(),
        target=target.tolist(),
        metrics=block,
        timings={"total_seconds": time.perf_counter() - tic,
                 "per_iter_seconds": []},
    )


def cmd_toy(args):
    if args.n < 4:
        raise UsageError("--n must be >= 4")
    make = graph.two_moons if args.dataset == "moons" else graph.concentric_circles
    points, labels = make(args.n, noise=args.noise, seed=args.seed)
    if args.gamma is not None:
        if args.gamma <= 0:
            raise UsageError("--gamma must be positive")
        g = graph.make_rbf_graph(points, args.gamma)
    else:
        if args.knn < 1:
            raise UsageError("--knn must be >= 1")
        g = graph.make_knn_graph(points, args.knn)
    parent = os.path.dirname(args.out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    graph.write_edge_list(g, args.out + ".edges")
    graph.write_labels(labels, args.out + ".labels")
    return {"graph": args.out + ".edges", "labels": args.out + ".labels",
            "n": g.n, "edges": g.num_edges}


def cmd_metrics(args):
    part = graph.load_labels(args.partition)
    labels = graph.load_labels(args.labels)
    if part.size != labels.size:
        raise UsageError(f"partition has {part.size} entries, labels {labels.size}")
    out = {"ari": metrics.ari(part, labels)}
    k = int(part.max()) + 1
    g = _load_graph(args.graph, args.format) if args.graph else None
    if g is not None and g.n != part.size:
        raise UsageError(f"graph has {g.n} nodes, partition {part.size}")
    if args.target:
        target = load_distribution(args.target)
        k = max(k, target.size)
        if target.size != k:
            raise UsageError("target length differs from the number of clusters")
        weights = g.degrees if (args.sizes == "degree" and g is not None) else None
        if args.sizes == "degree" and g is None:
            raise UsageError("--sizes degree needs --graph")
        sizes = solver.cluster_size_distribution(solver.Partition(part, k), weights)
        kl = metrics.kl_divergence(target, sizes)
        out["kl"] = kl if np.isfinite(kl) else "inf"
        out["cluster_sizes"] = sizes.tolist()
    if g is not None:
        out.update(cut=metrics.cut_value(g, part), ncut=metrics.ncut_value(g, part),
                   rcut=metrics.rcut_value(g, part))
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="otcut",
                                description="Graph partitioning under size "
                                            "constraints via optimal transport.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--graph", required=True)
        sp.add_argument("--format", choices=["edgelist", "mtx"], default="edgelist")
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--labels")
        sp.add_argument("--out")

    sp = sub.add_parser("partition", help="run the OT-cut solver")
    graph_args(sp)
    sp.add_argument("--variant", choices=["ncut", "rcut", "custom"], default="ncut")
    sp.add_argument("--target-dist")
    sp.add_argument("--source-dist")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--iters", type=int, default=20)
    sp.add_argument("--tol", type=float, default=0.0)
    sp.add_argument("--restarts", type=int, default=1)
    sp.add_argument("--safe-step", action="store_true")
    sp.add_argument("--laplacian", choices=["sym", "unnormalized"], default="sym")
    sp.add_argument("--dump-plan", help="write the final plan as i j mass triplets")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("baseline", help="run the spectral clustering baseline")
    graph_args(sp)
    sp.add_argument("--method", choices=["spectral"], default="spectral")
    sp.add_argument("--variant", choices=["ncut", "rcut"], default="ncut")
    sp.add_argument("--restarts", type=int, default=10)
    sp.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("toy", help="write a toy graph and its labels")
    sp.add_argument("--dataset", choices=["moons", "circles"], required=True)
    sp.add_argument("--n", type=int, default=300)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--noise", type=float, default=0.05)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--knn", type=int, default=10)
    group.add_argument("--gamma", type=float)
    sp.add_argument("--out", required=True, help="output path prefix")
    sp.set_defaults(func=cmd_toy)

    sp = sub.add_parser("metrics", help="compare a partition with labels")
    sp.add_argument("--partition", required=True)
    sp.add_argument("--labels", required=True)
    sp.add_argument("--target")
    sp.add_argument("--sizes", choices=["count", "degree"], default="count")
    sp.add_argument("--graph")
    sp.add_argument("--format", choices=["edgelist", "mtx"], default="edgelist")
    sp.set_defaults(func=cmd_metrics)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (NumericalFailure, TooLarge) as exc:
        print(f"otcut: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (UsageError, ConfigError, LengthMismatch, InfeasibleMarginals,
            OSError, ValueError) as exc:
        print(f"otcut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OTCutError as exc:
        print(f"otcut: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    text = (result.to_json() if isinstance(result, RunReport)
            else json.dumps(result, indent=2, sort_keys=True) + "\n")
    out = getattr(args, "out", None)
    if out and isinstance(result, RunReport):
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
