"""Command line interface: ``ggd <command> ...``.

Exit codes: 0 success, 1 usage, 2 parse/input, 3 numerical, 4 infeasible.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .coarsening import coarsen_to_size
from .distance import GgdParams, compute_ggd
from .exceptions import GGDError, GraphFormatError, InfeasibleError, NumericalError
from .graph import giant_component, is_connected
from .io import (fmt_float, graph_to_json, load_graph, load_graphs, matrix_to_csv,
                 read_matrix_csv, save_graph_json, write_rows_csv)
from .matching import match_graphs

EXIT_USAGE, EXIT_PARSE, EXIT_NUMERICAL, EXIT_INFEASIBLE = 1, 2, 3, 4

NORMALIZED_WARNING = ("the normalized-Laplacian variant is highly sensitive to epsilon; "
                      "compare values only at a fixed epsilon")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = 1e-4
    eta: float | None = None
    alpha: float = 0.0
    variant: str = "airm"
    k: int | None = None
    rounding: str = "lap"
    resistance: str = "auto"
    giant_component: bool = False
    batch: int | None = None
    seed: int = 0
    threads: int = 1

    def params(self) -> GgdParams:
        return GgdParams(epsilon=self.epsilon, eta=self.eta, alpha=self.alpha,
                         variant=self.variant, k=self.k, rounding=self.rounding,
                         resistance=self.resistance, giant_component=self.giant_component,
                         batch=self.batch)

    def to_dict(self) -> dict:
        return asdict(self)


def _threads(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("GGD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"GGD_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _resistance(value: str) -> str:
    kind, _, m = value.partition(":")
    if kind not in ("auto", "exact", "krylov") or (m and (kind != "krylov" or not m.isdigit()
                                                         or int(m) < 1)):
        raise argparse.ArgumentTypeError("expected auto, exact or krylov:M")
    return value


def _positive_float(value: str) -> float:
    x = float(value)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def config_from_args(args) -> RunConfig:
    try:
        cfg = RunConfig(epsilon=args.epsilon, eta=args.eta, alpha=args.alpha,
                        variant=args.variant, k=args.approx_k, rounding=args.rounding,
                        resistance=args.resistance, giant_component=args.giant_component,
                        batch=args.batch, seed=args.seed, threads=_threads(args.threads))
        cfg.params()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def _dumps(obj) -> str:
    """JSON with every float written at 17 significant digits."""
    if isinstance(obj, float):
        return fmt_float(obj) if np.isfinite(obj) else "null"
    if isinstance(obj, (np.floating,)):
        return _dumps(float(obj))
    if isinstance(obj, (np.integer,)):
        return str(int(obj))
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    return json.dumps(obj)


def _emit(obj, out: str | None = None) -> None:
    text = _dumps(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _prepare(g, cfg: RunConfig, which: str):
    if is_connected(g):
        return g
    if cfg.giant_component:
        return giant_component(g)
    raise InfeasibleError(f"{which} graph is disconnected (use --giant-component)")


def cmd_dist(args, cfg: RunConfig) -> None:
    g1, g2 = load_graph(args.a), load_graph(args.b)
    res = compute_ggd(g1, g2, cfg.params())
    out = res.to_dict()
    out.pop("params")
    out["config"] = cfg.to_dict()
    out["warnings"] = [NORMALIZED_WARNING] if cfg.variant == "normalized" else []
    _emit(out, args.out)


def cmd_matrix(args, cfg: RunConfig) -> None:
    from .harness.experiments import PairError, distance_matrix

    graphs = load_graphs(args.dataset)
    try:
        d = distance_matrix(graphs, cfg.params(), workers=cfg.threads).values
    except PairError as exc:
        print(f"ggd: pair ({exc.i}, {exc.j}) failed: {exc.cause}; no output written",
              file=sys.stderr)
        raise exc.cause from None
    Path(args.out).write_text(matrix_to_csv(d))
    config = cfg.to_dict()
    Path(str(args.out) + ".config.json").write_text(
        _dumps({"dataset": str(args.dataset), "graphs": len(graphs), "config": config}) + "\n")


def cmd_match(args, cfg: RunConfig) -> None:
    g1 = _prepare(load_graph(args.a), cfg, "first")
    g2 = _prepare(load_graph(args.b), cfg, "second")
    perm = match_graphs(g1, g2, cfg.eta, cfg.rounding)
    _emit([int(i) for i in perm], args.out)
    if args.out:
        Path(str(args.out) + ".config.json").write_text(_dumps(cfg.to_dict()) + "\n")


def cmd_coarsen(args, cfg: RunConfig) -> None:
    g = _prepare(load_graph(args.graph), cfg, "input")
    coarse, trace = coarsen_to_size(g, args.target, cfg.alpha, cfg.resistance, cfg.batch)
    text = graph_to_json(coarse) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace:
        write_rows_csv(["p", "q", "resistance", "node_count"], trace.rows(), args.trace)
        Path(str(args.trace) + ".config.json").write_text(_dumps(cfg.to_dict()) + "\n")


def cmd_classify(args, cfg: RunConfig) -> None:
    from .harness.classification import repeated_split_accuracy
    from .harness.experiments import distance_matrix

    graphs = load_graphs(args.dataset)
    labels = [g.label for g in graphs]
    if any(lab is None for lab in labels):
        raise GraphFormatError("every graph needs a label for classification")
    d = distance_matrix(graphs, cfg.params(), workers=cfg.threads).values
    accs = repeated_split_accuracy(d, np.asarray(labels), trials=args.trials,
                                   test_fraction=args.test_fraction, seed=cfg.seed,
                                   method=args.method, k=args.k, gamma=args.gamma, c=args.C)
    report = {"method": args.method, "trials": args.trials, "accuracies": accs,
              "mean": float(np.mean(accs)), "std": float(np.std(accs)), "config": cfg.to_dict()}
    if args.out:
        rows = [(t, a) for t, a in enumerate(accs)]
        rows += [("mean", float(np.mean(accs))), ("std", float(np.std(accs)))]
        write_rows_csv(["trial", "accuracy"], rows, args.out)
    _emit(report)


def cmd_perturb(args, cfg: RunConfig) -> None:
    from .harness.perturbation import PerturbationSpec, perturb

    g = load_graph(args.graph)
    h = perturb(g, PerturbationSpec(args.kind, args.amount, cfg.seed))
    if args.out:
        save_graph_json(h, args.out)
        Path(str(args.out) + ".config.json").write_text(
            _dumps({"kind": args.kind, "amount": args.amount, "config": cfg.to_dict()}) + "\n")
    else:
        sys.stdout.write(graph_to_json(h) + "\n")


def cmd_dataset_dist(args, cfg: RunConfig) -> None:
    from .harness.datasets import dataset_to_graph

    fa, fb = read_matrix_csv(args.a), read_matrix_csv(args.b)
    ga = dataset_to_graph(fa, args.knn, args.prune)
    gb = dataset_to_graph(fb, args.knn, args.prune)
    res = compute_ggd(ga, gb, cfg.params())
    _emit({"distance": res.distance, "nodes": [ga.node_count, gb.node_count],
           "edges": [ga.edge_count, gb.edge_count], "knn": args.knn, "prune": args.prune,
           "config": cfg.to_dict()}, args.out)


def cmd_bench(args, cfg: RunConfig) -> None:
    from .harness.experiments import benchmark_pairs, random_connected_graph

    rng = np.random.default_rng(cfg.seed)
    if args.dataset:
        graphs = load_graphs(args.dataset)
        idx = rng.integers(len(graphs), size=(args.pairs, 2))
        pairs = [(graphs[i], graphs[j]) for i, j in idx]
    else:
        pairs = [(random_connected_graph(args.n, rng), random_connected_graph(args.n, rng))
                 for _ in range(args.pairs)]
    stats = benchmark_pairs(pairs, cfg.params(), args.repetitions)
    stats["config"] = cfg.to_dict()
    _emit(stats, args.out)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--epsilon", type=_positive_float, default=1e-4)
    common.add_argument("--eta", type=_positive_float, default=None,
                        help="kernel bandwidth (default 0.5 below 100 nodes, else 0.2)")
    common.add_argument("--alpha", type=float, default=0.0, help="feature weight in coarsening")
    common.add_argument("--variant", choices=("airm", "lerm", "normalized"), default="airm")
    common.add_argument("--approx-k", type=int, default=None,
                        help="use only the k largest and k smallest pencil eigenvalues")
    common.add_argument("--rounding", choices=("lap", "greedy"), default="lap")
    common.add_argument("--resistance", type=_resistance, default="auto",
                        help="auto, exact or krylov:M")
    common.add_argument("--batch", type=int, default=None,
                        help="contract up to this many disjoint edges per coarsening round")
    common.add_argument("--giant-component", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default $GGD_THREADS or CPU count)")

    p = _Parser(prog="ggd", description="Graph geodesic distances.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dist", parents=[common], help="distance between two graphs")
    s.add_argument("a", help="graph JSON file or dataset_dir#index")
    s.add_argument("b")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("matrix", parents=[common], help="pairwise distance matrix CSV")
    s.add_argument("dataset", help="TUDataset directory, JSON list or directory of JSON graphs")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("match", parents=[common], help="node correspondence as a JSON array")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--out")
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("coarsen", parents=[common], help="coarsen a graph to a target size")
    s.add_argument("graph")
    s.add_argument("--target", type=int, required=True)
    s.add_argument("--out", help="coarse graph JSON (default stdout)")
    s.add_argument("--trace", help="trace CSV path")
    s.set_defaults(func=cmd_coarsen)

    s = sub.add_parser("classify", parents=[common], help="repeated train/test classification")
    s.add_argument("dataset")
    s.add_argument("--method", choices=("knn", "svm"), default="knn")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--gamma", type=_positive_float, default=None)
    s.add_argument("--C", type=_positive_float, default=1.0)
    s.add_argument("--trials", type=int, default=5)
    s.add_argument("--test-fraction", type=float, default=0.1)
    s.add_argument("--out", help="per-trial accuracy CSV")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("perturb", parents=[common], help="randomly perturb a graph")
    s.add_argument("graph")
    s.add_argument("--kind", choices=("node_drop", "node_add", "edge_drop", "edge_add"),
                   required=True)
    s.add_argument("--amount", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("dataset-dist", parents=[common], help="distance between two feature tables")
    s.add_argument("a", help="headerless CSV, one row per sample")
    s.add_argument("b")
    s.add_argument("--knn", type=int, default=10)
    s.add_argument("--prune", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_dataset_dist)

    s = sub.add_parser("bench", parents=[common], help="time distance computations")
    s.add_argument("--dataset", help="sample pairs from this collection instead of random graphs")
    s.add_argument("--pairs", type=int, default=100)
    s.add_argument("--n", type=int, default=18, help="node count of random graphs")
    s.add_argument("--repetitions", type=int, default=5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        args.func(args, cfg)
    except UsageError as exc:
        print(f"ggd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError, json.JSONDecodeError) as exc:
        print(f"ggd: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalError as exc:
        print(f"ggd: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InfeasibleError as exc:
        print(f"ggd: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (GGDError, ValueError) as exc:
        print(f"ggd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
