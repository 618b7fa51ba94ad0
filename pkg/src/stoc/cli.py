"""Command-line pipeline: generate, tune, cluster, metrics, distance-cdf, bench.

Diagnostics go to stderr, data to files or stdout.  Exit codes: 0 success,
1 usage/config error, 2 data error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from .clustering import resolve_backend, run_variant, read_assignment, write_clustering, Cluster, Clustering
from .distance import EXACT, SKETCH, NeighborhoodTable
from .graph import GraphFormatError, load_graph
from .metrics import build_embedding, modularity, size_distribution, wcss
from .sketch import build_sketch_table, choose_k
from .synth import PlantedSpec, write_planted
from .tuning import sample_distance_cdf
from . import distance as dist_mod

_USAGE_EXIT = 1
_DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _input_flags(p):
    p.add_argument("--edges", required=True, help="edge list file (two node ids per line)")
    p.add_argument("--attrs", required=True, help="attribute table with header row")
    p.add_argument("--schema", required=True, help="attribute schema file")
    p.add_argument("--directed", action="store_true", help="load edges as directed")


def _algo_flags(p):
    p.add_argument("--alpha-s", type=float, default=0.4, help="semantic attraction ratio")
    p.add_argument("--alpha-t", type=float, default=0.4, help="topological attraction ratio")
    p.add_argument("--epsilon", type=float, default=0.9, help="approximation budget in (0,1]")
    p.add_argument("--tau", type=float, default=None, help="distance threshold; skips tau tuning")
    p.add_argument("--l", type=int, default=None, help="hop radius; skips the l search")
    p.add_argument("--l-max", type=int, default=10, help="cap for the hop-radius search")
    p.add_argument("--variant", choices=("stoc", "sc", "toc"), default="stoc")
    p.add_argument("--discretize", action="store_true", help="treat quantitative attributes as categories")
    p.add_argument("--backend", choices=("auto", "exact", "sketch"), default="auto")
    p.add_argument("--rng-seed", type=int, default=None, help="seed for all randomness")


def _resolve_seed(arg_seed):
    if arg_seed is not None:
        return int(arg_seed)
    return int(np.random.SeedSequence().entropy % (2**63))


def _load(args):
    return load_graph(args.edges, args.attrs, args.schema, directed=args.directed)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _peak_memory_mb():
    try:
        import resource

        return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0
    except Exception:
        return float("nan")


def _mean_std(values):
    if len(values) == 1:
        return float(values[0]), 0.0
    return statistics.mean(values), statistics.stdev(values)


def cmd_generate(args):
    sizes = (
        tuple(int(s) for s in args.sizes.split(","))
        if args.sizes
        else tuple([args.size] * args.communities)
    )
    centers = tuple(float(c) for c in args.centers.split(",")) if args.centers else ()
    spec = PlantedSpec(
        sizes=sizes,
        p_in=args.p_in,
        p_out=args.p_out,
        centers=centers,
        spread=args.spread,
        noise=args.noise,
        seed=_resolve_seed(args.rng_seed),
    )
    paths = write_planted(spec, args.out_prefix)
    for key in ("edges", "attrs", "schema", "truth"):
        print(paths[key])
    return 0


def cmd_tune(args):
    graph = _load(args)
    seed = _resolve_seed(args.rng_seed)
    _, report = _run_once(graph, args, seed, tune_only=True)
    lines = [
        f"variant\t{args.variant}",
        f"alpha_s\t{args.alpha_s}",
        f"alpha_t\t{args.alpha_t}",
        f"epsilon\t{args.epsilon}",
        f"rng_seed\t{seed}",
        f"tau_hat\t{report.tau_hat:.6f}",
        f"l\t{report.chosen_l}",
        "alpha_trace:",
        "l\talpha_l",
    ]
    lines.extend(f"{l}\t{a:.6f}" for l, a in report.alpha_trace)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _run_once(graph, args, seed, tune_only=False):
    rng = np.random.default_rng(seed)
    if tune_only:
        from .tuning import tune_parameters

        backend = resolve_backend(args.backend, graph.n)
        k = choose_k(graph.n, args.epsilon) if backend == SKETCH else None
        hash_seed = int(rng.integers(0, 2**63))
        tau, l, report, _ = tune_parameters(
            graph,
            args.variant,
            args.alpha_s,
            args.alpha_t,
            args.epsilon,
            rng,
            l_max=args.l_max,
            backend=backend,
            k=k,
            hash_seed=hash_seed,
            discretize=args.discretize,
            tau_override=args.tau,
            l_override=args.l,
        )
        return None, report
    return run_variant(
        graph,
        variant=args.variant,
        alpha_s=args.alpha_s,
        alpha_t=args.alpha_t,
        epsilon=args.epsilon,
        rng=rng,
        tau=args.tau,
        l=args.l,
        l_max=args.l_max,
        backend=args.backend,
        discretize=args.discretize,
    )


def cmd_cluster(args):
    if args.runs < 1:
        raise ValueError("--runs must be >= 1")
    graph = _load(args)
    base_seed = _resolve_seed(args.rng_seed)
    embedding = build_embedding(graph)
    seeds = (
        [base_seed]
        if args.runs == 1
        else [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(base_seed).spawn(args.runs)]
    )
    rows = []
    for run_idx, seed in enumerate(seeds):
        t0 = time.perf_counter()
        clustering, report = _run_once(graph, args, seed)
        elapsed = time.perf_counter() - t0
        q = modularity(graph, clustering) if graph.m >= 1 and not graph.directed else float("nan")
        w = wcss(clustering, embedding)
        clustering.params.update(
            {
                "rng_seed": seed,
                "modularity": q,
                "wcss": w,
                "wall_time_s": elapsed,
                "peak_memory_mb": _peak_memory_mb(),
                "embedding_features": embedding.dim,
            }
        )
        out = args.out if args.runs == 1 else f"{args.out}.run{run_idx}"
        write_clustering(clustering, graph, out)
        rows.append((run_idx, clustering.k, q, w, clustering.params["tau"], clustering.params["l"], elapsed))

    print("run\tk\tQ\tWCSS\ttau\tl\ttime_s")
    for r in rows:
        print(f"{r[0]}\t{r[1]}\t{r[2]:.4f}\t{r[3]:.2f}\t{r[4]:.4f}\t{r[5]}\t{r[6]:.3f}")
    if args.runs > 1:
        for name, idx in (("k", 1), ("Q", 2), ("WCSS", 3)):
            mean, std = _mean_std([r[idx] for r in rows])
            print(f"mean_{name}\t{mean:.4f}\tstdev_{name}\t{std:.4f}")
    return 0


def cmd_metrics(args):
    graph = _load(args)
    labels = read_assignment(args.clustering, graph)
    ids = sorted(set(labels.tolist()))
    remap = {c: i for i, c in enumerate(ids)}
    members = [[] for _ in ids]
    for v, c in enumerate(labels.tolist()):
        members[remap[c]].append(v)
    clusters = [Cluster(i, mem[0], mem) for i, mem in enumerate(members)]
    dense = np.array([remap[c] for c in labels.tolist()], dtype=np.int64)
    clustering = Clustering(dense, clusters, {})
    q = modularity(graph, clustering) if graph.m >= 1 and not graph.directed else float("nan")
    w = wcss(clustering, build_embedding(graph))
    lines = [f"k\t{clustering.k}", f"Q\t{q:.6f}", f"WCSS\t{w:.6f}", "size\tcount"]
    lines.extend(f"{size}\t{count}" for size, count in size_distribution(clustering))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_distance_cdf(args):
    graph = _load(args)
    seed = _resolve_seed(args.rng_seed)
    rng = np.random.default_rng(seed)
    if args.kind == "semantic":
        sem = (
            dist_mod.discretized_semantic_distance
            if args.discretize
            else dist_mod.semantic_distance
        )
        dist = lambda u, v: sem(graph.vectors[u], graph.vectors[v], graph.schema)
    else:
        backend = resolve_backend(args.backend, graph.n)
        l = args.l if args.l is not None else 1
        if backend == EXACT:
            table = NeighborhoodTable(graph, l)
        else:
            table = build_sketch_table(graph, l, choose_k(graph.n, args.epsilon), seed)
        dist = table.distance
    cdf = sample_distance_cdf(graph, dist, args.epsilon, rng)
    lines = ["distance\tcumulative_fraction"]
    lines.extend(
        f"{float(x):.6f}\t{(i + 1) / cdf.size:.6f}" for i, x in enumerate(cdf.values)
    )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_bench(args):
    if args.runs < 1:
        raise ValueError("--runs must be >= 1")
    graph = _load(args)
    base_seed = _resolve_seed(args.rng_seed)
    embedding = build_embedding(graph)
    jobs = [("stoc", False), ("sc", False), ("toc", False)]
    if args.discretize:
        jobs.append(("stoc-discretized", True))
    lines = ["variant\talpha\tk_mean\tk_std\tQ_mean\tQ_std\tWCSS_mean\tWCSS_std"]
    seq = np.random.SeedSequence(base_seed)
    for name, discretize in jobs:
        variant = "stoc" if discretize else name
        for alpha in args.alphas:
            ks, qs, ws = [], [], []
            for child in seq.spawn(args.runs):
                rng = np.random.default_rng(child)
                clustering, _ = run_variant(
                    graph,
                    variant=variant,
                    alpha_s=alpha,
                    alpha_t=alpha,
                    epsilon=args.epsilon,
                    rng=rng,
                    l_max=args.l_max,
                    backend=args.backend,
                    discretize=discretize,
                )
                ks.append(clustering.k)
                qs.append(modularity(graph, clustering))
                ws.append(wcss(clustering, embedding))
            km, ks_ = _mean_std(ks)
            qm, qs_ = _mean_std(qs)
            wm, ws_ = _mean_std(ws)
            lines.append(
                f"{name}\t{alpha}\t{km:.2f}\t{ks_:.2f}\t{qm:.4f}\t{qs_:.4f}\t{wm:.2f}\t{ws_:.2f}"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser():
    parser = _Parser(prog="stoc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[], help="write a planted attributed graph")
    p.add_argument("--communities", type=int, default=4)
    p.add_argument("--size", type=int, default=250, help="nodes per community")
    p.add_argument("--sizes", default=None, help="comma-separated community sizes (overrides --communities/--size)")
    p.add_argument("--p-in", type=float, required=True)
    p.add_argument("--p-out", type=float, required=True)
    p.add_argument("--centers", default=None, help="comma-separated quantitative centers")
    p.add_argument("--spread", type=float, default=0.1)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tune", help="derive tau and l from attraction ratios")
    _input_flags(p)
    _algo_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("cluster", help="tune (unless overridden) and cluster")
    _input_flags(p)
    _algo_flags(p)
    p.add_argument("--runs", type=int, default=1, help="independent runs (summary over runs)")
    p.add_argument("--out", required=True, help="clustering output file")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("metrics", help="score an existing clustering file")
    _input_flags(p)
    p.add_argument("--clustering", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("distance-cdf", help="sampled distance CDF rows for plotting")
    _input_flags(p)
    p.add_argument("--kind", choices=("semantic", "topological"), default="semantic")
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=0.9)
    p.add_argument("--backend", choices=("auto", "exact", "sketch"), default="auto")
    p.add_argument("--discretize", action="store_true")
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_distance_cdf)

    p = sub.add_parser("bench", help="compare variants over an alpha grid")
    _input_flags(p)
    p.add_argument("--alphas", type=float, nargs="+", default=[0.1, 0.2, 0.4, 0.6, 0.8, 0.9])
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=0.9)
    p.add_argument("--l-max", type=int, default=10)
    p.add_argument("--backend", choices=("auto", "exact", "sketch"), default="auto")
    p.add_argument("--discretize", action="store_true", help="also run the all-categorical ablation")
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"stoc: data error: {exc}", file=sys.stderr)
        return _DATA_EXIT
    except OSError as exc:
        print(f"stoc: i/o error: {exc}", file=sys.stderr)
        return _DATA_EXIT
    except ValueError as exc:
        print(f"stoc: invalid configuration: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
