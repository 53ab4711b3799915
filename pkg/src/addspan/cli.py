"""Command-line front end: generate graphs, build spanners, verify and benchmark.

Exit codes: 0 ok, 2 bad usage or parameters, 3 randomized step kept failing,
4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .additive import build_additive_0403, build_additive_37, reduction_schedule, sparsify
from .base import allpairs6, multiplicative_spanner, pairwise6
from .graph import (GENERATORS, Graph, gen_graph, read_edge_list, read_pair_file, read_vertex_file,
                    write_edge_list)
from .pairwise import SublinearParams, build_pairwise_sublinear
from .result import SCHEMA, ProbabilisticFailure, SpannerResult
from .subset import build_subset_spanner
from .sublinear import build_sublinear
from .verify import Sample, audit_result, cross_check, slope_fit, stretch_report

EXIT_OK, EXIT_USAGE, EXIT_PROB, EXIT_VERIFY = 0, 2, 3, 4
THREADS_ENV = "ADDSPAN_THREADS"
ALGORITHMS = ("sublinear", "pairwise", "subset", "additive", "pairwise6", "allpairs6", "multiplicative", "sparsify")
PRESET_0403_TARGET = 0.403
PRESET_0403_SCHEDULE_EPS = 1e-4

log = logging.getLogger("addspan")


class UsageError(ValueError):
    pass


# ------------------------------------------------------------ inputs


def _add_generator_args(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--kind", choices=GENERATORS, required=required, help="graph generator")
    p.add_argument("--n", type=int, help="vertex count")
    p.add_argument("--m", type=int, help="edge count (gnm)")
    p.add_argument("--rows", type=int, help="grid rows")
    p.add_argument("--cols", type=int, help="grid columns")
    p.add_argument("--degree", type=float, default=8.0, help="target mean degree (geometric)")


def _generator_params(args) -> dict:
    params = {}
    for key in ("n", "m", "rows", "cols"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    if args.kind == "geometric":
        params["degree"] = args.degree
    return params


def _load_input(args):
    """Exactly one of ``--graph`` and ``--kind``; returns (graph, labels)."""
    if bool(args.graph) == bool(args.kind):
        raise UsageError("give exactly one input: --graph FILE or --kind KIND")
    if args.graph:
        lg = read_edge_list(args.graph)
        return lg.graph, lg.labels
    g = gen_graph(args.kind, args.seed, **_generator_params(args))
    return g, [str(i) for i in range(g.n)]


def _index(labels):
    return {lab: i for i, lab in enumerate(labels)}


def _threads(args) -> int:
    t = args.threads
    if t is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            t = int(raw)
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer")
    if t < 1:
        raise UsageError("--threads must be >= 1")
    return t


def _dump(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, default=_json_default)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json_default(o):
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if hasattr(o, "to_dict"):
        return o.to_dict()
    return str(o)


# ------------------------------------------------------------ dispatch


def build(g: Graph, alg: str, *, k: int = 2, eps: float = 0.25, seed: int = 0, pairs=None, terminals=None,
          preset: str = "37", K: int | None = None, schedule_eps: float | None = None,
          d: int | None = None) -> SpannerResult:
    """Run one builder by name; parameter errors raise ``ValueError``."""
    if alg == "sublinear":
        return build_sublinear(g, SublinearParams(k, eps, seed))
    if alg == "pairwise":
        if pairs is None:
            raise UsageError("--pairs is required for --alg pairwise")
        return build_pairwise_sublinear(g, pairs, SublinearParams(k, eps, seed))
    if alg == "pairwise6":
        if pairs is None:
            raise UsageError("--pairs is required for --alg pairwise6")
        return pairwise6(g, pairs, seed)
    if alg == "allpairs6":
        return allpairs6(g, seed)
    if alg == "multiplicative":
        return multiplicative_spanner(g, k, seed)
    if alg == "subset":
        if terminals is None:
            raise UsageError("--terminals is required for --alg subset")
        return build_subset_spanner(g, terminals, eps)
    if alg == "additive":
        if preset == "37":
            return build_additive_37(g, eps, seed)
        if preset == "0403":
            se = PRESET_0403_SCHEDULE_EPS if schedule_eps is None else schedule_eps
            if K is None:
                K = reduction_schedule(se, PRESET_0403_TARGET).K
            return build_additive_0403(g, eps, K, seed, schedule_eps=se)
        raise UsageError(f"unknown preset {preset!r}")
    if alg == "sparsify":
        if d is None:
            raise UsageError("--d is required for --alg sparsify")
        gp = sparsify(g, d, seed)
        res = SpannerResult(g.n)
        res.add(gp.edges, "sparsify")
        res.log.update(kind="sparsify", d=d)
        return res
    raise UsageError(f"unknown algorithm {alg!r}")


def _build_kwargs(args, index) -> dict:
    kw = dict(k=args.k, eps=args.eps, seed=args.seed, preset=args.preset, K=args.K,
              schedule_eps=args.schedule_eps, d=args.d)
    if args.pairs:
        kw["pairs"] = read_pair_file(args.pairs, index)
    if args.terminals:
        kw["terminals"] = read_vertex_file(args.terminals, index)
    return kw


# ------------------------------------------------------------ commands


def cmd_gen(args) -> int:
    g = gen_graph(args.kind, args.seed, **_generator_params(args))
    if args.out:
        write_edge_list(args.out, g.n, g.edges)
        print(f"n={g.n} m={g.m}")
    else:
        write_edge_list("/dev/stdout", g.n, g.edges)
        print(f"n={g.n} m={g.m}", file=sys.stderr)
    return EXIT_OK


def cmd_build(args) -> int:
    threads = _threads(args)
    g, labels = _load_input(args)
    try:
        kw = _build_kwargs(args, _index(labels))
    except KeyError as e:
        raise UsageError(f"unknown vertex label {e.args[0]!r} in pair/terminal file")
    t0 = time.perf_counter()
    res = build(g, args.alg, **kw)
    wall = time.perf_counter() - t0
    if args.out:
        write_edge_list(args.out, g.n, res.edges, labels)
    logd = {"schema": SCHEMA, "algorithm": args.alg, "n": g.n, "m": g.m, "edges": res.size,
            "tags": res.tag_counts(), "seed": args.seed, "threads": threads, "wall_time": wall,
            "build": res.log}
    _dump(logd, args.log)
    if args.log:
        print(f"n={g.n} m={g.m} edges={res.size}")
    return EXIT_OK


def cmd_verify(args) -> int:
    _threads(args)
    lg = read_edge_list(args.graph)
    g = lg.graph
    index = _index(lg.labels)
    try:
        h_edges = read_pair_file(args.spanner, index)
    except KeyError as e:
        print(f"spanner vertex {e.args[0]!r} is not in the graph", file=sys.stderr)
        return EXIT_VERIFY
    if args.pairs:
        pairs = read_pair_file(args.pairs, index)
    elif args.sample:
        pairs = Sample(args.sample, args.seed)
    elif g.n <= 2048:
        pairs = "all"
    else:
        pairs = Sample(10_000, args.seed)
    try:
        h = Graph(g.n, h_edges)
        rep = stretch_report(g, h, pairs)
    except ValueError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    ok = rep.disconnected == 0
    if args.max_error is not None:
        ok &= rep.check_bound("max_error", args.max_error)
    probe = [(r.s, r.t) for r in rep.rows[:200]]
    mismatch = cross_check(h, probe)
    ok &= not mismatch
    out = rep.summary()
    out["audit"] = {"subgraph": True, "edges": h.m, "bidirectional_mismatches": mismatch, "ok": ok}
    _dump(out, args.report)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.to_csv())
    if args.report:
        print(f"max_error={out['max_error']} pairs={len(rep.rows)} ok={ok}")
    return EXIT_OK if ok else EXIT_VERIFY


BENCH_FIELDS = ["row", "kind", "n", "m", "algorithm", "params", "seed", "edges", "max_error", "wall_time", "slope"]


def _bench_cell(cell):
    kind, n, deg, alg, kw, seed, sample, npairs = cell
    if kind == "grid":
        side = max(1, int(round(n ** 0.5)))
        g = gen_graph("grid", seed, rows=side, cols=max(1, n // side))
    elif kind == "gnm":
        g = gen_graph("gnm", seed, n=n, m=min(int(deg * n / 2), n * (n - 1) // 2))
    elif kind == "geometric":
        g = gen_graph("geometric", seed, n=n, degree=deg)
    else:
        g = gen_graph(kind, seed, n=n)
    kw = dict(kw, seed=seed)
    rng = random.Random(f"bench:{seed}:{n}")
    if alg in ("pairwise", "pairwise6"):
        kw["pairs"] = [tuple(rng.sample(range(g.n), 2)) for _ in range(npairs)]
    if alg == "subset":
        kw["terminals"] = rng.sample(range(g.n), min(npairs, g.n))
    t0 = time.perf_counter()
    res = build(g, alg, **kw)
    wall = time.perf_counter() - t0
    err = ""
    if sample:
        err = stretch_report(g, res.as_graph(), Sample(sample, seed)).max_error
        err = "inf" if err == float("inf") else err
    params = ";".join(f"{a}={b}" for a, b in sorted(kw.items()) if a not in ("pairs", "terminals", "seed")
                      and b is not None)
    return {"row": "data", "kind": kind, "n": g.n, "m": g.m, "algorithm": alg, "params": params, "seed": seed,
            "edges": res.size, "max_error": err, "wall_time": round(wall, 4), "slope": ""}


def bench_rows(cells, threads: int = 1) -> list[dict]:
    if threads > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(_bench_cell, cells))
    else:
        rows = [_bench_cell(c) for c in cells]
    return rows + [summary_row(rows)]


def summary_row(rows: list[dict]) -> dict:
    """Slope of seed-averaged edge counts against n (blank below 4 grid points)."""
    by_n: dict[int, list[int]] = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r["edges"])
    slope = ""
    pts = [(n, sum(v) / len(v)) for n, v in sorted(by_n.items())]
    if len(pts) >= 4 and all(e > 0 for _, e in pts):
        slope = round(slope_fit(pts).slope, 6)
    out = {f: "" for f in BENCH_FIELDS}
    out.update(row="summary", algorithm=rows[0]["algorithm"] if rows else "", slope=slope)
    return out


def cmd_bench(args) -> int:
    threads = _threads(args)
    if not args.ns:
        raise UsageError("--ns needs at least one size")
    if any(n < 2 for n in args.ns):
        raise UsageError("grid sizes must be >= 2")
    kw = dict(k=args.k, eps=args.eps, preset=args.preset, K=args.K, schedule_eps=args.schedule_eps, d=args.d)
    cells = [(args.kind, n, args.degree, args.alg, kw, s, args.sample, args.num_pairs)
             for n in args.ns for s in args.seeds]
    rows = bench_rows(cells, threads)
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.csv:
            fh.close()
    return EXIT_OK


# ------------------------------------------------------------ parser


def _add_alg_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alg", choices=ALGORITHMS, required=True)
    p.add_argument("--k", type=int, default=2, help="stretch parameter (sublinear, pairwise, multiplicative)")
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--preset", choices=("37", "0403"), default="37", help="additive variant")
    p.add_argument("--K", type=int, help="reduction depth for --preset 0403")
    p.add_argument("--schedule-eps", type=float, help="slack per reduction step for --preset 0403")
    p.add_argument("--d", type=int, help="degree cap for --alg sparsify")
    p.add_argument("--threads", type=int, help=f"worker cap (default from ${THREADS_ENV}, else 1)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="addspan", description="Additive spanner construction and verification.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    _add_generator_args(p, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build a spanner")
    p.add_argument("--graph", help="input edge list")
    _add_generator_args(p)
    _add_alg_args(p)
    p.add_argument("--pairs", help="demand pairs, one 'u v' per line")
    p.add_argument("--terminals", help="terminal vertices, one per line")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="spanner edge list output")
    p.add_argument("--log", help="JSON build log (default stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="measure the stretch of a spanner")
    p.add_argument("--graph", required=True)
    p.add_argument("--spanner", required=True)
    p.add_argument("--pairs", help="pairs to check (default: all when n <= 2048, else a 10000-pair sample)")
    p.add_argument("--sample", type=int, help="check this many random pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-error", type=float, help="fail when the max additive error exceeds this")
    p.add_argument("--report", help="JSON report (default stdout)")
    p.add_argument("--csv", help="per-pair CSV")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="size and time a builder over a grid of sizes")
    p.add_argument("--kind", choices=("gnm", "geometric", "grid", "path", "cycle", "tree"), default="gnm")
    p.add_argument("--ns", type=int, nargs="+", required=True)
    p.add_argument("--degree", type=float, default=8.0, help="mean degree for gnm/geometric")
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--sample", type=int, default=0, help="pairs sampled for max_error (0 skips)")
    p.add_argument("--num-pairs", type=int, default=64, help="demand pairs or terminals per cell")
    _add_alg_args(p)
    p.add_argument("--csv", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ProbabilisticFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PROB
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
