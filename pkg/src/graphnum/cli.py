"""``graphnum`` command line: encode, decode, landscape, optimize, bench, stats."""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import replace
from pathlib import Path

from .bench import (
    DEFAULT_RUNS,
    compare,
    derive_seed,
    emit_csv,
    generate_suite,
    read_finals,
    run_experiment,
    write_stats,
    write_suite,
)
from .exceptions import GraphNumError
from .graph import GraphCode, decode_graph, encode_graph, parse_code, parse_graph, serialize_graph
from .objective import exhaustive_landscape, landscape_csv, landscape_minimum, log_rank
from .optimizers import ALGORITHMS, OptimizerConfig, run
from .optimizers.base import REPAIRS

EXIT_USAGE = 2
EXIT_IO = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def cmd_encode(args) -> int:
    graph = parse_graph(_read_text(args.input))
    code = encode_graph(graph)
    print(f"{code.n} {code.m} {code.g}")
    print(f"{log_rank(code.g):.6f}")
    return 0


def cmd_decode(args) -> int:
    if args.code is not None:
        code = parse_code(_read_text(args.code))
    else:
        if args.n is None or args.m is None or args.g is None:
            raise GraphNumError("decode needs --n, --m and --g, or --code")
        code = GraphCode(args.n, args.m, args.g)
    sys.stdout.write(serialize_graph(decode_graph(code)))
    return 0


def cmd_landscape(args) -> int:
    graph = parse_graph(_read_text(args.input))
    points = exhaustive_landscape(graph)
    text = landscape_csv(points)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    x, value = landscape_minimum(points)
    print(f"minimum L={value:.6f} at x_index={x}", file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


def _config_from(args, algorithm: str) -> OptimizerConfig:
    return OptimizerConfig(
        algorithm=algorithm,
        pop_size=args.pop,
        cr=args.cr,
        f=args.f,
        rho=args.rho,
        max_evals=args.evals,
        repair=args.repair,
    )


def cmd_optimize(args) -> int:
    graph = parse_graph(_read_text(args.input))
    base = _config_from(args, args.algo).validate()
    rows = []
    for r in range(args.runs):
        cfg = replace(base, seed=derive_seed(args.seed, args.algo, 0, r))
        trace = run(cfg, graph)
        perm = " ".join(map(str, trace.best_permutation))
        print(f"run {r} L={trace.best_L:.6f} perm={perm}")
        if args.trace:
            rows.extend((r, e, repr(v)) for e, v in enumerate(trace.best_so_far.tolist(), start=1))
    if args.trace:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["run", "eval", "best_L"])
        writer.writerows(rows)
        Path(args.trace).write_text(buf.getvalue())
    return 0


def cmd_bench(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    suite = generate_suite(args.suite_seed)
    write_suite(suite, outdir / "suite")
    algorithms = args.algos or list(ALGORITHMS)
    base = _config_from(args, algorithms[0]).validate()
    started = time.monotonic()

    def progress(done, total):
        if args.verbose and (done % 100 == 0 or done == total):
            print(f"{done}/{total} cells, {time.monotonic() - started:.1f}s", file=sys.stderr)

    result = run_experiment(suite, base, algorithms, runs=args.runs, workers=args.workers, progress=progress)
    emit_csv(result, outdir)
    print(f"{len(result.traces)} cells, {sum(result.evaluations.values())} evaluations -> {outdir}")
    return 0


def cmd_stats(args) -> int:
    finals, algorithms, instances = read_finals(args.outdir)
    verdicts, counts = compare(finals, algorithms, instances, alpha=args.alpha)
    write_stats(verdicts, counts, algorithms, args.outdir)
    print("algorithm,outperform,equal,underperform")
    for a in algorithms:
        print(a + "," + ",".join(map(str, counts[a])))
    return 0


def _add_search_flags(p):
    p.add_argument("--evals", type=int, default=1000, help="objective evaluations per run")
    p.add_argument("--pop", type=int, default=10, help="population size")
    p.add_argument("--cr", type=float, default=0.5, help="crossover probability")
    p.add_argument("--f", type=float, default=0.7, help="scale factor")
    p.add_argument("--rho", type=float, default=3.0, help="RBDE rank bias exponent")
    p.add_argument("--repair", choices=REPAIRS, default="clamp", help="box repair rule")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphnum", description="Minimal integer encodings of undirected graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="print 'n m g' and log10(1+g) for a graph file")
    p.add_argument("--input", required=True, help="graph file ('-' for stdin)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="print the graph file for a code")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--code", help="code file ('n m' then 'g', or encode output; '-' for stdin)")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("landscape", help="objective of every relabeling (n <= 9) as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("optimize", help="search for a relabeling with a small code")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", required=True, type=str.lower)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--trace", help="write per-evaluation best-so-far CSV here")
    _add_search_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bench", help="run the full benchmark protocol")
    p.add_argument("--suite-seed", type=int, default=0)
    p.add_argument("--outdir", required=True)
    p.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    p.add_argument("--algos", nargs="+", choices=ALGORITHMS, help="subset of algorithms")
    p.add_argument("-v", "--verbose", action="store_true")
    _add_search_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="pairwise Wilcoxon +/=/- counts from a bench directory")
    p.add_argument("--outdir", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "optimize" and args.algo not in ALGORITHMS:
        print(f"graphnum: unknown algorithm {args.algo!r}; valid: {', '.join(ALGORITHMS)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except GraphNumError as exc:
        print(f"graphnum {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"graphnum {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
