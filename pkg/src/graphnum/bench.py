"""Benchmark protocol: instance suite, every (algorithm, instance, run) cell, CSV output.

Each cell derives its own seed from ``(master_seed, algorithm, instance, run)``,
so cells can run in any order, in any process, or alone, and still reproduce
the same trace.
"""

from __future__ import annotations

import csv
import heapq
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, parse_graph, serialize_graph
from .optimizers import ALGORITHMS, RNG_NAME, OptimizerConfig, run
from .stats import count_performance, pairwise_verdicts

__all__ = [
    "SUITE_SIZE",
    "DEFAULT_RUNS",
    "Instance",
    "InstanceSuite",
    "ExperimentResult",
    "prufer_tree",
    "generate_suite",
    "write_suite",
    "read_suite",
    "derive_seed",
    "run_cell",
    "run_experiment",
    "compare",
    "emit_csv",
    "read_finals",
    "write_stats",
]

SUITE_SIZE = 20
DEFAULT_RUNS = 10
MIN_NODES, MAX_NODES = 10, 20
KINDS = ("tree", "sparse", "dense")
ISOLATED_IDS = frozenset({8, 20})


@dataclass(frozen=True)
class Instance:
    id: int
    kind: str
    graph: Graph


@dataclass(frozen=True)
class InstanceSuite:
    seed: int
    instances: tuple[Instance, ...]

    @property
    def ids(self) -> list[int]:
        return [inst.id for inst in self.instances]

    def graph(self, instance_id: int) -> Graph:
        for inst in self.instances:
            if inst.id == instance_id:
                return inst.graph
        raise KeyError(instance_id)


def prufer_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform random labeled tree on ``n`` nodes via a random Prüfer sequence."""
    if n <= 2:
        return Graph(n, ((2, 1),) if n == 2 else ())
    seq = [int(x) + 1 for x in rng.integers(n, size=n - 2)]
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [k for k in range(1, n + 1) if degree[k] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Graph(n, tuple(edges))


def _random_edges(n: int, m: int, rng: np.random.Generator, isolated: int | None = None) -> Graph:
    pairs = [
        (u, v) for u in range(2, n + 1) for v in range(1, u) if isolated not in (u, v)
    ]
    picks = rng.choice(len(pairs), size=m, replace=False)
    return Graph(n, tuple(pairs[int(k)] for k in sorted(picks)))


def generate_suite(master_seed: int = 0) -> InstanceSuite:
    """Twenty graphs with 10..20 nodes: trees, m = n, and m = 2n, two with an isolated node."""
    rng = np.random.default_rng(master_seed)
    instances = []
    for i in range(1, SUITE_SIZE + 1):
        n = MIN_NODES + (i - 1) % (MAX_NODES - MIN_NODES + 1)
        kind = KINDS[(i - 1) % len(KINDS)]
        if kind == "tree":
            g = prufer_tree(n, rng)
        elif i in ISOLATED_IDS:
            kind = "isolated"
            g = _random_edges(n, n, rng, isolated=int(rng.integers(1, n + 1)))
        else:
            g = _random_edges(n, n if kind == "sparse" else 2 * n, rng)
        instances.append(Instance(i, kind, g))
    return InstanceSuite(master_seed, tuple(instances))


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        tmp.unlink(missing_ok=True)
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_suite(suite: InstanceSuite, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for inst in suite.instances:
        _atomic_write(directory / f"instance_{inst.id:02d}.graph", serialize_graph(inst.graph))
    kinds = ",".join(inst.kind for inst in suite.instances)
    _atomic_write(directory / "suite.meta", f"seed={suite.seed} generator={RNG_NAME} kinds={kinds}\n")


def read_suite(directory) -> InstanceSuite:
    directory = Path(directory)
    meta = dict(tok.split("=", 1) for tok in (directory / "suite.meta").read_text().split())
    kinds = meta.get("kinds", "").split(",")
    instances = []
    for k, path in enumerate(sorted(directory.glob("instance_*.graph"))):
        inst_id = int(path.stem.split("_")[1])
        kind = kinds[k] if k < len(kinds) else "unknown"
        instances.append(Instance(inst_id, kind, parse_graph(path.read_text())))
    return InstanceSuite(int(meta["seed"]), tuple(instances))


def derive_seed(master_seed: int, algorithm: str, instance_id: int, run_index: int) -> int:
    """64-bit per-cell seed hashed from the cell coordinates."""
    algo = ALGORITHMS.index(algorithm)
    ss = np.random.SeedSequence([master_seed, algo, instance_id, run_index])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(hi) << 32 | int(lo)


def run_cell(args):
    """Run one cell; ``args = (config, graph, instance_id, run_index)``."""
    config, graph, instance_id, run_index = args
    trace = run(config, graph, instance_id=instance_id)
    return instance_id, config.algorithm, run_index, trace.best_so_far, trace.evaluations


@dataclass
class ExperimentResult:
    """Traces keyed by ``(instance, algorithm, run)``."""

    algorithms: tuple[str, ...]
    instance_ids: tuple[int, ...]
    runs: int
    max_evals: int
    traces: dict[tuple[int, str, int], np.ndarray] = field(default_factory=dict)
    evaluations: dict[tuple[int, str, int], int] = field(default_factory=dict)

    def keys(self) -> list[tuple[int, str, int]]:
        return [
            (i, a, r) for i in self.instance_ids for a in self.algorithms for r in range(self.runs)
        ]

    def finals(self) -> dict[tuple[int, str], list[float]]:
        out: dict[tuple[int, str], list[float]] = {}
        for i, a, r in self.keys():
            out.setdefault((i, a), []).append(float(self.traces[(i, a, r)][-1]))
        return out

    def mean_trace(self, instance_id: int, algorithm: str) -> np.ndarray:
        return np.mean([self.traces[(instance_id, algorithm, r)] for r in range(self.runs)], axis=0)


def run_experiment(
    suite: InstanceSuite,
    base: OptimizerConfig | None = None,
    algorithms: Sequence[str] = ALGORITHMS,
    runs: int = DEFAULT_RUNS,
    workers: int | None = None,
    progress=None,
) -> ExperimentResult:
    """Execute every (algorithm, instance, run) cell of the protocol.

    ``base`` supplies every parameter except algorithm and seed. ``workers``
    defaults to the CPU count; 1 runs in-process.
    """
    base = base or OptimizerConfig()
    result = ExperimentResult(tuple(algorithms), tuple(suite.ids), runs, base.max_evals)
    tasks = []
    for inst in suite.instances:
        for a in algorithms:
            for r in range(runs):
                cfg = replace(base, algorithm=a, seed=derive_seed(suite.seed, a, inst.id, r))
                tasks.append((cfg.validate(), inst.graph, inst.id, r))
    workers = workers or os.cpu_count() or 1
    if workers == 1:
        outputs: Iterable = map(run_cell, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        outputs = pool.map(run_cell, tasks, chunksize=max(1, len(tasks) // (8 * workers)))
    try:
        for done, (i, a, r, trace, evals) in enumerate(outputs, start=1):
            result.traces[(i, a, r)] = trace
            result.evaluations[(i, a, r)] = evals
            if progress is not None:
                progress(done, len(tasks))
    finally:
        if pool is not None:
            pool.shutdown()
    return result


def compare(finals, algorithms: Sequence[str], instance_ids: Iterable[int], alpha: float = 0.05):
    """Pairwise verdicts and per-algorithm (outperform, equal, underperform) counts."""
    verdicts = pairwise_verdicts(finals, algorithms, list(instance_ids), alpha)
    return verdicts, count_performance(verdicts, algorithms)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_stats(verdicts, counts, algorithms: Sequence[str], outdir) -> None:
    outdir = Path(outdir)
    _atomic_write(
        outdir / "stats.csv",
        _csv_text(
            ["algorithm", "outperform", "equal", "underperform"],
            ([a, *counts[a]] for a in algorithms),
        ),
    )
    order = {a: k for k, a in enumerate(algorithms)}
    keys = sorted(verdicts, key=lambda k: (k[0], order[k[1]], order[k[2]]))
    _atomic_write(
        outdir / "verdicts.csv",
        _csv_text(["instance", "algorithm", "opponent", "verdict"], ([*k, verdicts[k]] for k in keys)),
    )


def emit_csv(result: ExperimentResult, outdir, stats: tuple | None = None) -> None:
    """Write traces.csv, mean_traces.csv and finals.csv (and stats.csv when ``stats`` is given)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fmt = repr

    def trace_rows():
        for i, a, r in result.keys():
            for e, value in enumerate(result.traces[(i, a, r)].tolist(), start=1):
                yield i, a, r, e, fmt(value)

    def mean_rows():
        for i in result.instance_ids:
            for a in result.algorithms:
                for e, value in enumerate(result.mean_trace(i, a).tolist(), start=1):
                    yield i, a, e, fmt(value)

    def final_rows():
        for i, a, r in result.keys():
            yield i, a, r, fmt(float(result.traces[(i, a, r)][-1]))

    _atomic_write(outdir / "traces.csv", _csv_text(["instance", "algorithm", "run", "eval", "best_L"], trace_rows()))
    _atomic_write(outdir / "mean_traces.csv", _csv_text(["instance", "algorithm", "eval", "mean_best_L"], mean_rows()))
    _atomic_write(outdir / "finals.csv", _csv_text(["instance", "algorithm", "run", "final_L"], final_rows()))
    if stats is not None:
        verdicts, counts = stats
        write_stats(verdicts, counts, result.algorithms, outdir)


def read_finals(outdir) -> tuple[dict[tuple[int, str], list[float]], list[str], list[int]]:
    """Final objective per run from finals.csv, or from traces.csv when absent.

    Returns ``(finals, algorithms, instance_ids)`` in first-seen order.
    """
    outdir = Path(outdir)
    finals: dict[tuple[int, str], dict[int, float]] = {}
    algorithms: list[str] = []
    instances: list[int] = []
    path = outdir / "finals.csv"
    if path.exists():
        value_col = "final_L"
    else:
        path, value_col = outdir / "traces.csv", "best_L"
    if not path.exists():
        raise FileNotFoundError(f"neither finals.csv nor traces.csv found in {outdir}")
    last_eval: dict[tuple[int, str, int], int] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            i, a, r = int(row["instance"]), row["algorithm"], int(row["run"])
            e = int(row.get("eval") or 0)
            if (i, a, r) in last_eval and last_eval[(i, a, r)] > e:
                continue
            last_eval[(i, a, r)] = e
            if a not in algorithms:
                algorithms.append(a)
            if i not in instances:
                instances.append(i)
            finals.setdefault((i, a), {})[r] = float(row[value_col])
    out = {k: [v[r] for r in sorted(v)] for k, v in finals.items()}
    return out, algorithms, instances
