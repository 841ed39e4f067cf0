"""Box-count and routing-time experiments on complete ternary trees.

Timings come from ``time.perf_counter_ns``. Every measured region is run
``reps`` times and the fastest run is kept; per-query numbers are then
averaged over the sampled (s, t) pairs. Query timings for all methods are
interleaved pair by pair.
"""
from __future__ import annotations

import csv
import enum
import gc
import logging
import random
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, TextIO

from .covering import Algorithm, GCMode, cover
from .graph import Graph, gen_ternary_tree
from .routing import bcr_route, build_supergraph, dijkstra_route

log = logging.getLogger(__name__)

DEFAULT_DEPTHS = (2, 3, 4, 5, 6, 7)
CSV_HEADER = ["experiment", "algorithm", "n", "rb", "phase", "metric", "value", "reps", "seed"]


class Experiment(str, enum.Enum):
    BOXCOUNT = "boxcount"
    TIMING = "timing"


class BenchAlgorithm(str, enum.Enum):
    DIJKSTRA = "dijkstra"
    BCR_GC = "bcr_gc"
    BCR_MEMB = "bcr_memb"
    BCR_CIEA = "bcr_ciea"


class Phase(str, enum.Enum):
    COVER = "cover"
    SUPERGRAPH = "supergraph"
    QUERY = "query"
    TOTAL = "total"


class Metric(str, enum.Enum):
    BOXES = "boxes"
    MICROSECONDS = "microseconds"


BCR_VARIANTS = {
    BenchAlgorithm.BCR_GC: Algorithm.GC,
    BenchAlgorithm.BCR_MEMB: Algorithm.MEMB,
    BenchAlgorithm.BCR_CIEA: Algorithm.CIEA,
}


@dataclass(frozen=True)
class BenchRecord:
    experiment: Experiment
    algorithm: BenchAlgorithm
    n: int
    r_b: int
    phase: Optional[Phase]
    metric: Metric
    value: float
    reps: int
    seed: int


def _graphs(depths: Iterable[int], graphs: Optional[Iterable[Graph]]) -> list[Graph]:
    if graphs is not None:
        return list(graphs)
    return [gen_ternary_tree(d) for d in depths]


def boxcount_suite(
    depths: Sequence[int] = DEFAULT_DEPTHS,
    r_b: int = 1,
    gc_mode: GCMode | str = GCMode.STRICT,
    seed: int = 0,
    graphs: Optional[Iterable[Graph]] = None,
) -> list[BenchRecord]:
    """Number of boxes per algorithm for each tree depth (or each given graph)."""
    records = []
    for g in _graphs(depths, graphs):
        for bench_alg, alg in BCR_VARIANTS.items():
            boxes = len(cover(g, alg, r_b, gc_mode))
            records.append(
                BenchRecord(Experiment.BOXCOUNT, bench_alg, g.node_count, r_b, None, Metric.BOXES, float(boxes), 1, seed)
            )
    return records


def _best_ns(fn: Callable[[], object], reps: int) -> int:
    best = None
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        if best is None or dt < best:
            best = dt
    return best


def sample_pairs(n: int, count: int, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(count)]


def timing_suite(
    depths: Sequence[int] = DEFAULT_DEPTHS,
    r_b: int = 1,
    reps: int = 100,
    pairs: int = 32,
    seed: int = 0,
    gc_mode: GCMode | str = GCMode.STRICT,
    build_reps: int = 3,
    graphs: Optional[Iterable[Graph]] = None,
) -> list[BenchRecord]:
    """Per-phase routing times for flat Dijkstra and the three BCR variants.

    Cover and super-graph construction are timed ``build_reps`` times
    (capped at ``reps``); queries ``reps`` times per pair. TOTAL is
    COVER + SUPERGRAPH + pairs * QUERY.
    """
    if reps < 1 or pairs < 1 or build_reps < 1:
        raise ValueError("reps, pairs and build_reps must be >= 1")
    build_reps = min(build_reps, reps)
    records: list[BenchRecord] = []

    def rec(alg, n, phase, value, k):
        records.append(BenchRecord(Experiment.TIMING, alg, n, r_b, phase, Metric.MICROSECONDS, value, k, seed))

    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for g in _graphs(depths, graphs):
            n = g.node_count
            if n < 2:
                warnings.warn(f"timing_suite: skipping graph with {n} node(s)", RuntimeWarning, stacklevel=2)
                continue
            sample = sample_pairs(n, pairs, seed)
            log.info("timing n=%d", n)

            routers = {BenchAlgorithm.DIJKSTRA: lambda s, t: dijkstra_route(g, s, t)}
            build_us = {}
            for bench_alg, alg in BCR_VARIANTS.items():
                cov = cover(g, alg, r_b, gc_mode)
                cover_us = _best_ns(lambda: cover(g, alg, r_b, gc_mode), build_reps) / 1000.0
                sg = build_supergraph(g, cov)
                sg_us = _best_ns(lambda: build_supergraph(g, cov, check=False), build_reps) / 1000.0
                build_us[bench_alg] = (cover_us, sg_us)
                routers[bench_alg] = lambda s, t, sg=sg: bcr_route(g, sg, s, t)

            # pairs outer, methods inner: every method sees the same machine state
            gc.collect()
            query_ns = dict.fromkeys(routers, 0)
            for s, t in sample:
                for key, route in routers.items():
                    query_ns[key] += _best_ns(lambda: route(s, t), reps)
            query_us = {key: ns / len(sample) / 1000.0 for key, ns in query_ns.items()}

            rec(BenchAlgorithm.DIJKSTRA, n, Phase.QUERY, query_us[BenchAlgorithm.DIJKSTRA], reps)
            for bench_alg, (cover_us, sg_us) in build_us.items():
                q = query_us[bench_alg]
                rec(bench_alg, n, Phase.COVER, cover_us, build_reps)
                rec(bench_alg, n, Phase.SUPERGRAPH, sg_us, build_reps)
                rec(bench_alg, n, Phase.QUERY, q, reps)
                rec(bench_alg, n, Phase.TOTAL, cover_us + sg_us + pairs * q, reps)
    finally:
        if gc_was_enabled:
            gc.enable()
    return records


def write_csv(records: Iterable[BenchRecord], sink: TextIO) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([
            r.experiment.value,
            r.algorithm.value,
            r.n,
            r.r_b,
            r.phase.value if r.phase is not None else "",
            r.metric.value,
            f"{r.value:.6g}",
            r.reps,
            r.seed,
        ])


def read_csv(source: TextIO) -> list[BenchRecord]:
    reader = csv.DictReader(source)
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [
        BenchRecord(
            experiment=Experiment(row["experiment"]),
            algorithm=BenchAlgorithm(row["algorithm"]),
            n=int(row["n"]),
            r_b=int(row["rb"]),
            phase=Phase(row["phase"]) if row["phase"] else None,
            metric=Metric(row["metric"]),
            value=float(row["value"]),
            reps=int(row["reps"]),
            seed=int(row["seed"]),
        )
        for row in reader
    ]
