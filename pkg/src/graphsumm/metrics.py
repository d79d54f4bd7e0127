"""Evaluation metrics, metric files, and the scalability / convergence harnesses."""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .engine import EngineConfig, summarize
from .graph import induced_subgraph, input_size_bits
from .summary import reconstruction_error, summary_size_bits

log = logging.getLogger(__name__)

METRIC_FIELDS = ("size_bits", "size_ratio", "re1_norm", "re2_norm",
                 "runtime_ms", "seed", "T", "k")


@dataclass
class MetricsRecord:
    size_bits: float
    size_ratio: float
    re1_norm: float
    re2_norm: float
    runtime_ms: float = 0.0
    seed: int | None = None
    T: int | None = None
    k: float | None = None

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=False)

    @classmethod
    def from_json(cls, line):
        data = json.loads(line)
        return cls(**{f.name: data.get(f.name) for f in fields(cls)})


def evaluate_summary(g, sg, runtime_ms=0.0, seed=None, T=None, k=None):
    """Size and normalized reconstruction errors of ``sg`` against ``g``."""
    size = summary_size_bits(sg)
    matrix = g.num_nodes * (g.num_nodes - 1)
    return MetricsRecord(
        size_bits=size,
        size_ratio=size / input_size_bits(g),
        re1_norm=reconstruction_error(g, sg, 1) / matrix,
        re2_norm=reconstruction_error(g, sg, 2) / matrix,
        runtime_ms=runtime_ms, seed=seed, T=T, k=k)


def record_from_report(report, T):
    return MetricsRecord(report.size_bits, report.size_ratio, report.re1_norm,
                         report.re2_norm, report.runtime_ms, report.seed, T,
                         report.target_bits)


def write_metrics(records, sink):
    """Append records as JSON lines."""
    text = "".join(r.to_json() + "\n" for r in records)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sink.write(text)


def read_metrics(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()
    return [MetricsRecord.from_json(ln) for ln in lines if ln.strip()]


def write_metrics_csv(records, sink):
    rows = [asdict(r) for r in records]
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", newline="", encoding="utf-8") as fh:
            _write_csv(rows, fh)
    else:
        _write_csv(rows, sink)


def _write_csv(rows, fh):
    writer = csv.DictWriter(fh, fieldnames=METRIC_FIELDS)
    writer.writeheader()
    writer.writerows(rows)


def _minmax(values):
    values = np.asarray(values, dtype=float)
    span = values.max() - values.min()
    if span == 0:
        return np.zeros_like(values)
    return (values - values.min()) / span


def quality_distance(records):
    """Distance of each record from the ideal (smallest size, smallest RE_1).

    Sizes and errors are min-max normalized across ``records``; a dimension
    with no spread normalizes to zero.  Values lie in ``[0, sqrt(2)]``.
    """
    if len(records) < 2:
        raise ValueError("quality distance needs at least two records")
    size = _minmax([r.size_bits for r in records])
    err = _minmax([r.re1_norm for r in records])
    return np.sqrt(size ** 2 + err ** 2).tolist()


@dataclass
class ScalingPoint:
    fraction: float
    num_nodes: int
    num_edges: int
    runtime_ms: float


def node_sample_scaling(g, fractions, cfg):
    """Time ``summarize`` on subgraphs induced by uniform node samples.

    The node sample for each fraction is drawn with ``cfg.seed``; a fraction
    of 1 keeps the whole graph.  Samples without edges are skipped.
    """
    rng = np.random.default_rng(cfg.seed)
    points = []
    for fraction in fractions:
        if not 0 < fraction <= 1:
            raise ValueError(f"fraction {fraction} outside (0, 1]")
        if fraction == 1:
            sub = g
        else:
            size = max(1, int(round(fraction * g.num_nodes)))
            nodes = np.sort(rng.choice(g.num_nodes, size=size, replace=False))
            sub = induced_subgraph(g, nodes)
        if sub.num_edges == 0 or sub.num_nodes < 2:
            log.warning("fraction %s: sampled subgraph has no edges, skipped", fraction)
            continue
        started = time.perf_counter()
        summarize(sub, cfg)
        elapsed = (time.perf_counter() - started) * 1000.0
        points.append(ScalingPoint(fraction, sub.num_nodes, sub.num_edges, elapsed))
        log.info("fraction %.3f: |E|=%d, %.0f ms", fraction, sub.num_edges, elapsed)
    return points


def power_law_exponent(sizes, times):
    """Least-squares slope of log(time) against log(size)."""
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass
class ConvergencePoint:
    k: float
    t: int
    re1: float


def convergence_trace(g, k_list, T_max, cfg):
    """RE_1 after every iteration ``t = 1..T_max`` for each target size.

    Each target runs once with ``T_max`` iterations.  Iterations after the
    budget is met leave the summary unchanged, so their value repeats.
    """
    table = []
    for k in k_list:
        run_cfg = replace(cfg, target_bits=k, target_ratio=None, iterations=T_max,
                          trace_error=False)
        values = []

        def record(sg, rec, _values=values):
            _values.append(reconstruction_error(g, sg, 1))

        _, report = summarize(g, run_cfg, on_iteration=record)
        last = values[-1] if values else report.re1
        values.extend([last] * (T_max - len(values)))
        table.extend(ConvergencePoint(k, t, v) for t, v in enumerate(values, 1))
    return table

