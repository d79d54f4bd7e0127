"""Command-line entry point: ``graphsumm {summarize,evaluate,bench}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .cost import CostMode
from .engine import EngineConfig, summarize
from .errors import BudgetInfeasibleError, GraphSummError
from .graph import load_edge_list
from .metrics import (evaluate_summary, node_sample_scaling, record_from_report,
                      write_metrics)
from .summary import deserialize_summary, serialize_summary

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2
DEFAULT_FRACTIONS = (0.125, 0.25, 0.5, 1.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ratio(text):
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"target ratio must lie in (0, 1], got {text}")
    return value


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _fractions(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad fraction list {text!r}") from None
    if not values or any(not 0 < v <= 1 for v in values):
        raise argparse.ArgumentTypeError("fractions must lie in (0, 1]")
    return values


def _add_run_options(p):
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--target-bits", type=_positive, help="budget k in bits")
    target.add_argument("--target-ratio", type=_ratio,
                        help="budget as a fraction of the input size in bits")
    p.add_argument("--iterations", "-T", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--norm", type=int, choices=(1, 2), default=1)
    p.add_argument("--cost-mode", choices=[m.value for m in CostMode], default="tight")


def build_parser():
    parser = _Parser(prog="graphsumm", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("summarize", help="summarize a graph within a bit budget")
    p.add_argument("-i", "--input", required=True, help="edge-list file")
    p.add_argument("-o", "--output", required=True, help="summary file to write")
    p.add_argument("-m", "--metrics", help="JSON-lines metrics file to write")
    p.add_argument("--trace", action="store_true", help="print per-iteration progress")
    _add_run_options(p)

    p = sub.add_parser("evaluate", help="measure a summary against its graph")
    p.add_argument("-i", "--input", required=True, help="edge-list file")
    p.add_argument("-s", "--summary", required=True, help="summary file")
    p.add_argument("-m", "--metrics", help="JSON-lines metrics file to write")

    p = sub.add_parser("bench", help="runtime on node-sampled subgraphs")
    p.add_argument("-i", "--input", required=True, help="edge-list file")
    p.add_argument("-o", "--output", help="CSV file (default: standard output)")
    p.add_argument("--fractions", type=_fractions, default=list(DEFAULT_FRACTIONS))
    _add_run_options(p)
    return parser


def _config(args, trace=False):
    return EngineConfig(target_bits=args.target_bits, target_ratio=args.target_ratio,
                        iterations=args.iterations, seed=args.seed, norm=args.norm,
                        cost_mode=CostMode(args.cost_mode), trace_error=trace)


def cmd_summarize(args):
    g = load_edge_list(args.input)
    cfg = _config(args)
    sg, report = summarize(g, cfg)
    serialize_summary(sg, args.output, g.original_ids)
    record = record_from_report(report, cfg.iterations)
    if args.metrics:
        write_metrics([record], args.metrics)
    if args.trace:
        for rec in report.trace:
            print(f"t={rec.iteration} theta={rec.threshold:.4f} merges={rec.merges} "
                  f"size_bits={rec.size_bits:.1f} supernodes={rec.num_supernodes} "
                  f"superedges={rec.num_superedges}")
    print(f"k={report.target_bits:.6f}")
    print(f"size_bits={report.size_bits:.6f}")
    print(f"size_ratio={report.size_ratio:.6f}")
    print(f"re{cfg.norm}={report.re1 if cfg.norm == 1 else report.re2:.6f}")
    print(f"re1_norm={report.re1_norm:.12g}")
    print(f"re2_norm={report.re2_norm:.12g}")
    return EXIT_OK


def cmd_evaluate(args):
    g = load_edge_list(args.input)
    sg = deserialize_summary(args.summary, g)
    record = evaluate_summary(g, sg)
    if args.metrics:
        write_metrics([record], args.metrics)
    for name in ("size_bits", "size_ratio", "re1_norm", "re2_norm"):
        print(f"{name}={getattr(record, name):.12g}")
    return EXIT_OK


def cmd_bench(args):
    g = load_edge_list(args.input)
    points = node_sample_scaling(g, args.fractions, _config(args))
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        out.write("fraction,num_nodes,num_edges,runtime_ms\n")
        for p in points:
            out.write(f"{p.fraction},{p.num_nodes},{p.num_edges},{p.runtime_ms:.3f}\n")
    finally:
        if args.output:
            out.close()
    return EXIT_OK


COMMANDS = {"summarize": cmd_summarize, "evaluate": cmd_evaluate, "bench": cmd_bench}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except BudgetInfeasibleError as exc:
        print(f"graphsumm: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (GraphSummError, OSError, ValueError) as exc:
        print(f"graphsumm: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
