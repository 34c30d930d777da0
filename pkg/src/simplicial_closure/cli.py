"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 on data or evaluation errors.
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .cliques import DEFAULT_MAX_CANDIDATES, CandidateLimitError
from .complex import EmptyWindowError, as_fraction
from .evaluation import (EvalConfig, EvaluationError, evaluate, generate_synthetic,
                         reports_to_csv, reports_to_json, sweep)
from .ingest import DatasetError, dataset_stats, load_dataset, write_dataset
from .scoring import METHODS

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _fraction(text):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction in (0, 1): {text!r}") from None


def _fraction_list(text):
    return tuple(_fraction(t) for t in text.split(",") if t.strip())


def _methods(text):
    if text.strip().lower() == "all":
        return METHODS
    chosen = tuple(m.strip().upper() for m in text.split(",") if m.strip())
    unknown = [m for m in chosen if m not in METHODS]
    if unknown or not chosen:
        raise argparse.ArgumentTypeError(
            f"unknown method(s) {', '.join(unknown) or '(none)'}; valid: {', '.join(METHODS)}")
    return chosen


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def build_parser():
    parser = _Parser(prog="simplicial-closure",
                     description="Predict simplicial closure events in temporal simplex data.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def dataset_args(p):
        p.add_argument("--data", required=True, type=Path, help="directory holding the dataset files")
        p.add_argument("--name", required=True, help="dataset file prefix")

    def output_args(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", type=Path, help="write here instead of standard output")

    def run_args(p):
        p.add_argument("--k", type=int, choices=(3, 4), default=3, help="simplex size to predict")
        p.add_argument("--methods", type=_methods, default=METHODS,
                       help="comma-separated method names or 'all'")
        p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
        p.add_argument("--max-candidates", type=_positive_int, default=DEFAULT_MAX_CANDIDATES,
                       help="abort if the candidate set is larger than this")

    p = sub.add_parser("stats", help="node, skeleton edge and simplex counts")
    dataset_args(p)
    output_args(p)

    p = sub.add_parser("predict", help="evaluate methods at one training fraction")
    dataset_args(p)
    run_args(p)
    p.add_argument("--train-frac", type=_fraction, default=_fraction("0.8"))
    output_args(p)

    p = sub.add_parser("sweep", help="evaluate methods over several training fractions")
    dataset_args(p)
    run_args(p)
    p.add_argument("--fracs", type=_fraction_list, default=_fraction_list("0.5,0.6,0.7,0.8"))
    output_args(p)

    p = sub.add_parser("synth", help="write a random dataset in the three-file format")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--nodes", type=_positive_int, required=True)
    p.add_argument("--interactions", type=_positive_int, required=True)
    p.add_argument("--max-order", type=_positive_int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--name", required=True)
    return parser


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text)


def _run(args):
    if args.command == "synth":
        if not args.nodes >= args.max_order >= 2:
            raise UsageError("--max-order must be >= 2 and <= --nodes")
        ds = generate_synthetic(args.seed, args.nodes, args.interactions, args.max_order,
                                name=args.name)
        for path in write_dataset(ds, args.out, args.name):
            print(path)
        return

    ds = load_dataset(args.data, args.name)
    if args.command == "stats":
        stats = dataset_stats(ds)
        if args.format == "csv":
            text = f"{stats.nodes},{stats.edges},{stats.simplices}\n"
        else:
            text = json.dumps({"dataset": ds.name, "nodes": stats.nodes,
                               "edges": stats.edges, "simplices": stats.simplices}) + "\n"
        _emit(text, args.output)
        return

    if args.command == "predict":
        config = EvalConfig(k=args.k, train_fraction=args.train_frac, methods=args.methods)
        reports = [evaluate(ds, config, threads=args.threads, max_candidates=args.max_candidates)]
    else:
        if not args.fracs:
            raise UsageError("--fracs: no fractions given")
        reports = sweep(ds, args.k, args.fracs, methods=args.methods, threads=args.threads,
                        max_candidates=args.max_candidates)
    render = reports_to_csv if args.format == "csv" else reports_to_json
    _emit(render(reports), args.output)


def run(argv=None):
    """Entry point; returns the process exit status."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s: %(message)s")
    try:
        _run(args)
    except UsageError as exc:
        print(f"simplicial-closure {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, EvaluationError, EmptyWindowError, CandidateLimitError) as exc:
        print(f"simplicial-closure {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run())
