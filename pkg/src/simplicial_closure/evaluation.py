"""Temporal train/test evaluation of candidate scores.

The first floor(p * m) interactions form the training window and the rest
the test window. A candidate is positive when some test interaction contains
all of its nodes. Each method is scored by its average precision divided by
the fraction of positive candidates (the random baseline).
"""
import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._arrays import row_keys, unique_subset_keys
from .cliques import DEFAULT_MAX_CANDIDATES, candidates
from .complex import as_fraction, build_view
from .ingest import SimplicialDataset
from .scoring import METHODS, Scorer, ScoreTable, parse_method

log = logging.getLogger(__name__)

SWEEP_FRACTIONS = (Fraction(1, 2), Fraction(3, 5), Fraction(7, 10), Fraction(4, 5))

REPORT_FIELDS = ("dataset", "k", "train_frac", "method", "pr_auc", "baseline",
                 "performance", "candidates", "positives")


class EvaluationError(ValueError):
    pass


class DegenerateLabelsError(EvaluationError):
    pass


@dataclass(frozen=True)
class EvalConfig:
    k: int = 3
    train_fraction: Fraction = Fraction(4, 5)
    methods: tuple = METHODS
    tie_policy: str = "grouped-threshold"

    def __post_init__(self):
        if self.k not in (3, 4):
            raise ValueError(f"k must be 3 or 4, got {self.k}")
        object.__setattr__(self, "train_fraction", as_fraction(self.train_fraction))
        object.__setattr__(self, "methods", tuple(self.methods))
        for m in self.methods:
            parse_method(m)
        if self.tie_policy != "grouped-threshold":
            raise ValueError("only the grouped-threshold tie policy is supported")


@dataclass(frozen=True)
class MethodResult:
    method: str
    pr_auc: float
    baseline: float
    performance: float
    candidates: int
    positives: int


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    k: int
    train_fraction: Fraction
    results: tuple = field(default_factory=tuple)

    def __getitem__(self, method):
        for r in self.results:
            if r.method == method:
                return r
        raise KeyError(method)

    @property
    def methods(self):
        return tuple(r.method for r in self.results)

    def rows(self):
        for r in self.results:
            yield {
                "dataset": self.dataset,
                "k": self.k,
                "train_frac": float(self.train_fraction),
                "method": r.method,
                "pr_auc": r.pr_auc,
                "baseline": r.baseline,
                "performance": r.performance,
                "candidates": r.candidates,
                "positives": r.positives,
            }


def held_out_keys(ds, view, k):
    """Sorted distinct keys of the k-node sets contained in test-window interactions."""
    ids = np.arange(view.stop, len(ds))
    if len(ids) == 0:
        raise EvaluationError("test window empty")
    return unique_subset_keys(ds.indptr, ds.nodes, ids, k, ds.node_count)


def label_candidates(ds, view, cands):
    """Fill in labels: True iff a test interaction contains the candidate's nodes."""
    keys = held_out_keys(ds, view, cands.k)
    labels = np.isin(row_keys(cands.candidates, ds.node_count), keys)
    return cands.with_labels(labels)


def average_precision(scores, labels):
    """Average precision with tied scores treated as a single threshold.

    Candidates are ranked by decreasing score. Each group of equal scores is
    one threshold; it contributes its share of the positives times the
    precision reached at the end of the group.
    """
    if isinstance(scores, ScoreTable):
        scores = scores.scores
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must align")
    n_pos = int(labels.sum())
    if n_pos == 0 or n_pos == len(labels):
        raise DegenerateLabelsError("degenerate label set: need both positive and negative candidates")
    if not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    tp = np.cumsum(labels[order])
    ends = np.append(np.flatnonzero(s[1:] != s[:-1]), len(s) - 1)
    tp_end = tp[ends]
    gained = np.diff(tp_end, prepend=0)
    seen = ends + 1
    # groups at precision one add their recall gain exactly; summing those
    # as integers keeps a perfect ranking at exactly 1.0
    pure = (tp_end == seen) & (gained > 0)
    mixed = ~pure & (gained > 0)
    terms = [int(gained[pure].sum()) / n_pos]
    terms.extend((gained[mixed] / n_pos * (tp_end[mixed] / seen[mixed])).tolist())
    return math.fsum(terms)


pr_auc = average_precision


def evaluate(ds, config=EvalConfig(), threads=1, max_candidates=DEFAULT_MAX_CANDIDATES):
    """Run the full pipeline for one training fraction and return an :class:`EvalReport`."""
    if len(ds) == 0:
        raise EvaluationError("dataset has no interactions")
    view = build_view(ds, config.train_fraction)
    cands = candidates(view, config.k, threads=threads, max_candidates=max_candidates)
    if len(cands) == 0:
        raise DegenerateLabelsError(f"{ds.name}: no candidate {config.k}-simplices in the training window")
    cands = label_candidates(ds, view, cands)
    n_pos = int(cands.labels.sum())
    n = len(cands)
    if n_pos in (0, n):
        raise DegenerateLabelsError(
            f"{ds.name}: degenerate label set ({n_pos} of {n} candidates close in the test window)")
    baseline = n_pos / n
    log.info("%s k=%d p=%s: %d candidates, %d positives", ds.name, config.k,
             config.train_fraction, n, n_pos)
    scorer = Scorer(view, cands, threads=threads)
    results = []
    for method in config.methods:
        ap = average_precision(scorer.score(method).scores, cands.labels)
        results.append(MethodResult(method, ap, baseline, ap / baseline, n, n_pos))
    return EvalReport(ds.name, config.k, config.train_fraction, tuple(results))


def sweep(ds, k, fractions=SWEEP_FRACTIONS, methods=METHODS, threads=1,
          max_candidates=DEFAULT_MAX_CANDIDATES):
    """One :class:`EvalReport` per training fraction; each test window is the remainder."""
    if len(fractions) == 0:
        raise ValueError("no training fractions given")
    return [evaluate(ds, EvalConfig(k=k, train_fraction=p, methods=methods),
                     threads=threads, max_candidates=max_candidates)
            for p in fractions]


def generate_synthetic(seed, n_nodes, n_interactions, max_order, name="synthetic"):
    """Reproducible random dataset.

    Interaction sizes are uniform on [2, max_order], members are drawn
    uniformly without replacement, and timestamps strictly increase.
    """
    if not n_nodes >= max_order >= 2:
        raise ValueError("need n_nodes >= max_order >= 2")
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, max_order + 1, size=n_interactions)
    flat = np.concatenate([rng.choice(n_nodes, size=g, replace=False) for g in sizes]) \
        if n_interactions else np.zeros(0, dtype=np.int64)
    times = np.cumsum(rng.integers(1, 10, size=n_interactions))
    return SimplicialDataset.from_records(sizes, flat, times, name=name)


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def report_rows(reports):
    for report in reports:
        for row in report.rows():
            yield {k: _fmt(v) for k, v in row.items()}


def reports_to_csv(reports):
    """Long-format CSV, one row per (report, method); floats to 6 significant digits."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(report_rows(reports))
    return buf.getvalue()


def reports_to_json(reports):
    """JSON list mirroring :func:`reports_to_csv` row for row."""
    rows = []
    for row in report_rows(reports):
        rows.append({
            "dataset": row["dataset"],
            "k": int(row["k"]),
            "train_frac": float(row["train_frac"]),
            "method": row["method"],
            "pr_auc": float(row["pr_auc"]),
            "baseline": float(row["baseline"]),
            "performance": float(row["performance"]),
            "candidates": int(row["candidates"]),
            "positives": int(row["positives"]),
        })
    return json.dumps(rows, indent=2) + "\n"
