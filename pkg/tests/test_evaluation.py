import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import dense_interactions, to_raw
from reference import Reference, recount_labels
from reference import average_precision as exact_ap
from simplicial_closure import (METHODS, ComplexView, EvalConfig, SimplicialDataset, average_precision,
                                build_view, candidates, evaluate, generate_synthetic, label_candidates,
                                reports_to_csv, reports_to_json, sweep)
from simplicial_closure.evaluation import REPORT_FIELDS, DegenerateLabelsError, EvaluationError


def test_toy_labels(toy, toy_train_view):
    cands = label_candidates(toy, toy_train_view, candidates(toy_train_view, 3))
    got = dict(zip(to_raw(toy, cands.candidates), cands.labels.tolist()))
    assert got == {(2, 3, 7): False, (3, 4, 5): True}


def test_superset_in_test_window_counts():
    ds = SimplicialDataset.from_interactions([(1, 2), (2, 3), (1, 3), (1, 2, 3, 4)])
    view = ComplexView(ds, 0, 3)
    cands = label_candidates(ds, view, candidates(view, 3))
    assert cands.labels.tolist() == [True]


def test_empty_test_window():
    ds = SimplicialDataset.from_interactions([(1, 2), (2, 3), (1, 3)])
    view = ComplexView(ds, 0, 3)
    with pytest.raises(EvaluationError, match="test window empty"):
        label_candidates(ds, view, candidates(view, 3))


def test_ap_example():
    assert math.isclose(average_precision([3, 2, 1], [1, 0, 1]), 5 / 6, rel_tol=1e-15)


def test_ap_ties_form_one_threshold():
    ap = average_precision([1, 1, 0], [1, 0, 1])
    assert math.isclose(ap, 7 / 12, rel_tol=1e-15)
    assert ap == average_precision([1, 1, 0], [0, 1, 1])


def test_ap_degenerate_labels():
    with pytest.raises(DegenerateLabelsError):
        average_precision([1, 2], [1, 1])
    with pytest.raises(DegenerateLabelsError):
        average_precision([1, 2], [0, 0])


def test_ap_shape_mismatch():
    with pytest.raises(ValueError):
        average_precision([1, 2, 3], [1, 0])


labelled = st.lists(st.tuples(st.integers(0, 12), st.booleans()), min_size=2, max_size=200).filter(
    lambda xs: 0 < sum(y for _, y in xs) < len(xs))


@settings(max_examples=300, deadline=None)
@given(labelled)
def test_ap_matches_exact_reference(xs):
    scores = [s for s, _ in xs]
    labels = [y for _, y in xs]
    assert math.isclose(average_precision(scores, labels), float(exact_ap(scores, labels)), rel_tol=1e-12)


@settings(max_examples=300, deadline=None)
@given(labelled)
def test_ap_invariant_under_increasing_map(xs):
    scores = np.array([s for s, _ in xs], dtype=float)
    labels = [y for _, y in xs]
    assert average_precision(scores ** 2, labels) == average_precision(scores, labels)
    assert average_precision(scores + 5, labels) == average_precision(scores, labels)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 500), st.integers(1, 500))
def test_ap_perfect_and_constant(n_pos, n_neg):
    labels = [True] * n_pos + [False] * n_neg
    n = n_pos + n_neg
    assert average_precision(np.arange(n, 0, -1), labels) == 1.0
    assert average_precision(np.zeros(n), labels) == n_pos / n


def test_perfect_ranking_scores_inverse_baseline(toy):
    report = evaluate(toy, EvalConfig(k=3, train_fraction=Fraction(5, 6)))
    assert len(report.results) == len(METHODS)
    for r in report.results:
        assert (r.candidates, r.positives, r.baseline) == (2, 1, 0.5)
        assert r.pr_auc in (0.5, 0.75, 1.0)
        assert r.performance == r.pr_auc / r.baseline
    # SDW arithmetic: 7/3 for (3,4,5) against 2 for (2,3,7); SW ties them
    assert report["SDWA"].pr_auc == 1.0 and report["SDWA"].performance == 2.0
    assert report["SWA"].pr_auc == 0.5


def test_performance_is_ratio():
    ds = generate_synthetic(4, 30, 400, 5)
    report = evaluate(ds, EvalConfig(k=3))
    for r in report.results:
        assert r.baseline == r.positives / r.candidates
        assert r.performance == r.pr_auc / r.baseline
        assert 0 < r.pr_auc <= 1


@pytest.mark.parametrize("k", [3, 4])
def test_sweep_baselines_match_recount(k):
    ds = generate_synthetic(12, 22, 250, 5)
    reports = sweep(ds, k, methods=("KCN", "SDWA"))
    assert [float(r.train_fraction) for r in reports] == [0.5, 0.6, 0.7, 0.8]
    for report in reports:
        view = build_view(ds, report.train_fraction)
        ref = Reference(dense_interactions(ds, view.start, view.stop), ds.node_count,
                        dense_interactions(ds, view.stop, len(ds)))
        cands = ref.candidates(k)
        n_pos = sum(ref.label(c) for c in cands)
        assert (report["KCN"].candidates, report["KCN"].positives) == (len(cands), n_pos)
        assert report["SDWA"].baseline == n_pos / len(cands)
        for method in ("KCN", "SDWA"):
            scores = [ref.score(method, c) for c in cands]
            labels = [ref.label(c) for c in cands]
            assert math.isclose(report[method].pr_auc, float(exact_ap(scores, labels)), rel_tol=1e-9)


def test_degenerate_evaluation():
    # everything pairwise and the test window repeats no triangle
    ds = SimplicialDataset.from_interactions([(1, 2), (2, 3), (1, 3), (7, 8)])
    with pytest.raises(DegenerateLabelsError):
        evaluate(ds, EvalConfig(k=3, train_fraction=0.75))


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(k=5)
    with pytest.raises(ValueError):
        EvalConfig(methods=("KCN", "XYZ"))
    assert EvalConfig(train_fraction=0.8).train_fraction == Fraction(4, 5)


def test_synthetic_is_deterministic():
    a = generate_synthetic(7, 30, 100, 4)
    assert a.same_as(generate_synthetic(7, 30, 100, 4))
    assert not a.same_as(generate_synthetic(8, 30, 100, 4))
    assert np.all(np.diff(a.times) > 0)
    assert a.sizes().min() >= 2 and a.sizes().max() <= 4


def test_synthetic_argument_check():
    with pytest.raises(ValueError):
        generate_synthetic(0, 3, 10, 4)


def test_csv_and_json_agree():
    ds = generate_synthetic(1, 25, 300, 5)
    reports = sweep(ds, 3, fractions=(0.7, 0.8))
    text = reports_to_csv(reports)
    lines = text.splitlines()
    assert lines[0] == ",".join(REPORT_FIELDS)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 2 * len(METHODS)
    assert [r["method"] for r in rows[:len(METHODS)]] == list(METHODS)
    for row in rows:
        for name in ("pr_auc", "baseline", "performance"):
            assert row[name] == f"{float(row[name]):.6g}"
    parsed = json.loads(reports_to_json(reports))
    assert len(parsed) == len(rows)
    for row, obj in zip(rows, parsed):
        assert {k: str(v) for k, v in obj.items()} == {k: str(type(obj[k])(v)) for k, v in row.items()}


def test_output_independent_of_threads():
    ds = generate_synthetic(6, 30, 400, 5)
    one = reports_to_csv([evaluate(ds, EvalConfig(k=4), threads=1)])
    many = reports_to_csv([evaluate(ds, EvalConfig(k=4), threads=4)])
    assert one == many


def test_single_fraction_sweep_equals_evaluate():
    ds = generate_synthetic(2, 30, 400, 5)
    (swept,) = sweep(ds, 3, fractions=(0.8,))
    assert swept == evaluate(ds, EvalConfig(k=3, train_fraction=0.8))


@pytest.mark.parametrize("k", [3, 4])
def test_sweep_on_thousand_interactions_matches_set_recount(k):
    ds = generate_synthetic(31, 60, 1000, 5)
    for report in sweep(ds, k, methods=("KCN",)):
        view = build_view(ds, report.train_fraction)
        n_cand, n_pos = recount_labels(dense_interactions(ds, view.start, view.stop),
                                       dense_interactions(ds, view.stop, len(ds)), k)
        r = report["KCN"]
        assert (r.candidates, r.positives) == (n_cand, n_pos)
        assert r.baseline == n_pos / n_cand
