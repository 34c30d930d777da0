"""
A six-interaction walkthrough
=============================

Six timestamped interactions over seven nodes. We look at which triangles
are open or closed, how each edge is weighted, and how a candidate that
closes later ranks against one that never does.
"""
from fractions import Fraction

from simplicial_closure import (ComplexView, SimplicialDataset, Scorer, candidates, crw_weight,
                                evaluate, EvalConfig, label_candidates, partition_cliques,
                                sdw_weight, sw_weight)

interactions = [(1, 2, 3, 4), (3, 5, 6), (4, 5), (2, 7), (3, 7), (3, 4, 5)]
times = [1, 2, 3, 4, 4, 5]
ds = SimplicialDataset.from_interactions(interactions, times, name="toy")


def raw(rows):
    return [tuple(int(ds.raw_ids[v]) for v in row) for row in rows]


###############################################################################
# Open and closed triangles over the whole record
# -----------------------------------------------
# A triangle is closed once a single interaction holds all three nodes.

full = ComplexView(ds, 0, len(ds))
part = partition_cliques(full, 3)
print("closed:", raw(part.closed))
print("open:  ", raw(part.open))

###############################################################################
# Edge weights
# ------------
# SW counts interactions through an edge, SDW counts faces through it, and
# CRW is the share of cliques through it that are already closed.

e34 = ds.dense_ids([3, 4])
e23 = ds.dense_ids([2, 3])
print("sw(3,4)  =", sw_weight(full, e34))
print("sdw(3,4) =", sdw_weight(full, e34, 3))
print("crw(2,3) =", crw_weight(full, e23, 3))

###############################################################################
# Predicting the last interaction
# -------------------------------
# Train on the first five interactions. Two triangles are open, and only
# (3, 4, 5) closes in the held-out interaction.

train = ComplexView(ds, 0, 5)
cands = label_candidates(ds, train, candidates(train, 3))
scorer = Scorer(train, cands)
for method in ("KCN", "SWA", "SDWA", "CRWA"):
    scores = scorer.score(method).scores
    for cand, label, score in zip(raw(cands.candidates), cands.labels, scores):
        print(f"{method:5s} {cand} closes={bool(label)!s:5s} score={score:.4f}")

report = evaluate(ds, EvalConfig(k=3, train_fraction=Fraction(5, 6)))
print("SDWA performance over random:", report["SDWA"].performance)
