"""
Sliding the train/test split
============================

Sweep the training share over 50%, 60%, 70% and 80%. Pass a data directory
and dataset name to run on a real corpus instead of the built-in
clustered generator::

    python demos/03_training_fraction_sweep.py data contact-primary-school
"""
import sys

import numpy as np

from simplicial_closure import SimplicialDataset, load_dataset, sweep


def clustered(seed, n_groups=12, group=20, n_interactions=20000):
    """Interactions mostly inside fixed groups, with repeat partners."""
    rng = np.random.default_rng(seed)
    sizes = rng.choice([2, 3, 4], size=n_interactions, p=[0.7, 0.25, 0.05])
    home = rng.integers(n_groups, size=n_interactions)
    # popular members get picked more often
    weights = 1.0 / np.arange(1, group + 1)
    weights /= weights.sum()
    nodes = [home[i] * group + rng.choice(group, g, replace=False, p=weights)
             for i, g in enumerate(sizes)]
    return SimplicialDataset.from_interactions(nodes, np.arange(n_interactions), name="clustered")


if len(sys.argv) == 3:
    ds = load_dataset(sys.argv[1], sys.argv[2])
else:
    ds = clustered(3)

methods = ("KCN", "KRA", "SWG", "SDWG", "CRWA")
reports = sweep(ds, 3, methods=methods)
print(f"{'train':>6s} {'cands':>7s} {'base':>7s} " + " ".join(f"{m:>6s}" for m in methods))
for report in reports:
    first = report.results[0]
    perf = " ".join(f"{report[m].performance:6.2f}" for m in methods)
    print(f"{float(report.train_fraction):6.1f} {first.candidates:7d} {first.baseline:7.4f} {perf}")
