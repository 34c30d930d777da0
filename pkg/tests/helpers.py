import os
from pathlib import Path

import numpy as np

# Interactions of the six-timestamp toy example: nodes 3, 4, 5 become a
# candidate at t3 and close at t5.
TOY_INTERACTIONS = [(1, 2, 3, 4), (3, 5, 6), (4, 5), (2, 7), (3, 7), (3, 4, 5)]
TOY_TIMES = [1, 2, 3, 4, 4, 5]

DATA_DIR = Path(os.environ.get("SIMPLICIAL_DATA_DIR",
                               Path(__file__).resolve().parents[1] / "data"))


def dense(ds, *raw):
    return ds.dense_ids(raw)


def to_raw(ds, rows):
    return [tuple(int(ds.raw_ids[v]) for v in row) for row in np.asarray(rows)]


def dense_interactions(ds, start, stop):
    return [ds.interaction(i).nodes for i in range(start, stop)]


acceptance_log = []


def record_acceptance(criterion, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    acceptance_log.append(line)
    print(line)


def find_corpus(name):
    """Directory holding ``<name>-nverts.txt`` under DATA_DIR, or None."""
    for directory in (DATA_DIR, DATA_DIR / name):
        if (directory / f"{name}-nverts.txt").is_file():
            return directory
    return None
