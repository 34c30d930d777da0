"""Vectorized helpers shared by the structure, enumeration and scoring code.

Node sets are handled as rows of a 2-D integer array, one set per row with
nodes in ascending order. Rows are turned into sortable scalar keys with
:func:`row_keys` so that membership tests reduce to ``np.isin`` /
``np.searchsorted`` on 1-D arrays.
"""
from functools import lru_cache
from itertools import combinations

import numpy as np

# Upper bound on the number of subset rows materialized per chunk.
SUBSET_CHUNK_ROWS = 1 << 21


@lru_cache(maxsize=None)
def combination_table(g, r):
    """All r-subsets of ``range(g)`` as an ``(C(g, r), r)`` array, lexicographic."""
    table = np.array(list(combinations(range(g), r)), dtype=np.intp)
    table.setflags(write=False)
    return table.reshape(-1, r)


def expand_ranges(starts, lengths):
    """Concatenate ``arange(s, s + l)`` for every (s, l) pair without a Python loop."""
    lengths = np.asarray(lengths, dtype=np.int64)
    total = int(lengths.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    offsets = np.repeat(np.cumsum(lengths) - lengths, lengths)
    return np.repeat(np.asarray(starts, dtype=np.int64), lengths) + (np.arange(total) - offsets)


def rows_of_size(indptr, flat, ids, g):
    """Gather interactions ``ids`` (all of size ``g``) into a ``(len(ids), g)`` array."""
    starts = indptr[ids]
    return flat[starts[:, None] + np.arange(g)]


def iter_subsets(indptr, flat, ids, r, with_source=False):
    """Yield chunks of all r-subsets of the interactions listed in ``ids``.

    Interactions smaller than ``r`` contribute nothing. Each yielded chunk is
    an ``(M, r)`` array (rows ascending because interactions are stored
    sorted); with ``with_source`` the interaction id of every row is yielded
    alongside.
    """
    ids = np.asarray(ids, dtype=np.int64)
    sizes = indptr[ids + 1] - indptr[ids]
    for g in np.unique(sizes):
        g = int(g)
        if g < r:
            continue
        group = ids[sizes == g]
        table = combination_table(g, r)
        per_chunk = max(1, SUBSET_CHUNK_ROWS // len(table))
        for lo in range(0, len(group), per_chunk):
            part = group[lo:lo + per_chunk]
            rows = rows_of_size(indptr, flat, part, g)
            subsets = rows[:, table].reshape(-1, r)
            if with_source:
                yield subsets, np.repeat(part, len(table))
            else:
                yield subsets


def fits_int64(n, r):
    return n ** r < 2 ** 63


def row_keys(rows, n):
    """Scalar sort keys for node-set rows over a universe of ``n`` nodes.

    Keys preserve lexicographic row order. They are int64 when ``n ** r``
    fits, otherwise fixed-width byte strings (big-endian, so byte order
    matches numeric order).
    """
    rows = np.asarray(rows)
    r = rows.shape[1]
    if fits_int64(max(n, 1), r):
        keys = np.zeros(len(rows), dtype=np.int64)
        for col in range(r):
            keys *= n
            keys += rows[:, col]
        return keys
    packed = np.ascontiguousarray(rows.astype(">u4"))
    return packed.view(np.dtype((np.void, 4 * r))).ravel()


def keys_to_rows(keys, n, r):
    """Inverse of :func:`row_keys`."""
    if keys.dtype.kind == "V":
        return np.frombuffer(keys.tobytes(), dtype=">u4").reshape(-1, r).astype(np.int64)
    rows = np.empty((len(keys), r), dtype=np.int64)
    rest = keys.copy()
    for col in range(r - 1, -1, -1):
        rows[:, col] = rest % n
        rest //= n
    return rows


def unique_subset_keys(indptr, flat, ids, r, n):
    """Sorted distinct keys of every r-subset of the given interactions."""
    parts = [np.unique(row_keys(chunk, n)) for chunk in iter_subsets(indptr, flat, ids, r)]
    if not parts:
        return row_keys(np.zeros((0, r), dtype=np.int64), n)
    return np.unique(np.concatenate(parts))


def lexsort_rows(rows):
    """Return ``rows`` sorted lexicographically (first column most significant)."""
    if len(rows) == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def pair_columns(k):
    """Column index pairs (i, j), i < j, of a k-node row, in lexicographic order."""
    return combination_table(k, 2)
