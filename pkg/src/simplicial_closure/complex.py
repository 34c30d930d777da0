"""Queryable structure over a contiguous window of interactions."""
import math
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._arrays import iter_subsets, keys_to_rows, row_keys, unique_subset_keys

# Node counts up to this use a dense boolean adjacency matrix for edge tests.
DENSE_ADJACENCY_LIMIT = 12_000


class EmptyWindowError(ValueError):
    pass


def as_fraction(p):
    """Exact rational for a training fraction given as float, str or Fraction."""
    if isinstance(p, float):
        p = repr(p)
    frac = Fraction(p)
    if not 0 < frac < 1:
        raise ValueError(f"train fraction must lie in (0, 1), got {p}")
    return frac


def split_point(n_interactions, train_fraction):
    """Number of interactions in the training window: floor(p * n)."""
    return math.floor(as_fraction(train_fraction) * n_interactions)


class ComplexView:
    """Skeleton graph and incidence index of interactions ``[start, stop)``.

    All node arguments are dense ids of the underlying dataset. The skeleton
    has an edge (i, j) iff some window interaction contains both i and j.
    Instances are read-only after construction.
    """

    def __init__(self, ds, start, stop):
        if not 0 <= start <= stop <= len(ds):
            raise ValueError(f"bad window [{start}, {stop}) for {len(ds)} interactions")
        if stop == start:
            raise EmptyWindowError("training window empty")
        self.ds = ds
        self.start = start
        self.stop = stop
        self.n = ds.node_count

        ids = np.arange(start, stop)
        # pair keys always fit int64 since node ids are int32
        chunks = [np.unique(c[:, 0].astype(np.int64) * self.n + c[:, 1], return_counts=True)
                  for c in iter_subsets(ds.indptr, ds.nodes, ids, 2)]
        if chunks:
            keys = np.concatenate([c[0] for c in chunks])
            counts = np.concatenate([c[1] for c in chunks])
            edge_keys, inverse = np.unique(keys, return_inverse=True)
            pair_counts = np.bincount(inverse, weights=counts, minlength=len(edge_keys))
        else:
            edge_keys = np.zeros(0, dtype=np.int64)
            pair_counts = np.zeros(0)
        self.edge_keys = edge_keys
        self.edges = keys_to_rows(edge_keys, self.n, 2)
        # number of window interactions containing each edge, with multiplicity
        self.pair_counts = pair_counts.astype(np.int64)

        both = np.concatenate([self.edges, self.edges[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self.adj_indices = both[:, 1].copy()
        self.degrees = np.bincount(both[:, 0], minlength=self.n).astype(np.int64)
        self.adj_indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.adj_indptr[1:])

        lo, hi = ds.indptr[start], ds.indptr[stop]
        flat = ds.nodes[lo:hi]
        owner = np.repeat(ids, np.diff(ds.indptr[start:stop + 1]))
        order = np.argsort(flat, kind="stable")
        self.inc_indices = owner[order]
        self.inc_indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(flat, minlength=self.n), out=self.inc_indptr[1:])

        for arr in (self.edge_keys, self.edges, self.pair_counts, self.adj_indices,
                    self.degrees, self.adj_indptr, self.inc_indices, self.inc_indptr):
            arr.setflags(write=False)
        # derived arrays computed on demand (closed faces, cliques, weights)
        self._cache = {}

    def __repr__(self):
        return (f"ComplexView({self.ds.name!r}, window=[{self.start}, {self.stop}), "
                f"nodes={self.n}, edges={len(self.edge_keys)})")

    @property
    def window(self):
        return range(self.start, self.stop)

    @property
    def edge_count(self):
        return len(self.edge_keys)

    def neighbors(self, i):
        return self.adj_indices[self.adj_indptr[i]:self.adj_indptr[i + 1]]

    def incident(self, i):
        """Sorted indices of window interactions that contain node ``i``."""
        return self.inc_indices[self.inc_indptr[i]:self.inc_indptr[i + 1]]

    @cached_property
    def dense_adjacency(self):
        if self.n > DENSE_ADJACENCY_LIMIT:
            return None
        dense = np.zeros((self.n, self.n), dtype=bool)
        dense[self.edges[:, 0], self.edges[:, 1]] = True
        dense[self.edges[:, 1], self.edges[:, 0]] = True
        dense.setflags(write=False)
        return dense

    @cached_property
    def packed_adjacency(self):
        """Adjacency rows as little-endian bitsets, or None if too large.

        Shape ``(n, 8 * ceil(n / 64))`` uint8, so rows also view as uint64 words.
        """
        dense = self.dense_adjacency
        if dense is None:
            return None
        width = 8 * -(-self.n // 64)
        packed = np.zeros((self.n, width), dtype=np.uint8)
        packed[:, :-(-self.n // 8) or None] = np.packbits(dense, axis=1, bitorder="little")
        packed.setflags(write=False)
        return packed

    def has_edge(self, u, v):
        """Vectorized skeleton edge test."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        dense = self.dense_adjacency
        if dense is not None:
            return dense[u, v]
        return self.edge_index(u, v) >= 0

    def edge_index(self, u, v):
        """Position of edge (u, v) in :attr:`edges`, or -1 if absent."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        key = np.minimum(u, v) * self.n + np.maximum(u, v)
        pos = np.searchsorted(self.edge_keys, key)
        pos_c = np.minimum(pos, max(len(self.edge_keys) - 1, 0))
        found = (pos < len(self.edge_keys)) & (u != v)
        if len(self.edge_keys):
            found &= self.edge_keys[pos_c] == key
        return np.where(found, pos, -1)

    def interactions_containing(self, nodes):
        """Sorted indices of window interactions whose node set contains ``nodes``."""
        nodes = sorted(set(int(v) for v in nodes))
        if not nodes:
            raise ValueError("need at least one node")
        lists = sorted((self.incident(v) for v in nodes), key=len)
        result = lists[0]
        for other in lists[1:]:
            if len(result) == 0:
                break
            result = result[np.isin(result, other, assume_unique=True)]
        return result

    def is_closed(self, nodes):
        """True iff some window interaction contains every node in ``nodes``."""
        nodes = sorted(set(int(v) for v in nodes))
        lists = sorted((self.incident(v) for v in nodes), key=len)
        result = lists[0]
        for other in lists[1:]:
            result = result[np.isin(result, other, assume_unique=True)]
            if len(result) == 0:
                return False
        return len(result) > 0

    def closed_keys(self, r):
        """Sorted keys (see ``row_keys``) of all distinct r-node sets closed in the window.

        Duplicate interactions are collapsed before their faces are generated.
        """
        key = ("closed", r)
        if key not in self._cache:
            self._cache[key] = unique_subset_keys(
                self.ds.indptr, self.ds.nodes, self._distinct_interactions, r, self.n)
        return self._cache[key]

    def cached(self, key, compute):
        """Memoize a derived array on this view."""
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    @cached_property
    def _distinct_interactions(self):
        ds = self.ds
        ids = np.arange(self.start, self.stop)
        sizes = np.diff(ds.indptr[self.start:self.stop + 1])
        keep = []
        for g in np.unique(sizes):
            group = ids[sizes == g]
            rows = ds.nodes[ds.indptr[group][:, None] + np.arange(g)]
            _, first = np.unique(row_keys(rows, self.n), return_index=True)
            keep.append(group[np.sort(first)])
        return np.sort(np.concatenate(keep))

    def is_closed_rows(self, rows):
        """Vectorized :meth:`is_closed` for an ``(M, r)`` array of ascending rows."""
        rows = np.asarray(rows)
        return np.isin(row_keys(rows, self.n), self.closed_keys(rows.shape[1]))


def build_view(ds, train_fraction):
    """View over the first floor(p * |interactions|) interactions."""
    if len(ds) == 0:
        raise EmptyWindowError("dataset has no interactions")
    stop = split_point(len(ds), train_fraction)
    if stop == 0:
        raise EmptyWindowError("training window empty")
    return ComplexView(ds, 0, stop)
