"""Similarity scores for candidate k-simplices.

Node-based scores use the skeleton only:

====  ==========================================
KCN   number of common neighbors
KAA   sum of 1 / ln(degree) over common neighbors
KRA   sum of 1 / degree over common neighbors
KPA   product of member degrees
====  ==========================================

Edge-weight scores average a weight over the k(k-1)/2 edges of the
candidate, arithmetically (suffix A), geometrically (G) or harmonically (H):

* SW  -- number of window interactions containing the edge;
* SDW -- number of faces containing the edge obtained by decomposing every
  containing interaction into its k-faces and their lower faces;
* CRW -- fraction of the cliques of order 2..k containing the edge that are
  closed.

The scalar functions (``score_kcn``, ``sw_weight`` ...) work on one
candidate or edge and follow the definitions directly. :class:`Scorer`
computes whole score tables with array operations.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._arrays import expand_ranges, iter_subsets, keys_to_rows, pair_columns
from .cliques import all_cliques

NODE_METHODS = ("KCN", "KAA", "KRA", "KPA")
EDGE_KINDS = ("SW", "SDW", "CRW")
MODES = {"A": "arithmetic", "G": "geometric", "H": "harmonic"}
METHODS = NODE_METHODS + tuple(kind + m for kind in EDGE_KINDS for m in MODES)

_NODE_CHUNK_WORK = 1 << 21
_SCORE_CHUNK_ROWS = 1 << 20


def parse_method(method):
    """Split an edge-weight method name into (kind, mode); node methods give (name, None)."""
    if method in NODE_METHODS:
        return method, None
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; valid: {', '.join(METHODS)}")
    return method[:-1], MODES[method[-1]]


# -- scalar definitions ------------------------------------------------------

def common_neighbors(view, candidate):
    nodes = sorted(int(v) for v in candidate)
    pivot = min(nodes, key=lambda v: view.degrees[v])
    nbrs = view.neighbors(pivot)
    keep = np.ones(len(nbrs), dtype=bool)
    for v in nodes:
        if v != pivot:
            keep &= view.has_edge(np.full(len(nbrs), v), nbrs)
    return nbrs[keep]


def score_kcn(view, candidate):
    return len(common_neighbors(view, candidate))


def score_kaa(view, candidate):
    deg = view.degrees[common_neighbors(view, candidate)]
    return float(sum(1.0 / math.log(d) for d in deg.tolist()))


def score_kra(view, candidate):
    deg = view.degrees[common_neighbors(view, candidate)]
    return float(sum(1.0 / d for d in deg.tolist()))


def score_kpa(view, candidate):
    return math.prod(int(view.degrees[v]) for v in candidate)


def sdw_contribution(size, k):
    """Faces containing a fixed edge contributed by one interaction of ``size`` nodes.

    An interaction with g >= k nodes has C(g-2, k-2) k-faces through the edge,
    and each adds itself plus its 2^(k-2) - 1 lower faces (orders 2..k-1)
    through the edge. Smaller interactions (2 <= g < k) count themselves and
    all their faces through the edge, 2^(g-2).
    """
    if size < 2:
        return 0
    if size >= k:
        return math.comb(size - 2, k - 2) * 2 ** (k - 2)
    return 2 ** (size - 2)


def _check_edge(view, edge):
    a, b = sorted(int(v) for v in edge)
    if a == b or not view.has_edge(a, b):
        raise ValueError(f"({a}, {b}) is not a skeleton edge")
    return a, b


def sw_weight(view, edge):
    return len(view.interactions_containing(_check_edge(view, edge)))


def sdw_weight(view, edge, k):
    a, b = _check_edge(view, edge)
    sizes = view.ds.sizes()[view.interactions_containing((a, b))]
    return sum(sdw_contribution(int(g), k) for g in sizes)


def crw_weight(view, edge, k):
    """Closed cliques of order 2..k through ``edge`` over all such cliques, as a Fraction."""
    a, b = _check_edge(view, edge)
    common = common_neighbors(view, (a, b)).tolist()
    closed, total = 1, 1
    for c in common:
        total += 1
        closed += view.is_closed((a, b, c))
    if k == 4:
        for c, d in combinations(common, 2):
            if view.has_edge(c, d):
                total += 1
                closed += view.is_closed((a, b, c, d))
    return Fraction(closed, total)


def _geometric_mean(w):
    # frexp split: no overflow, and exact under power-of-two scaling
    mant, expo = np.frexp(w)
    n = w.shape[1]
    whole, rest = np.divmod(expo.sum(axis=1), n)
    root = (np.prod(mant, axis=1) * np.exp2(rest)) ** (1.0 / n)
    return np.ldexp(root, whole)


def combine_rows(weights, mode, k):
    """Row-wise combination of an ``(M, k(k-1)/2)`` weight array.

    Weights are sorted within each row first so that candidates with the same
    multiset of weights get bit-identical scores. The geometric mode keeps
    the extra division by k(k-1)/2 of the original index definition.
    """
    w = np.sort(np.asarray(weights, dtype=np.float64), axis=1)
    n_edges = k * (k - 1) // 2
    if w.ndim != 2 or w.shape[1] != n_edges:
        raise ValueError(f"expected {n_edges} weights per row for k={k}, got shape {w.shape}")
    if (w <= 0).any():
        raise ValueError("edge weights must be positive")
    flat = w[:, 0] == w[:, -1]
    if mode == "arithmetic":
        out = w.sum(axis=1) / n_edges
    elif mode == "geometric":
        out = _geometric_mean(w)
    elif mode == "harmonic":
        out = n_edges / (1.0 / w).sum(axis=1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    # every mean of equal weights is that weight; avoid rounding drift there
    out[flat] = w[flat, 0]
    if mode == "geometric":
        out /= n_edges
    return out


def combine(weights, mode, k):
    """Combine the weights of one candidate's edges into a score."""
    return float(combine_rows(np.asarray([list(weights)], dtype=np.float64), mode, k)[0])


# -- exact sums of float weights --------------------------------------------

LIMB_BITS = 30


def fixed_point_limbs(w):
    """Write non-negative floats as integers on a common power-of-two scale.

    Returns ``(limbs, exp)`` with ``w[i] == sum(limbs[i, j] << (LIMB_BITS * j)) * 2**exp``
    exactly and every limb below ``2**LIMB_BITS``. Sums of limbs are exact, so
    a sum over any subset does not depend on summation order.
    """
    w = np.asarray(w, dtype=np.float64)
    mant, expo = np.frexp(w)
    ints = np.ldexp(mant, 53).astype(np.int64)
    live = w > 0
    if not live.any():
        return np.zeros((len(w), 1), dtype=np.int64), 0
    low = int(expo[live].min())
    shift = np.where(live, expo - low, 0).astype(np.int64)
    n_limbs = -(-(53 + int(shift.max())) // LIMB_BITS)
    mask = (1 << LIMB_BITS) - 1
    limbs = np.zeros((len(w), n_limbs), dtype=np.int64)
    for j in range(n_limbs):
        # bits [j*LIMB_BITS, (j+1)*LIMB_BITS) of ints << shift
        right = j * LIMB_BITS - shift
        down = ints >> np.clip(right, 0, 63)
        up = ints << np.clip(-right, 0, 63)
        limbs[:, j] = np.where(right >= 0, np.where(right < 63, down, 0), up) & mask
    return limbs, low - 53


def assemble_fixed_point(sums, exp):
    """Floats from per-limb integer sums (see :func:`fixed_point_limbs`)."""
    sums = np.array(sums, dtype=np.int64)
    for j in range(sums.shape[1] - 1):
        sums[:, j + 1] += sums[:, j] >> LIMB_BITS
        sums[:, j] &= (1 << LIMB_BITS) - 1
    out = np.zeros(len(sums))
    for j in range(sums.shape[1] - 1, -1, -1):
        out += np.ldexp(sums[:, j].astype(np.float64), LIMB_BITS * j + exp)
    return out


def byte_tables(limbs, n_bytes):
    """``table[256 * p + b]`` = limb sums of the nodes whose bits are set in byte ``b`` at position ``p``."""
    padded = np.zeros((n_bytes * 8, limbs.shape[1]), dtype=np.int64)
    padded[:len(limbs)] = limbs
    bits = (np.arange(256)[:, None] >> np.arange(8)) & 1
    table = np.einsum("bi,pil->pbl", bits, padded.reshape(n_bytes, 8, -1))
    return table.reshape(n_bytes * 256, -1)


def grouped_sums(owner, values, m):
    """Row sums of ``values`` grouped by sorted ``owner`` into ``m`` rows."""
    out = np.zeros((m, values.shape[1]), dtype=np.int64)
    if len(owner):
        starts = np.flatnonzero(np.r_[True, owner[1:] != owner[:-1]])
        out[owner[starts]] = np.add.reduceat(values, starts, axis=0)
    return out


# -- bulk computation --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EdgeWeightCache:
    """Weights of the skeleton edges used by a candidate set."""
    kind: str
    k: int
    edges: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.edges)

    def __getitem__(self, edge):
        a, b = sorted(edge)
        pos = np.flatnonzero((self.edges[:, 0] == a) & (self.edges[:, 1] == b))
        if len(pos) == 0:
            raise KeyError(edge)
        return self.weights[pos[0]].item()

    def as_dict(self):
        return {(int(a), int(b)): w.item() for (a, b), w in zip(self.edges, self.weights)}


@dataclass(frozen=True, eq=False)
class ScoreTable:
    method: str
    scores: np.ndarray

    def __len__(self):
        return len(self.scores)


def _count_per_edge(view, rows):
    """How many of the given node-set rows contain each skeleton edge."""
    counts = np.zeros(view.edge_count, dtype=np.int64)
    for i, j in pair_columns(rows.shape[1]):
        idx = view.edge_index(rows[:, i], rows[:, j])
        counts += np.bincount(idx, minlength=view.edge_count)
    return counts


def sw_all(view):
    return view.pair_counts


def sdw_all(view, k):
    """SDW weight of every skeleton edge of ``view`` (aligned with ``view.edges``)."""
    def compute():
        ds = view.ds
        sizes = ds.sizes()
        ids = np.arange(view.start, view.stop)
        total = np.zeros(view.edge_count, dtype=np.int64)
        for pairs, src in iter_subsets(ds.indptr, ds.nodes, ids, 2, with_source=True):
            g = int(sizes[src[0]])
            idx = view.edge_index(pairs[:, 0], pairs[:, 1])
            total += np.bincount(idx, minlength=view.edge_count) * sdw_contribution(g, k)
        return total
    return view.cached(("sdw", k), compute)


def crw_counts(view, k, threads=1):
    """(closed, total) clique counts of orders 2..k through every skeleton edge."""
    def compute():
        closed = np.ones(view.edge_count, dtype=np.int64)
        total = np.ones(view.edge_count, dtype=np.int64)
        for r in range(3, k + 1):
            total += _count_per_edge(view, all_cliques(view, r, threads=threads))
            closed += _count_per_edge(view, keys_to_rows(view.closed_keys(r), view.n, r))
        return closed, total
    return view.cached(("crw", k), compute)


def crw_all(view, k, threads=1):
    closed, total = crw_counts(view, k, threads)
    return closed / total


class Scorer:
    """Computes score tables for one candidate set, building shared state lazily.

    Only the structures needed by the requested methods are built: node
    statistics for KCN/KAA/KRA, and one weight cache per edge-weight family.
    """

    def __init__(self, view, cands, threads=1):
        self.view = view
        self.cands = cands
        self.k = cands.k
        self.threads = threads
        self._node_stats = None
        self._edge_ids = None
        self._caches = {}

    @property
    def edge_ids(self):
        """``(M, k(k-1)/2)`` skeleton edge positions of every candidate's edges."""
        if self._edge_ids is None:
            rows = self.cands.candidates
            cols = pair_columns(self.k)
            ids = np.empty((len(rows), len(cols)), dtype=np.int32)
            for a in range(0, len(rows), _SCORE_CHUNK_ROWS):
                chunk = rows[a:a + _SCORE_CHUNK_ROWS]
                for c, (i, j) in enumerate(cols):
                    found = self.view.edge_index(chunk[:, i], chunk[:, j])
                    if (found < 0).any():
                        raise ValueError("candidate set does not belong to this view")
                    ids[a:a + len(chunk), c] = found
            self._edge_ids = ids
        return self._edge_ids

    def _full_weights(self, kind):
        view = self.view
        if kind == "SW":
            return sw_all(view)
        if kind == "SDW":
            return sdw_all(view, self.k)
        if kind == "CRW":
            return crw_all(view, self.k, self.threads)
        raise ValueError(f"unknown edge weight kind {kind!r}")

    def weight_cache(self, kind):
        """Weights of exactly the skeleton edges that occur in some candidate."""
        if kind not in self._caches:
            full = self._full_weights(kind)
            used = np.zeros(self.view.edge_count, dtype=bool)
            used[self.edge_ids.ravel()] = True
            used = np.flatnonzero(used)
            self._caches[kind] = EdgeWeightCache(
                kind=kind, k=self.k, edges=self.view.edges[used], weights=full[used])
        return self._caches[kind]

    def _node_tables(self):
        """Exact fixed-point limbs of the per-node KCN/KAA/KRA contributions."""
        deg = self.view.degrees.astype(np.float64)
        aa = np.zeros_like(deg)
        ra = np.zeros_like(deg)
        # degree >= 2 for any common neighbor of k >= 3 nodes; guard the log anyway
        aa[deg >= 2] = 1.0 / np.log(deg[deg >= 2])
        ra[deg >= 1] = 1.0 / deg[deg >= 1]
        aa_limbs, aa_exp = fixed_point_limbs(aa)
        ra_limbs, ra_exp = fixed_point_limbs(ra)
        ones = np.ones((len(deg), 1), dtype=np.int64)
        limbs = np.concatenate([ones, aa_limbs, ra_limbs], axis=1)
        split = (1, 1 + aa_limbs.shape[1])
        return limbs, split, (aa_exp, ra_exp)

    def _finish_node_stats(self, sums, split, exps):
        a, b = split
        return (sums[:, 0],
                assemble_fixed_point(sums[:, a:b], exps[0]),
                assemble_fixed_point(sums[:, b:], exps[1]))

    def _node_chunk_sparse(self, rows, limbs):
        # expand the lowest-degree member's neighbors, keep those adjacent to all members
        view = self.view
        deg = view.degrees
        pivot_col = np.argmin(deg[rows], axis=1)
        pivot = rows[np.arange(len(rows)), pivot_col]
        lengths = deg[pivot]
        z = view.adj_indices[expand_ranges(view.adj_indptr[pivot], lengths)]
        owner = np.repeat(np.arange(len(rows)), lengths)
        ok = np.ones(len(z), dtype=bool)
        for col in range(rows.shape[1]):
            member = rows[owner, col]
            ok &= (member == pivot[owner]) | view.has_edge(member, z)
        return grouped_sums(owner[ok], limbs[z[ok]], len(rows))

    def _node_chunk_packed(self, rows, table):
        packed = self.view.packed_adjacency
        common = packed[rows[:, 0]]
        for col in range(1, rows.shape[1]):
            common = common & packed[rows[:, col]]
        width = common.shape[1]
        flat = np.flatnonzero(common)
        cells = (flat % width) * 256 + common.ravel()[flat]
        return grouped_sums(flat // width, table[cells], len(rows))

    def node_stats(self):
        """Per-candidate (KCN, KAA, KRA) arrays.

        Contributions are summed as exact integers, so candidates whose common
        neighbors have the same degree multiset get bit-identical scores.
        """
        if self._node_stats is None:
            rows = self.cands.candidates
            limbs, split, exps = self._node_tables()
            packed = self.view.packed_adjacency
            if packed is not None:
                table = byte_tables(limbs, packed.shape[1])
                work = np.full(len(rows), packed.shape[1], dtype=np.int64)
                step = lambda r: self._node_chunk_packed(r, table)
            else:
                work = self.view.degrees[rows].min(axis=1) if len(rows) else np.zeros(0, dtype=np.int64)
                step = lambda r: self._node_chunk_sparse(r, limbs)
            cut = np.flatnonzero(np.diff(np.cumsum(work) // _NODE_CHUNK_WORK)) + 1
            bounds = [0, *cut.tolist(), len(rows)]
            spans = [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            if self.threads > 1 and len(spans) > 1:
                with ThreadPoolExecutor(max_workers=self.threads) as pool:
                    parts = list(pool.map(lambda s: step(rows[s[0]:s[1]]), spans))
            else:
                parts = [step(rows[a:b]) for a, b in spans]
            sums = np.concatenate(parts) if parts else np.zeros((0, limbs.shape[1]), dtype=np.int64)
            self._node_stats = self._finish_node_stats(sums, split, exps)
        return self._node_stats

    def score(self, method):
        kind, mode = parse_method(method)
        rows = self.cands.candidates
        if kind == "KCN":
            scores = self.node_stats()[0].astype(np.float64)
        elif kind == "KAA":
            scores = self.node_stats()[1]
        elif kind == "KRA":
            scores = self.node_stats()[2]
        elif kind == "KPA":
            scores = np.prod(self.view.degrees[rows].astype(np.float64), axis=1)
        else:
            self.weight_cache(kind)
            full = self._full_weights(kind)
            ids = self.edge_ids
            scores = np.empty(len(ids))
            for a in range(0, len(ids), _SCORE_CHUNK_ROWS):
                scores[a:a + _SCORE_CHUNK_ROWS] = combine_rows(
                    full[ids[a:a + _SCORE_CHUNK_ROWS]], mode, self.k)
        return ScoreTable(method=method, scores=scores)


def score_candidates(view, cands, method, scorer=None):
    """Score table of ``method`` for every candidate in ``cands``."""
    scorer = scorer or Scorer(view, cands)
    return scorer.score(method)
