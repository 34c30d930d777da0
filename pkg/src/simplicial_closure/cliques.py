"""k-clique enumeration on the skeleton and open/closed classification.

Cliques are listed by orienting every skeleton edge from the endpoint with
smaller (degree, id) to the larger one and growing each clique only through
out-neighbors of its highest-ranked member. Every clique is then produced
exactly once, and the work per clique is a handful of adjacency lookups.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ._arrays import expand_ranges, lexsort_rows

DEFAULT_MAX_CANDIDATES = 10 ** 8

# Target number of (clique, extension) pairs tested per vectorized chunk.
_CHUNK_WORK = 1 << 21


class CandidateLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class CliquePartition:
    closed: np.ndarray
    open: np.ndarray


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """Open k-cliques of a training window, one ascending row per candidate.

    ``labels`` stays ``None`` until :func:`simplicial_closure.evaluation.label_candidates`
    fills it in.
    """
    k: int
    candidates: np.ndarray
    labels: np.ndarray = None

    def __len__(self):
        return len(self.candidates)

    def with_labels(self, labels):
        labels = np.asarray(labels, dtype=bool)
        if labels.shape != (len(self),):
            raise ValueError("one label per candidate required")
        return replace(self, labels=labels)


class _Orientation:
    def __init__(self, view):
        n = view.n
        rank = np.empty(n, dtype=np.int64)
        rank[np.lexsort((np.arange(n), view.degrees))] = np.arange(n)
        a, b = view.edges[:, 0], view.edges[:, 1]
        swap = rank[a] > rank[b]
        src = np.where(swap, b, a)
        dst = np.where(swap, a, b)
        order = np.lexsort((rank[dst], src))
        self.rank = rank
        self.src = src[order].astype(np.int32)
        self.dst = dst[order].astype(np.int32)
        self.outdeg = np.bincount(self.src, minlength=n)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.outdeg, out=self.indptr[1:])


def _extend(view, orient, base):
    """All ways to add one out-neighbor of the last column of ``base``."""
    last = base[:, -1]
    lengths = orient.outdeg[last]
    cand = orient.dst[expand_ranges(orient.indptr[last], lengths)]
    owner = np.repeat(np.arange(len(base)), lengths)
    ok = np.ones(len(cand), dtype=bool)
    for col in range(base.shape[1] - 1):
        ok &= view.has_edge(base[owner, col], cand)
    return np.column_stack([base[owner[ok]], cand[ok]])


def _chunks(work, target=_CHUNK_WORK):
    """Split a work vector into contiguous spans of roughly ``target`` units."""
    if len(work) == 0:
        return []
    cut = np.flatnonzero(np.diff(np.cumsum(work) // target)) + 1
    bounds = [0, *cut.tolist(), len(work)]
    return [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _grow(view, orient, base, threads, limit):
    work = orient.outdeg[base[:, -1]] if len(base) else np.zeros(0, dtype=np.int64)
    spans = _chunks(work)
    parts = []
    total = 0

    def run(span):
        return _extend(view, orient, base[span[0]:span[1]])

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(run, spans):
                total += len(part)
                if limit is not None and total > limit:
                    raise CandidateLimitError(
                        f"more than {limit} cliques; raise the candidate limit to continue")
                parts.append(part)
    else:
        for span in spans:
            part = run(span)
            total += len(part)
            if limit is not None and total > limit:
                raise CandidateLimitError(
                    f"more than {limit} cliques; raise the candidate limit to continue")
            parts.append(part)
    if not parts:
        return np.zeros((0, base.shape[1] + 1), dtype=np.int32)
    return np.concatenate(parts)


def enumerate_k_cliques(view, k, threads=1, limit=None):
    """All k-cliques of the skeleton as an ``(M, k)`` int32 array.

    Rows are ascending node ids and the rows are in lexicographic order, so
    the result does not depend on ``threads``. ``limit`` aborts with
    :class:`CandidateLimitError` once more than that many cliques are found.
    """
    if k not in (2, 3, 4):
        raise ValueError(f"k must be 2, 3 or 4, got {k}")
    if k == 2:
        if limit is not None and len(view.edges) > limit:
            raise CandidateLimitError(f"more than {limit} cliques")
        return np.array(view.edges, dtype=np.int32)
    orient = _Orientation(view)
    rows = np.column_stack([orient.src, orient.dst])
    for size in range(3, k + 1):
        rows = _grow(view, orient, rows, threads, limit if size == k else None)
    return lexsort_rows(np.sort(rows, axis=1))


def all_cliques(view, k, threads=1, limit=None):
    """:func:`enumerate_k_cliques`, memoized on the view."""
    return view.cached(("cliques", k), lambda: enumerate_k_cliques(view, k, threads, limit))


def partition_cliques(view, k, threads=1):
    """Split the k-cliques of ``view`` into closed and open ones."""
    cliques = all_cliques(view, k, threads=threads)
    closed = view.is_closed_rows(cliques)
    return CliquePartition(closed=cliques[closed], open=cliques[~closed])


def candidates(view, k, threads=1, max_candidates=DEFAULT_MAX_CANDIDATES):
    """Candidate k-simplices: the open k-cliques of the window."""
    if k not in (3, 4):
        raise ValueError(f"candidates are defined for k in (3, 4), got {k}")
    limit = None
    if max_candidates is not None:
        # every distinct closed k-set is a clique, so this bounds the open count exactly
        limit = max_candidates + len(view.closed_keys(k))
    try:
        cliques = all_cliques(view, k, threads=threads, limit=limit)
    except CandidateLimitError:
        raise CandidateLimitError(
            f"{view.ds.name}: more than {max_candidates} candidate {k}-simplices; "
            "raise --max-candidates to continue") from None
    open_rows = cliques[~view.is_closed_rows(cliques)]
    return CandidateSet(k=k, candidates=open_rows)
