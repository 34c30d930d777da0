"""Loading timestamped simplex datasets.

A dataset on disk is three aligned text files sharing a prefix::

    <name>-nverts.txt     size of each simplex, one per line
    <name>-simplices.txt  node ids of all simplices, concatenated, one per line
    <name>-times.txt      timestamp of each simplex, one per line

Records with repeated nodes (or no nodes) and records with more than
:data:`MAX_ORDER` nodes are dropped and counted. Retained records are
sorted stably by timestamp and node ids are re-indexed densely.
"""
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._arrays import expand_ranges, unique_subset_keys

MAX_ORDER = 25

_INT_TOKEN = re.compile(r"[+-]?[0-9]+")


class DatasetError(Exception):
    """Base class for problems with an input dataset."""


class MissingFileError(DatasetError):
    pass


class ConsistencyError(DatasetError):
    pass


class ParseError(DatasetError):
    def __init__(self, path, line, token):
        self.path = Path(path)
        self.line = line
        self.token = token
        super().__init__(f"{self.path.name}: line {line}: not a valid integer: {token!r}")


@dataclass(frozen=True)
class Interaction:
    """One simplex: sorted dense node ids and a timestamp."""
    nodes: tuple
    time: int

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class StatsRecord:
    nodes: int
    edges: int
    simplices: int

    def as_tuple(self):
        return (self.nodes, self.edges, self.simplices)


@dataclass(frozen=True, eq=False)
class SimplicialDataset:
    """Timestamp-ordered interactions stored in CSR form.

    Interaction ``i`` has nodes ``nodes[indptr[i]:indptr[i + 1]]`` (dense ids,
    ascending) and time ``times[i]``. ``raw_ids[d]`` is the original id of
    dense node ``d``.
    """
    name: str
    indptr: np.ndarray
    nodes: np.ndarray
    times: np.ndarray
    raw_ids: np.ndarray
    dropped_oversize: int = 0
    dropped_degenerate: int = 0

    def __post_init__(self):
        for arr in (self.indptr, self.nodes, self.times, self.raw_ids):
            arr.setflags(write=False)

    @classmethod
    def from_records(cls, nverts, simplices, times, name="dataset"):
        """Build a cleaned dataset from flat arrays in the on-disk layout."""
        nverts = np.asarray(nverts, dtype=np.int64)
        simplices = np.asarray(simplices, dtype=np.int64)
        times = np.asarray(times, dtype=np.int64)
        if nverts.ndim != 1 or simplices.ndim != 1 or times.ndim != 1:
            raise ConsistencyError("nverts, simplices and times must be 1-D")
        if len(nverts) != len(times):
            raise ConsistencyError(
                f"{len(nverts)} simplex sizes but {len(times)} timestamps")
        if (nverts < 0).any():
            raise ConsistencyError("negative simplex size")
        if int(nverts.sum()) != len(simplices):
            raise ConsistencyError(
                f"simplex sizes sum to {int(nverts.sum())} but {len(simplices)} node ids were given")
        if (simplices < 0).any():
            raise ConsistencyError("negative node id")

        m = len(nverts)
        owner = np.repeat(np.arange(m), nverts)
        order = np.lexsort((simplices, owner))
        sorted_nodes = simplices[order]

        repeated = np.zeros(m, dtype=bool)
        dup = (sorted_nodes[1:] == sorted_nodes[:-1]) & (owner[1:] == owner[:-1])
        repeated[owner[1:][dup]] = True
        degenerate = repeated | (nverts == 0)
        oversize = ~degenerate & (nverts > MAX_ORDER)
        keep = ~(degenerate | oversize)

        kept = np.flatnonzero(keep)
        kept = kept[np.argsort(times[kept], kind="stable")]
        sizes = nverts[kept]
        indptr = np.zeros(len(kept) + 1, dtype=np.int64)
        np.cumsum(sizes, out=indptr[1:])

        old_indptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(nverts, out=old_indptr[1:])
        raw_flat = sorted_nodes[expand_ranges(old_indptr[kept], sizes)]
        raw_ids, dense = np.unique(raw_flat, return_inverse=True)

        return cls(
            name=name,
            indptr=indptr,
            nodes=dense.astype(np.int32).reshape(-1),
            times=times[kept].copy(),
            raw_ids=raw_ids,
            dropped_oversize=int(oversize.sum()),
            dropped_degenerate=int(degenerate.sum()),
        )

    @classmethod
    def from_interactions(cls, simplices, times=None, name="dataset"):
        """Convenience constructor from a list of node collections.

        ``times`` defaults to the list position, so input order is time order.
        """
        simplices = [list(s) for s in simplices]
        if times is None:
            times = range(len(simplices))
        nverts = [len(s) for s in simplices]
        flat = [v for s in simplices for v in s]
        return cls.from_records(nverts, flat, list(times), name=name)

    @property
    def node_count(self):
        return len(self.raw_ids)

    def __len__(self):
        return len(self.times)

    def sizes(self):
        return np.diff(self.indptr)

    def interaction(self, i):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return Interaction(tuple(int(v) for v in self.nodes[lo:hi]), int(self.times[i]))

    @property
    def interactions(self):
        return [self.interaction(i) for i in range(len(self))]

    def __iter__(self):
        for i in range(len(self)):
            yield self.interaction(i)

    def dense_id(self, raw):
        """Dense index of raw node id ``raw`` (KeyError if absent)."""
        pos = int(np.searchsorted(self.raw_ids, raw))
        if pos >= len(self.raw_ids) or self.raw_ids[pos] != raw:
            raise KeyError(raw)
        return pos

    def dense_ids(self, raws):
        return tuple(sorted(self.dense_id(r) for r in raws))

    def raw_nodes(self, i):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return tuple(int(v) for v in self.raw_ids[self.nodes[lo:hi]])

    def same_as(self, other):
        """Bit-level equality of all stored arrays and counters."""
        return (
            self.name == other.name
            and self.dropped_oversize == other.dropped_oversize
            and self.dropped_degenerate == other.dropped_degenerate
            and all(np.array_equal(a, b) and a.dtype == b.dtype
                    for a, b in zip(
                        (self.indptr, self.nodes, self.times, self.raw_ids),
                        (other.indptr, other.nodes, other.times, other.raw_ids)))
        )


def dataset_files(directory, name):
    directory = Path(directory)
    return tuple(directory / f"{name}-{part}.txt" for part in ("nverts", "simplices", "times"))


def _read_ints(path, what, nonnegative=False):
    if not path.is_file():
        raise MissingFileError(f"missing {what} file: {path}")
    lines = path.read_bytes().decode("ascii", errors="replace").splitlines()
    tokens = [ln.strip() for ln in lines]
    linenos = [i for i, t in enumerate(tokens, start=1) if t]
    try:
        values = np.array([tokens[i - 1] for i in linenos], dtype=np.int64) if linenos \
            else np.zeros(0, dtype=np.int64)
    except (ValueError, OverflowError):
        for lineno in linenos:
            tok = tokens[lineno - 1]
            if not _INT_TOKEN.fullmatch(tok) or not -2**63 <= int(tok) < 2**63:
                raise ParseError(path, lineno, tok) from None
        raise
    if nonnegative and (values < 0).any():
        bad = int(np.flatnonzero(values < 0)[0])
        raise ParseError(path, linenos[bad], tokens[linenos[bad] - 1])
    return values


def load_dataset(directory, name):
    """Read ``<name>-{nverts,simplices,times}.txt`` from ``directory``."""
    nverts_path, simplices_path, times_path = dataset_files(directory, name)
    nverts = _read_ints(nverts_path, "nverts", nonnegative=True)
    simplices = _read_ints(simplices_path, "simplices", nonnegative=True)
    times = _read_ints(times_path, "times")
    if int(nverts.sum()) != len(simplices):
        raise ConsistencyError(
            f"{nverts_path.name} sums to {int(nverts.sum())} but "
            f"{simplices_path.name} has {len(simplices)} entries")
    if len(nverts) != len(times):
        raise ConsistencyError(
            f"{nverts_path.name} has {len(nverts)} entries but "
            f"{times_path.name} has {len(times)}")
    return SimplicialDataset.from_records(nverts, simplices, times, name=name)


def write_dataset(ds, directory, name=None):
    """Write ``ds`` in the three-file layout using its raw node ids."""
    name = name or ds.name
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    nverts_path, simplices_path, times_path = dataset_files(directory, name)
    np.savetxt(nverts_path, ds.sizes(), fmt="%d")
    np.savetxt(simplices_path, ds.raw_ids[ds.nodes], fmt="%d")
    np.savetxt(times_path, ds.times, fmt="%d")
    return nverts_path, simplices_path, times_path


def dataset_stats(ds):
    """Node count, skeleton edge count and simplex count of the whole dataset."""
    keys = unique_subset_keys(ds.indptr, ds.nodes, np.arange(len(ds)), 2, ds.node_count)
    return StatsRecord(nodes=ds.node_count, edges=len(keys), simplices=len(ds))
