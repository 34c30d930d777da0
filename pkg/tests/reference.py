"""Brute-force reference implementations used as test oracles.

Everything here works on plain Python sets and follows the definitions
literally. Nothing is imported from the package under test.
"""
import math
from fractions import Fraction
from itertools import combinations


class Reference:
    def __init__(self, train, n, test=()):
        self.n = n
        self.train = [frozenset(s) for s in train]
        self.test = [frozenset(s) for s in test]
        self._weights = {}
        self._closed = {}
        self.adj = {v: set() for v in range(n)}
        for s in self.train:
            for a, b in combinations(sorted(s), 2):
                self.adj[a].add(b)
                self.adj[b].add(a)

    def degree(self, v):
        return len(self.adj[v])

    def is_edge(self, a, b):
        return b in self.adj[a]

    def is_clique(self, nodes):
        return all(self.is_edge(a, b) for a, b in combinations(nodes, 2))

    def cliques(self, k):
        return [c for c in combinations(range(self.n), k) if self.is_clique(c)]

    def is_closed(self, nodes):
        key = frozenset(nodes)
        if key not in self._closed:
            self._closed[key] = any(key <= s for s in self.train)
        return self._closed[key]

    def containing(self, nodes):
        nodes = set(nodes)
        return [i for i, s in enumerate(self.train) if nodes <= s]

    def candidates(self, k):
        return [c for c in self.cliques(k) if not self.is_closed(c)]

    def label(self, cand):
        cand = set(cand)
        return any(cand <= t for t in self.test)

    # node-based indices

    def common(self, cand):
        return set.intersection(*(self.adj[v] for v in cand))

    def kcn(self, cand):
        return len(self.common(cand))

    def kaa(self, cand):
        return sum(1 / math.log(self.degree(z)) for z in sorted(self.common(cand)))

    def kra(self, cand):
        return sum(1 / self.degree(z) for z in sorted(self.common(cand)))

    def kpa(self, cand):
        return math.prod(self.degree(v) for v in cand)

    # edge weights

    def sw(self, edge):
        return len(self.containing(edge))

    def sdw_sequence(self, edge, k):
        """The face sequence of an edge, built step by step."""
        e = set(edge)
        seq = []
        for s in self.train:
            if not e <= s:
                continue
            if len(s) >= k:
                kfaces = [f for f in combinations(sorted(s), k) if e <= set(f)]
                seq.extend(kfaces)
                for f in kfaces:
                    for q in range(k - 1, 1, -1):
                        seq.extend(g for g in combinations(f, q) if e <= set(g))
            else:
                for q in range(len(s), 1, -1):
                    seq.extend(g for g in combinations(sorted(s), q) if e <= set(g))
        return seq

    def sdw(self, edge, k):
        return len(self.sdw_sequence(edge, k))

    def crw(self, edge, k):
        a, b = sorted(edge)
        others = [v for v in range(self.n) if v not in (a, b)]
        closed = opened = 0
        for extra in range(0, k - 1):
            for rest in combinations(others, extra):
                nodes = tuple(sorted((a, b) + rest))
                if not self.is_clique(nodes):
                    continue
                if self.is_closed(nodes):
                    closed += 1
                else:
                    opened += 1
        return Fraction(closed, closed + opened)

    def edge_weight(self, kind, edge, k):
        key = (kind, tuple(sorted(edge)), k)
        if key not in self._weights:
            if kind == "SW":
                self._weights[key] = self.sw(edge)
            elif kind == "SDW":
                self._weights[key] = self.sdw(edge, k)
            else:
                self._weights[key] = self.crw(edge, k)
        return self._weights[key]

    def score(self, method, cand):
        k = len(cand)
        if method == "KCN":
            return self.kcn(cand)
        if method == "KAA":
            return self.kaa(cand)
        if method == "KRA":
            return self.kra(cand)
        if method == "KPA":
            return self.kpa(cand)
        kind, mode = method[:-1], method[-1]
        weights = [self.edge_weight(kind, e, k) for e in combinations(cand, 2)]
        return mean(weights, mode, k)


def mean(weights, mode, k):
    """Arithmetic / harmonic exactly (Fraction), geometric as a float.

    Integer weights take an all-integer route; it is the same value, only
    cheaper than Fraction arithmetic.
    """
    n_edges = k * (k - 1) // 2
    integral = all(isinstance(w, int) for w in weights)
    if mode == "A":
        if integral:
            return Fraction(sum(weights), n_edges)
        return sum(weights, Fraction(0)) / n_edges
    if mode == "H":
        if integral:
            prod = math.prod(weights)
            return Fraction(n_edges * prod, sum(prod // w for w in weights))
        return Fraction(n_edges) / sum(1 / Fraction(w) for w in weights)
    log_mean = sum(math.log(Fraction(w).numerator) - math.log(Fraction(w).denominator)
                   for w in weights) / n_edges
    return math.exp(log_mean) / n_edges


def average_precision(scores, labels):
    """AP over the thresholds given by the distinct scores, as an exact Fraction."""
    n_pos = sum(1 for y in labels if y)
    by_score = {}
    for s, y in zip(scores, labels):
        seen, pos = by_score.get(s, (0, 0))
        by_score[s] = (seen + 1, pos + bool(y))
    picked = tp = 0
    total = Fraction(0)
    for t in sorted(by_score, reverse=True):
        seen, pos = by_score[t]
        picked += seen
        tp += pos
        total += Fraction(pos, n_pos) * Fraction(tp, picked)
    return total


def recount_labels(train, test, k):
    """Candidate count and positives via plain set arithmetic.

    Scales to the real corpora: cliques are grown from adjacency sets and
    closedness is looked up in the set of every k-subset of a training
    interaction.
    """
    adj = {}
    closed = set()
    for s in train:
        s = sorted(s)
        for a, b in combinations(s, 2):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        closed.update(combinations(s, k))
    held = set()
    for s in test:
        held.update(combinations(sorted(s), k))
    n_cand = n_pos = 0
    for a in adj:
        higher = {v for v in adj[a] if v > a}
        for b in higher:
            third = higher & adj[b]
            for c in third:
                if c <= b:
                    continue
                if k == 3:
                    tails = [(a, b, c)]
                else:
                    tails = [(a, b, c, d) for d in third & adj[c] if d > c]
                for cand in tails:
                    if cand not in closed:
                        n_cand += 1
                        n_pos += cand in held
    return n_cand, n_pos
