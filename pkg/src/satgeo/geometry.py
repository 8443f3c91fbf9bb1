"""Exact solution-space geometry at desk scale.

Solutions are enumerated exhaustively (2^n assignments, n capped), stored as
sorted packed words, and decomposed into connected components under
Hamming-distance adjacency.  Distances, diameters, censuses, projections and
distance-gap region grouping are all computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._core import impl
from .errors import ForbiddenGapViolation, InvalidInput, InvalidParameters, ResourceLimit
from .formula import Formula
from .words import TriAssignment, STAR, words_to_bit_matrix

ENUMERATION_CAP = 26
PAIR_CENSUS_CAP = 20000

_BLOCK = 4096


@dataclass(frozen=True)
class SolutionSet:
    """All satisfying assignments of a formula, as sorted packed words."""

    n: int
    words: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.words, dtype=np.uint64))
        w.setflags(write=False)
        object.__setattr__(self, "words", w)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        i = np.searchsorted(self.words, np.uint64(word))
        return i < len(self.words) and self.words[i] == np.uint64(word)

    def as_bits(self) -> np.ndarray:
        return words_to_bit_matrix(self.words, self.n)


@dataclass(frozen=True)
class ClusterDecomposition:
    """Partition of a solution set into Hamming-adjacency components.

    labels[i] is the cluster id of words[i]; ids are dense 0..num_clusters-1,
    numbered by each cluster's smallest word.
    """

    n: int
    adjacency_radius: int
    words: np.ndarray
    labels: np.ndarray

    @property
    def num_clusters(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def clusters(self) -> list[np.ndarray]:
        return [self.words[self.labels == c] for c in range(self.num_clusters)]

    def cluster(self, c: int) -> np.ndarray:
        return self.words[self.labels == c]


@dataclass(frozen=True)
class ClusterRegion:
    """A group of clusters separated from everything else by a distance gap."""

    cluster_indices: frozenset
    diameter: int
    min_external_distance: int | None


def enumerate_solutions(formula: Formula, cap: int = ENUMERATION_CAP) -> SolutionSet:
    """Exact solution set by exhaustive evaluation of all 2^n assignments."""
    if formula.n > cap:
        raise ResourceLimit(
            f"n={formula.n} exceeds the enumeration cap {cap}; "
            "raise cap explicitly to allow larger sweeps")
    sat = impl.mark_solutions(formula.n, formula.clause_vars, formula.clause_signs)
    return SolutionSet(n=formula.n, words=np.flatnonzero(sat).astype(np.uint64))


def _flip_masks(n: int, radius: int) -> np.ndarray | None:
    """All nonzero XOR masks of weight <= radius, or None if too many."""
    from itertools import combinations
    total = 0
    count = 1
    for j in range(1, radius + 1):
        count = count * (n - j + 1) // j
        total += count
        if total > 200000:
            return None
    masks = np.empty(total, dtype=np.uint64)
    i = 0
    for j in range(1, radius + 1):
        for combo in combinations(range(n), j):
            m = 0
            for p in combo:
                m |= 1 << p
            masks[i] = m
            i += 1
    return masks


def _labels_by_probing(words: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Connected components by breadth-first traversal with membership probes."""
    size = len(words)
    labels = np.full(size, -1, dtype=np.int64)
    next_label = 0
    for start in range(size):
        if labels[start] >= 0:
            continue
        labels[start] = next_label
        frontier = words[start:start + 1]
        while len(frontier):
            neigh = (frontier[:, None] ^ masks[None, :]).ravel()
            idx = np.searchsorted(words, neigh)
            ok = idx < size
            ok[ok] &= words[idx[ok]] == neigh[ok]
            found = np.unique(idx[ok])
            fresh = found[labels[found] < 0]
            labels[fresh] = next_label
            frontier = words[fresh]
        next_label += 1
    return labels


def _labels_by_pairwise(words: np.ndarray, n: int, radius: int) -> np.ndarray:
    """Connected components from thresholded pairwise distances (union-find)."""
    size = len(words)
    parent = np.arange(size, dtype=np.int64)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i0 in range(0, size, _BLOCK):
        a = words[i0:i0 + _BLOCK]
        for j0 in range(i0, size, _BLOCK):
            b = words[j0:j0 + _BLOCK]
            d = np.bitwise_count(a[:, None] ^ b[None, :])
            ii, jj = np.nonzero(d <= radius)
            for x, y in zip(ii + i0, jj + j0):
                if x >= y:
                    continue
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
    roots = np.array([find(i) for i in range(size)])
    _, labels = np.unique(roots, return_inverse=True)
    return labels


def decompose_clusters(solution_set: SolutionSet,
                       adjacency_radius: int = 1) -> ClusterDecomposition:
    """Connected components of the solution set; two assignments are adjacent
    when their Hamming distance is at most adjacency_radius."""
    if adjacency_radius < 1:
        raise InvalidParameters("adjacency_radius must be >= 1")
    words, n = solution_set.words, solution_set.n
    if len(words) == 0:
        return ClusterDecomposition(n=n, adjacency_radius=adjacency_radius,
                                    words=words, labels=np.empty(0, dtype=np.int64))
    masks = _flip_masks(n, min(adjacency_radius, n))
    probe_cost = len(words) * (len(masks) if masks is not None else np.inf)
    if masks is not None and probe_cost <= len(words) ** 2:
        labels = _labels_by_probing(words, masks)
    else:
        labels = _labels_by_pairwise(words, n, adjacency_radius)
    # dense ids numbered by first occurrence (words sorted => by smallest word)
    first: dict[int, int] = {}
    order = np.empty_like(labels)
    for i, lab in enumerate(labels):
        lab = int(lab)
        if lab not in first:
            first[lab] = len(first)
        order[i] = first[lab]
    return ClusterDecomposition(n=n, adjacency_radius=adjacency_radius,
                                words=words, labels=order)


def projection_of(cluster: np.ndarray, n: int) -> TriAssignment:
    """Per-variable union of values over a cluster; * where both occur."""
    cluster = np.asarray(cluster, dtype=np.uint64)
    if len(cluster) == 0:
        raise InvalidInput("projection of an empty cluster is undefined")
    ors = np.bitwise_or.reduce(cluster)
    ands = np.bitwise_and.reduce(cluster)
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        o = (int(ors) >> i) & 1
        a = (int(ands) >> i) & 1
        out[i] = o if o == a else STAR
    return TriAssignment(out)


def frozen_mask(cluster: np.ndarray, n: int) -> np.ndarray:
    """Boolean mask of variables taking a single value across the cluster."""
    return np.asarray(projection_of(cluster, n).symbols) != STAR


def hamming_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(a, dtype=np.uint64)[:, None]
                            ^ np.asarray(b, dtype=np.uint64)[None, :])


def set_distance(a: np.ndarray, b: np.ndarray) -> int:
    """Minimum Hamming distance between two sets of words."""
    best = None
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    for i0 in range(0, len(a), _BLOCK):
        for j0 in range(0, len(b), _BLOCK):
            d = int(hamming_matrix(a[i0:i0 + _BLOCK], b[j0:j0 + _BLOCK]).min())
            best = d if best is None else min(best, d)
    return best


def diameter(words: np.ndarray) -> int:
    """Largest pairwise Hamming distance within a set of words."""
    words = np.asarray(words, dtype=np.uint64)
    if len(words) <= 1:
        return 0
    best = 0
    for i0 in range(0, len(words), _BLOCK):
        for j0 in range(i0, len(words), _BLOCK):
            best = max(best, int(hamming_matrix(words[i0:i0 + _BLOCK],
                                                words[j0:j0 + _BLOCK]).max()))
    return best


def pair_distance_census(solution_set: SolutionSet | np.ndarray,
                         cap: int = PAIR_CENSUS_CAP) -> dict[int, int]:
    """Counts of unordered distinct solution pairs at each Hamming distance.

    Distances with zero count are omitted; a singleton or empty set yields an
    empty census.
    """
    words = solution_set.words if isinstance(solution_set, SolutionSet) \
        else np.asarray(solution_set, dtype=np.uint64)
    size = len(words)
    if size > cap:
        raise ResourceLimit(f"|S|={size} exceeds the pairwise census cap {cap}")
    counts = np.zeros(65, dtype=np.int64)
    for i0 in range(0, size, _BLOCK):
        a = words[i0:i0 + _BLOCK]
        for j0 in range(i0, size, _BLOCK):
            d = hamming_matrix(a, words[j0:j0 + _BLOCK])
            if i0 == j0:
                iu = np.triu_indices(d.shape[0], k=1, m=d.shape[1])
                counts += np.bincount(d[iu].ravel(), minlength=65)
            else:
                counts += np.bincount(d.ravel(), minlength=65)
    return {int(d): int(c) for d, c in enumerate(counts) if c > 0}


def _cluster_distance_tables(decomp: ClusterDecomposition, a: int, b: int):
    """Min/max cross-cluster distance matrices; raises on a gap violation.

    Diagonal self-pairs have distance 0 and never trip the gap test (a >= 1);
    the diagonal of mind is meaningless and unused.
    """
    size = len(decomp.words)
    if size > PAIR_CENSUS_CAP:
        raise ResourceLimit(f"|S|={size} exceeds the pairwise cap {PAIR_CENSUS_CAP}")
    order = np.argsort(decomp.labels, kind="stable")
    words = decomp.words[order]
    labels = decomp.labels[order]
    nc = decomp.num_clusters
    starts = np.searchsorted(labels, np.arange(nc))
    mind = np.full((nc, nc), np.iinfo(np.int64).max, dtype=np.int64)
    maxd = np.zeros((nc, nc), dtype=np.int64)
    for i0 in range(0, size, _BLOCK):
        wa, la = words[i0:i0 + _BLOCK], labels[i0:i0 + _BLOCK]
        ra = np.searchsorted(la, np.unique(la))
        ca = np.unique(la)
        for j0 in range(i0, size, _BLOCK):
            wb, lb = words[j0:j0 + _BLOCK], labels[j0:j0 + _BLOCK]
            d = hamming_matrix(wa, wb).astype(np.int64)
            viol = (d > a) & (d < b)
            if viol.any():
                ii, jj = np.nonzero(viol)
                raise ForbiddenGapViolation(wa[ii[0]], wb[jj[0]],
                                            d[ii[0], jj[0]], a, b)
            rb = np.searchsorted(lb, np.unique(lb))
            cb = np.unique(lb)
            dmin = np.minimum.reduceat(np.minimum.reduceat(d, ra, axis=0), rb, axis=1)
            dmax = np.maximum.reduceat(np.maximum.reduceat(d, ra, axis=0), rb, axis=1)
            np.minimum.at(mind, (ca[:, None], cb[None, :]), dmin)
            np.maximum.at(maxd, (ca[:, None], cb[None, :]), dmax)
    mind = np.minimum(mind, mind.T)
    maxd = np.maximum(maxd, maxd.T)
    return mind, maxd


def region_partition(decomp: ClusterDecomposition, a: int, b: int) -> list[ClusterRegion]:
    """Group clusters into regions across a verified distance gap.

    Requires that no solution pair sits at a distance strictly inside (a, b);
    a violating pair is reported via ForbiddenGapViolation.  Regions are the
    connected components of the cluster graph with edges at distance <= a;
    under the precondition every region then has min_external_distance >= b.
    """
    if not (0 < a < b <= decomp.n):
        raise InvalidParameters("need 0 < a < b <= n")
    nc = decomp.num_clusters
    if nc == 0:
        return []
    mind, maxd = _cluster_distance_tables(decomp, a, b)
    # components over the "distance <= a" cluster graph
    region_of = np.full(nc, -1, dtype=np.int64)
    nregions = 0
    for c in range(nc):
        if region_of[c] >= 0:
            continue
        stack = [c]
        region_of[c] = nregions
        while stack:
            u = stack.pop()
            for v in range(nc):
                if region_of[v] < 0 and mind[u, v] <= a:
                    region_of[v] = nregions
                    stack.append(v)
        nregions += 1
    regions = []
    for rid in range(nregions):
        members = np.flatnonzero(region_of == rid)
        diam = int(max(maxd[ci, cj] for ci in members for cj in members))
        ext = None
        outside = np.flatnonzero(region_of != rid)
        if outside.size:
            ext = int(min(mind[ci, cj] for ci in members for cj in outside))
        regions.append(ClusterRegion(cluster_indices=frozenset(int(c) for c in members),
                                     diameter=diam, min_external_distance=ext))
    return regions
