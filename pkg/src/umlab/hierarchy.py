"""Agglomerative hierarchical clustering: single linkage, complete linkage
and the contiguity-constrained complete-link variant for sequence data,
plus dendrogram cutting and cophenetic (ultrametric) distances.

The linkage routines are implemented here rather than delegated so that
tie-breaking is fully specified (smallest canonical pair first) and so the
constrained variant shares the same dendrogram representation. Heights are
always existing inter-cluster distances, and for all three methods the
merge heights are non-decreasing (no inversions); this is asserted at
build time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import InputValidationError, as_condensed
from .geometry import condensed_index, condensed_size, squareform_distances


@dataclass(frozen=True)
class Dendrogram:
    """Merge history of an agglomerative clustering.

    ``merges`` has one row per agglomeration: (id_a, id_b, height). Leaves
    are 0 .. n-1; the cluster created by merge step t (0-based) gets id
    n + t, as in scipy's linkage matrices. id_a is the cluster whose
    smallest leaf is smaller.
    """

    n_leaves: int
    merges: np.ndarray
    constrained: bool = False

    def __post_init__(self):
        merges = np.asarray(self.merges, dtype=np.float64).reshape(-1, 3)
        object.__setattr__(self, "merges", merges)
        if merges.shape[0] != self.n_leaves - 1:
            raise InputValidationError(
                f"dendrogram with {self.n_leaves} leaves needs {self.n_leaves - 1} merges"
            )

    @property
    def heights(self) -> np.ndarray:
        return self.merges[:, 2]

    def to_linkage_matrix(self) -> np.ndarray:
        """scipy-compatible (n-1, 4) linkage matrix with cluster sizes."""
        n = self.n_leaves
        z = np.zeros((n - 1, 4))
        sizes = np.ones(2 * n - 1)
        for t, (a, b, h) in enumerate(self.merges):
            a, b = int(a), int(b)
            sizes[n + t] = sizes[a] + sizes[b]
            z[t] = (a, b, h, sizes[n + t])
        return z


@dataclass(frozen=True)
class Segmentation:
    """Partition of the leaf sequence 0..n-1 into contiguous segments.

    ``boundaries`` holds the first leaf index of every segment except the
    first, ascending; the segment count is len(boundaries) + 1.
    """

    n_leaves: int
    boundaries: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if any(x <= 0 or x >= self.n_leaves for x in b) or list(b) != sorted(set(b)):
            raise InputValidationError("boundaries must be strictly ascending and inside 1..n-1")

    @property
    def k(self) -> int:
        return len(self.boundaries) + 1

    def labels(self) -> np.ndarray:
        labels = np.zeros(self.n_leaves, dtype=np.int64)
        for boundary in self.boundaries:
            labels[boundary:] += 1
        return labels

    @classmethod
    def from_labels(cls, labels) -> "Segmentation":
        labels = np.asarray(labels)
        changes = np.flatnonzero(np.diff(labels) != 0) + 1
        seg = cls(n_leaves=labels.size, boundaries=tuple(int(c) for c in changes))
        if len(np.unique(labels)) != seg.k:
            raise InputValidationError("labels are not contiguous segments")
        return seg


def _linkage(d, method: str) -> Dendrogram:
    """Naive agglomerative linkage over a square working matrix.

    At each step the minimal inter-cluster distance is merged; among ties,
    the pair of clusters whose smallest-leaf representatives are
    lexicographically first wins. The merged cluster keeps the slot of the
    smaller representative, so slot order stays representative order and a
    row-major argmin realizes the tie rule. O(n^2) memory, O(n^3) worst
    time: intended for the n <= a few thousand regime used here.
    """
    d, n = as_condensed(d)
    w = squareform_distances(d)
    np.fill_diagonal(w, np.inf)
    ids = np.arange(n)
    merges = np.zeros((n - 1, 3))
    reduce_row = np.minimum if method == "single" else np.maximum
    last_height = -np.inf
    for step in range(n - 1):
        flat = int(np.argmin(w))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        height = w[i, j]
        assert height >= last_height, "linkage produced an inversion"
        last_height = height
        merges[step] = (ids[i], ids[j], height)
        ids[i] = n + step
        row = reduce_row(w[i], w[j])
        w[i, :] = row
        w[:, i] = row
        w[i, i] = np.inf
        w[j, :] = np.inf
        w[:, j] = np.inf
    return Dendrogram(n_leaves=n, merges=merges)


def single_linkage(d) -> Dendrogram:
    """Single-linkage dendrogram; its cophenetic matrix is the subdominant
    (pointwise-largest below d) ultrametric."""
    return _linkage(d, "single")


def complete_linkage(d) -> Dendrogram:
    """Complete-linkage dendrogram (merge height = max inter-cluster
    distance); its cophenetic matrix is the minimal superior ultrametric."""
    return _linkage(d, "complete")


def _max_cross_distance(d: np.ndarray, n: int, left: np.ndarray, right: np.ndarray) -> float:
    i = np.minimum.outer(left, right).ravel()
    j = np.maximum.outer(left, right).ravel()
    return float(d[condensed_index(n, i, j)].max())


def constrained_complete_linkage(d) -> Dendrogram:
    """Complete-linkage clustering that may only merge sequence-adjacent
    clusters (leaf order = row order of the source cloud).

    Only the n-1 adjacent pairs are candidates at any time, so memory stays
    O(n) over the condensed input. The complete-link criterion guarantees
    non-decreasing merge heights (asserted). Ties go to the leftmost pair,
    which is the smallest canonical pair.
    """
    d, n = as_condensed(d)
    segments = [np.array([i]) for i in range(n)]
    ids = list(range(n))
    gaps = np.array(
        [_max_cross_distance(d, n, segments[i], segments[i + 1]) for i in range(n - 1)]
    )
    merges = np.zeros((n - 1, 3))
    last_height = -np.inf
    for step in range(n - 1):
        pos = int(np.argmin(gaps))
        height = gaps[pos]
        assert height >= last_height, "constrained linkage produced an inversion"
        last_height = height
        merges[step] = (ids[pos], ids[pos + 1], height)
        segments[pos] = np.concatenate([segments[pos], segments[pos + 1]])
        ids[pos] = n + step
        del segments[pos + 1], ids[pos + 1]
        gaps = np.delete(gaps, pos)
        if pos > 0:
            gaps[pos - 1] = _max_cross_distance(d, n, segments[pos - 1], segments[pos])
        if pos < len(segments) - 1:
            gaps[pos] = _max_cross_distance(d, n, segments[pos], segments[pos + 1])
    return Dendrogram(n_leaves=n, merges=merges, constrained=True)


def cophenetic(dend: Dendrogram) -> np.ndarray:
    """Condensed cophenetic distances: height of the lowest merge joining
    each pair. The output is an exact ultrametric (every triplet has its
    two largest values equal)."""
    n = dend.n_leaves
    u = np.zeros(condensed_size(n))
    members: list[np.ndarray | None] = [np.array([i]) for i in range(n)]
    for a, b, h in dend.merges:
        left, right = members[int(a)], members[int(b)]
        i = np.minimum.outer(left, right).ravel()
        j = np.maximum.outer(left, right).ravel()
        u[condensed_index(n, i, j)] = h
        members.append(np.concatenate([left, right]))
        members[int(a)] = members[int(b)] = None
    return u


def cut(dend: Dendrogram, k: int) -> np.ndarray:
    """Labels of the k-cluster partition from removing the k-1 last merges.

    Merge order (not height) resolves equal-height cuts, so the partition
    is well defined under ties. Labels are numbered 0..k-1 in order of each
    cluster's smallest leaf. For constrained dendrograms the partition is
    contiguous in the leaf sequence.
    """
    n = dend.n_leaves
    if not 1 <= k <= n:
        raise InputValidationError(f"k must lie in 1..{n}, got {k}")
    parent = np.arange(2 * n - 1)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step in range(n - k):
        a, b, _ = dend.merges[step]
        parent[find(int(a))] = n + step
        parent[find(int(b))] = n + step
    roots = [find(i) for i in range(n)]
    # number clusters 0..k-1 in order of their smallest leaf
    first_seen: dict[int, int] = {}
    labels = np.empty(n, dtype=np.int64)
    for leaf, root in enumerate(roots):
        if root not in first_seen:
            first_seen[root] = len(first_seen)
        labels[leaf] = first_seen[root]
    return labels


def cut_segments(dend: Dendrogram, k: int) -> Segmentation:
    """Cut a constrained dendrogram into k contiguous segments."""
    if not dend.constrained:
        raise InputValidationError("cut_segments requires a constrained dendrogram")
    return Segmentation.from_labels(cut(dend, k))


def cut_height(dend: Dendrogram, k: int) -> float:
    """Height of the first merge removed by a k-cut (inf for k = 1)."""
    n = dend.n_leaves
    if not 1 <= k <= n:
        raise InputValidationError(f"k must lie in 1..{n}, got {k}")
    if k == 1:
        return float("inf")
    return float(dend.merges[n - k, 2])
