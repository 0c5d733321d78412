"""Three measures of how hierarchical (ultrametric) a point cloud or
distance matrix is.

An ultrametric space forces every triangle to be either equilateral or
isosceles with the two *largest* sides equal. The measures here quantify
how close sampled triplets come to that:

* ``triangle_ultrametricity`` -- fraction of sampled triplets whose two
  largest angles agree within a tolerance (the primary measure).
* ``lerman_h`` -- rank-based score: in a perfect ultrametric the two
  largest distance ranks of every triplet are adjacent.
* ``rammal_degree`` -- normalized discrepancy between the distances and
  their subdominant ultrametric (single-linkage cophenetic distances).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, pi

import numpy as np

from ._validation import InputValidationError, as_cloud, as_condensed
from .geometry import angles_from_sides, condensed_index, pairwise_distances, triplet_sides
from .hierarchy import cophenetic, single_linkage

_SAMPLE_BATCH = 2048


@dataclass(frozen=True)
class UmConfig:
    """Triplet-sampling configuration shared by the triplet-based measures.

    ``angle_tolerance`` is the "approximately equal" slack for angles, in
    radians (default 0.0349, i.e. 2 degrees). Sampling is uniform without
    replacement over distinct triplets; when the pool holds at most
    ``exhaustive_threshold`` triplets (or no more than ``sample_size``),
    every triplet is examined instead.
    """

    sample_size: int = 300
    angle_tolerance: float = 0.0349
    seed: int = 0
    exhaustive_threshold: int = 1000

    def __post_init__(self):
        if self.sample_size < 1:
            raise InputValidationError("sample_size must be >= 1")
        if not 0.0 < self.angle_tolerance < pi / 3:
            raise InputValidationError("angle_tolerance must lie in (0, pi/3)")
        if self.exhaustive_threshold < 0:
            raise InputValidationError("exhaustive_threshold must be >= 0")


@dataclass(frozen=True)
class UltrametricityReport:
    """Triplet classification fractions from the triangle measure.

    ``um_fraction`` is exactly ``isosceles_fraction + equilateral_fraction``;
    all fractions are over non-degenerate examined triplets.
    """

    isosceles_fraction: float
    equilateral_fraction: float
    um_fraction: float
    triplets_examined: int
    degenerate_skipped: int


@dataclass(frozen=True)
class LermanReport:
    h_classifiability: float
    triplets_examined: int


@dataclass(frozen=True)
class RammalReport:
    degree: float
    total_discrepancy: float


def _triplet_plan(n: int, cfg: UmConfig):
    """Batches of distinct triplets plus the examination quota.

    Returns (batch iterator, quota). Exhaustive enumeration (lexicographic
    order, quota = all triplets) when the pool is small enough; otherwise
    seeded rejection sampling with a seen-set, which keeps the draw uniform
    without replacement, with quota = sample_size.
    """
    total = comb(n, 3)
    if total <= max(cfg.exhaustive_threshold, cfg.sample_size):
        def exhaustive():
            it = itertools.combinations(range(n), 3)
            while True:
                batch = list(itertools.islice(it, _SAMPLE_BATCH))
                if not batch:
                    return
                yield np.array(batch, dtype=np.int64)

        return exhaustive(), total

    def sampled():
        rng = np.random.default_rng(cfg.seed)
        seen: set[tuple[int, int, int]] = set()
        while len(seen) < total:
            draw = rng.integers(0, n, size=(_SAMPLE_BATCH, 3))
            draw.sort(axis=1)
            fresh = []
            for row in draw:
                if row[0] == row[1] or row[1] == row[2]:
                    continue
                key = (int(row[0]), int(row[1]), int(row[2]))
                if key in seen:
                    continue
                seen.add(key)
                fresh.append(key)
            if fresh:
                yield np.array(fresh, dtype=np.int64)

    return sampled(), cfg.sample_size


def triangle_ultrametricity(cloud, cfg: UmConfig = UmConfig()) -> UltrametricityReport:
    """Triangle-invariant ultrametricity of a point cloud.

    For each sampled triplet the three angles are computed from the pairwise
    Euclidean distances. With angles sorted ascending (alpha, beta, gamma),
    the triplet respects ultrametricity when gamma - beta <= angle_tolerance;
    it counts as equilateral when additionally gamma - alpha <= tolerance,
    otherwise as isosceles with small base. Degenerate triplets are skipped
    (and resampled, when sampling) and reported in ``degenerate_skipped``.

    Deterministic given (cloud, cfg); the triplet sequence is fixed by the
    seed before any evaluation, so results do not depend on scheduling.
    """
    cloud = as_cloud(cloud, min_points=3)
    d = pairwise_distances(cloud)
    return triangle_ultrametricity_from_distances(d, cfg)


def triangle_ultrametricity_from_distances(d, cfg: UmConfig = UmConfig()) -> UltrametricityReport:
    """Same as :func:`triangle_ultrametricity` but from condensed distances."""
    d, n = as_condensed(d, min_points=3)
    tol = cfg.angle_tolerance
    batches, quota = _triplet_plan(n, cfg)
    n_iso = 0
    n_eq = 0
    examined = 0
    degenerate = 0
    for batch in batches:
        angles, valid = angles_from_sides(triplet_sides(d, n, batch))
        need = quota - examined
        cum = np.cumsum(valid)
        if cum.size and cum[-1] >= need:
            # keep rows up to and including the one that fills the quota
            stop = int(np.searchsorted(cum, need)) + 1
            angles, valid = angles[:stop], valid[:stop]
        degenerate += int((~valid).sum())
        good = angles[valid]
        examined += good.shape[0]
        if good.size:
            um = good[:, 2] - good[:, 1] <= tol
            eq = um & (good[:, 2] - good[:, 0] <= tol)
            n_eq += int(eq.sum())
            n_iso += int((um & ~eq).sum())
        if examined >= quota:
            break
    if examined == 0:
        raise InputValidationError("no non-degenerate triplets could be sampled")
    iso = n_iso / examined
    eq = n_eq / examined
    return UltrametricityReport(
        isosceles_fraction=iso,
        equilateral_fraction=eq,
        um_fraction=iso + eq,
        triplets_examined=examined,
        degenerate_skipped=degenerate,
    )


def lerman_h(d, cfg: UmConfig = UmConfig()) -> LermanReport:
    """Rank-based H-classifiability of a condensed distance matrix.

    All pairwise distances are ranked (1 = smallest; exact ties broken by
    canonical pair order, which is the condensed layout order). For a
    triplet with ranks r1 <= r2 <= r3 the gap is (r3 - r2)/(P - 1) with
    P = n(n-1)/2, except that exactly equal top-two distances contribute a
    gap of 0 (an ultrametric matrix must score 1). The score is
    1 - mean(gap) over examined triplets, so 1 means perfectly ultrametric.
    Invariant under any strictly increasing transform of the distances.
    """
    d, n = as_condensed(d, min_points=3)
    num_pairs = d.size
    # stable sort <=> ties resolved by condensed (lexicographic pair) index
    order = np.argsort(d, kind="stable")
    ranks = np.empty(num_pairs, dtype=np.int64)
    ranks[order] = np.arange(1, num_pairs + 1)
    denom = num_pairs - 1
    batches, quota = _triplet_plan(n, cfg)
    gap_sum = 0.0
    examined = 0
    for batch in batches:
        take = min(quota - examined, batch.shape[0])
        batch = batch[:take]
        i, j, k = batch[:, 0], batch[:, 1], batch[:, 2]
        idx = np.column_stack(
            [
                condensed_index(n, i, j),
                condensed_index(n, i, k),
                condensed_index(n, j, k),
            ]
        )
        r = ranks[idx]
        v = d[idx]
        rank_order = np.argsort(r, axis=1)
        r_sorted = np.take_along_axis(r, rank_order, axis=1)
        v_sorted = np.take_along_axis(v, rank_order, axis=1)
        if denom > 0:
            gaps = (r_sorted[:, 2] - r_sorted[:, 1]) / denom
            gaps[v_sorted[:, 2] == v_sorted[:, 1]] = 0.0
        else:
            gaps = np.zeros(take)
        gap_sum += float(gaps.sum())
        examined += take
        if examined >= quota:
            break
    return LermanReport(h_classifiability=1.0 - gap_sum / examined, triplets_examined=examined)


def rammal_degree(d) -> RammalReport:
    """Subdominant-discrepancy ultrametricity of a condensed distance matrix.

    The subdominant ultrametric u (the largest ultrametric below d) is the
    cophenetic matrix of single-linkage clustering. The degree is
    1 - sum(d - u)/sum(d), which is 1 exactly when d is already ultrametric.
    An all-zero matrix is trivially ultrametric (degree 1). Invariant under
    scaling all distances by any positive constant.
    """
    d, _ = as_condensed(d, min_points=2)
    u = cophenetic(single_linkage(d))
    discrepancy = float(np.sum(d - u))
    total = float(d.sum())
    if total <= 0:
        return RammalReport(degree=1.0, total_discrepancy=0.0)
    return RammalReport(degree=1.0 - discrepancy / total, total_discrepancy=discrepancy)
