"""Core geometry: pairwise Euclidean distances, triangle angles and the
spectral diffuseness diagnostic for point clouds.

Distances are kept in condensed (upper-triangular, row-major) form
throughout, matching scipy's layout, so anything produced here can be fed
straight into scipy.cluster / scipy.spatial as well.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ._validation import (
    DegenerateTriangleError,
    InputValidationError,
    as_cloud,
    as_condensed,
)

# A triplet is rejected as degenerate when a side is shorter than this or
# when a law-of-cosines cosine reaches +-1 (coincident or collinear points:
# every angle must stay strictly inside (0, pi)).
SIDE_EPS = 1e-12
ANGLE_SUM_TOL = 1e-9


class TriangleAngles(NamedTuple):
    """Angles of a triangle in radians, ascending (alpha <= beta <= gamma)."""

    alpha: float
    beta: float
    gamma: float


class SpectralDiffuseness(NamedTuple):
    """Covariance spectrum of a cloud and its concentration ratio.

    ``coefficient`` is sum(lambda^2) / (sum(lambda))^2. It lies in
    [1/rank, 1]; it tends to 0 for clouds whose variance is spread evenly
    over many directions and equals 1 only for a rank-1 (line-like) cloud.
    """

    eigenvalues: np.ndarray
    coefficient: float


def pairwise_distances(cloud) -> np.ndarray:
    """Condensed Euclidean distances between all rows of ``cloud``.

    Entry for pair (i, j), i < j, sits at index n*i - i*(i+1)/2 + j - i - 1.
    Each pair is computed independently in a fixed coordinate order, so the
    result does not depend on thread count or evaluation order.
    """
    cloud = as_cloud(cloud)
    return pdist(cloud, metric="euclidean")


def condensed_size(n: int) -> int:
    return n * (n - 1) // 2


def condensed_index(n: int, i, j):
    """Condensed-vector index of pair (i, j) with i < j (vectorized)."""
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    if np.any(i >= j) or np.any(i < 0) or np.any(j >= n):
        raise InputValidationError("condensed_index requires 0 <= i < j < n")
    return i * n - i * (i + 1) // 2 + j - i - 1


def triplet_sides(d: np.ndarray, n: int, triplets) -> np.ndarray:
    """Side lengths (d_ij, d_ik, d_jk) for each triplet row (i < j < k)."""
    t = np.asarray(triplets, dtype=np.int64).reshape(-1, 3)
    i, j, k = t[:, 0], t[:, 1], t[:, 2]
    return np.column_stack(
        [
            d[condensed_index(n, i, j)],
            d[condensed_index(n, i, k)],
            d[condensed_index(n, j, k)],
        ]
    )


def angles_from_sides(sides) -> tuple[np.ndarray, np.ndarray]:
    """Triangle angles from side lengths, vectorized.

    Parameters
    ----------
    sides : (T, 3) array of side lengths.

    Returns
    -------
    angles : (T, 3) array, each row sorted ascending (radians).
    valid : (T,) bool mask; False rows are degenerate (tiny side, a cosine
        at or beyond +-1, or an angle sum too far from pi) and their angle
        values are meaningless.
    """
    s = np.asarray(sides, dtype=np.float64).reshape(-1, 3)
    valid = np.all(s > SIDE_EPS, axis=1)
    s_safe = np.where(s > SIDE_EPS, s, 1.0)
    sq = s_safe**2
    cos = np.empty_like(s_safe)
    # angle opposite side 0 uses sides 1 and 2, and so on
    cos[:, 0] = (sq[:, 1] + sq[:, 2] - sq[:, 0]) / (2.0 * s_safe[:, 1] * s_safe[:, 2])
    cos[:, 1] = (sq[:, 0] + sq[:, 2] - sq[:, 1]) / (2.0 * s_safe[:, 0] * s_safe[:, 2])
    cos[:, 2] = (sq[:, 0] + sq[:, 1] - sq[:, 2]) / (2.0 * s_safe[:, 0] * s_safe[:, 1])
    valid &= np.all(np.abs(cos) < 1.0, axis=1)
    angles = np.arccos(np.clip(cos, -1.0, 1.0))
    angles.sort(axis=1)
    valid &= np.abs(angles.sum(axis=1) - np.pi) <= ANGLE_SUM_TOL
    return angles, valid


def triangle_angles(a, b, c) -> TriangleAngles:
    """Angles of the triangle spanned by three points, ascending.

    Angles are computed from the three side lengths by the law of cosines,
    with cosines clamped to [-1, 1]. Raises DegenerateTriangleError for
    coincident or (numerically) collinear triplets; callers sampling random
    triplets are expected to resample.
    """
    pts = [np.asarray(p, dtype=np.float64).ravel() for p in (a, b, c)]
    if not all(p.shape == pts[0].shape for p in pts):
        raise InputValidationError("points must share one dimensionality")
    if not all(np.all(np.isfinite(p)) for p in pts):
        raise InputValidationError("points contain non-finite coordinates")
    sides = [
        float(np.linalg.norm(pts[0] - pts[1])),
        float(np.linalg.norm(pts[0] - pts[2])),
        float(np.linalg.norm(pts[1] - pts[2])),
    ]
    angles, valid = angles_from_sides(np.array([sides]))
    if not valid[0]:
        raise DegenerateTriangleError(f"degenerate triplet, sides {sides}")
    return TriangleAngles(*angles[0])


def diffuseness_coefficient(eigenvalues) -> float:
    """sum(lambda^2) / (sum(lambda))^2 for a non-negative spectrum."""
    lam = np.asarray(eigenvalues, dtype=np.float64).ravel()
    if lam.size == 0 or np.any(lam < 0):
        raise InputValidationError("spectrum must be non-empty and non-negative")
    total = lam.sum()
    if total <= 0:
        raise InputValidationError("spectrum has zero total variance")
    return float(np.sum(lam**2) / total**2)


def diffuseness(cloud) -> SpectralDiffuseness:
    """Covariance spectrum of a cloud and its diffuseness coefficient.

    The nonzero spectrum is recovered from the n x n Gram matrix of the
    centered rows (same nonzero eigenvalues as the m x m covariance but
    feasible for very large m); rank is at most min(n - 1, m).
    """
    cloud = as_cloud(cloud, min_points=2)
    n = cloud.shape[0]
    centered = cloud - cloud.mean(axis=0)
    gram = centered @ centered.T / (n - 1)
    lam = np.linalg.eigvalsh(gram)[::-1]
    lam = np.clip(lam, 0.0, None)
    if lam[0] <= 0:
        raise InputValidationError("cloud has zero variance in every direction")
    lam = lam[lam > 1e-12 * lam[0]]
    return SpectralDiffuseness(eigenvalues=lam, coefficient=diffuseness_coefficient(lam))


def squareform_distances(d) -> np.ndarray:
    """Expand a condensed distance vector to a full symmetric matrix."""
    d, _ = as_condensed(d)
    return squareform(d, checks=False)
