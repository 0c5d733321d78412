"""Input validation helpers shared across the package."""

from __future__ import annotations

import math

import numpy as np


class InputValidationError(ValueError):
    """Raised when user-supplied data or parameters are unusable."""


class DegenerateTriangleError(ValueError):
    """Raised when a triplet of points is too close to collinear/coincident
    for its angles to be computed reliably."""


def as_cloud(data, *, min_points: int = 1) -> np.ndarray:
    """Coerce to an (n, m) float64 point-cloud array and validate it.

    Rows are points, columns coordinates. Row order is meaningful (it is the
    sequence identity used by contiguity-constrained clustering) and is never
    altered here.
    """
    cloud = np.asarray(data, dtype=np.float64)
    if cloud.ndim == 1:
        cloud = cloud.reshape(-1, 1)
    if cloud.ndim != 2:
        raise InputValidationError(f"point cloud must be 2-D, got shape {cloud.shape}")
    n, m = cloud.shape
    if n < min_points or m < 1:
        raise InputValidationError(
            f"point cloud needs at least {min_points} point(s) and 1 dimension, got {n}x{m}"
        )
    if not np.all(np.isfinite(cloud)):
        raise InputValidationError("point cloud contains non-finite coordinates")
    return cloud


def as_condensed(values, *, min_points: int = 2) -> tuple[np.ndarray, int]:
    """Validate a condensed pairwise-distance vector; return (values, n).

    The vector holds the n(n-1)/2 upper-triangular entries in row-major
    (lexicographic pair) order, the same layout scipy uses.
    """
    d = np.asarray(values, dtype=np.float64).ravel()
    n = num_points(d.size)
    if n < min_points:
        raise InputValidationError(f"distance matrix needs >= {min_points} points, got {n}")
    if not np.all(np.isfinite(d)):
        raise InputValidationError("distance matrix contains non-finite values")
    if d.size and d.min() < 0:
        raise InputValidationError("distance matrix contains negative values")
    return d, n


def num_points(num_pairs: int) -> int:
    """Number of points n such that n(n-1)/2 == num_pairs."""
    n = int(round((1 + math.isqrt(1 + 8 * num_pairs)) / 2))
    if n * (n - 1) // 2 != num_pairs:
        raise InputValidationError(
            f"{num_pairs} values is not a valid condensed matrix length"
        )
    return n


def as_signal(values, *, min_len: int = 1) -> np.ndarray:
    """Coerce to a finite 1-D float64 sequence."""
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size < min_len:
        raise InputValidationError(f"signal needs at least {min_len} values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InputValidationError("signal contains non-finite values")
    return x


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if not isinstance(value, (int, np.integer)) or value < minimum:
        raise InputValidationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
