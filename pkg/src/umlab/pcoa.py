"""Principal coordinates analysis (classical metric multidimensional
scaling): embed a distance matrix into Euclidean coordinates via double
centering and eigendecomposition, with per-axis variance fractions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import InputValidationError, as_condensed
from .geometry import squareform_distances

# Eigenvalues below this fraction of the largest are treated as zero.
EIGENVALUE_RTOL = 1e-9


@dataclass(frozen=True)
class PcoaResult:
    """Principal-coordinate embedding of a distance matrix.

    ``coordinates`` is n x p with axes ordered by descending eigenvalue;
    only positive-eigenvalue axes are embedded. ``eigenvalues`` is the full
    descending spectrum of the double-centered matrix, including any
    negative values (which flag a non-Euclidean input and are never
    embedded). ``variance_fraction`` is lambda_i / sum(positive lambda) for
    each emitted axis.
    """

    coordinates: np.ndarray
    eigenvalues: np.ndarray
    variance_fraction: np.ndarray

    @property
    def n_axes(self) -> int:
        return self.coordinates.shape[1]


def pcoa(d, n_axes: int | None = None) -> PcoaResult:
    """Classical MDS of a condensed distance matrix.

    Eigendecomposes B = -1/2 * J * D^2 * J (J the centering operator) and
    scales the eigenvectors of positive eigenvalues by sqrt(lambda). At most
    ``n_axes`` axes are returned (all positive axes when None). Axis signs
    are canonicalized by making each axis's largest-magnitude coordinate
    positive, so results are deterministic. An all-zero matrix yields zero
    axes (an empty embedding), not an error.
    """
    d, n = as_condensed(d)
    if n_axes is not None and n_axes < 1:
        raise InputValidationError("n_axes must be >= 1 (or None for all)")
    sq = squareform_distances(d) ** 2
    centered = sq - sq.mean(axis=0, keepdims=True) - sq.mean(axis=1, keepdims=True) + sq.mean()
    b = -0.5 * centered
    eigenvalues, eigenvectors = np.linalg.eigh(b)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]
    if eigenvalues.size and eigenvalues[0] > 0:
        positive = eigenvalues > EIGENVALUE_RTOL * eigenvalues[0]
    else:
        positive = np.zeros(n, dtype=bool)
    keep = int(positive.sum())
    if n_axes is not None:
        keep = min(keep, n_axes)
    lam = eigenvalues[:keep]
    coords = eigenvectors[:, :keep] * np.sqrt(lam)[None, :]
    for axis in range(keep):
        col = coords[:, axis]
        if col[np.argmax(np.abs(col))] < 0:
            coords[:, axis] = -col
    positive_total = eigenvalues[positive].sum() if keep else 0.0
    fractions = lam / positive_total if keep else np.zeros(0)
    return PcoaResult(
        coordinates=coords, eigenvalues=eigenvalues, variance_fraction=fractions
    )
