"""Scikit-learn-compatible estimator wrappers around the functional core,
so the algorithms compose with sklearn pipelines, grid search and clones:
``get_params``/``set_params`` come from BaseEstimator, clustering exposes
``labels_`` via ClusterMixin, and all inputs go through the package's own
validation helpers.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.exceptions import NotFittedError

from ._validation import InputValidationError, as_cloud, as_condensed, as_signal
from .geometry import pairwise_distances
from .hierarchy import complete_linkage, constrained_complete_linkage, cut, single_linkage
from .histpeaks import fit_gmm_1d, select_k_bic
from .pcoa import pcoa
from .pipeline import SegmentConfig, segment_signal

_LINKAGES = {
    "single": single_linkage,
    "complete": complete_linkage,
    "constrained-complete": constrained_complete_linkage,
}


def _distances_from(X, metric: str) -> np.ndarray:
    if metric == "precomputed":
        x = np.asarray(X, dtype=np.float64)
        if x.ndim == 2 and x.shape[0] == x.shape[1]:
            from scipy.spatial.distance import squareform

            x = squareform(x, checks=False)
        return as_condensed(x)[0]
    if metric == "euclidean":
        return pairwise_distances(as_cloud(X))
    raise InputValidationError(f"metric must be 'euclidean' or 'precomputed', got {metric!r}")


class PrincipalCoordinates(BaseEstimator):
    """Classical MDS / principal coordinates analysis estimator.

    Parameters
    ----------
    n_axes : int or None
        Axes to emit (None keeps every positive-eigenvalue axis).
    metric : 'euclidean' or 'precomputed'
        Whether ``X`` is a point cloud or a distance matrix (condensed or
        square).

    Attributes: ``embedding_``, ``eigenvalues_``, ``variance_fraction_``.
    """

    def __init__(self, n_axes: int | None = 2, metric: str = "euclidean"):
        self.n_axes = n_axes
        self.metric = metric

    def fit(self, X, y=None):
        result = pcoa(_distances_from(X, self.metric), self.n_axes)
        self.embedding_ = result.coordinates
        self.eigenvalues_ = result.eigenvalues
        self.variance_fraction_ = result.variance_fraction
        self.result_ = result
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).embedding_


class AgglomerativeHierarchy(ClusterMixin, BaseEstimator):
    """Agglomerative clustering with deterministic tie-breaking.

    ``linkage`` is 'single', 'complete' or 'constrained-complete' (the last
    merges only sequence-adjacent clusters, so row order matters and the
    labels form contiguous segments).

    Attributes: ``labels_``, ``dendrogram_``.
    """

    def __init__(self, n_clusters: int = 2, linkage: str = "single", metric: str = "euclidean"):
        self.n_clusters = n_clusters
        self.linkage = linkage
        self.metric = metric

    def fit(self, X, y=None):
        if self.linkage not in _LINKAGES:
            raise InputValidationError(f"unknown linkage {self.linkage!r}")
        d = _distances_from(X, self.metric)
        self.dendrogram_ = _LINKAGES[self.linkage](d)
        self.labels_ = cut(self.dendrogram_, self.n_clusters)
        return self


class GaussianMixture1D(BaseEstimator):
    """1-D Gaussian mixture fitted by EM, with BIC model selection.

    With ``n_components`` set, fits exactly that mixture; with
    ``n_components=None``, tries 1..k_max and keeps the BIC maximizer.

    Attributes: ``weights_``, ``means_``, ``sds_``, ``loglik_``, ``bic_``,
    ``n_components_``, ``mixtures_`` (per-k fits when selecting).
    """

    def __init__(
        self,
        n_components: int | None = None,
        k_max: int = 6,
        random_state: int = 0,
        max_iter: int = 500,
        tol: float = 1e-8,
    ):
        self.n_components = n_components
        self.k_max = k_max
        self.random_state = random_state
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        x = np.asarray(X, dtype=np.float64).ravel()
        if self.n_components is None:
            best_k, fits = select_k_bic(x, range(1, self.k_max + 1), seed=self.random_state)
            self.mixtures_ = fits
            mixture = fits[best_k]
        else:
            mixture = fit_gmm_1d(
                x, self.n_components, seed=self.random_state, max_iter=self.max_iter, tol=self.tol
            )
            self.mixtures_ = {self.n_components: mixture}
        self.mixture_ = mixture
        self.n_components_ = mixture.k
        self.weights_ = mixture.weights
        self.means_ = mixture.means
        self.sds_ = mixture.sds
        self.loglik_ = mixture.loglik
        self.bic_ = mixture.bic
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "mixture_"):
            raise NotFittedError("fit the mixture before predicting")
        return self.mixture_.assign(np.asarray(X, dtype=np.float64).ravel())

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict(X)


class SignalSegmenter(BaseEstimator):
    """End-to-end contiguous segmentation of a 1-D signal.

    Wraps the histogram -> mixture/BIC -> principal coordinates ->
    constrained complete-link pipeline. ``fit`` accepts the raw signal;
    window labels land in ``labels_`` and signal-index segment starts in
    ``signal_boundaries_``. With ``stride=None`` windows do not overlap
    (stride = window length).
    """

    def __init__(
        self,
        window_len: int,
        stride: int | None = None,
        bins: int = 100,
        k_max: int = 6,
        n_axes: int | None = 2,
        random_state: int = 0,
        trim: int = 0,
    ):
        self.window_len = window_len
        self.stride = stride
        self.bins = bins
        self.k_max = k_max
        self.n_axes = n_axes
        self.random_state = random_state
        self.trim = trim

    def fit(self, X, y=None):
        signal = as_signal(X)
        config = SegmentConfig(
            window_len=self.window_len,
            stride=self.stride if self.stride is not None else self.window_len,
            bins=self.bins,
            k_max=self.k_max,
            n_axes=self.n_axes,
            seed=self.random_state,
            trim=self.trim,
        )
        self.run_ = segment_signal(signal, config)
        self.labels_ = self.run_.labels
        self.n_segments_ = self.run_.n_segments
        self.signal_boundaries_ = self.run_.signal_boundaries
        return self

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).labels_
