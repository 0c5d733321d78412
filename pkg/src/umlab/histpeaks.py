"""Distance-histogram tools: histogram construction, peak detection, the
cluster-count bound (k clusters produce at most k + k(k-1)/2 distance
peaks), and 1-D Gaussian mixture fitting with BIC model selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks
from scipy.special import logsumexp

from ._validation import InputValidationError, check_positive_int

DEFAULT_BINS = 100
DEFAULT_SMOOTHING_WINDOW = 5
DEFAULT_MIN_PROMINENCE = 0.02
# Width given to a zero-range histogram so that constant data still bins.
DEGENERATE_HALF_WIDTH = 0.5
# Floor applied to component standard deviations, as a fraction of range.
SD_FLOOR_FRACTION = 1e-6
EM_RETRIES = 5


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram; bins are right-closed, i.e. a value equal to
    an interior edge belongs to the bin below it."""

    bin_edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)
        if edges.ndim != 1 or counts.ndim != 1 or counts.size != edges.size - 1:
            raise InputValidationError("counts length must be len(bin_edges) - 1")
        if np.any(np.diff(edges) <= 0):
            raise InputValidationError("bin edges must be strictly ascending")
        if counts.size and counts.min() < 0:
            raise InputValidationError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


@dataclass(frozen=True)
class PeakSet:
    """Detected histogram peaks: ascending bin indices that are strict
    local maxima of the smoothed counts with relative prominence at least
    ``min_prominence`` (a fraction of the smoothed maximum)."""

    peak_bins: np.ndarray
    smoothing_window: int
    min_prominence: float

    def __post_init__(self):
        object.__setattr__(self, "peak_bins", np.asarray(self.peak_bins, dtype=np.int64))

    @property
    def count(self) -> int:
        return int(self.peak_bins.size)


@dataclass(frozen=True)
class ClusterCountInference:
    """Smallest cluster count consistent with an observed peak count under
    the parsimony rule that the first ``min_k`` peaks are intra-cluster."""

    n_peaks: int
    min_k: int


@dataclass(frozen=True)
class SignalClusterCount:
    """Cluster count for the underlying data implied by distance-histogram
    peaks; ``slack`` counts how many of the possible peaks are unused
    (approximately co-located peaks)."""

    n_clusters: int
    slack: int


@dataclass(frozen=True)
class Mixture1D:
    """k-component Gaussian mixture over scalars, fitted by EM.

    Components are sorted by mean. ``bic`` is 2*loglik - (3k-1)*ln(N),
    larger is better. ``loglik_trace`` records the (non-decreasing)
    log-likelihood after every EM iteration.
    """

    k: int
    weights: np.ndarray
    means: np.ndarray
    sds: np.ndarray
    loglik: float
    bic: float
    loglik_trace: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        for name in ("weights", "means", "sds"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            object.__setattr__(self, name, arr)
            if arr.shape != (self.k,):
                raise InputValidationError(f"{name} must have shape ({self.k},)")
        object.__setattr__(self, "loglik_trace", np.asarray(self.loglik_trace, dtype=np.float64))
        if abs(self.weights.sum() - 1.0) > 1e-9 or np.any(self.weights <= 0):
            raise InputValidationError("weights must be positive and sum to 1")
        if np.any(self.sds <= 0):
            raise InputValidationError("sds must be positive")

    def log_density(self, values) -> np.ndarray:
        x = np.asarray(values, dtype=np.float64).ravel()
        return logsumexp(self._log_joint(x), axis=0)

    def responsibilities(self, values) -> np.ndarray:
        """(k, N) posterior component probabilities for each value."""
        lj = self._log_joint(np.asarray(values, dtype=np.float64).ravel())
        return np.exp(lj - logsumexp(lj, axis=0, keepdims=True))

    def assign(self, values) -> np.ndarray:
        """Maximum-responsibility component index per value."""
        return np.argmax(self._log_joint(np.asarray(values, dtype=np.float64).ravel()), axis=0)

    def _log_joint(self, x: np.ndarray) -> np.ndarray:
        mu = self.means[:, None]
        sd = self.sds[:, None]
        return (
            np.log(self.weights)[:, None]
            - 0.5 * ((x[None, :] - mu) / sd) ** 2
            - np.log(sd)
            - 0.5 * np.log(2 * np.pi)
        )


def build_histogram(values, bins: int = DEFAULT_BINS) -> Histogram:
    """Equal-width histogram spanning [min(values), max(values)].

    Interior bins are right-closed (a value on an edge falls in the lower
    bin) and every input value lands in exactly one bin, so mass is
    conserved. A zero range is widened by +-0.5 around the common value.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise InputValidationError("cannot build a histogram of no values")
    if not np.all(np.isfinite(x)):
        raise InputValidationError("histogram input contains non-finite values")
    check_positive_int(bins, "bins", minimum=2)
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        lo -= DEGENERATE_HALF_WIDTH
        hi += DEGENERATE_HALF_WIDTH
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.clip(np.searchsorted(edges, x, side="left") - 1, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return Histogram(bin_edges=edges, counts=counts)


def detect_peaks(
    hist: Histogram,
    smoothing_window: int = DEFAULT_SMOOTHING_WINDOW,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
) -> PeakSet:
    """Peaks of the moving-average-smoothed counts.

    ``min_prominence`` is relative to the maximum smoothed count, so the
    result is invariant under rescaling all counts by a positive constant.
    """
    if not isinstance(hist, Histogram):
        raise InputValidationError("hist must be a Histogram")
    smoothing_window = check_positive_int(smoothing_window, "smoothing_window")
    if smoothing_window % 2 == 0:
        raise InputValidationError("smoothing_window must be odd")
    if not 0 <= min_prominence:
        raise InputValidationError("min_prominence must be >= 0")
    smoothed = np.convolve(
        hist.counts.astype(np.float64), np.ones(smoothing_window) / smoothing_window, mode="same"
    )
    top = smoothed.max()
    if top <= 0:
        peaks = np.zeros(0, dtype=np.int64)
    else:
        # bins beyond the histogram range are empty, so a mode touching the
        # range boundary is still a local maximum; pad so it is detectable
        padded = np.pad(smoothed, 1)
        peaks, _ = find_peaks(padded, prominence=min_prominence * top)
        peaks -= 1
    return PeakSet(
        peak_bins=peaks, smoothing_window=smoothing_window, min_prominence=min_prominence
    )


def max_peaks(k: int) -> int:
    """Largest distance-histogram peak count k clusters can produce:
    k intra-cluster peaks plus k(k-1)/2 inter-cluster peaks."""
    check_positive_int(k, "k")
    return k + k * (k - 1) // 2


def infer_min_clusters(n_peaks: int) -> ClusterCountInference:
    """Least k whose first-k-peaks-are-intra reading explains ``n_peaks``:
    the smallest k with n_peaks - k <= k(k-1)/2."""
    check_positive_int(n_peaks, "n_peaks")
    k = 1
    while n_peaks - k > k * (k - 1) // 2:
        k += 1
    return ClusterCountInference(n_peaks=n_peaks, min_k=k)


def peaks_to_signal_clusters(best_k_peaks: int) -> SignalClusterCount:
    """Least cluster count c whose peak capacity c + c(c-1)/2 covers an
    observed (e.g. BIC-selected) number of histogram peaks."""
    check_positive_int(best_k_peaks, "best_k_peaks")
    c = 1
    while max_peaks(c) < best_k_peaks:
        c += 1
    return SignalClusterCount(n_clusters=c, slack=max_peaks(c) - best_k_peaks)


def _em_once(x: np.ndarray, k: int, means0: np.ndarray, max_iter: int, tol: float) -> Mixture1D | None:
    n = x.size
    sd0 = max(float(x.std()), SD_FLOOR_FRACTION)
    floor = SD_FLOOR_FRACTION * float(x.max() - x.min())
    weights = np.full(k, 1.0 / k)
    means = means0.astype(np.float64).copy()
    sds = np.full(k, sd0)
    prev = -np.inf
    trace = []
    for _ in range(max_iter):
        log_joint = (
            np.log(weights)[:, None]
            - 0.5 * ((x[None, :] - means[:, None]) / sds[:, None]) ** 2
            - np.log(sds)[:, None]
            - 0.5 * np.log(2 * np.pi)
        )
        log_norm = logsumexp(log_joint, axis=0, keepdims=True)
        loglik = float(log_norm.sum())
        if not np.isfinite(loglik):
            return None
        if loglik < prev - 1e-9 * max(1.0, abs(prev)):
            raise RuntimeError("EM log-likelihood decreased")
        trace.append(loglik)
        resp = np.exp(log_joint - log_norm)
        mass = resp.sum(axis=1)
        if np.any(mass < 1e-12):
            return None
        weights = mass / n
        means = resp @ x / mass
        variances = np.maximum(resp @ (x**2) / mass - means**2, 0.0)
        sds = np.maximum(np.sqrt(variances), floor)
        if loglik - prev < tol:
            prev = loglik
            break
        prev = loglik
    if np.any(~np.isfinite(means)) or np.any(~np.isfinite(sds)) or np.any(sds <= 0):
        return None
    order = np.argsort(means)
    bic = 2.0 * prev - (3 * k - 1) * np.log(n)
    return Mixture1D(
        k=k,
        weights=weights[order] / weights.sum(),
        means=means[order],
        sds=sds[order],
        loglik=prev,
        bic=float(bic),
        loglik_trace=np.asarray(trace),
    )


def fit_gmm_1d(values, k: int, seed=0, max_iter: int = 500, tol: float = 1e-8) -> Mixture1D:
    """Fit a k-component 1-D Gaussian mixture by EM.

    Initialization places the means at the (i + 1/2)/k quantiles with equal
    weights and a shared sample-sd scale; the log-likelihood is checked to
    be non-decreasing on every iteration. Collapsed runs (vanishing
    component mass or non-finite parameters) are retried with jittered
    initial means, up to EM_RETRIES times.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    check_positive_int(k, "k")
    if x.size < 3 * k:
        raise InputValidationError(f"need at least {3 * k} values to fit k={k}, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InputValidationError("values contain non-finite entries")
    if float(x.max() - x.min()) == 0.0:
        raise InputValidationError("values are all identical; mixture fit is degenerate")
    max_iter = check_positive_int(max_iter, "max_iter")
    quantile_means = np.quantile(x, (np.arange(k) + 0.5) / k)
    rng = np.random.default_rng(seed)
    scale = float(x.std()) or 1.0
    for attempt in range(EM_RETRIES + 1):
        means0 = quantile_means if attempt == 0 else quantile_means + rng.normal(
            0.0, 0.1 * scale, size=k
        )
        fitted = _em_once(x, k, means0, max_iter, tol)
        if fitted is not None:
            return fitted
    raise InputValidationError(
        f"EM collapsed for k={k} after {EM_RETRIES} retries; data likely has fewer modes"
    )


def select_k_bic(values, k_range, seed=0) -> tuple[int, dict[int, Mixture1D]]:
    """Fit mixtures for every k in ``k_range`` and pick the BIC maximizer.

    Returns (best_k, {k: Mixture1D}); ties go to the smaller k. The full
    per-k trace is returned for plotting BIC curves.
    """
    ks = sorted({int(k) for k in k_range})
    if not ks:
        raise InputValidationError("k_range must be non-empty")
    fits: dict[int, Mixture1D] = {}
    for k in ks:
        fits[k] = fit_gmm_1d(values, k, seed=seed)
    best_k = max(ks, key=lambda k: (fits[k].bic, -k))
    return best_k, fits
