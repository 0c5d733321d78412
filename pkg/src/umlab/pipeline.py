"""End-to-end orchestration: the four-step signal segmentation procedure
(distance histogram -> mixture/BIC peak count -> principal coordinates ->
contiguity-constrained complete-link clustering) and the reproduction
harness for the simulation tables and peak-count figures.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._validation import InputValidationError, as_signal, check_positive_int
from .generators import (
    ARMA_MODEL_A,
    ARMA_MODEL_B,
    ArmaSpec,
    GaussianClusterSpec,
    embed_signal,
    make_gaussian_clusters,
    make_hypercube_cloud,
    make_uniform_cloud,
    make_arma_signal,
    window_starts,
)
from .geometry import pairwise_distances
from .hierarchy import (
    Dendrogram,
    Segmentation,
    constrained_complete_linkage,
    cut,
    cut_height,
    cut_segments,
)
from .histpeaks import (
    DEFAULT_BINS,
    DEFAULT_MIN_PROMINENCE,
    DEFAULT_SMOOTHING_WINDOW,
    Histogram,
    Mixture1D,
    PeakSet,
    build_histogram,
    detect_peaks,
    peaks_to_signal_clusters,
    select_k_bic,
)
from .pcoa import PcoaResult, pcoa
from .ultrametricity import UmConfig, triangle_ultrametricity_from_distances

TABLE_DIMENSIONS = {
    1: (20, 200, 2000, 20000),
    2: (20, 200, 2000, 20000),
    3: (20, 200, 2000, 20000, 200000),
    4: (2000, 20000, 200000),
}

TABLE_GENERATORS = {
    1: ("uniform", "hypercube", "gaussian"),
    2: ("two-gaussian-clusters",),
    3: ("four-gaussian-clusters",),
    4: ("arma-pair",),
}

TWO_CLUSTER_SPECS = (
    GaussianClusterSpec(100, 0.0, 1.0),
    GaussianClusterSpec(100, 10.0, 1.0),
)
FOUR_CLUSTER_SPECS = (
    GaussianClusterSpec(50, 0.0, 1.0),
    GaussianClusterSpec(50, 3.0, 2.0),
    GaussianClusterSpec(50, 5.0, 1.0),
    GaussianClusterSpec(50, 8.0, 3.0),
)

# Cluster layouts behind the peak-count figures (ids keyed by the CLI's
# --figure argument). Figure 7's last group is a single 60-point cluster;
# the rest are 30-point clusters, with the first three pairs forming three
# heterogeneous clusters of 60 points each.
FIGURE_CLUSTER_SPECS = {
    5: (
        GaussianClusterSpec(30, 10.0, 0.5),
        GaussianClusterSpec(30, 0.0, 4.0),
        GaussianClusterSpec(30, 40.0, 10.0),
    ),
    6: (
        GaussianClusterSpec(30, 10.0, 0.5),
        GaussianClusterSpec(30, 0.0, 4.0),
        GaussianClusterSpec(30, 40.0, 10.0),
        GaussianClusterSpec(30, 25.0, 7.0),
    ),
    7: (
        GaussianClusterSpec(30, 10.0, 0.5),
        GaussianClusterSpec(30, 0.0, 0.5),
        GaussianClusterSpec(30, 0.0, 4.0),
        GaussianClusterSpec(30, 10.0, 4.0),
        GaussianClusterSpec(30, 40.0, 10.0),
        GaussianClusterSpec(30, 0.0, 10.0),
        GaussianClusterSpec(60, 25.0, 7.0),
    ),
}
FIGURE_DIMENSIONS = (1000, 10000)


@dataclass(frozen=True)
class SegmentConfig:
    """Configuration of a segmentation run.

    Windows are taken every ``stride`` samples starting at 0 unless
    explicit 0-based ``starts`` are given. ``k_max`` bounds the mixture
    sizes tried on the distance histogram; ``n_axes`` is the number of
    principal-coordinate axes fed to the constrained clustering (None = all
    positive axes). ``trim`` drops that many windows from each end of the
    sequence before clustering.
    """

    window_len: int
    stride: int | None = None
    starts: tuple[int, ...] | None = None
    bins: int = DEFAULT_BINS
    k_max: int = 6
    n_axes: int | None = 2
    seed: int = 0
    trim: int = 0
    smoothing_window: int = DEFAULT_SMOOTHING_WINDOW
    min_prominence: float = DEFAULT_MIN_PROMINENCE

    def __post_init__(self):
        check_positive_int(self.window_len, "window_len")
        check_positive_int(self.k_max, "k_max")
        if (self.stride is None) == (self.starts is None):
            raise InputValidationError("exactly one of stride/starts must be given")
        if self.stride is not None:
            check_positive_int(self.stride, "stride")
        if self.trim < 0:
            raise InputValidationError("trim must be >= 0")

    def resolve_starts(self, signal_len: int) -> np.ndarray:
        if self.starts is not None:
            starts = np.asarray(self.starts, dtype=np.int64)
        else:
            starts = window_starts(signal_len, self.window_len, self.stride)
        if self.trim:
            if starts.size <= 2 * self.trim:
                raise InputValidationError("trim leaves no windows")
            starts = starts[self.trim : starts.size - self.trim]
        return starts


@dataclass(frozen=True)
class SegmentStats:
    """Span and dispersion summary of one recovered segment. ``radius`` is
    the maximum pairwise distance between member windows in the clustered
    space (complete-link radius)."""

    first_window: int
    last_window: int
    signal_start: int
    signal_stop: int
    mean_value: float
    radius: float


@dataclass(frozen=True)
class SegmentationRun:
    """All artifacts of one end-to-end segmentation."""

    config: SegmentConfig
    starts: np.ndarray
    histogram: Histogram
    peaks: PeakSet
    best_k: int
    mixtures: dict[int, Mixture1D]
    n_segments: int
    slack: int
    embedding: PcoaResult
    dendrogram: Dendrogram
    segmentation: Segmentation
    labels: np.ndarray
    signal_boundaries: tuple[int, ...]
    segment_stats: tuple[SegmentStats, ...]
    cut_height: float


@dataclass(frozen=True)
class TableRow:
    """One simulation-table entry: the triangle-measure fractions for a
    generator setting at one seed."""

    generator: str
    n: int
    m: int
    seed: int
    isosceles: float
    equilateral: float
    um: float


@dataclass(frozen=True)
class FigurePeaks:
    """Distance histogram and detected peaks for one figure setting."""

    m: int
    histogram: Histogram
    peaks: PeakSet


def segment_signal(signal, config: SegmentConfig) -> SegmentationRun:
    """Segment a 1-D signal into contiguous regimes.

    Pipeline: window embedding -> pairwise distances -> distance histogram
    -> Gaussian-mixture/BIC peak count -> implied segment count (least c
    with c + c(c-1)/2 >= peaks) -> principal coordinates -> contiguity-
    constrained complete-link clustering -> cut into c segments. Segment
    boundaries are mapped back to the signal as the start index of each
    segment's first window.

    A constant signal short-circuits the mixture step (the distance
    histogram is a single degenerate bin) and yields one segment.
    """
    signal = as_signal(signal)
    starts = config.resolve_starts(signal.size)
    if starts.size < 2:
        raise InputValidationError("segmentation needs at least two windows")
    cloud = embed_signal(signal, config.window_len, starts)
    distances = pairwise_distances(cloud)
    histogram = build_histogram(distances, config.bins)
    peaks = detect_peaks(histogram, config.smoothing_window, config.min_prominence)
    degenerate = float(distances.max() - distances.min()) == 0.0
    if degenerate:
        best_k, mixtures = 1, {}
        n_segments, slack = 1, 0
    else:
        best_k, mixtures = select_k_bic(distances, range(1, config.k_max + 1), seed=config.seed)
        inferred = peaks_to_signal_clusters(best_k)
        n_segments, slack = inferred.n_clusters, inferred.slack
    if n_segments > starts.size:
        raise InputValidationError(
            f"inferred {n_segments} segments for only {starts.size} windows"
        )
    embedding = pcoa(distances, config.n_axes)
    if embedding.n_axes > 0:
        cluster_distances = pairwise_distances(embedding.coordinates)
    else:
        cluster_distances = distances
    dendrogram = constrained_complete_linkage(cluster_distances)
    segmentation = cut_segments(dendrogram, n_segments)
    labels = segmentation.labels()
    height = cut_height(dendrogram, n_segments)
    stats = []
    boundaries = (0,) + segmentation.boundaries
    for seg_index, first in enumerate(boundaries):
        last = (
            segmentation.boundaries[seg_index] - 1
            if seg_index < len(segmentation.boundaries)
            else starts.size - 1
        )
        sig_start = int(starts[first])
        sig_stop = (
            int(starts[segmentation.boundaries[seg_index]])
            if seg_index < len(segmentation.boundaries)
            else signal.size
        )
        members = np.arange(first, last + 1)
        if members.size > 1:
            radius = float(
                pairwise_distances(
                    embedding.coordinates[members]
                    if embedding.n_axes > 0
                    else cloud[members]
                ).max()
            )
        else:
            radius = 0.0
        stats.append(
            SegmentStats(
                first_window=int(first),
                last_window=int(last),
                signal_start=sig_start,
                signal_stop=sig_stop,
                mean_value=float(signal[sig_start:sig_stop].mean()),
                radius=radius,
            )
        )
    return SegmentationRun(
        config=config,
        starts=starts,
        histogram=histogram,
        peaks=peaks,
        best_k=best_k,
        mixtures=mixtures,
        n_segments=n_segments,
        slack=slack,
        embedding=embedding,
        dendrogram=dendrogram,
        segmentation=segmentation,
        labels=labels,
        signal_boundaries=tuple(int(starts[b]) for b in segmentation.boundaries),
        segment_stats=tuple(stats),
        cut_height=height,
    )


def arma_pair_cloud(
    m: int,
    segments_per_model: int = 50,
    seed=0,
    spec_a: ArmaSpec = ARMA_MODEL_A,
    spec_b: ArmaSpec = ARMA_MODEL_B,
) -> tuple[np.ndarray, np.ndarray]:
    """Point cloud of ARMA segments: ``segments_per_model`` contiguous,
    non-overlapping length-m slices of one long realization per model,
    stacked (model A rows first). Returns (cloud, labels)."""
    check_positive_int(m, "m")
    check_positive_int(segments_per_model, "segments_per_model")
    rows = []
    for child, spec in enumerate((spec_a, spec_b)):
        signal = make_arma_signal(spec.with_length(segments_per_model * m), seed=(seed, child))
        rows.append(signal.reshape(segments_per_model, m))
    labels = np.repeat([0, 1], segments_per_model)
    return np.vstack(rows), labels


def _make_table_cloud(name: str, m: int, seed: int) -> np.ndarray:
    if name == "uniform":
        return make_uniform_cloud(100, m, seed)
    if name == "hypercube":
        return make_hypercube_cloud(100, m, seed)
    if name == "gaussian":
        return make_gaussian_clusters([GaussianClusterSpec(100, 0.0, 1.0)], m, seed)[0]
    if name == "two-gaussian-clusters":
        return make_gaussian_clusters(TWO_CLUSTER_SPECS, m, seed)[0]
    if name == "four-gaussian-clusters":
        return make_gaussian_clusters(FOUR_CLUSTER_SPECS, m, seed)[0]
    if name == "arma-pair":
        return arma_pair_cloud(m, seed=seed)[0]
    raise InputValidationError(f"unknown table generator {name!r}")


def reproduce_table(
    table_id: int,
    seeds=(0, 1, 2),
    m_values=None,
    um_config: UmConfig = UmConfig(),
) -> list[TableRow]:
    """Regenerate one simulation table: for every (dimension, seed) pair,
    build the table's clouds and run the triangle ultrametricity measure.

    ``m_values`` overrides the table's dimension list (e.g. to skip the
    heaviest settings). Rows are ordered generator-major, then m, then seed.
    """
    if table_id not in TABLE_DIMENSIONS:
        raise InputValidationError(f"table_id must be 1..4, got {table_id}")
    dims = TABLE_DIMENSIONS[table_id] if m_values is None else tuple(m_values)
    rows: list[TableRow] = []
    for name in TABLE_GENERATORS[table_id]:
        for m in dims:
            for seed in seeds:
                cloud = _make_table_cloud(name, m, seed)
                d = pairwise_distances(cloud)
                report = triangle_ultrametricity_from_distances(
                    d, replace(um_config, seed=seed)
                )
                rows.append(
                    TableRow(
                        generator=name,
                        n=cloud.shape[0],
                        m=m,
                        seed=seed,
                        isosceles=report.isosceles_fraction,
                        equilateral=report.equilateral_fraction,
                        um=report.um_fraction,
                    )
                )
    return rows


def reproduce_peak_figure(
    figure_id: int,
    seed=0,
    bins: int = DEFAULT_BINS,
    smoothing_window: int = DEFAULT_SMOOTHING_WINDOW,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
) -> list[FigurePeaks]:
    """Distance histograms and peak counts for one of the cluster layouts
    behind the peak-count figures, at each reference dimensionality."""
    if figure_id not in FIGURE_CLUSTER_SPECS:
        raise InputValidationError(f"figure_id must be one of {sorted(FIGURE_CLUSTER_SPECS)}")
    out = []
    for m in FIGURE_DIMENSIONS:
        cloud, _ = make_gaussian_clusters(FIGURE_CLUSTER_SPECS[figure_id], m, seed)
        histogram = build_histogram(pairwise_distances(cloud), bins)
        peaks = detect_peaks(histogram, smoothing_window, min_prominence)
        out.append(FigurePeaks(m=m, histogram=histogram, peaks=peaks))
    return out
