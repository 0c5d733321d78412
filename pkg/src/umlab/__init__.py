"""umlab: quantify hierarchical (ultrametric) structure in high-dimensional
point clouds and exploit it for cluster identification and time-series
segmentation.
"""

from ._validation import DegenerateTriangleError, InputValidationError
from .generators import (
    ARMA_MODEL_A,
    ARMA_MODEL_B,
    ArmaSpec,
    GaussianClusterSpec,
    embed_signal,
    make_arma_signal,
    make_gaussian_clusters,
    make_hypercube_cloud,
    make_uniform_cloud,
    window_starts,
)
from .geometry import (
    SpectralDiffuseness,
    TriangleAngles,
    condensed_index,
    condensed_size,
    diffuseness,
    diffuseness_coefficient,
    pairwise_distances,
    squareform_distances,
    triangle_angles,
)
from .hierarchy import (
    Dendrogram,
    Segmentation,
    complete_linkage,
    constrained_complete_linkage,
    cophenetic,
    cut,
    cut_height,
    cut_segments,
    single_linkage,
)
from .histpeaks import (
    ClusterCountInference,
    Histogram,
    Mixture1D,
    PeakSet,
    SignalClusterCount,
    build_histogram,
    detect_peaks,
    fit_gmm_1d,
    infer_min_clusters,
    max_peaks,
    peaks_to_signal_clusters,
    select_k_bic,
)
from .pcoa import PcoaResult, pcoa
from .pipeline import (
    FigurePeaks,
    SegmentConfig,
    SegmentationRun,
    SegmentStats,
    TableRow,
    arma_pair_cloud,
    reproduce_peak_figure,
    reproduce_table,
    segment_signal,
)
from .ultrametricity import (
    LermanReport,
    RammalReport,
    UltrametricityReport,
    UmConfig,
    lerman_h,
    rammal_degree,
    triangle_ultrametricity,
    triangle_ultrametricity_from_distances,
)
from .estimators import (
    AgglomerativeHierarchy,
    GaussianMixture1D,
    PrincipalCoordinates,
    SignalSegmenter,
)

__version__ = "0.1.0"

__all__ = [
    "ARMA_MODEL_A",
    "ARMA_MODEL_B",
    "AgglomerativeHierarchy",
    "ArmaSpec",
    "ClusterCountInference",
    "Dendrogram",
    "DegenerateTriangleError",
    "FigurePeaks",
    "GaussianClusterSpec",
    "GaussianMixture1D",
    "Histogram",
    "InputValidationError",
    "LermanReport",
    "Mixture1D",
    "PcoaResult",
    "PeakSet",
    "PrincipalCoordinates",
    "RammalReport",
    "SegmentConfig",
    "SegmentStats",
    "Segmentation",
    "SegmentationRun",
    "SignalClusterCount",
    "SignalSegmenter",
    "SpectralDiffuseness",
    "TableRow",
    "TriangleAngles",
    "UltrametricityReport",
    "UmConfig",
    "arma_pair_cloud",
    "build_histogram",
    "complete_linkage",
    "condensed_index",
    "condensed_size",
    "constrained_complete_linkage",
    "cophenetic",
    "cut",
    "cut_height",
    "cut_segments",
    "detect_peaks",
    "diffuseness",
    "diffuseness_coefficient",
    "embed_signal",
    "fit_gmm_1d",
    "infer_min_clusters",
    "lerman_h",
    "make_arma_signal",
    "make_gaussian_clusters",
    "make_hypercube_cloud",
    "make_uniform_cloud",
    "max_peaks",
    "pairwise_distances",
    "pcoa",
    "peaks_to_signal_clusters",
    "rammal_degree",
    "reproduce_peak_figure",
    "reproduce_table",
    "segment_signal",
    "select_k_bic",
    "single_linkage",
    "squareform_distances",
    "triangle_angles",
    "triangle_ultrametricity",
    "triangle_ultrametricity_from_distances",
    "window_starts",
]
