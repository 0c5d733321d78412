"""Seeded synthetic data: uniform clouds, hypercube vertices, Gaussian
cluster mixtures, ARMA time series with Student-t innovations, and the
sliding-window embedding that turns a signal into a point cloud.

All generators are bit-reproducible given (parameters, seed); a seed may be
anything ``numpy.random.default_rng`` accepts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.signal import lfilter

from ._validation import InputValidationError, as_signal, check_positive_int

# Samples discarded before an ARMA series is emitted, to wash out the
# zero-state transient.
ARMA_BURN_IN = 1000


@dataclass(frozen=True)
class GaussianClusterSpec:
    """One spherical Gaussian cluster: the mean and standard deviation are
    the same on every dimension."""

    count: int
    mean: float
    sd: float

    def __post_init__(self):
        check_positive_int(self.count, "count")
        if not self.sd > 0:
            raise InputValidationError(f"sd must be > 0, got {self.sd}")


@dataclass(frozen=True)
class ArmaSpec:
    """ARMA(p, q) process with Student-t innovations.

    x_t = sum_i ar[i] * x_{t-i} + e_t + sum_j ma[j] * e_{t-j}, with e_t
    i.i.d. Student-t (unscaled, variance df/(df-2)). The differencing order
    is zero. Stationarity (AR polynomial roots outside the unit circle) is
    checked at construction.
    """

    ar: tuple[float, ...]
    ma: tuple[float, ...]
    innovation_df: float
    length: int

    def __post_init__(self):
        object.__setattr__(self, "ar", tuple(float(a) for a in self.ar))
        object.__setattr__(self, "ma", tuple(float(b) for b in self.ma))
        check_positive_int(self.length, "length")
        if not self.innovation_df > 2:
            raise InputValidationError("innovation_df must exceed 2 (finite variance)")
        if self.ar:
            # phi(z) = 1 - ar1 z - ... - arp z^p; np.roots wants highest power first
            roots = np.roots(np.r_[-np.asarray(self.ar)[::-1], 1.0])
            if np.any(np.abs(roots) <= 1.0):
                raise InputValidationError(f"AR coefficients {self.ar} are not stationary")

    def with_length(self, length: int) -> "ArmaSpec":
        return replace(self, length=length)


# Coefficient sets of the two reference ARMA(2, 2) models used by the
# table/figure reproduction harness and the segmentation demos.
ARMA_MODEL_A = ArmaSpec(ar=(0.8897, -0.4858), ma=(-0.2279, 0.2488), innovation_df=5.0, length=2000)
ARMA_MODEL_B = ArmaSpec(ar=(0.2897, -0.1858), ma=(-0.7279, 0.7488), innovation_df=5.0, length=2000)


def make_uniform_cloud(n: int, m: int, seed=0) -> np.ndarray:
    """n points with i.i.d. Uniform[0, 1) coordinates in m dimensions."""
    check_positive_int(n, "n")
    check_positive_int(m, "m")
    return np.random.default_rng(seed).random((n, m))


def make_hypercube_cloud(n: int, m: int, seed=0) -> np.ndarray:
    """n random vertices of the m-dimensional unit hypercube (fair 0/1)."""
    check_positive_int(n, "n")
    check_positive_int(m, "m")
    return np.random.default_rng(seed).integers(0, 2, size=(n, m)).astype(np.float64)


def make_gaussian_clusters(
    specs: Sequence[GaussianClusterSpec], m: int, seed=0
) -> tuple[np.ndarray, np.ndarray]:
    """Stacked spherical Gaussian clusters; returns (cloud, labels).

    Rows are grouped by cluster in spec order; labels[i] is the index of
    the spec that generated row i.
    """
    check_positive_int(m, "m")
    specs = [s if isinstance(s, GaussianClusterSpec) else GaussianClusterSpec(*s) for s in specs]
    if not specs:
        raise InputValidationError("at least one cluster spec is required")
    rng = np.random.default_rng(seed)
    blocks = [rng.normal(s.mean, s.sd, size=(s.count, m)) for s in specs]
    labels = np.repeat(np.arange(len(specs)), [s.count for s in specs])
    return np.vstack(blocks), labels


def make_arma_signal(spec: ArmaSpec, seed=0) -> np.ndarray:
    """Simulate ``spec.length`` samples of the ARMA process.

    Innovations are drawn first, the recursion is applied as a linear
    filter, and ARMA_BURN_IN warm-up samples are discarded.
    """
    if not isinstance(spec, ArmaSpec):
        raise InputValidationError("spec must be an ArmaSpec")
    rng = np.random.default_rng(seed)
    e = rng.standard_t(spec.innovation_df, size=spec.length + ARMA_BURN_IN)
    a = np.r_[1.0, -np.asarray(spec.ar)]
    b = np.r_[1.0, np.asarray(spec.ma)]
    return lfilter(b, a, e)[ARMA_BURN_IN:]


def window_starts(signal_len: int, window_len: int, stride: int) -> np.ndarray:
    """0-based start indices 0, stride, 2*stride, ... of every full window."""
    check_positive_int(window_len, "window_len")
    check_positive_int(stride, "stride")
    if window_len > signal_len:
        raise InputValidationError("window_len exceeds signal length")
    return np.arange(0, signal_len - window_len + 1, stride, dtype=np.int64)


def embed_signal(signal, window_len: int, starts) -> np.ndarray:
    """Point cloud of signal windows: one row per start index, coordinates
    are the ``window_len`` consecutive signal values from that start.

    Starts are 0-based here; the CLI accepts 1-based starts and converts.
    Row order follows ``starts``. Overlapping windows share the exact same
    values (rows are copies of the same underlying samples).
    """
    signal = as_signal(signal)
    check_positive_int(window_len, "window_len")
    starts = np.asarray(starts, dtype=np.int64).ravel()
    if starts.size == 0:
        raise InputValidationError("at least one window start is required")
    if starts.min() < 0 or starts.max() + window_len > signal.size:
        raise InputValidationError(
            f"window [start, start+{window_len}) must fit in a signal of {signal.size} samples"
        )
    return signal[starts[:, None] + np.arange(window_len)[None, :]]
