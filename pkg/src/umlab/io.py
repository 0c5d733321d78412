"""File formats: headerless CSV point clouds and signals, distance
matrices as (i, j, d) TSV triples or condensed binary, dendrogram merge
tables, segmentations and JSON reports.

The condensed binary format is magic b"UMD1", then the point count as an
unsigned 64-bit little-endian integer, then the n(n-1)/2 condensed values
as little-endian float64.
"""

from __future__ import annotations

import dataclasses
import json
import struct
from pathlib import Path

import numpy as np

from ._validation import InputValidationError, as_cloud, as_condensed, as_signal
from .hierarchy import Dendrogram, Segmentation

UMD1_MAGIC = b"UMD1"


def write_cloud_csv(path, cloud) -> None:
    np.savetxt(path, as_cloud(cloud), delimiter=",")


def read_cloud_csv(path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as err:
        raise InputValidationError(f"cannot parse {path} as a CSV point cloud: {err}") from err
    return as_cloud(data)


def write_signal_csv(path, signal) -> None:
    np.savetxt(path, as_signal(signal), delimiter=",")


def read_signal_csv(path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",")
    except ValueError as err:
        raise InputValidationError(f"cannot parse {path} as a signal: {err}") from err
    return as_signal(data)


def write_labels_csv(path, labels) -> None:
    np.savetxt(path, np.asarray(labels, dtype=np.int64), fmt="%d")


def read_labels_csv(path) -> np.ndarray:
    return np.loadtxt(path, dtype=np.int64).ravel()


def write_distances_tsv(path, d) -> None:
    """Distance matrix as 0-based (i, j, d) triples, one pair per line."""
    d, n = as_condensed(d)
    i, j = np.triu_indices(n, k=1)
    with open(path, "w") as fh:
        for a, b, value in zip(i, j, d):
            fh.write(f"{a}\t{b}\t{float(value)!r}\n")


def read_distances_tsv(path) -> np.ndarray:
    rows = np.loadtxt(path, delimiter="\t", ndmin=2)
    if rows.shape[1] != 3:
        raise InputValidationError(f"{path} is not an (i, j, d) distance table")
    n = int(rows[:, :2].max()) + 1
    expected = n * (n - 1) // 2
    if rows.shape[0] != expected:
        raise InputValidationError(
            f"{path} holds {rows.shape[0]} pairs, expected {expected} for n={n}"
        )
    d = np.zeros(expected)
    i = rows[:, 0].astype(np.int64)
    j = rows[:, 1].astype(np.int64)
    if np.any(i >= j):
        raise InputValidationError(f"{path} must list pairs with i < j")
    d[i * n - i * (i + 1) // 2 + j - i - 1] = rows[:, 2]
    return as_condensed(d)[0]


def write_distances_umd1(path, d) -> None:
    d, n = as_condensed(d)
    with open(path, "wb") as fh:
        fh.write(UMD1_MAGIC)
        fh.write(struct.pack("<Q", n))
        fh.write(d.astype("<f8").tobytes())


def read_distances_umd1(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:4] != UMD1_MAGIC:
        raise InputValidationError(f"{path} lacks the UMD1 magic")
    (n,) = struct.unpack("<Q", raw[4:12])
    d = np.frombuffer(raw[12:], dtype="<f8")
    if d.size != n * (n - 1) // 2:
        raise InputValidationError(f"{path} holds {d.size} values, expected {n * (n - 1) // 2}")
    return as_condensed(d.astype(np.float64))[0]


def read_distances(path) -> np.ndarray:
    """Read either distance format, sniffing the binary magic."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == UMD1_MAGIC:
        return read_distances_umd1(path)
    return read_distances_tsv(path)


def write_dendrogram_tsv(path, dend: Dendrogram) -> None:
    """Merge table as (step, a, b, height) with 1-based steps; cluster ids
    follow the linkage convention (leaves 0..n-1, merge t creates n+t)."""
    with open(path, "w") as fh:
        for step, (a, b, h) in enumerate(dend.merges, start=1):
            fh.write(f"{step}\t{int(a)}\t{int(b)}\t{float(h)!r}\n")


def read_dendrogram_tsv(path, constrained: bool = False) -> Dendrogram:
    rows = np.loadtxt(path, delimiter="\t", ndmin=2)
    if rows.size == 0:
        raise InputValidationError(f"{path} holds no merges")
    if rows.shape[1] != 4:
        raise InputValidationError(f"{path} is not a (step, a, b, height) merge table")
    return Dendrogram(n_leaves=rows.shape[0] + 1, merges=rows[:, 1:], constrained=constrained)


def write_segmentation_json(path, seg: Segmentation) -> None:
    Path(path).write_text(json.dumps({"boundaries": list(seg.boundaries), "k": seg.k}) + "\n")


def read_segmentation_json(path, n_leaves: int) -> Segmentation:
    payload = json.loads(Path(path).read_text())
    seg = Segmentation(n_leaves=n_leaves, boundaries=tuple(payload["boundaries"]))
    if seg.k != payload.get("k"):
        raise InputValidationError(f"{path}: k does not match the boundary count")
    return seg


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def report_to_dict(report) -> dict:
    """A dataclass report as a plain JSON-ready dict (exactly its fields)."""
    return _jsonable(dataclasses.asdict(report))


def write_report_json(path, report) -> None:
    Path(path).write_text(json.dumps(report_to_dict(report), indent=2) + "\n")


def write_xy_tsv(path, x, y) -> None:
    """Two-column (x, y) plot data."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise InputValidationError("x and y must have the same length")
    with open(path, "w") as fh:
        for a, b in zip(x, y):
            fh.write(f"{float(a)!r}\t{float(b)!r}\n")


def write_mixture_json(path, mixtures: dict, values=None) -> None:
    """Mixtures keyed by component count; when the fitted values are given,
    each entry also reports per-component cardinalities under
    maximum-responsibility assignment."""
    payload = {}
    for k, mix in mixtures.items():
        entry = {
            "k": mix.k,
            "weights": mix.weights.tolist(),
            "means": mix.means.tolist(),
            "sds": mix.sds.tolist(),
            "loglik": mix.loglik,
            "bic": mix.bic,
        }
        if values is not None:
            counts = np.bincount(mix.assign(values), minlength=mix.k)
            entry["cardinalities"] = counts.tolist()
        payload[str(k)] = entry
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
