"""Command-line interface.

Every subcommand writes its artifacts into a run directory (--out, default
./umlab_out): JSON reports, TSV plot data and CSV matrices. Exit status is
0 on success and 2 on a validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from ._validation import DegenerateTriangleError, InputValidationError
from .generators import (
    ArmaSpec,
    GaussianClusterSpec,
    make_gaussian_clusters,
    make_hypercube_cloud,
    make_uniform_cloud,
    make_arma_signal,
)
from .geometry import pairwise_distances
from .hierarchy import (
    Segmentation,
    complete_linkage,
    constrained_complete_linkage,
    cut,
    single_linkage,
)
from .histpeaks import build_histogram, detect_peaks, select_k_bic
from .pcoa import pcoa
from .pipeline import (
    SegmentConfig,
    reproduce_peak_figure,
    reproduce_table,
    segment_signal,
)
from .ultrametricity import UmConfig, lerman_h, rammal_degree, triangle_ultrametricity


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _float_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


def _load_input_distances(args) -> np.ndarray:
    if getattr(args, "distances", None):
        return io.read_distances(args.distances)
    return pairwise_distances(io.read_cloud_csv(args.input))


def _cmd_gen(args) -> None:
    out = _outdir(args)
    if args.kind == "uniform":
        cloud = make_uniform_cloud(args.n, args.m, args.seed)
        io.write_cloud_csv(out / "cloud.csv", cloud)
    elif args.kind == "hypercube":
        cloud = make_hypercube_cloud(args.n, args.m, args.seed)
        io.write_cloud_csv(out / "cloud.csv", cloud)
    elif args.kind == "gclusters":
        specs = []
        for spec in args.cluster:
            parts = _float_list(spec)
            if len(parts) != 3:
                raise InputValidationError(f"--cluster wants COUNT,MEAN,SD, got {spec!r}")
            specs.append(GaussianClusterSpec(int(parts[0]), parts[1], parts[2]))
        cloud, labels = make_gaussian_clusters(specs, args.m, args.seed)
        io.write_cloud_csv(out / "cloud.csv", cloud)
        io.write_labels_csv(out / "labels.csv", labels)
    elif args.kind == "arima":
        spec = ArmaSpec(
            ar=_float_list(args.ar),
            ma=_float_list(args.ma),
            innovation_df=args.df,
            length=args.length,
        )
        io.write_signal_csv(out / "signal.csv", make_arma_signal(spec, args.seed))
    print(f"wrote {out}")


def _cmd_um_measure(args) -> None:
    out = _outdir(args)
    cloud = io.read_cloud_csv(args.input)
    cfg = UmConfig(
        sample_size=args.samples,
        angle_tolerance=args.tolerance,
        seed=args.seed,
        exhaustive_threshold=args.exhaustive_threshold,
    )
    if args.measure == "triangle":
        report = triangle_ultrametricity(cloud, cfg)
    elif args.measure == "lerman":
        report = lerman_h(pairwise_distances(cloud), cfg)
    else:
        report = rammal_degree(pairwise_distances(cloud))
    io.write_report_json(out / f"{args.measure}_report.json", report)
    print(json.dumps(io.report_to_dict(report)))


def _cmd_pdist(args) -> None:
    out = _outdir(args)
    d = pairwise_distances(io.read_cloud_csv(args.input))
    if args.format == "tsv":
        io.write_distances_tsv(out / "distances.tsv", d)
    else:
        io.write_distances_umd1(out / "distances.umd", d)
    print(f"wrote {out}")


def _cmd_disthist(args) -> None:
    out = _outdir(args)
    d = _load_input_distances(args)
    hist = build_histogram(d, args.bins)
    io.write_xy_tsv(out / "hist.tsv", hist.centers, hist.counts)
    print(f"wrote {out / 'hist.tsv'} ({hist.total} distances)")


def _cmd_peaks(args) -> None:
    out = _outdir(args)
    d = _load_input_distances(args)
    hist = build_histogram(d, args.bins)
    peaks = detect_peaks(hist, args.window, args.prominence)
    io.write_xy_tsv(out / "hist.tsv", hist.centers, hist.counts)
    payload = {
        "n_peaks": peaks.count,
        "peak_bins": peaks.peak_bins.tolist(),
        "peak_centers": hist.centers[peaks.peak_bins].tolist(),
        "smoothing_window": peaks.smoothing_window,
        "min_prominence": peaks.min_prominence,
    }
    (out / "peaks.json").write_text(json.dumps(payload, indent=2) + "\n")
    print(json.dumps(payload))


def _cmd_gmm_bic(args) -> None:
    out = _outdir(args)
    if args.values:
        values = io.read_signal_csv(args.values)
    else:
        values = _load_input_distances(args)
    best_k, fits = select_k_bic(values, range(1, args.kmax + 1), seed=args.seed)
    io.write_xy_tsv(out / "bic.tsv", sorted(fits), [fits[k].bic for k in sorted(fits)])
    io.write_mixture_json(out / "mixtures.json", fits, values=values)
    print(json.dumps({"best_k": best_k, "bic": fits[best_k].bic}))


def _cmd_pcoa(args) -> None:
    out = _outdir(args)
    d = _load_input_distances(args)
    result = pcoa(d, None if args.axes == "all" else int(args.axes))
    io.write_cloud_csv(out / "coords.csv", result.coordinates)
    with open(out / "variance.tsv", "w") as fh:
        for axis in range(result.eigenvalues.size):
            fraction = result.variance_fraction[axis] if axis < result.n_axes else ""
            fh.write(f"{axis + 1}\t{float(result.eigenvalues[axis])!r}\t{fraction}\n")
    print(f"{result.n_axes} axes, variance fractions {result.variance_fraction[:5]}")


def _cmd_hcluster(args) -> None:
    out = _outdir(args)
    d = _load_input_distances(args)
    method = {
        "single": single_linkage,
        "complete": complete_linkage,
        "constrained": constrained_complete_linkage,
    }[args.method]
    dend = method(d)
    io.write_dendrogram_tsv(out / "dendrogram.tsv", dend)
    if args.k is not None:
        labels = cut(dend, args.k)
        io.write_labels_csv(out / "labels.csv", labels)
        if args.method == "constrained":
            io.write_segmentation_json(
                out / "segmentation.json", Segmentation.from_labels(labels)
            )
    print(f"wrote {out}")


def _cmd_segment(args) -> None:
    out = _outdir(args)
    signal = io.read_signal_csv(args.input)
    starts = None
    if args.starts:
        # CLI start indices are 1-based; the library uses 0-based offsets
        starts = tuple(int(s) - 1 for s in args.starts.split(","))
    config = SegmentConfig(
        window_len=args.window,
        stride=args.stride if starts is None else None,
        starts=starts,
        bins=args.bins,
        k_max=args.kmax,
        n_axes=None if args.axes == "all" else int(args.axes),
        seed=args.seed,
        trim=args.trim,
    )
    run = segment_signal(signal, config)
    io.write_xy_tsv(out / "hist.tsv", run.histogram.centers, run.histogram.counts)
    if run.mixtures:
        ks = sorted(run.mixtures)
        io.write_xy_tsv(out / "bic.tsv", ks, [run.mixtures[k].bic for k in ks])
        io.write_mixture_json(out / "mixtures.json", run.mixtures)
    io.write_cloud_csv(out / "coords.csv", run.embedding.coordinates)
    io.write_dendrogram_tsv(out / "dendrogram.tsv", run.dendrogram)
    io.write_segmentation_json(out / "segmentation.json", run.segmentation)
    summary = {
        "n_windows": int(run.starts.size),
        "window_len": config.window_len,
        "best_k": run.best_k,
        "n_segments": run.n_segments,
        "slack": run.slack,
        "signal_boundaries": list(run.signal_boundaries),
        "segments": [
            {
                "first_window": s.first_window,
                "last_window": s.last_window,
                "signal_start": s.signal_start,
                "signal_stop": s.signal_stop,
                "mean_value": s.mean_value,
                "radius": s.radius,
            }
            for s in run.segment_stats
        ],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps({"n_segments": run.n_segments,
                      "signal_boundaries": list(run.signal_boundaries)}))


def _cmd_repro(args) -> None:
    out = _outdir(args)
    seeds = tuple(int(s) for s in args.seeds.split(","))
    if args.table is not None:
        rows = reproduce_table(args.table, seeds=seeds)
        path = out / f"table{args.table}.tsv"
        groups: dict[tuple, list] = {}
        for r in rows:
            groups.setdefault((r.generator, r.n, r.m), []).append(r)
        with open(path, "w") as fh:
            fh.write("generator\tn\tm\tseed\tisosc\tequil\tum\n")
            for (gen, n, m), group in groups.items():
                for r in group:
                    fh.write(
                        f"{gen}\t{n}\t{m}\t{r.seed}\t"
                        f"{r.isosceles:.4f}\t{r.equilateral:.4f}\t{r.um:.4f}\n"
                    )
                fh.write(
                    f"{gen}\t{n}\t{m}\tmean\t"
                    f"{np.mean([r.isosceles for r in group]):.4f}\t"
                    f"{np.mean([r.equilateral for r in group]):.4f}\t"
                    f"{np.mean([r.um for r in group]):.4f}\n"
                )
        print(f"wrote {path}")
    else:
        summary = {}
        for seed in seeds:
            for fig in reproduce_peak_figure(args.figure, seed=seed):
                name = f"fig{args.figure}_m{fig.m}_seed{seed}"
                io.write_xy_tsv(out / f"{name}_hist.tsv", fig.histogram.centers, fig.histogram.counts)
                summary[name] = fig.peaks.count
        (out / f"fig{args.figure}_peaks.json").write_text(json.dumps(summary, indent=2) + "\n")
        print(json.dumps(summary))


def _add_io_args(parser, distances_ok: bool = True) -> None:
    parser.add_argument("--input", help="point cloud CSV (headerless, one row per point)")
    if distances_ok:
        parser.add_argument(
            "--distances", help="precomputed distances, (i,j,d) TSV or UMD1 binary"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umlab",
        description="Ultrametricity diagnostics, clustering and signal segmentation",
    )
    parser.add_argument("--out", default="umlab_out", help="run directory for artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate synthetic clouds and signals")
    gsub = g.add_subparsers(dest="kind", required=True)
    for kind in ("uniform", "hypercube"):
        p = gsub.add_parser(kind)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=_cmd_gen)
    p = gsub.add_parser("gclusters")
    p.add_argument(
        "--cluster",
        action="append",
        required=True,
        metavar="COUNT,MEAN,SD",
        help="one cluster spec; repeat for more clusters",
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen)
    p = gsub.add_parser("arima")
    p.add_argument("--ar", default="", help="comma-separated AR coefficients")
    p.add_argument("--ma", default="", help="comma-separated MA coefficients")
    p.add_argument("--df", type=float, default=5.0, help="Student-t innovation d.o.f.")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("um-measure", help="ultrametricity of a point cloud")
    p.add_argument("--input", required=True)
    p.add_argument("--measure", choices=("triangle", "lerman", "rammal"), required=True)
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--tolerance", type=float, default=0.0349)
    p.add_argument("--exhaustive-threshold", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_um_measure)

    p = sub.add_parser("pdist", help="write the pairwise distance matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("tsv", "umd1"), default="tsv")
    p.set_defaults(func=_cmd_pdist)

    p = sub.add_parser("disthist", help="histogram of pairwise distances")
    _add_io_args(p)
    p.add_argument("--bins", type=int, default=100)
    p.set_defaults(func=_cmd_disthist)

    p = sub.add_parser("peaks", help="detect distance-histogram peaks")
    _add_io_args(p)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--window", type=int, default=5, help="odd smoothing window")
    p.add_argument("--prominence", type=float, default=0.02,
                   help="fraction of the max smoothed count")
    p.set_defaults(func=_cmd_peaks)

    p = sub.add_parser("gmm-bic", help="Gaussian-mixture/BIC model selection")
    _add_io_args(p)
    p.add_argument("--values", help="raw scalar values, one per line (instead of distances)")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gmm_bic)

    p = sub.add_parser("pcoa", help="principal coordinates analysis")
    _add_io_args(p)
    p.add_argument("--axes", default="2", help="axes to emit, or 'all' for every positive axis")
    p.set_defaults(func=_cmd_pcoa)

    p = sub.add_parser("hcluster", help="agglomerative hierarchical clustering")
    _add_io_args(p)
    p.add_argument("--method", choices=("single", "complete", "constrained"), required=True)
    p.add_argument("--k", type=int, help="also cut into k clusters")
    p.set_defaults(func=_cmd_hcluster)

    p = sub.add_parser("segment", help="end-to-end signal segmentation")
    p.add_argument("--input", required=True, help="signal CSV, one value per line")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--stride", type=int)
    p.add_argument("--starts", help="explicit 1-based window starts, comma-separated")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--axes", default="2", help="principal axes to cluster on, or 'all'")
    p.add_argument("--trim", type=int, default=0,
                   help="drop this many windows from each end before clustering")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("repro", help="reproduce simulation tables / peak figures")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--table", type=int, choices=(1, 2, 3, 4))
    group.add_argument("--figure", type=int, choices=(5, 6, 7))
    p.add_argument("--seeds", default="0,1,2", help="comma-separated seeds")
    p.set_defaults(func=_cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "input", None) is None and getattr(args, "distances", None) is None \
            and args.command in ("disthist", "peaks", "pcoa", "hcluster") :
        parser.error(f"{args.command} needs --input or --distances")
    if args.command == "gmm-bic" and not (args.input or args.distances or args.values):
        parser.error("gmm-bic needs --input, --distances or --values")
    if args.command == "segment" and (args.stride is None) == (args.starts is None):
        parser.error("segment needs exactly one of --stride / --starts")
    try:
        args.func(args)
    except (InputValidationError, DegenerateTriangleError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
