import json

import numpy as np
import pytest

from umlab import io
from umlab.cli import main


def run_cli(*args):
    return main([str(a) for a in args])


def test_gen_uniform_and_um_measure(tmp_path, capsys):
    out = tmp_path / "run"
    assert run_cli("--out", out, "gen", "uniform", "--n", 30, "--m", 10, "--seed", 1) == 0
    cloud = io.read_cloud_csv(out / "cloud.csv")
    assert cloud.shape == (30, 10)
    assert (
        run_cli(
            "--out", out, "um-measure", "--input", out / "cloud.csv",
            "--measure", "triangle", "--samples", 200, "--seed", 5,
        )
        == 0
    )
    payload = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert payload["triplets_examined"] == 200
    report = json.loads((out / "triangle_report.json").read_text())
    assert report == payload


def test_gen_gclusters_writes_labels(tmp_path):
    out = tmp_path / "run"
    assert (
        run_cli(
            "--out", out, "gen", "gclusters",
            "--cluster", "5,0,1", "--cluster", "7,10,2", "--m", 6, "--seed", 2,
        )
        == 0
    )
    labels = io.read_labels_csv(out / "labels.csv")
    assert labels.tolist() == [0] * 5 + [1] * 7


def test_gen_arima_signal(tmp_path):
    out = tmp_path / "run"
    assert (
        run_cli(
            "--out", out, "gen", "arima", "--ar", "0.5", "--ma", "",
            "--df", 5, "--length", 500, "--seed", 3,
        )
        == 0
    )
    assert io.read_signal_csv(out / "signal.csv").size == 500


def test_lerman_and_rammal_cli(tmp_path, capsys):
    out = tmp_path / "run"
    run_cli("--out", out, "gen", "uniform", "--n", 12, "--m", 5, "--seed", 1)
    for measure in ("lerman", "rammal"):
        assert run_cli(
            "--out", out, "um-measure", "--input", out / "cloud.csv", "--measure", measure
        ) == 0
        assert (out / f"{measure}_report.json").exists()


def test_pdist_formats(tmp_path):
    out = tmp_path / "run"
    run_cli("--out", out, "gen", "uniform", "--n", 8, "--m", 3, "--seed", 0)
    assert run_cli("--out", out, "pdist", "--input", out / "cloud.csv", "--format", "umd1") == 0
    d = io.read_distances(out / "distances.umd")
    assert d.size == 28


def test_disthist_peaks_gmm_pcoa_hcluster(tmp_path, capsys):
    out = tmp_path / "run"
    run_cli(
        "--out", out, "gen", "gclusters",
        "--cluster", "20,0,1", "--cluster", "20,30,1", "--m", 200, "--seed", 4,
    )
    cloud_path = out / "cloud.csv"
    assert run_cli("--out", out, "disthist", "--input", cloud_path, "--bins", 50) == 0
    assert (out / "hist.tsv").exists()
    assert run_cli("--out", out, "peaks", "--input", cloud_path) == 0
    assert json.loads((out / "peaks.json").read_text())["n_peaks"] >= 2
    assert run_cli("--out", out, "gmm-bic", "--input", cloud_path, "--kmax", 3) == 0
    best = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert best["best_k"] >= 2
    mixtures = json.loads((out / "mixtures.json").read_text())
    # max-responsibility cardinalities cover all 780 pairwise distances
    assert sum(mixtures["2"]["cardinalities"]) == 40 * 39 // 2
    assert run_cli("--out", out, "pcoa", "--input", cloud_path, "--axes", 2) == 0
    coords = io.read_cloud_csv(out / "coords.csv")
    assert coords.shape == (40, 2)
    assert run_cli(
        "--out", out, "hcluster", "--input", cloud_path, "--method", "constrained", "--k", 2
    ) == 0
    labels = io.read_labels_csv(out / "labels.csv")
    assert labels.tolist() == [0] * 20 + [1] * 20
    seg = json.loads((out / "segmentation.json").read_text())
    assert seg == {"boundaries": [20], "k": 2}


def test_pcoa_all_axes_and_variance_table(tmp_path):
    out = tmp_path / "run"
    run_cli("--out", out, "gen", "uniform", "--n", 10, "--m", 4, "--seed", 6)
    assert run_cli("--out", out, "pcoa", "--input", out / "cloud.csv", "--axes", "all") == 0
    coords = io.read_cloud_csv(out / "coords.csv")
    assert coords.shape[1] == 4  # all positive axes of a 4-dim cloud
    rows = [line.split("\t") for line in (out / "variance.tsv").read_text().splitlines()]
    assert len(rows) == 10  # full spectrum, one row per eigenvalue
    assert float(rows[0][1]) >= float(rows[1][1])
    assert 0 < float(rows[0][2]) <= 1


def test_segment_cli_all_axes(tmp_path):
    out = tmp_path / "run"
    rng = np.random.default_rng(2)
    signal = np.concatenate([rng.normal(0, 1, 2000), rng.normal(15, 1, 2000)])
    io.write_signal_csv(sig := tmp_path / "signal.csv", signal)
    assert run_cli(
        "--out", out, "segment", "--input", sig,
        "--window", 500, "--stride", 500, "--kmax", 3, "--axes", "all", "--seed", 0,
    ) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["n_segments"] == 2


def test_hcluster_precomputed_distances(tmp_path):
    out = tmp_path / "run"
    run_cli("--out", out, "gen", "uniform", "--n", 9, "--m", 4, "--seed", 5)
    run_cli("--out", out, "pdist", "--input", out / "cloud.csv", "--format", "tsv")
    assert run_cli(
        "--out", out, "hcluster", "--distances", out / "distances.tsv", "--method", "single"
    ) == 0
    dend = io.read_dendrogram_tsv(out / "dendrogram.tsv")
    assert dend.n_leaves == 9


def test_segment_cli(tmp_path, capsys):
    out = tmp_path / "run"
    rng = np.random.default_rng(0)
    signal = np.concatenate([rng.normal(0, 1, 3000), rng.normal(20, 1, 3000)])
    io.write_signal_csv(out_csv := tmp_path / "signal.csv", signal)
    assert run_cli(
        "--out", out, "segment", "--input", out_csv,
        "--window", 500, "--stride", 500, "--kmax", 3, "--seed", 1,
    ) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["n_segments"] == 2
    assert summary["signal_boundaries"] == [3000]
    assert (out / "dendrogram.tsv").exists()
    assert (out / "bic.tsv").exists()


def test_segment_cli_one_based_starts(tmp_path):
    out = tmp_path / "run"
    rng = np.random.default_rng(1)
    signal = np.concatenate([rng.normal(0, 1, 2000), rng.normal(15, 1, 2000)])
    io.write_signal_csv(sig := tmp_path / "signal.csv", signal)
    starts = ",".join(str(s) for s in range(1, 3502, 500))
    assert run_cli(
        "--out", out, "segment", "--input", sig,
        "--window", 500, "--starts", starts, "--kmax", 3, "--seed", 1,
    ) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["n_windows"] == 8
    assert summary["segments"][0]["signal_start"] == 0


def test_repro_figure_cli(tmp_path, capsys):
    out = tmp_path / "run"
    assert run_cli("--out", out, "repro", "--figure", 5, "--seeds", "0") == 0
    payload = json.loads((out / "fig5_peaks.json").read_text())
    assert payload["fig5_m10000_seed0"] >= 5
    assert (out / "fig5_m1000_seed0_hist.tsv").exists()


def test_repro_table_cli(tmp_path):
    out = tmp_path / "run"
    # table 1 at full size takes a while; smoke the smallest table instead
    assert run_cli("--out", out, "repro", "--table", 2, "--seeds", "0,1") == 0
    lines = (out / "table2.tsv").read_text().splitlines()
    assert lines[0].split("\t") == ["generator", "n", "m", "seed", "isosc", "equil", "um"]
    # 4 dimensionalities x (2 seed rows + 1 mean row)
    assert len(lines) == 1 + 4 * 3
    mean_rows = [l for l in lines[1:] if l.split("\t")[3] == "mean"]
    assert len(mean_rows) == 4
    first_group = [l.split("\t") for l in lines[1:4]]
    assert float(first_group[2][6]) == pytest.approx(
        (float(first_group[0][6]) + float(first_group[1][6])) / 2, abs=1e-4
    )


def test_validation_error_exit_code(tmp_path):
    out = tmp_path / "run"
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a\nnumber,matrix\n")
    assert run_cli("--out", out, "um-measure", "--input", bad, "--measure", "triangle") == 2
    missing = tmp_path / "missing.csv"
    assert run_cli("--out", out, "disthist", "--input", missing) == 2
    # k out of range in hcluster
    run_cli("--out", out, "gen", "uniform", "--n", 5, "--m", 2, "--seed", 0)
    assert run_cli(
        "--out", out, "hcluster", "--input", out / "cloud.csv", "--method", "single", "--k", 9
    ) == 2
