import numpy as np
import pytest

from umlab import (
    InputValidationError,
    SegmentConfig,
    arma_pair_cloud,
    pairwise_distances,
    reproduce_peak_figure,
    reproduce_table,
    segment_signal,
)
from umlab.generators import ARMA_MODEL_A, ARMA_MODEL_B, make_arma_signal


def level_shifted_signal(seed, n_per=25000, shift=10.0):
    a = make_arma_signal(ARMA_MODEL_A.with_length(n_per), seed=(seed, 0))
    b = make_arma_signal(ARMA_MODEL_B.with_length(n_per), seed=(seed, 1))
    return np.concatenate([a, b + shift])


def test_constant_signal_single_segment():
    run = segment_signal(np.ones(5000), SegmentConfig(window_len=500, stride=500))
    assert run.n_segments == 1
    assert run.best_k == 1
    assert run.segmentation.boundaries == ()
    assert run.signal_boundaries == ()
    assert run.labels.tolist() == [0] * 10
    assert run.histogram.total == 45


def test_level_shifted_regimes_recover_boundary():
    # soundness control: when the two regimes are metrically separable
    # (level shift, like a signal whose segments differ in value level),
    # the pipeline localizes the changepoint exactly
    hits = 0
    for seed in range(5):
        signal = level_shifted_signal(seed)
        run = segment_signal(
            signal, SegmentConfig(window_len=2000, stride=2000, k_max=3, seed=seed)
        )
        # 25 windows of regime A then 12.5 -> true boundary at window 12 or 13
        if run.n_segments == 2 and run.segmentation.boundaries[0] in (12, 13):
            hits += 1
    assert hits >= 4


def test_segment_stats_consistent():
    signal = level_shifted_signal(3)
    run = segment_signal(signal, SegmentConfig(window_len=2000, stride=2000, k_max=3, seed=3))
    assert run.labels.size == run.starts.size
    assert len(run.segment_stats) == run.n_segments
    # boundaries strictly increasing and mapped to window starts
    assert list(run.signal_boundaries) == sorted(run.signal_boundaries)
    for stat in run.segment_stats:
        assert stat.first_window <= stat.last_window
        assert stat.signal_start == run.starts[stat.first_window]
        # complete-link radius never exceeds the cut height
        assert stat.radius <= run.cut_height + 1e-9
    spans = [(s.signal_start, s.signal_stop) for s in run.segment_stats]
    assert spans[0][0] == run.starts[0]
    assert spans[-1][1] == signal.size
    for (a, b), (c, d) in zip(spans, spans[1:]):
        assert b == c


def test_pipeline_bit_reproducible():
    signal = level_shifted_signal(4)
    cfg = SegmentConfig(window_len=2000, stride=2000, k_max=3, seed=9)
    r1 = segment_signal(signal, cfg)
    r2 = segment_signal(signal, cfg)
    assert r1.segmentation == r2.segmentation
    assert r1.best_k == r2.best_k
    np.testing.assert_array_equal(r1.embedding.coordinates, r2.embedding.coordinates)
    np.testing.assert_array_equal(r1.dendrogram.merges, r2.dendrogram.merges)
    np.testing.assert_array_equal(r1.histogram.counts, r2.histogram.counts)


def test_segment_config_validation():
    with pytest.raises(InputValidationError):
        SegmentConfig(window_len=100)  # needs stride or starts
    with pytest.raises(InputValidationError):
        SegmentConfig(window_len=100, stride=10, starts=(0, 5))
    with pytest.raises(InputValidationError):
        segment_signal(np.ones(100), SegmentConfig(window_len=100, stride=10))


def test_explicit_starts_and_trim():
    signal = np.random.default_rng(0).normal(size=4000)
    cfg = SegmentConfig(window_len=500, starts=tuple(range(0, 3500, 500)), k_max=2, trim=1)
    run = segment_signal(signal, cfg)
    assert run.starts[0] == 500
    assert run.starts[-1] == 2500


def test_reproduce_table_row_structure():
    rows = reproduce_table(1, seeds=(0,), m_values=(20, 200))
    gens = {r.generator for r in rows}
    assert gens == {"uniform", "hypercube", "gaussian"}
    assert len(rows) == 6
    for row in rows:
        assert row.n == 100
        assert 0 <= row.um <= 1
        assert row.um == pytest.approx(row.isosceles + row.equilateral)


def test_reproduce_table_seed_replicates():
    rows = reproduce_table(2, seeds=(0, 1), m_values=(200,))
    assert len(rows) == 2
    assert rows[0].um != rows[1].um  # different seeds give different draws
    assert {r.n for r in rows} == {200}


def test_reproduce_table_validation():
    with pytest.raises(InputValidationError):
        reproduce_table(5)


def test_reproduce_table_arma_rows():
    rows = reproduce_table(4, seeds=(0,), m_values=(2000,))
    assert len(rows) == 1
    assert rows[0].generator == "arma-pair"
    assert rows[0].n == 100
    assert 0.0 <= rows[0].um <= 1.0


def test_reproduce_peak_figure_structure():
    figs = reproduce_peak_figure(5, seed=0)
    assert [f.m for f in figs] == [1000, 10000]
    for f in figs:
        assert f.histogram.total == 90 * 89 // 2
        assert f.peaks.count >= 1


def test_reproduce_peak_figure_validation():
    with pytest.raises(InputValidationError):
        reproduce_peak_figure(4)


def test_constrained_cut_of_embedded_windows_contiguous():
    # 86 windows (length 10000, stride 1000) of a two-regime signal,
    # reduced by principal coordinates: any constrained 3-cut must give
    # contiguous segments
    from umlab import (
        constrained_complete_linkage,
        cut_segments,
        embed_signal,
        pcoa,
        window_starts,
    )

    a = make_arma_signal(ARMA_MODEL_A.with_length(47506), seed=(0, 0))
    b = make_arma_signal(ARMA_MODEL_B.with_length(47505), seed=(0, 1))
    signal = np.concatenate([a, b])
    starts = window_starts(signal.size, 10000, 1000)
    cloud = embed_signal(signal, 10000, starts)
    assert cloud.shape[0] == 86
    coords = pcoa(pairwise_distances(cloud), 2).coordinates
    dend = constrained_complete_linkage(pairwise_distances(coords))
    seg = cut_segments(dend, 3)
    assert seg.k == 3
    labels = seg.labels()
    assert np.all(np.diff(labels) >= 0)


def test_arma_pair_cloud_layout():
    cloud, labels = arma_pair_cloud(500, segments_per_model=10, seed=0)
    assert cloud.shape == (20, 500)
    np.testing.assert_array_equal(labels, [0] * 10 + [1] * 10)
    # contiguous slices of one realization per model
    signal = make_arma_signal(ARMA_MODEL_A.with_length(5000), seed=(0, 0))
    np.testing.assert_array_equal(cloud[0], signal[:500])
    np.testing.assert_array_equal(cloud[9], signal[4500:])
