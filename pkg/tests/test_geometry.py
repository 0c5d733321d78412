import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import helmert

from umlab import (
    DegenerateTriangleError,
    InputValidationError,
    condensed_index,
    condensed_size,
    diffuseness,
    diffuseness_coefficient,
    pairwise_distances,
    squareform_distances,
    triangle_angles,
)


def test_pythagorean_pair():
    d = pairwise_distances([[0.0, 0.0], [3.0, 4.0]])
    assert d.shape == (1,)
    assert d[0] == pytest.approx(5.0)


def test_identical_rows_distance_zero():
    d = pairwise_distances([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
    assert d[0] == 0.0


def test_hypercube_diagonal_high_dim():
    m = 20000
    cloud = np.vstack([np.zeros(m), np.ones(m)])
    assert pairwise_distances(cloud)[0] == pytest.approx(math.sqrt(m))


def test_condensed_layout_matches_pair_order():
    rng = np.random.default_rng(0)
    cloud = rng.normal(size=(7, 3))
    d = pairwise_distances(cloud)
    for i, j in itertools.combinations(range(7), 2):
        expected = np.linalg.norm(cloud[i] - cloud[j])
        assert d[condensed_index(7, i, j)] == pytest.approx(expected)
    assert d.size == condensed_size(7)


def test_column_permutation_invariance():
    rng = np.random.default_rng(1)
    cloud = rng.normal(size=(10, 40))
    d1 = pairwise_distances(cloud)
    d2 = pairwise_distances(cloud[:, rng.permutation(40)])
    np.testing.assert_allclose(d1, d2, rtol=1e-12)


def test_triangle_inequality_exhaustive_small_n():
    for seed in range(5):
        cloud = np.random.default_rng(seed).normal(size=(8, 5))
        w = squareform_distances(pairwise_distances(cloud))
        for i, j, k in itertools.permutations(range(8), 3):
            assert w[i, k] <= w[i, j] + w[j, k] + 1e-12


def test_non_finite_input_rejected():
    with pytest.raises(InputValidationError):
        pairwise_distances([[0.0, np.inf], [1.0, 2.0]])


def test_equilateral_triangle_angles():
    a = triangle_angles([0, 0], [1, 0], [0.5, math.sqrt(3) / 2])
    assert a.alpha == pytest.approx(math.pi / 3)
    assert a.beta == pytest.approx(math.pi / 3)
    assert a.gamma == pytest.approx(math.pi / 3)


def test_right_triangle_angles():
    # legs 3 and 4, hypotenuse 5: angles arctan(3/4), arctan(4/3), pi/2
    a = triangle_angles([0, 0], [4, 0], [0, 3])
    assert a.alpha == pytest.approx(math.atan2(3, 4))
    assert a.beta == pytest.approx(math.atan2(4, 3))
    assert a.gamma == pytest.approx(math.pi / 2)


def test_angles_sorted_and_sum_to_pi():
    rng = np.random.default_rng(3)
    for _ in range(50):
        pts = rng.normal(size=(3, 4))
        a = triangle_angles(*pts)
        assert a.alpha <= a.beta <= a.gamma
        assert abs(a.alpha + a.beta + a.gamma - math.pi) <= 1e-9


def test_coincident_points_degenerate():
    with pytest.raises(DegenerateTriangleError):
        triangle_angles([0, 0], [0, 0], [1, 1])


def test_collinear_points_degenerate():
    with pytest.raises(DegenerateTriangleError):
        triangle_angles([0.0, 0.0], [1.0, 0.0], [2.0, 0.0])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_angle_sum_property_random_clouds(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(3, 6))
    try:
        a = triangle_angles(*pts)
    except DegenerateTriangleError:
        return
    assert abs(a.alpha + a.beta + a.gamma - math.pi) <= 1e-9


def test_diffuseness_identity_spectrum():
    # five points whose sample covariance is exactly the 4x4 identity
    cloud = 2.0 * helmert(5, full=True)[1:].T
    result = diffuseness(cloud)
    np.testing.assert_allclose(result.eigenvalues, np.ones(4), atol=1e-12)
    assert result.coefficient == pytest.approx(0.25, abs=1e-12)


def test_diffuseness_rank_one():
    t = np.linspace(0, 1, 9)[:, None]
    cloud = t @ np.array([[1.0, 2.0, -1.0]])
    result = diffuseness(cloud)
    assert result.eigenvalues.size == 1
    assert result.coefficient == pytest.approx(1.0)


def test_diffuseness_coefficient_examples():
    assert diffuseness_coefficient([1.0, 1.0, 1.0, 1.0]) == pytest.approx(0.25)
    assert diffuseness_coefficient([1.0]) == pytest.approx(1.0)


def test_diffuseness_large_gaussian_cloud():
    cloud = np.random.default_rng(7).normal(size=(100, 2000))
    result = diffuseness(cloud)
    # independent oracle: eigendecomposition of the full m x m covariance
    full_spectrum = np.linalg.eigvalsh(np.cov(cloud.T))
    full_spectrum = np.clip(full_spectrum, 0, None)
    oracle = float((full_spectrum**2).sum() / full_spectrum.sum() ** 2)
    assert result.coefficient == pytest.approx(oracle, rel=1e-6)
    assert result.coefficient < 0.05
    assert result.eigenvalues.size <= 99


def test_diffuseness_scale_invariance():
    cloud = np.random.default_rng(11).normal(size=(20, 30))
    c1 = diffuseness(cloud).coefficient
    c2 = diffuseness(cloud * 37.5).coefficient
    assert c1 == pytest.approx(c2, rel=1e-9)


def test_diffuseness_bounds():
    rng = np.random.default_rng(13)
    for _ in range(10):
        cloud = rng.normal(size=(6, 12))
        result = diffuseness(cloud)
        rank = result.eigenvalues.size
        assert 1.0 / rank - 1e-12 <= result.coefficient <= 1.0 + 1e-12


def test_diffuseness_needs_two_points():
    with pytest.raises(InputValidationError):
        diffuseness(np.ones((1, 5)))
