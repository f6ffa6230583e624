import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortex_tda.errors import ConfigError, FiltrationSizeError
from vortex_tda.rips import build_vr_filtration, enclosing_radius, pairwise_distances
from vortex_tda.validation import circle_points, equilateral_triangle, unit_square

SQRT2 = math.sqrt(2)


def test_distance_basics():
    assert pairwise_distances([[1.0, 2.0], [1.0, 2.0]])[0, 1] == 0.0
    assert pairwise_distances([[0.0, 0.0], [3.0, 4.0]])[0, 1] == 5.0


def test_distances_match_per_pair_recomputation():
    pts = np.random.default_rng(0).uniform(size=(10, 8))
    dm = pairwise_distances(pts)
    for i in range(10):
        for j in range(10):
            assert abs(dm[i, j] - math.dist(pts[i], pts[j])) < 1e-12
    assert np.array_equal(dm, dm.T)
    assert np.all(np.diag(dm) == 0)


def test_enclosing_radius():
    assert enclosing_radius(pairwise_distances([[0.0, 0.0]])) == 0.0
    assert enclosing_radius(pairwise_distances(unit_square())) == pytest.approx(SQRT2, abs=1e-15)
    assert enclosing_radius(pairwise_distances(equilateral_triangle(2.5))) == pytest.approx(2.5)


def test_three_equidistant_points():
    dm = np.ones((3, 3)) - np.eye(3)
    f = build_vr_filtration(dm, max_dim=2, r_max=2.0)
    assert [(s.vertices, s.weight) for s in f] == [
        ((0,), 0.0), ((1,), 0.0), ((2,), 0.0),
        ((0, 1), 1.0), ((0, 2), 1.0), ((1, 2), 1.0),
        ((0, 1, 2), 1.0),
    ]


def test_unit_square_hand_enumeration():
    f = build_vr_filtration(pairwise_distances(unit_square()), max_dim=2, r_max=1.5)
    by = lambda d, w: sorted(s.vertices for s in f if s.dim == d and math.isclose(s.weight, w))  # noqa: E731
    assert by(0, 0.0) == [(0,), (1,), (2,), (3,)]
    assert by(1, 1.0) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert by(1, SQRT2) == [(0, 2), (1, 3)]
    assert by(2, SQRT2) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    assert len(f) == 14


def test_below_min_distance_is_vertices_only():
    pts = np.random.default_rng(5).uniform(size=(8, 3))
    dm = pairwise_distances(pts)
    r = dm[dm > 0].min() / 2
    f = build_vr_filtration(dm, 2, r)
    assert all(s.dim == 0 for s in f) and len(f) == 8


def test_default_r_max_is_enclosing_radius():
    dm = pairwise_distances(circle_points(6))
    f = build_vr_filtration(dm)
    assert f.r_max == enclosing_radius(dm)


def test_size_guard_names_scale():
    dm = pairwise_distances(np.random.default_rng(0).uniform(size=(20, 3)))
    with pytest.raises(FiltrationSizeError, match="r_max"):
        build_vr_filtration(dm, 2, 10.0, max_simplices=100)


def test_bad_arguments():
    with pytest.raises(ConfigError):
        build_vr_filtration(np.zeros((3, 3)), max_dim=0)
    with pytest.raises(ConfigError):
        build_vr_filtration(np.zeros((3, 3)), r_max=-1.0)


def test_dump_format():
    f = build_vr_filtration(np.ones((2, 2)) - np.eye(2), 1, 2.0)
    assert f.dump() == "0.0 0 0\n0.0 0 1\n1.0 1 0 1\n"


def random_dm(n, seed, dim=4):
    return pairwise_distances(np.random.default_rng(seed).uniform(size=(n, dim)))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 10_000), max_dim=st.integers(1, 3))
def test_filtration_invariants(n, seed, max_dim):
    dm = random_dm(n, seed)
    f = build_vr_filtration(dm, max_dim)
    pos = f.position
    keys = [(s.weight, s.dim, s.vertices) for s in f]
    assert keys == sorted(keys)
    for j, s in enumerate(f):
        assert list(s.vertices) == sorted(set(s.vertices))
        assert s.dim <= max_dim and s.weight <= f.r_max
        pair_max = max((dm[a, b] for a, b in combinations(s.vertices, 2)), default=0.0)
        assert s.weight == pair_max
        for face in combinations(s.vertices, len(s.vertices) - 1):
            if face:
                assert pos[face] < j and f[pos[face]].weight <= s.weight


@pytest.mark.parametrize("n, d", [(6, 2), (8, 3), (10, 2), (7, 4)])
def test_count_without_truncation(n, d):
    f = build_vr_filtration(random_dm(n, n), d, math.inf)
    assert len(f) == sum(math.comb(n, k + 1) for k in range(d + 1))


@pytest.mark.parametrize("lam", [0.25, 2.0, 8.0])
def test_scale_equivariance_exact(lam):
    # powers of two scale without rounding, so equality is exact
    dm = random_dm(12, 7)
    f = build_vr_filtration(dm, 2)
    g = build_vr_filtration(lam * dm, 2)
    assert [s.vertices for s in f] == [s.vertices for s in g]
    assert [lam * s.weight for s in f] == [s.weight for s in g]


def test_scale_equivariance_general():
    dm = random_dm(12, 8)
    f = build_vr_filtration(dm, 2)
    g = build_vr_filtration(1.7 * dm, 2)
    assert len(f) == len(g)
    np.testing.assert_allclose(1.7 * f.weights, g.weights, rtol=1e-14)
