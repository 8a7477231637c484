"""Feasible sets: projections, membership, affine sup, argmins."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omgd.errors import ConfigError
from omgd.geometry import Ball, Box, Simplex, set_from_config


def simplex_grid_3(n):
    """All compositions (i, j, n-i-j)/n: a brute-force cover of simplex(3)."""
    pts = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            pts.append((i / n, j / n, (n - i - j) / n))
    return np.array(pts)


def test_ball_projection_radial_scaling():
    ball = Ball(np.zeros(2), 1.0)
    assert np.allclose(ball.project([2.0, 0.0]), [1.0, 0.0], atol=0)


def test_simplex_projection_identity_on_members():
    s = Simplex(3)
    member = np.array([0.2, 0.3, 0.5])
    assert np.allclose(s.project(member), member, atol=1e-15)


def test_simplex_projection_matches_bruteforce_grid():
    # independent oracle: quadratic minimization over a fine simplex grid
    target = np.array([1.0, 1.0, 0.0])
    grid = simplex_grid_3(400)
    best = grid[np.argmin(((grid - target) ** 2).sum(axis=1))]
    got = Simplex(3).project(target)
    assert np.linalg.norm(got - best) < 1.0 / 400 * 2
    assert np.allclose(got, [0.5, 0.5, 0.0], atol=1e-15)


def test_contains_examples():
    assert Simplex(2).contains([1.0, 0.0], 0.0)
    assert not Simplex(2).contains([0.6, 0.6], 1e-9)
    # norm([0.7072, 0.7072]) ~ 1.000132, inside the 1e-3 band
    assert Ball(np.zeros(2), 1.0).contains([0.7072, 0.7072], 1e-3)
    assert not Ball(np.zeros(2), 1.0).contains([0.7072, 0.7072], 1e-5)


def test_contains_rejects_negative_tol():
    with pytest.raises(ValueError):
        Simplex(2).contains([0.5, 0.5], -1.0)


def test_sup_abs_affine_examples():
    assert Simplex(3).sup_abs_affine(np.array([0.01, -0.01, 0.0]), 0.0) == pytest.approx(0.01, abs=0)
    assert Ball(np.zeros(2), 2.0).sup_abs_affine(np.array([3.0, 4.0]), 0.0) == pytest.approx(10.0, abs=0)
    for domain in (Ball(np.zeros(2), 2.0), Box([-1, -1], [1, 1]), Simplex(2)):
        assert domain.sup_abs_affine(np.zeros(2), 0.0) == 0.0


def test_sup_abs_affine_with_offsets():
    # ball not centered at the origin and a constant term
    ball = Ball(np.array([1.0, 0.0]), 2.0)
    w = np.array([3.0, 4.0])
    # |w.c + b| + r |w| = |3 + 1| + 10
    assert ball.sup_abs_affine(w, 1.0) == pytest.approx(14.0)
    box = Box([-1.0, 0.0], [2.0, 3.0])
    # range of w.x is [-3, 18], so sup |w.x - 5| = 8
    assert box.sup_abs_affine(np.array([3.0, 2.0]), -5.0) == pytest.approx(8.0)


@pytest.mark.parametrize(
    "domain",
    [Ball(np.array([0.4, -0.1]), 1.5), Box([-1.0, 0.2], [0.3, 2.0]), Simplex(3)],
    ids=["ball", "box", "simplex"],
)
def test_sup_abs_affine_matches_grid_search(domain):
    rng = np.random.default_rng(42)
    pts = domain.sample(100_000, rng)
    for _ in range(5):
        w = rng.uniform(-2, 2, domain.dimension)
        b = float(rng.uniform(-1, 1))
        sampled = np.max(np.abs(pts @ w + b))
        exact = domain.sup_abs_affine(w, b)
        assert sampled <= exact + 1e-12
        # 1e5 samples in dimension <= 3 cover the set well enough that the
        # sampled max sits within a coarse resolution bound of the true sup
        assert exact - sampled <= 0.05 * (np.linalg.norm(w) + 1.0)


@pytest.mark.parametrize(
    "domain",
    [Ball(np.array([0.3, -0.2, 0.1]), 1.3), Box([-1, -0.5, 0], [0.5, 1, 2]), Simplex(4)],
    ids=["ball", "box", "simplex"],
)
def test_projection_properties(domain):
    rng = np.random.default_rng(7)
    d = domain.dimension
    for _ in range(500):
        u = rng.uniform(-2.5, 2.5, d)
        v = rng.uniform(-2.5, 2.5, d)
        y = domain.sample(1, rng)[0]
        pu = domain.project(u)
        pv = domain.project(v)
        assert domain.contains(pu, 1e-12)
        assert np.linalg.norm(domain.project(pu) - pu) <= 1e-12
        assert np.linalg.norm(pu - pv) <= np.linalg.norm(u - v) + 1e-12
        assert np.linalg.norm(u - pu) <= np.linalg.norm(u - y) + 1e-12


@given(st.lists(st.floats(-50, 50), min_size=2, max_size=12))
@settings(max_examples=200, deadline=None)
def test_simplex_projection_always_feasible(vals):
    s = Simplex(len(vals))
    p = s.project(np.array(vals))
    assert s.contains(p, 1e-12)
    assert np.linalg.norm(s.project(p) - p) <= 1e-12


@given(
    st.lists(st.floats(-10, 10), min_size=2, max_size=6),
    st.floats(0.1, 5.0),
)
@settings(max_examples=200, deadline=None)
def test_ball_projection_always_feasible(vals, radius):
    ball = Ball(np.zeros(len(vals)), radius)
    p = ball.project(np.array(vals))
    assert ball.contains(p, 1e-12)


def test_argmin_affine():
    s = Simplex(3)
    assert np.array_equal(s.argmin_affine(np.array([0.0, 0.01, 0.02])), [1, 0, 0])
    # ties resolve to the smallest index
    assert np.array_equal(s.argmin_affine(np.array([0.01, 0.0, 0.0])), [0, 1, 0])
    box = Box([0.0, 0.0], [1.0, 1.0])
    assert np.array_equal(box.argmin_affine(np.array([1.0, -1.0])), [0, 1])
    assert np.array_equal(box.argmin_affine(np.array([0.0, 2.0])), [0, 0])
    ball = Ball(np.zeros(2), 2.0)
    assert np.allclose(ball.argmin_affine(np.array([3.0, 4.0])), [-1.2, -1.6])
    assert np.array_equal(ball.argmin_affine(np.zeros(2)), [0.0, 0.0])


def test_argmin_affine_vertices():
    s = Simplex(4)
    verts = s.argmin_affine_vertices(np.array([0.5, 0.0, 0.0, 1.0]))
    assert len(verts) == 2
    assert np.array_equal(verts[0], [0, 1, 0, 0])
    assert np.array_equal(verts[1], [0, 0, 1, 0])
    box = Box([0.0, 0.0], [1.0, 1.0])
    assert len(box.argmin_affine_vertices(np.array([0.0, 0.0]))) == 4
    assert Ball(np.zeros(2), 1.0).argmin_affine_vertices(np.zeros(2)) is None


def test_farthest_distance():
    assert Ball(np.zeros(2), 2.0).farthest_distance(np.array([1.0, 0.0])) == 3.0
    assert Box([0, 0], [1, 1]).farthest_distance(np.array([0.0, 0.0])) == pytest.approx(np.sqrt(2))
    # farthest simplex vertex from the barycenter
    s = Simplex(3)
    bary = s.default_start()
    assert s.farthest_distance(bary) == pytest.approx(np.sqrt(2.0 / 3.0))


def test_default_starts():
    assert np.array_equal(Ball(np.array([1.0, 2.0]), 1.0).default_start(), [1.0, 2.0])
    assert np.array_equal(Box([0, 0], [1, 3]).default_start(), [0.5, 1.5])
    assert np.allclose(Simplex(4).default_start(), 0.25)


def test_dimension_mismatch_errors():
    with pytest.raises(ValueError, match="shape"):
        Simplex(3).project([1.0, 0.0])
    with pytest.raises(ValueError, match="shape"):
        Ball(np.zeros(2), 1.0).contains([1.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="shape"):
        Box([0, 0], [1, 1]).sup_abs_affine(np.zeros(3), 0.0)


def test_invalid_constructions():
    with pytest.raises(ConfigError):
        Ball(np.zeros(2), 0.0)
    with pytest.raises(ConfigError):
        Box([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(ConfigError):
        Simplex(1)


def test_config_round_trip():
    for domain in (
        Ball(np.array([0.5, -1.0]), 2.5),
        Box([-1.0, 0.0], [1.0, 2.0]),
        Simplex(5),
    ):
        again = set_from_config(domain.to_config())
        assert type(again) is type(domain)
        assert again.to_config() == domain.to_config()
    with pytest.raises(ConfigError):
        set_from_config({"kind": "polytope"})
