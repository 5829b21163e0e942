import math

import numpy as np
import pytest

from robustkit.chi2 import chi2_quantile
from robustkit.errors import (AlphaOutOfRange, EmptySet, NotPositiveDefinite,
                              NotSymmetric, SeparationUnavailable, UnboundedSet)
from robustkit.sets import (EllipsoidalSet, GaussianConfidenceSet, GenericSet,
                            PolyhedralSet, detect_geometry,
                            gaussian_confidence_set, support_function)

from _oracles import poly_vertices


# --- polyhedral ---------------------------------------------------------------

def test_box_support_pinned():
    box = PolyhedralSet([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 1, 1, 1])
    assert box.contains([0.5, -0.5])
    assert not box.contains([1.2, 0])
    v, xi = box.support([2.0, -3.0])
    assert v == pytest.approx(5.0, abs=1e-9)
    assert xi == pytest.approx([1.0, -1.0])
    v, xi = box.support([0.0, 0.0])
    assert abs(v) < 1e-12 and box.contains(xi)


def test_interval_support():
    s = PolyhedralSet([[1.0], [-1.0]], [1.0, 0.0])   # [0, 1]
    v, xi = s.support([4.0])
    assert v == pytest.approx(4.0) and xi == pytest.approx([1.0])
    v, xi = s.support([-4.0])
    assert v == pytest.approx(0.0) and xi == pytest.approx([0.0])


def test_empty_rejected():
    with pytest.raises(EmptySet):
        PolyhedralSet([[1], [-1]], [0, -1])


def test_unbounded_rejected():
    with pytest.raises(UnboundedSet):
        PolyhedralSet([[1, 0], [0, 1]], [1, 1])


def test_diamond_support():
    diamond = PolyhedralSet([[1, 1], [1, -1], [-1, 1], [-1, -1]], [1, 1, 1, 1])
    v, xi = diamond.support([1.0, 0.0])
    assert v == pytest.approx(1.0, abs=1e-9)
    assert diamond.contains(xi, tol=1e-8)


def test_support_matches_vertex_enumeration():
    rng = np.random.default_rng(5150)
    for trial in range(40):
        k = int(rng.integers(1, 4))
        rows, rhs = [], []
        for j in range(k):
            e = [0.0] * k
            e[j] = 1.0
            rows.append(list(e)); rhs.append(float(rng.uniform(0.5, 2.0)))
            e[j] = -1.0
            rows.append(list(e)); rhs.append(float(rng.uniform(0.5, 2.0)))
        for _ in range(2):
            rows.append(list(rng.normal(size=k))); rhs.append(float(rng.uniform(0.5, 2.0)))
        s = PolyhedralSet(rows, rhs)
        verts = poly_vertices(rows, rhs)
        assert verts
        for _ in range(4):
            a = rng.normal(size=k)
            v, xi = s.support(a)
            brute = max(float(a @ w) for w in verts)
            assert v == pytest.approx(brute, abs=1e-8), trial
            assert float(a @ xi) == pytest.approx(v, abs=1e-8)
            assert s.contains(xi, tol=1e-7)


def test_support_sublinear_and_homogeneous():
    s = PolyhedralSet([[1, 1], [1, -1], [-1, 1], [-1, -1]], [2, 1, 1, 2])
    rng = np.random.default_rng(17)
    for _ in range(60):
        a, b = rng.normal(size=2), rng.normal(size=2)
        va = s.support(a)[0]
        vb = s.support(b)[0]
        vab = s.support(a + b)[0]
        assert vab <= va + vb + 1e-8
        t = float(rng.uniform(0.1, 3.0))
        assert s.support(t * a)[0] == pytest.approx(t * va, abs=1e-8)


# --- ellipsoidal ---------------------------------------------------------------

def test_axis_aligned_ellipsoid():
    ell = EllipsoidalSet([1.0, 2.0], [[4.0, 0.0], [0.0, 1.0]])
    assert ell.contains([3.0, 2.0])          # boundary point mean + (2, 0)
    assert not ell.contains([3.1, 2.0])
    v, xi = ell.support([1.0, 0.0])
    assert v == pytest.approx(3.0, abs=1e-12)
    assert xi == pytest.approx([3.0, 2.0])
    assert ell.mahalanobis_sq(xi) == pytest.approx(1.0, abs=1e-9)


def test_zero_direction_returns_mean():
    ell = EllipsoidalSet([1.0, 2.0], [[4.0, 0.0], [0.0, 1.0]])
    v, xi = ell.support([0.0, 0.0])
    assert v == 0.0
    assert xi == pytest.approx([1.0, 2.0])


def test_unit_ball_support():
    ball = EllipsoidalSet([0.0, 0.0], np.eye(2).tolist())
    v, xi = ball.support([3.0, 4.0])
    assert v == pytest.approx(5.0, abs=1e-12)
    assert xi == pytest.approx([0.6, 0.8])


def test_general_direction_closed_form():
    rng = np.random.default_rng(7)
    S = np.array([[2.0, 0.3], [0.3, 1.0]])
    e2 = EllipsoidalSet([0.5, -0.25], S)
    for _ in range(50):
        a = rng.normal(size=2)
        v, xi = e2.support(a)
        want = a @ e2.mean + math.sqrt(a @ S @ a)
        assert v == pytest.approx(want, abs=1e-10)
        assert float(a @ xi) == pytest.approx(v, abs=1e-9)
        assert e2.mahalanobis_sq(xi) <= 1 + 1e-9


def test_covariance_validation():
    with pytest.raises(NotPositiveDefinite):
        EllipsoidalSet([0, 0], [[1, 2], [2, 1]])
    with pytest.raises(NotSymmetric):
        EllipsoidalSet([0, 0], [[1, 0.5], [0.2, 1]])


# --- generic + geometry detection ----------------------------------------------

def test_affine_rows_detected_polyhedral():
    g = GenericSet(2)
    g.add_constraint(lin={0: 1.0}, sense="<=", rhs=1.0)
    g.add_constraint(lin={0: 1.0}, sense=">=", rhs=-1.0)
    g.add_constraint(lin={1: 1.0}, sense="<=", rhs=1.0)
    g.add_constraint(lin={1: 1.0}, sense=">=", rhs=-1.0)
    geo = g.geometry()
    assert geo.kind == "polyhedral"
    v, xi = support_function(g, [1.0, 1.0])
    assert v == pytest.approx(2.0, abs=1e-9)
    assert xi == pytest.approx([1.0, 1.0])
    assert g.contains([0.9, -0.9]) and not g.contains([0, 1.2])


def test_equality_split_into_two_rows():
    ge = GenericSet(2)
    ge.add_constraint(lin={0: 1.0, 1: 1.0}, sense="==", rhs=1.0)
    ge.add_constraint(lin={0: 1.0}, sense=">=", rhs=0.0)
    ge.add_constraint(lin={1: 1.0}, sense=">=", rhs=0.0)
    geo = ge.geometry()
    assert geo.kind == "polyhedral" and geo.mat.shape == (4, 2)
    assert ge.support([1.0, 0.0])[0] == pytest.approx(1.0, abs=1e-9)


def test_quadratic_detected_ellipsoidal():
    # (xi0 - 1)^2 + (xi1 - 2)^2 / 4 <= 1, expanded
    gq = GenericSet(2)
    gq.add_constraint(lin={0: -2.0, 1: -1.0},
                      quad={(0, 0): 1.0, (1, 1): 0.25},
                      constant=2.0, sense="<=", rhs=1.0)
    geo = gq.geometry()
    assert geo.kind == "ellipsoidal"
    assert geo.mean == pytest.approx([1.0, 2.0])
    assert np.asarray(geo.cov) == pytest.approx(np.array([[1.0, 0.0], [0.0, 4.0]]))
    assert gq.support([0.0, 1.0])[0] == pytest.approx(4.0, abs=1e-9)


def test_cross_term_quadratic_recovers_covariance():
    S = np.array([[2.0, 0.3], [0.3, 1.0]])
    Sinv = np.linalg.inv(S)
    gc = GenericSet(2)
    gc.add_constraint(quad={(0, 0): Sinv[0, 0], (1, 1): Sinv[1, 1],
                            (0, 1): 2 * Sinv[0, 1]},
                      sense="<=", rhs=1.0)
    geo = gc.geometry()
    assert geo.kind == "ellipsoidal"
    assert geo.mean == pytest.approx([0.0, 0.0], abs=1e-12)
    assert np.asarray(geo.cov) == pytest.approx(S, abs=1e-10)


def test_ge_quadratic_flips_sign():
    gf = GenericSet(2)
    gf.add_constraint(quad={(0, 0): -1.0, (1, 1): -1.0}, sense=">=", rhs=-1.0)
    geo = gf.geometry()
    assert geo.kind == "ellipsoidal"
    assert np.asarray(geo.cov) == pytest.approx(np.eye(2))


def test_singular_quadratic_unsupported():
    gp = GenericSet(2)
    gp.add_constraint(lin={1: -1.0}, quad={(0, 0): 1.0}, sense="<=", rhs=0.0)
    assert gp.geometry().kind == "unsupported"
    with pytest.raises(SeparationUnavailable):
        gp.support([1.0, 0.0])


def test_mixed_quadratic_affine_unsupported():
    gm = GenericSet(2)
    gm.add_constraint(quad={(0, 0): 1.0, (1, 1): 1.0}, sense="<=", rhs=1.0)
    gm.add_constraint(lin={0: 1.0}, sense="<=", rhs=0.5)
    assert gm.geometry().kind == "unsupported"
    assert gm.contains([0.2, 0.5]) and not gm.contains([0.6, 0.0])


def test_detect_geometry_round_trips_to_real_set():
    g = GenericSet(1)
    g.add_constraint(lin={0: 1.0}, sense="<=", rhs=2.0)
    g.add_constraint(lin={0: -1.0}, sense="<=", rhs=0.0)
    geo = detect_geometry(g)
    s = geo.as_set()
    assert isinstance(s, PolyhedralSet)
    assert s.support([1.0])[0] == pytest.approx(2.0)


# --- gaussian confidence --------------------------------------------------------

def test_scaling_matches_chi2_quantile():
    rng = np.random.default_rng(7)
    for k, alpha in [(1, 0.9), (2, 0.95), (3, 0.8)]:
        mu = rng.normal(size=k)
        Araw = rng.normal(size=(k, k))
        cov = Araw @ Araw.T + 0.5 * np.eye(k)
        gs = gaussian_confidence_set(mu, cov, alpha)
        assert isinstance(gs, GaussianConfidenceSet)
        assert isinstance(gs, EllipsoidalSet)
        assert np.asarray(gs.cov) == pytest.approx(chi2_quantile(alpha, k) * cov)
        assert np.asarray(gs.base_cov) == pytest.approx(cov)
        assert gs.alpha == alpha


def test_alpha_validation():
    with pytest.raises(AlphaOutOfRange):
        gaussian_confidence_set([0.0], [[1.0]], 1.0)
    with pytest.raises(AlphaOutOfRange):
        gaussian_confidence_set([0.0], [[1.0]], 0.0)


def test_monte_carlo_coverage_smoke():
    # the full 1e5-sample sweep lives in the acceptance suite
    rng = np.random.default_rng(99)
    gs = gaussian_confidence_set([0.5, -0.2], [[1.0, 0.2], [0.2, 0.5]], 0.9)
    pts = rng.multivariate_normal([0.5, -0.2], [[1.0, 0.2], [0.2, 0.5]], size=20_000)
    frac = np.mean([gs.contains(p) for p in pts])
    assert abs(frac - 0.9) < 0.02


def test_support_function_dispatch():
    box = PolyhedralSet([[1], [-1]], [1, 1])
    ell = EllipsoidalSet([0.0], [[1.0]])
    assert support_function(box, [2.0])[0] == pytest.approx(2.0)
    assert support_function(ell, [2.0])[0] == pytest.approx(2.0)
