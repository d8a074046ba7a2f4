import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffwolf import liegroup
from cliffwolf.randers import (
    DegenerateDirectionError,
    NonConvexError,
    NotSPDError,
    RandersData,
    ShiftInvalidError,
    constant_length_test,
    eval_F,
    indicatrix_quadric,
    is_round_sphere,
    make_randers,
    navigation_to_randers,
    shift_indicatrix,
)

F = Fraction
I2 = [[1, 0], [0, 1]]


def eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


# -- construction ------------------------------------------------------------------


def test_make_randers_examples():
    d = make_randers(I2, I2, [0, 0])
    assert d.exact and d.convexity() == 0
    with pytest.raises(NonConvexError):
        make_randers(I2, I2, [1, 0])
    d = make_randers([[F(16, 9), 0], [0, F(4, 3)]], I2, [F(-2, 3), 0])
    assert d.convexity() == F(1, 4)


def test_make_randers_rejects_non_spd():
    with pytest.raises(NotSPDError):
        make_randers([[1, 2], [2, 1]], I2, [0, 0])
    with pytest.raises(NotSPDError):
        make_randers(I2, [[1, 1], [0, 1]], [0, 0])
    with pytest.raises(NotSPDError):
        make_randers(np.diag([1.0, -1.0]), np.eye(2), np.zeros(2))


def test_float_mode_inferred():
    d = make_randers(np.eye(2), np.eye(2), [0.25, 0.0])
    assert d.mode == "float"
    assert d.convexity() == pytest.approx(0.0625)


# -- eval_F ---------------------------------------------------------------------------


def test_eval_F_examples():
    assert eval_F(make_randers(I2, I2, [0, 0]), [1, 0]) == 1
    assert eval_F(make_randers(I2, I2, [F(1, 2), 0]), [-1, 0]) == F(1, 2)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.floats(0.01, 50))
def test_eval_F_homogeneous_and_positive(y, lam):
    d = make_randers(np.diag([1.0, 2.0, 3.0]), np.eye(3), [0.3, -0.2, 0.1])
    y = np.array(y)
    if np.linalg.norm(y) < 1e-6:
        return
    f = eval_F(d, y)
    assert f > 0
    assert eval_F(d, lam * y) == pytest.approx(lam * f, rel=1e-12)


# -- indicatrix ------------------------------------------------------------------------


def test_indicatrix_examples():
    A = [[2, 1], [1, 3]]
    q = indicatrix_quadric(make_randers(A, I2, [0, 0]))
    assert np.array_equal(q.M, np.array(A, dtype=object))
    assert not any(q.b) and q.c == -1
    s = F(1, 3)
    q = indicatrix_quadric(make_randers(I2, I2, [s, 0]))
    assert np.array_equal(q.M, np.array([[1 - s * s, 0], [0, 1]], dtype=object))


def _circle_point(t):
    """Rational point on the unit circle."""
    return F(1 - t * t, 1 + t * t), F(2 * t, 1) / (1 + t * t)


@pytest.mark.parametrize("seed", range(5))
def test_exact_rays_satisfy_quadric(seed):
    rng = random.Random(seed)
    W = [F(rng.randint(-4, 4), 11), F(rng.randint(-4, 4), 13)]
    d = navigation_to_randers(I2, W)
    q = indicatrix_quadric(d)
    for _ in range(50):
        c, s = _circle_point(F(rng.randint(-30, 30), rng.randint(1, 30)))
        y = np.array([W[0] + c, W[1] + s], dtype=object)
        if not any(y):
            continue
        assert eval_F(d, y) == 1
        assert q.evaluate(y) == 0


def test_float_rays_satisfy_quadric():
    rng = np.random.default_rng(5)
    L = rng.standard_normal((3, 3))
    A = L @ L.T + 3 * np.eye(3)
    d = make_randers(A, np.eye(3), [0.2, -0.1, 0.3])
    q = indicatrix_quadric(d)
    for _ in range(50):
        u = rng.standard_normal(3)
        y = u / eval_F(d, u)
        assert eval_F(d, y) == pytest.approx(1.0, abs=1e-14)
        assert abs(q.evaluate(y)) < 1e-12


# -- round spheres and navigation ---------------------------------------------------


def test_round_sphere_examples():
    s = is_round_sphere(make_randers(I2, I2, [0, 0]))
    assert list(s.center) == [0, 0] and s.radius == 1
    s = is_round_sphere(make_randers([[F(16, 9), 0], [0, F(4, 3)]], I2, [F(-2, 3), 0]))
    assert list(s.center) == [F(1, 2), 0]
    assert s.radius_sq == 1 and s.scale == F(4, 3)
    assert is_round_sphere(make_randers([[2, 0], [0, 1]], I2, [0, 0])) is None


def test_navigation_examples():
    d = navigation_to_randers(I2, [0, 0])
    assert np.array_equal(d.A, d.B) and not any(d.V)
    d = navigation_to_randers(I2, [F(1, 2), 0])
    assert np.array_equal(d.A, np.array([[F(16, 9), 0], [0, F(4, 3)]], dtype=object))
    assert list(d.w) == [F(-2, 3), 0]
    assert eval_F(d, [F(3, 2), 0]) == 1
    with pytest.raises(NonConvexError):
        navigation_to_randers(I2, [1, 0])


def _random_spd(rng, n):
    L = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    return [[sum((L[i][k] * L[j][k] for k in range(n)), F(int(i == j))) for j in range(n)]
            for i in range(n)]


def _random_inside(rng, B, n):
    while True:
        W = [F(rng.randint(-5, 5), rng.randint(3, 12)) for _ in range(n)]
        if sum(W[i] * B[i][j] * W[j] for i in range(n) for j in range(n)) < 1:
            return W


@pytest.mark.parametrize("seed", range(100))
def test_navigation_round_trip(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    B = _random_spd(rng, n) if seed % 2 else eye(n)
    W = _random_inside(rng, B, n)
    s = is_round_sphere(navigation_to_randers(B, W))
    assert s is not None
    assert list(s.center) == W
    assert s.radius_sq == 1


# -- shifts ---------------------------------------------------------------------------


def test_shift_by_zero_is_identity():
    d = navigation_to_randers(I2, [F(1, 3), F(-1, 4)])
    assert shift_indicatrix(d, [0, 0]) == d


def test_shift_round_sphere_to_center_gives_riemannian():
    B = [[2, 1], [1, 2]]
    d = navigation_to_randers(B, [F(1, 5), F(-1, 7)])
    c = is_round_sphere(d).center
    r = shift_indicatrix(d, c)
    assert not any(r.V)
    lam = r.A[0, 0] / r.B[0, 0]
    assert np.array_equal(r.A, lam * r.B)


def test_shift_invalid():
    d = make_randers(I2, I2, [0, 0])
    with pytest.raises(ShiftInvalidError):
        shift_indicatrix(d, [1, 0])
    with pytest.raises(ShiftInvalidError):
        shift_indicatrix(d, [F(3, 5), F(4, 5)])


@pytest.mark.parametrize("seed", range(20))
def test_shift_involution(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(2, 4)
    A = _random_spd(rng, n)
    B = _random_spd(rng, n)
    V = [F(rng.randint(-1, 1), rng.randint(8, 20)) for _ in range(n)]
    try:
        d = make_randers(A, B, V)
    except NonConvexError:
        return
    X = [F(rng.randint(-1, 1), rng.randint(10, 30)) for _ in range(n)]
    try:
        there = shift_indicatrix(d, X)
    except ShiftInvalidError:
        return
    assert shift_indicatrix(there, [-x for x in X]) == d
    assert there.convexity() < 1


def test_json_roundtrip():
    d = navigation_to_randers([[2, 1], [1, 2]], [F(1, 5), F(-1, 7)])
    assert RandersData.from_json(d.to_json()) == d
    f = d.as_float()
    assert RandersData.from_json(f.to_json()) == f


# -- constant length ----------------------------------------------------------------


@pytest.fixture(scope="module")
def su3_ads():
    basis = liegroup.algebra_basis("su", 3)
    rng = np.random.default_rng(7)
    return [liegroup.ad_matrix(liegroup.haar_sample("su", 3, rng), basis) for _ in range(200)]


def apply_ad(M, y):
    return M @ y


def test_riemannian_bi_invariant_is_constant(su3_ads):
    d = make_randers(np.eye(8), np.eye(8), np.zeros(8))
    X = np.arange(1.0, 9.0)
    rep = constant_length_test(d, X, np.zeros(8), su3_ads, apply_ad)
    assert rep.variation < 1e-9
    assert rep.min == pytest.approx(np.linalg.norm(X))


def test_round_sphere_constant_length(su3_ads):
    rng = np.random.default_rng(3)
    W = rng.standard_normal(8)
    W *= 0.4 / np.linalg.norm(W)
    d = navigation_to_randers(np.eye(8), W)
    s = is_round_sphere(d)
    X = rng.standard_normal(8)
    X *= s.radius / np.linalg.norm(X)
    rep = constant_length_test(d, X, -s.center, su3_ads, apply_ad)
    assert rep.variation < 1e-9
    assert rep.max == pytest.approx(1.0)


def test_non_round_varies(su3_ads):
    A = np.eye(8)
    A[0, 0] += 0.1
    d = make_randers(A, np.eye(8), np.zeros(8))
    X = np.linspace(0.3, 1.1, 8)
    rep = constant_length_test(d, X, np.zeros(8), su3_ads, apply_ad)
    assert rep.variation > 1e-3


def test_degenerate_direction_reported():
    d = make_randers(np.eye(2), np.eye(2), np.zeros(2))
    with pytest.raises(DegenerateDirectionError):
        constant_length_test(d, [1.0, 0.0], [1.0, 0.0], [np.eye(2)], apply_ad)
    with pytest.raises(ValueError):
        constant_length_test(d, [1.0, 0.0], [0.0, 0.0], [], apply_ad)
