import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffwolf.exactlin import SQRT3, Scalar, dot, vector
from cliffwolf.rootsys import (
    LieType,
    build_root_system,
    contains_minus_id,
    iter_orbit,
    orbit_size,
    reflect,
    weyl_group_order,
    weyl_orbit,
)


def rs_of(family, rank, frame=None):
    return build_root_system(LieType(family, rank), frame)


@pytest.mark.parametrize("family,rank,count", [
    ("A", 1, 2), ("A", 2, 6), ("A", 4, 20), ("D", 3, 12), ("D", 4, 24), ("D", 5, 40),
])
def test_root_counts(family, rank, count):
    assert len(rs_of(family, rank).roots) == count


@pytest.mark.parametrize("frame", ["listed", "a5a1"])
def test_e6_root_count_and_split(frame):
    rs = rs_of("E6", 6, frame)
    assert len(rs.roots) == 72
    assert len(rs.simple_roots) == 6
    if frame == "listed":
        first = [r for r in rs.roots if not r[5]]
        assert len(first) == 40
        assert all(r[5] in (SQRT3 / 2, -SQRT3 / 2) for r in rs.roots if r[5])


@pytest.mark.parametrize("family,rank", [("A", 0), ("D", 2), ("E6", 5), ("B", 3)])
def test_invalid_types(family, rank):
    with pytest.raises(ValueError):
        LieType(family, rank)


@pytest.mark.parametrize("family,rank,frame", [
    ("A", 3, None), ("D", 4, None), ("D", 5, None), ("E6", 6, "listed"), ("E6", 6, "a5a1"),
])
def test_root_system_closure(family, rank, frame):
    rs = rs_of(family, rank, frame)
    norms = {dot(r, r) for r in rs.roots}
    assert norms == {Scalar(2)}
    for r in rs.roots:
        assert rs.has_root(tuple(-e for e in r))
        for s in rs.roots:
            assert rs.has_root(reflect(r, s))


def test_cartan_matrix_is_symmetric_with_twos():
    for rs in (rs_of("A", 4), rs_of("D", 5), rs_of("E6", 6, "a5a1")):
        cm = rs.cartan
        n = len(cm)
        assert all(cm[i][i] == 2 for i in range(n))
        assert all(cm[i][j] == cm[j][i] for i in range(n) for j in range(n))


def test_e6_basis_is_a_simple_system(e6):
    cm = e6.cartan
    assert all(cm[i][j] <= 0 for i in range(6) for j in range(6) if i != j)


def test_reflect_examples():
    assert reflect(vector([1, 0]), vector([1, 0])) == vector([-1, 0])
    v = vector([0, 5])
    assert reflect(v, vector([1, 0])) == v
    a, b, c = Fraction(3), Fraction(-1, 2), Fraction(-5, 2)
    assert reflect(vector([a, b, c]), vector([1, -1, 0])) == vector([b, a, c])
    with pytest.raises(ValueError):
        reflect(v, vector([0, 0]))


q = st.fractions(min_value=-9, max_value=9, max_denominator=9)


@given(st.lists(q, min_size=3, max_size=3), st.lists(q, min_size=3, max_size=3))
def test_reflect_involutive_and_isometric(v, r):
    v, r = vector(v), vector(r)
    if not any(r):
        return
    w = reflect(v, r)
    assert reflect(w, r) == v
    assert dot(w, w) == dot(v, v)


def test_orbit_of_zero():
    for rs in (rs_of("A", 2), rs_of("D", 4), rs_of("E6", 6)):
        assert weyl_orbit(rs, [0] * rs.ambient_dim).points == (vector([0] * rs.ambient_dim),)


def test_a2_orbit_is_all_permutations():
    orbit = weyl_orbit(rs_of("A", 2), (1, 0, -1))
    assert set(orbit.points) == {vector(p) for p in itertools.permutations((1, 0, -1))}


def test_a_n_requires_sum_zero():
    with pytest.raises(ValueError):
        weyl_orbit(rs_of("A", 2), (1, 1, 1))


@pytest.mark.parametrize("family,rank,order", [("A", 3, 24), ("A", 4, 120), ("D", 4, 192), ("D", 5, 1920)])
def test_weyl_group_orders(family, rank, order):
    assert weyl_group_order(rs_of(family, rank)) == order


def test_e6_regular_orbit_size(e6_listed, e6):
    # two unrelated regular points, one per frame
    x = (Fraction(7), Fraction(3), Fraction(1), Fraction(-2), Fraction(-4), Scalar(0, Fraction(1, 5)))
    # a nonzero entry sum keeps y off the (s, ..., s) mirror
    y = (Fraction(17), Fraction(6), Fraction(1), Fraction(-3), Fraction(-8), Fraction(-12))
    assert orbit_size(e6_listed, x) == 51840
    assert orbit_size(e6, y) == 51840


def test_contains_minus_id_table():
    assert contains_minus_id(LieType("A", 1))
    assert not contains_minus_id(LieType("A", 2))
    assert contains_minus_id(LieType("D", 4))
    assert not contains_minus_id(LieType("D", 5))
    assert not contains_minus_id(LieType("E6", 6))


def test_orbit_symmetry_is_per_orbit_not_group_level():
    rs = rs_of("A", 2)
    assert weyl_orbit(rs, (1, 0, -1)).is_symmetric()
    assert not weyl_orbit(rs, (2, -1, -1)).is_symmetric()
    assert not contains_minus_id(rs.lie_type)


@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_d_even_orbits_are_symmetric(x):
    assert weyl_orbit(rs_of("D", 4), x).is_symmetric()


@st.composite
def a3_points(draw):
    xs = draw(st.lists(q, min_size=3, max_size=3))
    return xs + [-sum(xs)]


@given(a3_points())
def test_orbit_norms_constant_and_idempotent(x):
    rs = rs_of("A", 3)
    orbit = weyl_orbit(rs, x)
    r2 = dot(vector(x), vector(x))
    assert all(dot(p, p) == r2 for p in orbit)
    p = orbit.points[-1]
    assert set(weyl_orbit(rs, p).points) == set(orbit.points)
    # closed under every simple reflection
    for s in rs.simple_roots:
        assert all(reflect(p, s) in orbit for p in orbit)


def test_e6_orbit_points_stay_in_frame(e6):
    pts = list(iter_orbit(e6, (1, 1, 0, 0, -1, -1)))
    assert all(e6.in_cartan_space(p) for p in pts)
    assert len(pts) == len(set(pts))
