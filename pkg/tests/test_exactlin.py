from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from cliffwolf.exactlin import (
    SQRT3,
    ExactMatrix,
    Scalar,
    affine_rank,
    as_scalar,
    determinant,
    dot,
    format_scalar,
    inverse,
    is_positive_definite,
    leading_minors,
    null_space,
    parse_scalar,
    rank,
    vector,
)

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(Scalar, small_q, small_q)


def mat(rows):
    return ExactMatrix(rows)


# -- Scalar -----------------------------------------------------------------


def test_sqrt3_squares_to_three():
    assert SQRT3 * SQRT3 == 3
    assert SQRT3.sign() == 1


@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1


@given(scalars)
def test_zero_iff_both_parts_zero(x):
    assert (not x) == (x.a == 0 and x.b == 0)


@given(scalars)
def test_sign_matches_float(x):
    f = float(x)
    assume(abs(f) > 1e-9)
    assert x.sign() == (1 if f > 0 else -1)


@pytest.mark.parametrize("text,a,b", [
    ("3/2", Fraction(3, 2), 0),
    ("1/2+1/2r3", Fraction(1, 2), Fraction(1, 2)),
    ("-r3", 0, -1),
    ("2r3", 0, 2),
    ("-1/3-5/7r3", Fraction(-1, 3), Fraction(-5, 7)),
    ("0.25", Fraction(1, 4), 0),
])
def test_parse_scalar(text, a, b):
    s = parse_scalar(text)
    assert s == Scalar(a, b)
    assert parse_scalar(format_scalar(s)) == s


def test_parse_scalar_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("1/2r3x")


# -- rank / null space ---------------------------------------------------------


def test_rank_examples():
    assert rank(ExactMatrix.identity(3)) == 3
    assert rank(ExactMatrix.zeros(2, 3)) == 0
    m = mat([[1, SQRT3], [SQRT3, 3]])
    # second row is sqrt3 times the first; determinant check
    assert m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] == 0
    assert rank(m) == 1


def test_null_space_examples():
    assert null_space(ExactMatrix.identity(3)) == []
    (v,) = null_space(mat([[1, -1]]))
    assert v[0] == v[1] != 0
    (v,) = null_space(mat([[1, SQRT3]]))
    # proportional to (-sqrt3, 1)
    assert v[0] * 1 == v[1] * (-SQRT3)
    assert 1 * v[0] + SQRT3 * v[1] == 0


def _float_rank(rows, tol=1e-9):
    """Partial-pivoting elimination on floats; returns (rank, smallest pivot)."""
    a = [[float(x) for x in r] for r in rows]
    nr, nc = len(a), len(a[0])
    r = 0
    margin = float("inf")
    for c in range(nc):
        if r == nr:
            break
        p = max(range(r, nr), key=lambda k: abs(a[k][c]))
        if abs(a[p][c]) <= tol:
            continue
        a[r], a[p] = a[p], a[r]
        margin = min(margin, abs(a[r][c]))
        for k in range(r + 1, nr):
            f = a[k][c] / a[r][c]
            for j in range(c, nc):
                a[k][j] -= f * a[r][j]
        r += 1
    return r, margin


small_int = st.integers(-4, 4)


@st.composite
def exact_matrices(draw, max_dim=5, irrational=True):
    nr = draw(st.integers(1, max_dim))
    nc = draw(st.integers(1, max_dim))
    rows = []
    for _ in range(nr):
        row = []
        for _ in range(nc):
            a = draw(small_int)
            b = draw(small_int) if irrational and draw(st.booleans()) else 0
            row.append(Scalar(a, b))
        rows.append(row)
    # sometimes plant a dependent row
    if nr > 1 and draw(st.booleans()):
        k = Scalar(draw(small_int), draw(small_int) if irrational else 0)
        rows[-1] = [k * x + y for x, y in zip(rows[0], rows[1 % nr])]
    return rows


@given(exact_matrices())
def test_rank_matches_float_oracle_when_well_separated(rows):
    fr, margin = _float_rank(rows)
    assume(margin > 1e-6)
    assert rank(rows) == fr


@given(exact_matrices())
def test_rank_transpose_invariant(rows):
    m = mat(rows)
    assert rank(m) == rank(m.transpose())
    assert rank(m) <= min(m.rows, m.cols)


@given(exact_matrices())
def test_null_space_vectors_annihilate_exactly(rows):
    m = mat(rows)
    basis = null_space(m)
    assert len(basis) == m.cols - rank(m)
    for v in basis:
        assert all(not e for e in m.apply(v))


@given(exact_matrices(irrational=False))
def test_null_space_dimension_matches_sympy(rows):
    sm = sympy.Matrix([[sympy.Rational(int(x.a.numerator), int(x.a.denominator)) for x in r] for r in rows])
    assert len(null_space(rows)) == len(sm.nullspace())


# -- positive definiteness -------------------------------------------------------


def test_pd_examples():
    assert is_positive_definite(ExactMatrix.identity(3))
    assert not is_positive_definite(ExactMatrix.diag([1, -1]))
    m = mat([[2, 1], [1, 2]])
    assert leading_minors(m) == [2, 3]
    assert is_positive_definite(m)


def test_pd_rejects_non_symmetric():
    with pytest.raises(ValueError):
        is_positive_definite(mat([[1, 2], [0, 1]]))


@st.composite
def symmetric_matrices(draw):
    n = draw(st.integers(1, 4))
    L = [[Scalar(draw(small_int), draw(small_int)) for _ in range(n)] for _ in range(n)]
    shift = draw(st.integers(-3, 6))
    M = [[sum((L[i][k] * L[j][k] for k in range(n)), Scalar(0)) + (shift if i == j else 0)
          for j in range(n)] for i in range(n)]
    return M


@given(symmetric_matrices(), st.randoms(use_true_random=False))
def test_pd_implies_positive_quadratic_form(M, r):
    if not is_positive_definite(M):
        return
    n = len(M)
    for _ in range(100):
        x = [Fraction(r.randint(-9, 9), r.randint(1, 9)) for _ in range(n)]
        if not any(x):
            continue
        x = vector(x)
        q = dot(x, ExactMatrix(M).apply(x))
        assert q.sign() > 0


@given(symmetric_matrices())
def test_leading_minors_are_determinants(M):
    minors = leading_minors(M)
    for k, m in enumerate(minors, start=1):
        assert m == determinant([row[:k] for row in M[:k]])


def test_inverse_roundtrip():
    m = mat([[2, SQRT3], [1, "1/2"]])
    assert m @ inverse(m) == ExactMatrix.identity(2)


# -- affine rank ---------------------------------------------------------------


def test_affine_rank_examples():
    assert affine_rank([vector([3, 4])]) == 0
    assert affine_rank([vector(p) for p in [(0, 0), (1, 0), (0, 1)]]) == 2
    with pytest.raises(ValueError):
        affine_rank([])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_affine_rank_of_an_projection_differences(n):
    # rows ((c_i - b)/2, 0, ..., c_i - b, ..., 0) for distinct c_i != b
    b = Fraction(-3)
    cs = [Fraction(k + 1, 2) for k in range(n - 1)]
    pts = [vector([0] * n)]
    for i, c in enumerate(cs):
        row = [Fraction(0)] * n
        row[0] = (c - b) / 2
        row[i + 1] = c - b
        pts.append(vector(row))
    assert affine_rank(pts) == n - 1


def test_as_scalar_rejects_float():
    with pytest.raises(TypeError):
        as_scalar(0.5)
