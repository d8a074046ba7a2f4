"""Exact arithmetic over Q(sqrt 3) and the linear algebra built on it.

Everything here is exact. Rationals are ``gmpy2.mpq``; elements of the
quadratic field are :class:`Scalar` values ``a + b*sqrt(3)``. The matrix
kernels are written against the field operations only, so they accept
rows of plain rationals as well as rows of :class:`Scalar`.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

Rational = type(mpq())
Number = Union[int, Fraction, "Scalar", Rational]

_SQRT3 = math.sqrt(3.0)


def to_rational(x) -> Rational:
    """Coerce int / Fraction / mpq / decimal string / 'p/q' string to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or string")
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


class Scalar:
    """The number ``a + b*sqrt(3)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = to_rational(a)
        self.b = to_rational(b)

    @classmethod
    def _raw(cls, a, b) -> "Scalar":
        s = object.__new__(cls)
        s.a = a
        s.b = b
        return s

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.a + other.a, self.b + other.b)
        try:
            return Scalar._raw(self.a + to_rational(other), self.b)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.a, -self.b)

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.a - other.a, self.b - other.b)
        try:
            return Scalar._raw(self.a - to_rational(other), self.b)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a, b, c, d = self.a, self.b, other.a, other.b
            if not b and not d:
                return Scalar._raw(a * c, b)
            return Scalar._raw(a * c + 3 * b * d, a * d + b * c)
        try:
            r = to_rational(other)
        except TypeError:
            return NotImplemented
        return Scalar._raw(self.a * r, self.b * r)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        a, b = self.a, self.b
        if not b:
            if not a:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._raw(1 / a, b)
        norm = a * a - 3 * b * b  # nonzero: sqrt(3) is irrational
        return Scalar._raw(a / norm, -b / norm)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * other.inverse()
        try:
            r = to_rational(other)
        except TypeError:
            return NotImplemented
        if not r:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._raw(self.a / r, self.b / r)

    def __rtruediv__(self, other):
        return Scalar(other) * self.inverse()

    def conjugate(self) -> "Scalar":
        """Galois conjugate ``a - b*sqrt(3)``."""
        return Scalar._raw(self.a, -self.b)

    # -- comparison -------------------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 3 b^2
        lhs, rhs = a * a, 3 * b * b
        return sa if lhs > rhs else sb

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b
        try:
            r = to_rational(other)
        except TypeError:
            return NotImplemented
        return not self.b and self.a == r

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * _SQRT3

    @property
    def is_rational(self) -> bool:
        return not self.b

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


SQRT3 = Scalar(0, 1)

_SCALAR_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?"
    r"(?:\s*(?P<bsign>[+-])?\s*(?P<b>\d+(?:/\d+)?)?\s*r3)?\s*$"
)


def parse_scalar(text: str) -> Scalar:
    """Parse strings like ``"3/2"``, ``"1/2+1/2r3"``, ``"-r3"``, ``"2r3"``.

    ``r3`` stands for sqrt(3). A bare decimal such as ``"0.25"`` is read
    exactly as 1/4.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if "r3" not in s:
        return Scalar(to_rational(s))
    head, _, tail = s.partition("r3")
    if tail:
        raise ValueError(f"bad scalar {text!r}")
    # split head into rational part and sqrt(3) coefficient at the last sign
    idx = max(head.rfind("+"), head.rfind("-"))
    if idx > 0:
        a_txt, b_txt = head[:idx], head[idx:]
    else:
        a_txt, b_txt = "0", head
    if b_txt in ("", "+"):
        b_txt = "1"
    elif b_txt == "-":
        b_txt = "-1"
    try:
        return Scalar(to_rational(a_txt), to_rational(b_txt))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad scalar {text!r}") from exc


def format_scalar(x) -> str:
    """Inverse of :func:`parse_scalar`."""
    x = as_scalar(x)
    a, b = x.a, x.b
    if not b:
        return str(a)
    bpart = "r3" if b == 1 else "-r3" if b == -1 else f"{b}r3"
    if not a:
        return bpart
    return f"{a}{bpart}" if bpart.startswith("-") else f"{a}+{bpart}"


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(to_rational(x))


def vector(entries: Iterable) -> tuple:
    """Exact vector as a tuple of :class:`Scalar`."""
    return tuple(as_scalar(e) for e in entries)


def parse_vector(text: str) -> tuple:
    return vector(p for p in text.split(",") if p.strip())


def dot(x: Sequence, y: Sequence):
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    acc = Scalar._raw(mpq(0), mpq(0))
    for u, v in zip(x, y):
        acc = acc + u * v
    return acc


def is_zero(x) -> bool:
    return not x


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Immutable dense matrix of exact field elements."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence], cols: int | None = None):
        grid = tuple(tuple(as_scalar(e) for e in row) for row in data)
        if cols is None:
            if not grid:
                raise ValueError("empty matrix needs an explicit column count")
            cols = len(grid[0])
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix")
        self.rows = len(grid)
        self.cols = cols
        self._data = grid

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, entries: Sequence) -> "ExactMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, entries: Sequence) -> "ExactMatrix":
        return cls([[e] for e in entries], cols=1)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self._data[i][j] for i in range(self.rows)]
                            for j in range(self.cols)], cols=self.rows)

    T = property(transpose)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self._data
        return all(d[i][j] == d[j][i] for i in range(self.rows) for j in range(i))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix([[x + y for x, y in zip(r, s)]
                            for r, s in zip(self._data, other._data)], cols=self.cols)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(-1)

    def scale(self, k) -> "ExactMatrix":
        k = as_scalar(k)
        return ExactMatrix([[k * x for x in r] for r in self._data], cols=self.cols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose()._data
        return ExactMatrix([[dot(r, c) for c in ot] for r in self._data], cols=other.cols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(dot(r, v) for r in self._data)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(", ".join(format_scalar(x) for x in r) for r in self._data)
        return f"ExactMatrix([{body}])"


def _as_grid(M) -> list:
    if isinstance(M, ExactMatrix):
        return [list(r) for r in M._data]
    return [[as_scalar(x) for x in r] for r in M]


def _cols_of(M) -> int:
    if isinstance(M, ExactMatrix):
        return M.cols
    return len(M[0]) if M else 0


def bareiss_echelon(grid: list, *, pivoting: bool = True):
    """Fraction-free row echelon form, in place.

    Returns ``(pivot_columns, pivots)`` where ``pivots[k]`` is the k-th
    Bareiss pivot. Without pivoting the elimination stops at the first
    zero diagonal pivot; in that mode ``pivots[k]`` equals the leading
    principal minor of order ``k+1``.
    """
    nrows = len(grid)
    ncols = len(grid[0]) if nrows else 0
    prev = 1
    r = 0
    pivot_cols: list[int] = []
    pivots: list = []
    for c in range(ncols):
        if r >= nrows:
            break
        if not grid[r][c]:
            if not pivoting:
                pivots.append(grid[r][c])
                break
            for k in range(r + 1, nrows):
                if grid[k][c]:
                    grid[r], grid[k] = grid[k], grid[r]
                    break
            else:
                continue
        p = grid[r][c]
        prow = grid[r]
        for k in range(r + 1, nrows):
            row = grid[k]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - f * prow[j]) / prev
            row[c] = 0 * f
        pivot_cols.append(c)
        pivots.append(p)
        prev = p
        r += 1
    return pivot_cols, pivots


def rank(M) -> int:
    grid = _as_grid(M)
    if not grid:
        return 0
    pivot_cols, _ = bareiss_echelon(grid)
    return len(pivot_cols)


def null_space(M) -> list:
    """Basis of ``{x : Mx = 0}`` as exact column vectors (tuples).

    One basis vector per free column, with a 1 in that column.
    """
    grid = _as_grid(M)
    ncols = _cols_of(M)
    if not grid:
        return [tuple(Scalar(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    pivot_cols, _ = bareiss_echelon(grid)
    rk = len(pivot_cols)
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for f in free:
        x = [Scalar(0)] * ncols
        x[f] = Scalar(1)
        for r in range(rk - 1, -1, -1):
            pc = pivot_cols[r]
            row = grid[r]
            s = Scalar(0)
            for j in range(pc + 1, ncols):
                if row[j] and x[j]:
                    s = s + row[j] * x[j]
            x[pc] = -s / row[pc]
        basis.append(tuple(x))
    return basis


def determinant(M):
    grid = _as_grid(M)
    n = len(grid)
    if any(len(r) != n for r in grid):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Scalar(1)
    sign = 1
    prev = Scalar(1)
    for c in range(n):
        if not grid[c][c]:
            for k in range(c + 1, n):
                if grid[k][c]:
                    grid[c], grid[k] = grid[k], grid[c]
                    sign = -sign
                    break
            else:
                return Scalar(0)
        p = grid[c][c]
        for k in range(c + 1, n):
            f = grid[k][c]
            for j in range(c + 1, n):
                grid[k][j] = (p * grid[k][j] - f * grid[c][j]) / prev
        prev = p
    return grid[n - 1][n - 1] * sign


def leading_minors(M) -> list:
    """All leading principal minors, in order (stops after the first zero)."""
    grid = _as_grid(M)
    _, pivots = bareiss_echelon(grid, pivoting=False)
    return pivots


def is_positive_definite(M) -> bool:
    """Sylvester's criterion with exact sign tests on the leading minors."""
    grid = _as_grid(M)
    n = len(grid)
    if any(len(r) != n for r in grid):
        raise ValueError("positive-definiteness needs a square matrix")
    if any(grid[i][j] != grid[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    minors = leading_minors(grid)
    return len(minors) == n and all(as_scalar(m).sign() > 0 for m in minors)


def solve(M, rhs: Sequence) -> tuple:
    """Solve the square nonsingular system ``M x = rhs`` exactly."""
    grid = _as_grid(M)
    n = len(grid)
    aug = [row + [as_scalar(b)] for row, b in zip(grid, rhs)]
    pivot_cols, _ = bareiss_echelon(aug)
    if len(pivot_cols) != n or pivot_cols[-1] >= n:
        raise ZeroDivisionError("singular system")
    x = [Scalar(0)] * n
    for r in range(n - 1, -1, -1):
        s = aug[r][n]
        for j in range(r + 1, n):
            s = s - aug[r][j] * x[j]
        x[r] = s / aug[r][r]
    return tuple(x)


def inverse(M) -> ExactMatrix:
    grid = _as_grid(M)
    n = len(grid)
    cols = [solve(grid, [int(i == j) for i in range(n)]) for j in range(n)]
    return ExactMatrix([[cols[j][i] for j in range(n)] for i in range(n)])


def affine_rank(points: Sequence[Sequence]) -> int:
    """Rank of the differences ``p_i - p_0``."""
    if not points:
        raise ValueError("affine_rank of an empty point set")
    p0 = points[0]
    diffs = [[u - v for u, v in zip(p, p0)] for p in points[1:]]
    if not diffs:
        return 0
    return rank(diffs)


class RowSpace:
    """Incrementally maintained reduced row echelon basis.

    Rows are added one at a time; each add costs one reduction against the
    current basis. Used where the row source is large (Weyl orbits with
    tens of thousands of points) and the caller can stop once the rank
    saturates.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, list] = {}  # pivot column -> normalized row

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list:
        return sorted(self._rows)

    def reduce(self, row: Sequence) -> list:
        r = list(row)
        for p in sorted(self._rows):
            f = r[p]
            if f:
                prow = self._rows[p]
                for j in range(p, self.ncols):
                    if prow[j]:
                        r[j] = r[j] - f * prow[j]
        return r

    def add(self, row: Sequence) -> bool:
        """Add a row; return True if the rank grew."""
        if len(row) != self.ncols:
            raise ValueError("row length mismatch")
        r = self.reduce(row)
        q = next((j for j, x in enumerate(r) if x), None)
        if q is None:
            return False
        inv = 1 / r[q]
        r = [x * inv if x else x for x in r]
        for p, prow in self._rows.items():
            f = prow[q]
            if f:
                for j in range(q, self.ncols):
                    if r[j]:
                        prow[j] = prow[j] - f * r[j]
        self._rows[q] = r
        return True

    def null_space(self) -> list:
        """Basis of the orthogonal kernel ``{x : row . x = 0 for all rows}``."""
        free = [c for c in range(self.ncols) if c not in self._rows]
        basis = []
        for f in free:
            x = [0 * f] * self.ncols
            x[f] = 1
            for p, prow in self._rows.items():
                x[p] = -prow[f]
            basis.append(x)
        return basis

    def kernel_vanishes_on(self, cols: Iterable[int]) -> bool:
        """True iff every kernel vector is zero on the given columns."""
        free = [c for c in range(self.ncols) if c not in self._rows]
        for c in cols:
            if c not in self._rows:
                return False
            prow = self._rows[c]
            if any(prow[f] for f in free):
                return False
        return True
