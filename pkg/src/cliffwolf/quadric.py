"""Exact certificates that every ellipsoid through a point set is centered at 0.

Three independent routes are provided:

* :func:`center_forced` -- decides the question outright. It computes the
  space L of all quadrics through the points and checks whether the linear
  part b vanishes on L. If it does not, a concrete off-center ellipsoid is
  produced by perturbing the origin-centered sphere (which always lies in L
  for points of common norm) in a direction with b != 0.
* :func:`symmetric_span_certify` -- the -Id argument: a symmetric point set
  that spans the space admits both +b and -b, so b = 0.
* :func:`midpoint_affine_certify` -- the chord-midpoint argument: midpoints
  of chords parallel to v_i lie on one hyperplane through the center; if
  they affinely span v_i^perp for a basis v_1..v_n, the center is 0.

The two structural methods only ever answer CERTIFIED_CENTERED or
NOT_APPLICABLE.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .exactlin import (
    ExactMatrix,
    RowSpace,
    affine_rank,
    Scalar,
    as_scalar,
    dot,
    format_scalar,
    is_positive_definite,
    rank,
    solve,
)


class Verdict(str, enum.Enum):
    CERTIFIED_CENTERED = "CERTIFIED_CENTERED"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    NOT_APPLICABLE = "NOT_APPLICABLE"


class Method(str, enum.Enum):
    SYMMETRIC_SPAN = "SYMMETRIC_SPAN"
    MIDPOINT_AFFINE = "MIDPOINT_AFFINE"
    NULLSPACE = "NULLSPACE"


@dataclass(frozen=True)
class Quadric:
    """The locus ``x^T A x + b^T x + c = 0``."""

    A: ExactMatrix
    b: tuple
    c: Scalar

    def __post_init__(self):
        if not self.A.is_symmetric():
            raise ValueError("quadric form must be symmetric")
        if len(self.b) != self.A.rows:
            raise ValueError("linear part has the wrong length")

    @property
    def dim(self) -> int:
        return self.A.rows

    def evaluate(self, x: Sequence):
        Ax = self.A.apply(x)
        return dot(x, Ax) + dot(self.b, x) + self.c

    def is_ellipsoid_form(self) -> bool:
        return is_positive_definite(self.A)

    def center(self) -> tuple:
        """``-A^{-1} b / 2`` (requires A nonsingular)."""
        y = solve(self.A, self.b)
        return tuple(-e / 2 for e in y)

    def combine(self, other: "Quadric", k) -> "Quadric":
        """``self + k * other``."""
        k = as_scalar(k)
        return Quadric(
            self.A + other.A.scale(k),
            tuple(u + k * v for u, v in zip(self.b, other.b)),
            self.c + k * other.c,
        )

    def to_json(self) -> dict:
        return {
            "A": [[format_scalar(e) for e in row] for row in self.A.tolist()],
            "b": [format_scalar(e) for e in self.b],
            "c": format_scalar(self.c),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quadric":
        return cls(
            ExactMatrix(data["A"]),
            tuple(as_scalar(e) for e in data["b"]),
            as_scalar(data["c"]),
        )


@dataclass
class CenterCertificate:
    verdict: Verdict
    method: Method
    witness: Quadric | None = None
    quadric_space_dim: int | None = None
    dimension: int | None = None
    basis: tuple | None = None
    detail: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_CENTERED

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "method": self.method.value,
            "dimension": self.dimension,
            "quadric_space_dim": self.quadric_space_dim,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }
        if self.basis is not None:
            out["basis"] = [[format_scalar(e) for e in v] for v in self.basis]
        if self.detail:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CenterCertificate":
        w = data.get("witness")
        basis = data.get("basis")
        return cls(
            verdict=Verdict(data["verdict"]),
            method=Method(data["method"]),
            witness=Quadric.from_json(w) if w else None,
            quadric_space_dim=data.get("quadric_space_dim"),
            dimension=data.get("dimension"),
            basis=tuple(tuple(as_scalar(e) for e in v) for v in basis) if basis else None,
            detail=data.get("detail", {}),
        )


# ---------------------------------------------------------------------------
# quadric space
# ---------------------------------------------------------------------------


def _pairs(n: int) -> list:
    return [(i, j) for i in range(n) for j in range(i, n)]


def evaluation_row(x: Sequence) -> list:
    """Coefficients of (A_ij for i<=j, b_i, c) in x^T A x + b^T x + c."""
    n = len(x)
    row = []
    for i, j in _pairs(n):
        row.append(x[i] * x[i] if i == j else 2 * x[i] * x[j])
    row.extend(x)
    row.append(Scalar(1))
    return row


def _quadric_from_unknowns(u: Sequence, n: int) -> Quadric:
    A = [[Scalar(0)] * n for _ in range(n)]
    for k, (i, j) in enumerate(_pairs(n)):
        A[i][j] = A[j][i] = as_scalar(u[k])
    m = n * (n + 1) // 2
    return Quadric(ExactMatrix(A), tuple(as_scalar(e) for e in u[m:m + n]), as_scalar(u[-1]))


def _check_dims(points: Sequence[Sequence]) -> int:
    if not points:
        raise ValueError("need at least one point")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise ValueError("points have different dimensions")
    return n


def quadric_space(points: Sequence[Sequence]) -> list:
    """Basis of all quadrics (A, b, c) passing through every point."""
    pts = [tuple(as_scalar(e) for e in p) for p in points]
    n = _check_dims(pts)
    ncols = n * (n + 1) // 2 + n + 1
    space = RowSpace(ncols)
    for p in pts:
        space.add(evaluation_row(p))
        if space.rank == ncols:
            break
    return [_quadric_from_unknowns(u, n) for u in space.null_space()]


# ---------------------------------------------------------------------------
# NULLSPACE decision procedure
# ---------------------------------------------------------------------------


class _Chart:
    """Coordinates of points relative to a basis of a subspace."""

    def __init__(self, basis: Sequence[Sequence] | None, dim: int):
        if basis is None:
            self.basis = None
            self.n = dim
            self.gram = ExactMatrix.identity(dim)
            return
        self.basis = tuple(tuple(as_scalar(e) for e in v) for v in basis)
        if rank([list(v) for v in self.basis]) != len(self.basis):
            raise ValueError("chart basis is linearly dependent")
        self.n = len(self.basis)
        self.gram = ExactMatrix([[dot(a, b) for b in self.basis] for a in self.basis])

    def coords(self, x: tuple) -> tuple:
        if self.basis is None:
            return x
        c = solve(self.gram.tolist(), [dot(x, v) for v in self.basis])
        back = [Scalar(0)] * len(x)
        for ci, v in zip(c, self.basis):
            back = [o + ci * e for o, e in zip(back, v)]
        if tuple(back) != x:
            raise ValueError("point lies outside the span of the chart basis")
        return c


def _max_abs_row_sum(A: ExactMatrix):
    best = Scalar(0)
    for i in range(A.rows):
        s = Scalar(0)
        for e in A.row(i):
            s = s + abs(e)
        if s > best:
            best = s
    return best


def _rational_upper_bound(x: Scalar):
    """A rational q >= x (used to keep epsilon rational)."""
    if not x.b:
        return x.a
    # sqrt(3) < 7/4
    return x.a + abs(x.b) * mpq(7, 4)


def center_forced(
    points: Iterable[Sequence],
    basis: Sequence[Sequence] | None = None,
    max_halvings: int = 200,
) -> CenterCertificate:
    """Decide whether every ellipsoid containing ``points`` is centered at 0.

    ``points`` may be any iterable, including a lazy orbit; it is consumed
    only until the quadric space has shrunk to the sphere alone. If
    ``basis`` is given, the question is posed inside the span of those
    vectors, in their coordinates (the witness is then expressed in those
    coordinates too).
    """
    it = iter(points)
    try:
        first = tuple(as_scalar(e) for e in next(it))
    except StopIteration:
        raise ValueError("need at least one point") from None
    d = len(first)
    chart = _Chart(basis, d)
    n = chart.n
    ncols = n * (n + 1) // 2 + n + 1
    b_cols = range(n * (n + 1) // 2, n * (n + 1) // 2 + n)

    r2 = dot(first, first)
    if not r2:
        return CenterCertificate(Verdict.NOT_APPLICABLE, Method.NULLSPACE, dimension=n,
                                 basis=chart.basis, detail={"reason": "zero point"})
    space = RowSpace(ncols)
    used = 0
    p = first
    while True:
        if len(p) != d:
            raise ValueError("points have different dimensions")
        if dot(p, p) != r2:
            return CenterCertificate(
                Verdict.NOT_APPLICABLE, Method.NULLSPACE, dimension=n, basis=chart.basis,
                detail={"reason": "points are not on a common origin-centered sphere"})
        space.add(evaluation_row(chart.coords(p)))
        used += 1
        if space.rank >= ncols - 1:
            break  # L is the sphere alone
        try:
            p = tuple(as_scalar(e) for e in next(it))
        except StopIteration:
            break

    qdim = ncols - space.rank
    detail = {"points_used": used}
    if space.kernel_vanishes_on(b_cols):
        return CenterCertificate(Verdict.CERTIFIED_CENTERED, Method.NULLSPACE,
                                 quadric_space_dim=qdim, dimension=n, basis=chart.basis,
                                 detail=detail)

    direction = None
    for u in space.null_space():
        q = _quadric_from_unknowns(u, n)
        if any(q.b):
            direction = q
            break
    assert direction is not None
    sphere = Quadric(chart.gram, tuple(Scalar(0) for _ in range(n)), -r2)
    bound = _rational_upper_bound(_max_abs_row_sum(direction.A))
    eps = 1 / (1 + bound)
    for _ in range(max_halvings):
        witness = sphere.combine(direction, eps)
        if is_positive_definite(witness.A):
            break
        eps = eps / 2
    else:
        raise RuntimeError("failed to find a positive-definite perturbation")
    detail["epsilon"] = str(eps)
    return CenterCertificate(Verdict.COUNTEREXAMPLE, Method.NULLSPACE, witness=witness,
                             quadric_space_dim=qdim, dimension=n, basis=chart.basis,
                             detail=detail)


def verify_witness(cert: CenterCertificate, points: Iterable[Sequence]) -> bool:
    """Exact check of a COUNTEREXAMPLE: through all points, ellipsoid, b != 0."""
    w = cert.witness
    if w is None:
        return False
    if not is_positive_definite(w.A) or not any(w.b):
        return False
    pts = [tuple(as_scalar(e) for e in p) for p in points]
    chart = _Chart(cert.basis, len(pts[0]))
    if any(w.evaluate(chart.coords(p)) for p in pts):
        return False
    return any(w.center())


# ---------------------------------------------------------------------------
# structural certifiers
# ---------------------------------------------------------------------------


def symmetric_span_certify(points: Sequence[Sequence], dim: int | None = None) -> CenterCertificate:
    """-Id route: S = -S and the points span the whole ``dim``-space."""
    pts = [tuple(as_scalar(e) for e in p) for p in points]
    n = dim if dim is not None else _check_dims(pts)
    pset = set(pts)
    symmetric = all(tuple(-e for e in p) in pset for p in pts)
    span = rank([list(p) for p in pts]) if pts else 0
    detail = {"symmetric": symmetric, "span_rank": span}
    ok = symmetric and span == n
    verdict = Verdict.CERTIFIED_CENTERED if ok else Verdict.NOT_APPLICABLE
    return CenterCertificate(verdict, Method.SYMMETRIC_SPAN, dimension=n, detail=detail)


def projection(x: Sequence, v: Sequence) -> tuple:
    """Orthogonal projection of x onto v^perp (the midpoint of x and its mirror)."""
    k = dot(x, v) / dot(v, v)
    return tuple(a - k * b for a, b in zip(x, v))


def projections_affine_rank(points: Sequence[Sequence], v: Sequence) -> tuple:
    """(all points outside v^perp, affine rank of their projections onto v^perp)."""
    pts = [tuple(as_scalar(e) for e in p) for p in points]
    outside = all(dot(p, v) for p in pts)
    proj = [projection(p, v) for p in pts]
    return outside, affine_rank(proj)


def midpoint_affine_certify(points: Sequence[Sequence], simple_roots: Sequence[Sequence]) -> CenterCertificate:
    """Chord-midpoint route over the basis ``simple_roots`` (v_1..v_n)."""
    vs = [tuple(as_scalar(e) for e in v) for v in simple_roots]
    n = len(vs)
    if n == 0 or rank([list(v) for v in vs]) != n:
        raise ValueError("the v_i must be linearly independent")
    pts = [tuple(as_scalar(e) for e in p) for p in points]
    d = len(vs[0])
    pset = set(pts)

    span = RowSpace(d)
    for v in vs:
        span.add(v)
    if any(any(span.reduce(p)) for p in pts):
        return CenterCertificate(Verdict.NOT_APPLICABLE, Method.MIDPOINT_AFFINE, dimension=n,
                                 detail={"reason": "points leave the span of the v_i"})

    ranks = []
    for v in vs:
        acc = RowSpace(d)
        base = None
        seen = set()
        for p in pts:
            if not dot(p, v):
                continue
            mirror = tuple(a - (2 * dot(p, v) / dot(v, v)) * b for a, b in zip(p, v))
            if mirror not in pset:
                continue
            m = projection(p, v)
            if m in seen:
                continue
            seen.add(m)
            if base is None:
                base = m
                continue
            acc.add([a - b for a, b in zip(m, base)])
            if acc.rank == n - 1:
                break
        ranks.append(acc.rank if base is not None else -1)
        if acc.rank != n - 1:
            break
    ok = len(ranks) == n and all(r == n - 1 for r in ranks)
    verdict = Verdict.CERTIFIED_CENTERED if ok else Verdict.NOT_APPLICABLE
    return CenterCertificate(verdict, Method.MIDPOINT_AFFINE, dimension=n,
                             detail={"affine_ranks": ranks})
