"""Left-invariant Randers data on a Lie algebra.

A Randers norm on R^n is ``F(y) = sqrt(y^T A y) + w^T y`` with A positive
definite and ``w^T A^{-1} w < 1``. Following the bi-invariant convention,
the drift is stored as a vector V and ``w = B V`` for the bi-invariant Gram
matrix B.

Data come in two modes: ``"exact"`` (entries are :class:`fractions.Fraction`)
and ``"float"`` (binary64). Exact mode keeps every algebraic identity exact;
only the square root in :func:`eval_F` can leave the rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import exactlin
from .exactlin import ExactMatrix, Scalar


class RandersError(ValueError):
    code = "RANDERS_ERROR"


class NotSPDError(RandersError):
    code = "NOT_SPD"


class NonConvexError(RandersError):
    code = "NON_CONVEX"


class ShiftInvalidError(RandersError):
    code = "SHIFT_INVALID"


class DegenerateDirectionError(RandersError):
    code = "DEGENERATE_DIRECTION"


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Scalar):
        if x.b:
            raise ValueError("irrational entry in rational Randers data")
        x = x.a
    if isinstance(x, (int, str)):
        return Fraction(x)
    if hasattr(x, "numerator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot read {x!r} exactly")


def _exact_array(data, ndim: int) -> np.ndarray:
    arr = np.array(data, dtype=object)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array")
    return np.vectorize(_to_fraction, otypes=[object])(arr)


def _infer_mode(*items) -> str:
    for it in items:
        for e in np.asarray(it, dtype=object).ravel():
            if isinstance(e, (float, np.floating)):
                return "float"
    return "exact"


def _solve(M: np.ndarray, v: np.ndarray, exact: bool) -> np.ndarray:
    if not exact:
        return np.linalg.solve(M, v)
    x = exactlin.solve(M.tolist(), list(v))
    return np.array([_to_fraction(e) for e in x], dtype=object)


def _is_spd(M: np.ndarray, exact: bool) -> bool:
    if exact:
        try:
            return exactlin.is_positive_definite(M.tolist())
        except ValueError:
            return False
    if not np.allclose(M, M.T, rtol=0, atol=1e-12):
        return False
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return False
    return True


def _sqrt(q, exact: bool):
    """Exact square root when q is a rational square, float otherwise."""
    if exact:
        num, den = q.numerator, q.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd)
        return math.sqrt(q)
    return math.sqrt(q)


@dataclass(frozen=True, eq=False)
class RandersData:
    A: np.ndarray
    B: np.ndarray
    V: np.ndarray
    mode: str

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def w(self) -> np.ndarray:
        return self.B @ self.V

    def convexity(self):
        """``w^T A^{-1} w`` (must be < 1)."""
        w = self.w
        return w @ _solve(self.A, w, self.exact)

    def as_float(self) -> "RandersData":
        f = lambda a: np.array(a, dtype=float)  # noqa: E731
        return RandersData(f(self.A), f(self.B), f(self.V), "float")

    def __eq__(self, other):
        if not isinstance(other, RandersData) or self.mode != other.mode:
            return NotImplemented
        if self.exact:
            return (np.array_equal(self.A, other.A) and np.array_equal(self.B, other.B)
                    and np.array_equal(self.V, other.V))
        return (np.allclose(self.A, other.A) and np.allclose(self.B, other.B)
                and np.allclose(self.V, other.V))

    def to_json(self) -> dict:
        conv = str if self.exact else float
        return {
            "mode": self.mode,
            "A": [[conv(e) for e in row] for row in self.A],
            "B": [[conv(e) for e in row] for row in self.B],
            "V": [conv(e) for e in self.V],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RandersData":
        mode = data.get("mode", "exact")
        A, V = data["A"], data["V"]
        B = data.get("B")
        if B is None:
            B = np.eye(len(V), dtype=int).tolist()
        if mode == "float":
            return make_randers(np.array(A, float), np.array(B, float), np.array(V, float))
        return make_randers(A, B, V, mode="exact")


def make_randers(A, B, V, mode: str | None = None) -> RandersData:
    mode = mode or _infer_mode(A, B, V)
    if mode == "exact":
        A, B, V = _exact_array(A, 2), _exact_array(B, 2), _exact_array(V, 1)
    elif mode == "float":
        A, B, V = (np.array(A, dtype=float), np.array(B, dtype=float),
                   np.array(V, dtype=float))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n) or V.shape != (n,):
        raise ValueError("inconsistent Randers data shapes")
    exact = mode == "exact"
    if not _is_spd(A, exact):
        raise NotSPDError("alpha Gram matrix is not symmetric positive definite")
    if not _is_spd(B, exact):
        raise NotSPDError("bi-invariant Gram matrix is not symmetric positive definite")
    d = RandersData(A, B, V, mode)
    if not d.convexity() < 1:
        raise NonConvexError("drift has alpha-norm >= 1")
    return d


def eval_F(d: RandersData, y: Sequence):
    y = np.asarray(y, dtype=object if d.exact else float)
    if d.exact:
        y = np.array([_to_fraction(e) for e in y], dtype=object)
    q = y @ d.A @ y
    return _sqrt(q, d.exact) + d.w @ y


@dataclass(frozen=True, eq=False)
class IndicatrixQuadric:
    """``y^T M y + b^T y + c = 0`` with M = A - w w^T, b = 2w, c = -1."""

    M: np.ndarray
    b: np.ndarray
    c: object

    def evaluate(self, y: Sequence):
        y = np.asarray(y, dtype=self.M.dtype)
        return y @ self.M @ y + self.b @ y + self.c

    def to_quadric(self):
        from .quadric import Quadric

        return Quadric(ExactMatrix(self.M.tolist()),
                       exactlin.vector(self.b), exactlin.as_scalar(self.c))


def indicatrix_quadric(d: RandersData) -> IndicatrixQuadric:
    w = d.w
    M = d.A - np.outer(w, w)
    c = Fraction(-1) if d.exact else -1.0
    return IndicatrixQuadric(M, 2 * w, c)


@dataclass(frozen=True, eq=False)
class RoundSphere:
    center: np.ndarray
    radius_sq: object
    scale: object  # lambda with A - w w^T = lambda B

    @property
    def radius(self):
        r2 = self.radius_sq
        return _sqrt(r2, isinstance(r2, Fraction))


def is_round_sphere(d: RandersData, tol: float = 1e-10):
    """Center and radius (B-norm) when the indicatrix is a round B-sphere."""
    M = indicatrix_quadric(d).M
    B = d.B
    lam = M[0, 0] / B[0, 0]
    if d.exact:
        if not np.array_equal(M, lam * B):
            return None
    elif not np.allclose(M, lam * B, rtol=0, atol=tol):
        return None
    if not lam > 0:
        return None
    w = d.w
    y = _solve(lam * B, w, d.exact)
    center = -y
    r2 = (1 + w @ y) / lam
    return RoundSphere(center, r2, lam)


def navigation_to_randers(B, W) -> RandersData:
    """Randers data whose indicatrix is the B-unit sphere centered at W."""
    mode = _infer_mode(B, W)
    if mode == "exact":
        B, W = _exact_array(B, 2), _exact_array(W, 1)
    else:
        B, W = np.array(B, float), np.array(W, float)
    BW = B @ W
    lam = 1 - W @ BW
    if not lam > 0:
        raise NonConvexError("navigation field must have B-norm < 1")
    A = (lam * B + np.outer(BW, BW)) / (lam * lam)
    w = -BW / lam
    V = _solve(B, w, mode == "exact")
    return make_randers(A, B, V, mode=mode)


def from_indicatrix(M: np.ndarray, b: np.ndarray, c, B: np.ndarray, mode: str) -> RandersData:
    """Randers data whose unit sphere is ``y^T M y + b^T y + c = 0``."""
    if not c < 0:
        raise ShiftInvalidError("origin is not inside the ellipsoid")
    mu = -1 / c
    Mn = mu * M
    w = mu * b / 2
    A = Mn + np.outer(w, w)
    V = _solve(B, w, mode == "exact")
    return make_randers(A, B, V, mode=mode)


def shift_indicatrix(d: RandersData, shift: Sequence) -> RandersData:
    """Randers data whose indicatrix is that of ``d`` translated by ``-shift``."""
    X = np.array(shift, dtype=object if d.exact else float)
    if d.exact:
        X = np.array([_to_fraction(e) for e in X], dtype=object)
    q = indicatrix_quadric(d)
    # substitute y -> y + X
    b_new = 2 * (q.M @ X) + q.b
    c_new = X @ q.M @ X + q.b @ X + q.c
    return from_indicatrix(q.M, b_new, c_new, d.B, d.mode)


@dataclass
class VariationReport:
    min: float
    max: float
    samples: int

    @property
    def variation(self) -> float:
        return self.max - self.min

    def to_json(self) -> dict:
        return {"min": float(self.min), "max": float(self.max),
                "variation": float(self.variation), "samples": self.samples}


def constant_length_test(
    d: RandersData,
    X: Sequence,
    X_prime: Sequence,
    samples: Sequence,
    ad: Callable,
    degenerate_tol: float = 1e-12,
) -> VariationReport:
    """F(Ad(g)X - X') over sampled g; constant length forces zero spread."""
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    df = d if not d.exact else d.as_float()
    X = np.asarray(X, dtype=float)
    Xp = np.asarray(X_prime, dtype=float)
    values = []
    for k, g in enumerate(samples):
        y = np.asarray(ad(g, X), dtype=float) - Xp
        if np.linalg.norm(y) <= degenerate_tol:
            raise DegenerateDirectionError(f"Ad(g)X - X' vanishes at sample {k}")
        values.append(float(eval_F(df, y)))
    return VariationReport(min(values), max(values), len(values))
