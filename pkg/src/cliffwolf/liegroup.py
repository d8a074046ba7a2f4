"""Floating-point SU(n) / SO(n) machinery.

Algebra elements are skew-Hermitian traceless (su) or real antisymmetric
(so) matrices; group elements are unitary / orthogonal with determinant 1.
The bi-invariant inner product is ``-Re tr(XY)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .exactlin import Scalar
from .rootsys import LieType

FAMILIES = ("su", "so")


class LogBranchError(ValueError):
    """The principal logarithm is undefined or leaves the algebra."""


class SizeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraElement:
    family: str
    M: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=complex if self.family == "su" else float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("algebra element must be a square matrix")
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.M.shape[0]

    def check(self, tol: float = 1e-12) -> bool:
        M = self.M
        skew = np.max(np.abs(M + M.conj().T)) <= tol
        if self.family == "su":
            return bool(skew and abs(np.trace(M)) <= tol)
        return bool(skew and np.isrealobj(M))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same(self, other)
        return AlgebraElement(self.family, self.M + other.M)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same(self, other)
        return AlgebraElement(self.family, self.M - other.M)

    def __mul__(self, k: float) -> "AlgebraElement":
        return AlgebraElement(self.family, self.M * k)

    __rmul__ = __mul__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.family, -self.M)

    def norm(self) -> float:
        return math.sqrt(max(bi_inner(self, self), 0.0)) + 0.0


@dataclass(frozen=True)
class GroupElement:
    family: str
    U: np.ndarray = field(repr=False)

    def __post_init__(self):
        U = np.asarray(self.U, dtype=complex if self.family == "su" else float)
        object.__setattr__(self, "U", U)

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def check(self, tol: float = 1e-12, det_tol: float = 1e-10) -> bool:
        U = self.U
        unitary = np.max(np.abs(U @ U.conj().T - np.eye(self.n))) <= tol
        return bool(unitary and abs(np.linalg.det(U) - 1) <= det_tol)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        _same(self, other)
        return GroupElement(self.family, self.U @ other.U)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.family, self.U.conj().T)


def _same(a, b):
    if a.family != b.family or a.n != b.n:
        raise SizeMismatchError(f"incompatible elements: {a.family}({a.n}) vs {b.family}({b.n})")


def identity(family: str, n: int) -> GroupElement:
    return GroupElement(family, np.eye(n))


def bi_inner(X: AlgebraElement, Y: AlgebraElement) -> float:
    _same(X, Y)
    return float(-np.real(np.trace(X.M @ Y.M)))


def _hermitian_part(X: AlgebraElement) -> np.ndarray:
    # X = iH with H Hermitian
    H = -1j * X.M
    return (H + H.conj().T) / 2


def group_exp(X: AlgebraElement) -> GroupElement:
    theta, Q = np.linalg.eigh(_hermitian_part(X))
    U = (Q * np.exp(1j * theta)) @ Q.conj().T
    if X.family == "so":
        U = U.real
    return GroupElement(X.family, U)


def eigenphases(U: GroupElement) -> np.ndarray:
    return np.angle(np.linalg.eigvals(U.U))


def group_log(U: GroupElement, branch_tol: float = 1e-8) -> AlgebraElement:
    """Principal logarithm; raises :class:`LogBranchError` near phase pi."""
    T, Z = scipy.linalg.schur(np.asarray(U.U, dtype=complex), output="complex")
    lam = np.diag(T)
    phases = np.angle(lam)
    if np.any(np.abs(np.abs(phases) - math.pi) < branch_tol):
        raise LogBranchError("an eigenphase sits on the branch cut at +-pi")
    L = (Z * (1j * phases)) @ Z.conj().T
    if U.family == "so":
        L = L.real
        L = (L - L.T) / 2
    else:
        L = (L - L.conj().T) / 2
        tr = np.trace(L)
        if abs(tr) > 1e-9:
            raise LogBranchError("principal logarithm is not traceless")
    return AlgebraElement(U.family, L)


def adjoint(g: GroupElement, X: AlgebraElement) -> AlgebraElement:
    if g.family != X.family or g.n != X.n:
        raise SizeMismatchError("group and algebra element sizes differ")
    return AlgebraElement(X.family, g.U @ X.M @ g.U.conj().T)


def haar_sample(family: str, n: int, seed: int | np.random.Generator) -> GroupElement:
    """Haar-random element of SU(n) or SO(n): QR of a Gaussian, phase-fixed."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if family == "su":
        Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
        Q, R = np.linalg.qr(Z)
        d = np.diag(R)
        Q = Q * (d / np.abs(d))
        det = np.linalg.det(Q)
        Q = Q / det ** (1.0 / n)
        return GroupElement("su", Q)
    if family == "so":
        Z = rng.standard_normal((n, n))
        Q, R = np.linalg.qr(Z)
        Q = Q * np.sign(np.diag(R))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        return GroupElement("so", Q)
    raise ValueError(f"unknown family {family!r}")


def geodesic_flow(X: AlgebraElement, V: AlgebraElement, g: GroupElement, t: float) -> GroupElement:
    """``exp(tX) g exp(-tV)``."""
    _same(X, V)
    if g.family != X.family or g.n != X.n:
        raise SizeMismatchError("group and algebra element sizes differ")
    return group_exp(X * t) @ g @ group_exp(V * (-t))


# ---------------------------------------------------------------------------
# orthonormal bases and Cartan embeddings
# ---------------------------------------------------------------------------


def algebra_basis(family: str, n: int) -> list:
    """Basis of su(n) / so(n), orthonormal for ``bi_inner``.

    For su(n) the order follows the generalized Gell-Mann matrices:
    symmetric and antisymmetric off-diagonal pairs, then the diagonal ones.
    """
    basis = []
    if family == "su":
        for j in range(n):
            for k in range(j + 1, n):
                S = np.zeros((n, n), complex)
                S[j, k] = S[k, j] = 1
                A = np.zeros((n, n), complex)
                A[j, k], A[k, j] = -1j, 1j
                basis.append(1j * S / math.sqrt(2))
                basis.append(1j * A / math.sqrt(2))
        for l in range(1, n):
            D = np.zeros((n, n), complex)
            D[:l, :l] = np.eye(l)
            D[l, l] = -l
            D *= math.sqrt(2.0 / (l * (l + 1)))
            basis.append(1j * D / math.sqrt(2))
        return [AlgebraElement("su", B) for B in basis]
    if family == "so":
        for j in range(n):
            for k in range(j + 1, n):
                E = np.zeros((n, n))
                E[j, k], E[k, j] = 1, -1
                basis.append(AlgebraElement("so", E / math.sqrt(2)))
        return basis
    raise ValueError(f"unknown family {family!r}")


def from_coords(family: str, n: int, y: Sequence[float], basis: list | None = None) -> AlgebraElement:
    basis = basis or algebra_basis(family, n)
    if len(y) != len(basis):
        raise SizeMismatchError(f"{family}({n}) has dimension {len(basis)}, got {len(y)} coordinates")
    M = sum(float(c) * B.M for c, B in zip(y, basis))
    return AlgebraElement(family, M)


def to_coords(X: AlgebraElement, basis: list | None = None) -> np.ndarray:
    basis = basis or algebra_basis(X.family, X.n)
    return np.array([bi_inner(X, B) for B in basis])


def ad_matrix(g: GroupElement, basis: list | None = None) -> np.ndarray:
    """Matrix of Ad(g) in an orthonormal basis (orthogonal)."""
    basis = basis or algebra_basis(g.family, g.n)
    cols = [to_coords(adjoint(g, B), basis) for B in basis]
    return np.column_stack(cols)


def cartan_embed(t: LieType, x: Sequence) -> AlgebraElement:
    vals = [float(e) for e in x]
    if t.family == "A":
        if len(vals) != t.rank + 1:
            raise ValueError(f"A_{t.rank} points have {t.rank + 1} coordinates")
        exact_sum = sum(x[1:], x[0]) if isinstance(x[0], Scalar) else None
        if (exact_sum if exact_sum is not None else abs(sum(vals)) > 1e-12):
            raise ValueError("A_n points must have entries summing to zero")
        return AlgebraElement("su", np.diag(1j * np.array(vals)))
    if t.family == "D":
        n = t.rank
        if len(vals) != n:
            raise ValueError(f"D_{n} points have {n} coordinates")
        M = np.zeros((2 * n, 2 * n))
        for j, a in enumerate(vals):
            M[2 * j, 2 * j + 1] = a
            M[2 * j + 1, 2 * j] = -a
        return AlgebraElement("so", M)
    raise ValueError("E6_UNSUPPORTED: no matrix realization of E6")


# ---------------------------------------------------------------------------
# geodesic fixed-point solver
# ---------------------------------------------------------------------------


class NotApplicableError(ValueError):
    """The geodesic is already minimizing."""


class NoConvergenceError(RuntimeError):
    pass


@dataclass
class LemgeoResult:
    t_prime: float
    X_prime: AlgebraElement
    residual: float
    iterations: int
    ts: list
    ratios: list

    @property
    def max_ratio(self) -> float:
        return max(self.ratios) if self.ratios else 0.0

    def to_json(self) -> dict:
        return {
            "t_prime": self.t_prime,
            "X_prime": matrix_to_json(self.X_prime.M),
            "residual": self.residual,
            "iterations": self.iterations,
            "t_sequence": self.ts,
            "contraction_ratios": self.ratios,
            "max_contraction_ratio": self.max_ratio,
        }


def _log_data(U: GroupElement, branch_tol: float) -> tuple:
    L = group_log(U, branch_tol)
    t = L.norm()
    if t == 0.0:
        return 0.0, AlgebraElement(U.family, np.zeros_like(L.M))
    return t, L * (1.0 / t)


def lemgeo_solve(
    X: AlgebraElement,
    t0: float,
    V: AlgebraElement,
    tol: float = 1e-10,
    max_iter: int = 200,
    branch_tol: float = 1e-8,
    ratio_floor: float = 1e-12,
) -> LemgeoResult:
    """Find t' < t0 and a unit X' with exp(t0 X) = exp(t'X') exp((t0 - t')V).

    Iterates (t_{i+1}, X_{i+1}) = principal-log data of g exp((t_i - t0)V)
    starting from t_0 = t0. Ratios of successive step sizes are recorded
    while the previous step exceeds ``ratio_floor``.
    """
    _same(X, V)
    if abs(bi_inner(X, X) - 1.0) > 1e-9:
        raise ValueError("X must be a unit vector for bi_inner")
    if V.norm() >= 1.0:
        raise ValueError("V must have bi-norm < 1")
    g = group_exp(X * t0)
    t1, _ = _log_data(g, branch_tol)
    if not t1 < t0 - tol:
        raise NotApplicableError("exp(tX), t in [0, t0], is already minimizing")

    ts = [t0]
    ratios: list = []
    t_prev = t0
    for it in range(1, max_iter + 1):
        U = g @ group_exp(V * (t_prev - t0))
        t_new, X_new = _log_data(U, branch_tol)
        ts.append(t_new)
        if len(ts) >= 3:
            prev_step = abs(ts[-2] - ts[-3])
            if prev_step > ratio_floor:
                ratios.append(abs(ts[-1] - ts[-2]) / prev_step)
        rebuilt = group_exp(X_new * t_new) @ group_exp(V * (t0 - t_new))
        residual = float(np.linalg.norm(g.U - rebuilt.U))
        if residual < tol:
            return LemgeoResult(t_new, X_new, residual, it, ts, ratios)
        t_prev = t_new
    raise NoConvergenceError(f"no convergence after {max_iter} iterations")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def matrix_to_json(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data: list, real: bool = False) -> np.ndarray:
    M = np.array([[complex(re, im) for re, im in row] for row in data])
    return M.real.copy() if real else M
