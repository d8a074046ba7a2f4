"""Root systems of types A_n, D_n and E6, reflections, and Weyl orbits.

Realizations
------------
A_n   roots e_i - e_j in the sum-zero hyperplane of R^{n+1}; the basis is
      v_i = e_0 - e_i (i = 1..n), whose reflections swap entry 0 with entry i.
D_n   roots +-e_i +- e_j in R^n; the basis is v_0 = e_1 + e_2 followed by
      v_i = e_1 - e_{i+1} (i = 1..n-1).
E6    two frames of R^6 are available:

      ``"listed"``  permutations of (+-1, +-1, 0, 0, 0, 0) that keep the last
                    entry 0, plus (+-1/2, ..., +-1/2, +-sqrt3/2) with an odd
                    number of positive signs;
      ``"a5a1"``    permutations of (1, -1, 0, 0, 0, 0), +-(s, ..., s) with
                    s = 1/sqrt3, and +-((s +- 1)/2, ...) with three plus and
                    three minus signs. In this frame the entry-sum-zero
                    hyperplane is the Cartan space of the A_5 subsystem, so
                    "entries" of a point carry their A_5 meaning.

      The E6 basis is the simple system cut out by the positive chamber of a
      fixed generic direction (``_E6_CHAMBER``); any basis works for the
      midpoint certificate, which only needs the v_i to span R^6.

Orbits are enumerated breadth-first in simple-root coordinates, where every
simple reflection acts by an integer matrix (the Cartan matrix). Points are
kept as pairs of integer vectors over a common denominator, so deduplication
is exact and cheap even for the 51840-point regular E6 orbit.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Iterator, Sequence

from gmpy2 import mpq

from .exactlin import Scalar, as_scalar, dot, rank, solve, vector

FAMILIES = ("A", "D", "E6")
E6_FRAMES = ("listed", "a5a1")


@dataclass(frozen=True)
class LieType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "A" and self.rank < 1:
            raise ValueError("A_n needs rank >= 1")
        if self.family == "D" and self.rank < 3:
            raise ValueError("D_n needs rank >= 3")
        if self.family == "E6" and self.rank != 6:
            raise ValueError("E6 has rank 6")

    @classmethod
    def parse(cls, family: str, rank: int | None = None) -> "LieType":
        family = family.upper()
        if family.startswith("E"):
            return cls("E6", 6 if rank is None else rank)
        if rank is None and len(family) > 1:
            family, rank = family[0], int(family[1:])
        if rank is None:
            raise ValueError(f"{family} needs a rank")
        return cls(family, rank)

    @property
    def ambient_dim(self) -> int:
        return self.rank + 1 if self.family == "A" else self.rank

    def __str__(self):
        return "E6" if self.family == "E6" else f"{self.family}{self.rank}"


Vector = tuple


@dataclass(frozen=True)
class RootSystem:
    lie_type: LieType
    ambient_dim: int
    roots: tuple
    simple_roots: tuple
    frame: str = "standard"
    cartan: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cm = []
        for a in self.simple_roots:
            row = []
            for b in self.simple_roots:
                val = 2 * dot(a, b) / dot(b, b)
                if not val.is_rational or val.a.denominator != 1:
                    raise ValueError("simple roots do not give an integral Cartan matrix")
                row.append(int(val.a))
            cm.append(tuple(row))
        object.__setattr__(self, "cartan", tuple(cm))
        object.__setattr__(self, "_root_set", frozenset(self.roots))
        object.__setattr__(self, "_coords", _CoordinateChart(self.simple_roots))

    @property
    def rank(self) -> int:
        return self.lie_type.rank

    def has_root(self, v: Sequence) -> bool:
        return tuple(v) in self._root_set

    def in_cartan_space(self, x: Sequence) -> bool:
        return self._coords.contains(x)


def reflect(v: Sequence, root: Sequence) -> Vector:
    """Reflect ``v`` in the hyperplane orthogonal to ``root``."""
    rr = dot(root, root)
    if not rr:
        raise ValueError("cannot reflect in the zero vector")
    k = 2 * dot(v, root) / rr
    return tuple(a - k * b for a, b in zip(v, root))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _unit(n: int, i: int, value=1) -> list:
    v = [0] * n
    v[i] = value
    return v


def _a_roots(n: int):
    dim = n + 1
    roots = []
    for i in range(dim):
        for j in range(dim):
            if i != j:
                v = [0] * dim
                v[i], v[j] = 1, -1
                roots.append(vector(v))
    simple = []
    for i in range(1, dim):
        v = [0] * dim
        v[0], v[i] = 1, -1
        simple.append(vector(v))
    return roots, simple


def _d_roots(n: int):
    roots = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * n
            v[i], v[j] = si, sj
            roots.append(vector(v))
    v0 = [0] * n
    v0[0] = v0[1] = 1
    simple = [vector(v0)]
    for i in range(1, n):
        v = [0] * n
        v[0], v[i] = 1, -1
        simple.append(vector(v))
    return roots, simple


def _e6_listed_roots():
    half = mpq(1, 2)
    roots = []
    for i, j in itertools.combinations(range(5), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 6
            v[i], v[j] = si, sj
            roots.append(vector(v))
    for signs in itertools.product((1, -1), repeat=6):
        if sum(1 for s in signs if s > 0) % 2 == 1:
            v = [Scalar(s * half) for s in signs[:5]]
            v.append(Scalar(0, signs[5] * half))
            roots.append(tuple(v))
    return roots


def _e6_a5a1_roots():
    s = Scalar(0, mpq(1, 3))  # 1/sqrt(3)
    roots = []
    for i in range(6):
        for j in range(6):
            if i != j:
                v = [0] * 6
                v[i], v[j] = 1, -1
                roots.append(vector(v))
    roots.append(tuple([s] * 6))
    roots.append(tuple([-s] * 6))
    plus, minus = (s + 1) / 2, (s - 1) / 2
    for idx in itertools.combinations(range(6), 3):
        v = tuple(plus if k in idx else minus for k in range(6))
        roots.append(v)
        roots.append(tuple(-x for x in v))
    return roots


# Generic direction whose positive chamber fixes the E6 simple system. No
# root is orthogonal to it in either frame (checked at construction).
_E6_CHAMBER = (
    Scalar(17), Scalar(5), Scalar(3), Scalar(2), Scalar(1), Scalar(0, 7),
)


def _simple_from_chamber(roots: Sequence, h: Sequence) -> list:
    positive = []
    for r in roots:
        sgn = dot(r, h).sign()
        if sgn == 0:
            raise ValueError("chamber direction is orthogonal to a root")
        if sgn > 0:
            positive.append(r)
    pos_set = set(positive)
    decomposable = set()
    for a, b in itertools.combinations(positive, 2):
        s = tuple(x + y for x, y in zip(a, b))
        if s in pos_set:
            decomposable.add(s)
    simple = [r for r in positive if r not in decomposable]
    simple.sort(key=lambda r: dot(r, h))
    return simple


def build_root_system(t: LieType, frame: str | None = None) -> RootSystem:
    if t.family == "A":
        roots, simple = _a_roots(t.rank)
        return RootSystem(t, t.rank + 1, tuple(roots), tuple(simple))
    if t.family == "D":
        roots, simple = _d_roots(t.rank)
        return RootSystem(t, t.rank, tuple(roots), tuple(simple))
    frame = frame or "listed"
    if frame not in E6_FRAMES:
        raise ValueError(f"unknown E6 frame {frame!r}; expected one of {E6_FRAMES}")
    roots = _e6_listed_roots() if frame == "listed" else _e6_a5a1_roots()
    simple = _simple_from_chamber(roots, _E6_CHAMBER)
    if len(simple) != 6:
        raise AssertionError("E6 simple system has the wrong size")
    return RootSystem(t, 6, tuple(roots), tuple(simple), frame=frame)


def contains_minus_id(t: LieType) -> bool:
    """Whether -Id lies in the Weyl group (restricted to A, D, E6)."""
    if t.family == "A":
        return t.rank == 1
    if t.family == "D":
        return t.rank % 2 == 0
    return False


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------


def _denominator(q) -> int:
    return int(q.denominator)


class _CoordinateChart:
    """Exact coordinates with respect to a basis of simple roots.

    Points x = sum c_i alpha_i are stored as integer pairs (P, Q, D) with
    c = (P + sqrt3 Q) / D.
    """

    def __init__(self, basis: Sequence[Sequence]):
        self.basis = [tuple(as_scalar(e) for e in v) for v in basis]
        self.n = len(self.basis)
        self.dim = len(self.basis[0])
        self.gram = [[dot(a, b) for b in self.basis] for a in self.basis]
        L = 1
        for v in self.basis:
            for e in v:
                L = lcm(L, _denominator(e.a), _denominator(e.b))
        self.L = L
        self.pm = [[int(e.a * L) for e in v] for v in self.basis]
        self.qm = [[int(e.b * L) for e in v] for v in self.basis]

    def coordinates(self, x: Sequence) -> tuple:
        rhs = [dot(x, a) for a in self.basis]
        c = solve(self.gram, rhs)
        if tuple(self._combine(c)) != tuple(as_scalar(e) for e in x):
            raise ValueError("point is not in the span of the simple roots")
        return c

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.dim:
            return False
        try:
            self.coordinates(x)
        except ValueError:
            return False
        return True

    def _combine(self, c: Sequence) -> list:
        out = [Scalar(0)] * self.dim
        for ci, v in zip(c, self.basis):
            if ci:
                out = [o + ci * e for o, e in zip(out, v)]
        return out

    def encode(self, c: Sequence) -> tuple:
        D = 1
        for ci in c:
            D = lcm(D, _denominator(ci.a), _denominator(ci.b))
        P = tuple(int(ci.a * D) for ci in c)
        Q = tuple(int(ci.b * D) for ci in c)
        return P, Q, D

    def decode(self, P: Sequence[int], Q: Sequence[int], D: int) -> tuple:
        den = D * self.L
        out = []
        for k in range(self.dim):
            na = 0
            nb = 0
            for i in range(self.n):
                pik, qik = self.pm[i][k], self.qm[i][k]
                if pik:
                    na += P[i] * pik
                    nb += Q[i] * pik
                if qik:
                    na += 3 * Q[i] * qik
                    nb += P[i] * qik
            out.append(Scalar._raw(mpq(na, den), mpq(nb, den)))
        return tuple(out)


def _check_point(rs: RootSystem, x: Sequence) -> tuple:
    x = tuple(as_scalar(e) for e in x)
    if len(x) != rs.ambient_dim:
        raise ValueError(f"{rs.lie_type} points have {rs.ambient_dim} coordinates, got {len(x)}")
    if rs.lie_type.family == "A" and sum(x, Scalar(0)):
        raise ValueError("A_n points must have entries summing to zero")
    return x


def iter_orbit(rs: RootSystem, x: Sequence) -> Iterator[tuple]:
    """Yield the Weyl orbit of ``x`` lazily, in breadth-first order."""
    x = _check_point(rs, x)
    chart: _CoordinateChart = rs._coords
    P, Q, D = chart.encode(chart.coordinates(x))
    cartan = rs.cartan
    n = len(cartan)
    start = (P, Q)
    seen = {start}
    queue = deque([start])
    while queue:
        P, Q = queue.popleft()
        yield chart.decode(P, Q, D)
        for j in range(n):
            kp = 0
            kq = 0
            for i in range(n):
                cij = cartan[i][j]
                if cij:
                    kp += P[i] * cij
                    kq += Q[i] * cij
            if not kp and not kq:
                continue  # fixed by this reflection
            P2 = P[:j] + (P[j] - kp,) + P[j + 1:]
            Q2 = Q[:j] + (Q[j] - kq,) + Q[j + 1:]
            key = (P2, Q2)
            if key not in seen:
                seen.add(key)
                queue.append(key)


@dataclass(frozen=True)
class WeylOrbit:
    base_point: tuple
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in self._set

    def is_symmetric(self) -> bool:
        """S = -S."""
        return all(tuple(-e for e in p) in self._set for p in self.points)


def weyl_orbit(rs: RootSystem, x: Sequence) -> WeylOrbit:
    x = _check_point(rs, x)
    return WeylOrbit(x, tuple(iter_orbit(rs, x)))


def orbit_size(rs: RootSystem, x: Sequence) -> int:
    return sum(1 for _ in iter_orbit(rs, x))


def weyl_group_order(rs: RootSystem) -> int:
    """|W|, the orbit size of a point no root is orthogonal to."""
    chart: _CoordinateChart = rs._coords
    base = len(rs.roots) + 1
    for shift in range(1, 100):
        x = chart._combine([Scalar((base + shift) ** k) for k in range(chart.n)])
        if all(dot(r, x) for r in rs.roots):
            return orbit_size(rs, x)
    raise AssertionError("no regular point found")


def span_rank(points: Sequence[Sequence]) -> int:
    return rank([list(p) for p in points])
