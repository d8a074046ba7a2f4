"""Eigenvalue-multiplicity strata, genericity, and codimension counts."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exactlin import Scalar, as_scalar, dot, vector
from .rootsys import LieType, RootSystem, iter_orbit


@dataclass(frozen=True)
class MultiplicityType:
    family: LieType
    n0: int
    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted(self.parts, reverse=True))
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts) or self.n0 < 0 or self.n0 % 2:
            raise ValueError("invalid multiplicity type")
        t = self.family
        if t.family == "A" and (self.n0 or sum(parts) != t.rank + 1):
            raise ValueError(f"A_{t.rank} parts must sum to {t.rank + 1}")
        if t.family == "D" and self.n0 + 2 * sum(parts) != 2 * t.rank:
            raise ValueError(f"D_{t.rank} needs n0 + 2*sum(parts) = {2 * t.rank}")
        if t.family == "E6" and (self.n0 or sum(parts) != 6):
            raise ValueError("E6 parts must sum to 6")

    @property
    def m(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class StratumReport:
    mtype: MultiplicityType
    codim: int
    generic: bool

    def to_json(self) -> dict:
        t = self.mtype.family
        return {
            "family": t.family,
            "rank": t.rank,
            "n0": self.mtype.n0,
            "parts": list(self.mtype.parts),
            "codim": self.codim,
            "generic": self.generic,
        }


def _check_cartan(t: LieType, x: Sequence) -> tuple:
    x = tuple(as_scalar(e) for e in x)
    if len(x) != t.ambient_dim:
        raise ValueError(f"{t} points have {t.ambient_dim} coordinates")
    if t.family == "A" and sum(x, Scalar(0)):
        raise ValueError("A_n points must have entries summing to zero")
    return x


def multiplicity_type(t: LieType, x: Sequence) -> MultiplicityType:
    x = _check_cartan(t, x)
    if t.family == "D":
        zeros = sum(1 for e in x if not e)
        counts = Counter(abs(e) for e in x if e)
        return MultiplicityType(t, 2 * zeros, tuple(counts.values()))
    return MultiplicityType(t, 0, tuple(Counter(x).values()))


def is_generic_type(mtype: MultiplicityType) -> bool:
    """The closed-form generic condition for A and D."""
    if mtype.family.family == "A":
        return mtype.parts.count(1) >= 2
    if mtype.family.family == "D":
        return mtype.m >= 2 and 1 in mtype.parts
    raise ValueError("E6 genericity is decided by orbit search; use is_generic")


def is_generic(t: LieType, x: Sequence, rs: RootSystem | None = None) -> bool:
    """Genericity of a nonzero Cartan element.

    For E6 the point is generic when its Weyl orbit contains a vector with
    at least three distinct entries; entries are read in the frame of
    ``rs`` (use the ``"a5a1"`` frame for the A_5 x A_1 meaning).
    """
    x = _check_cartan(t, x)
    if not any(x):
        raise ValueError("genericity is undefined at x = 0")
    if t.family in ("A", "D"):
        return is_generic_type(multiplicity_type(t, x))
    if rs is None:
        raise ValueError("E6 genericity needs the root system")
    return any(len(set(p)) >= 3 for p in iter_orbit(rs, x))


def codim(mtype: MultiplicityType) -> int:
    parts = mtype.parts
    base = sum(p * p for p in parts) - len(parts)
    fam = mtype.family.family
    if fam == "A":
        return base
    if fam == "D":
        return mtype.n0 * (mtype.n0 - 1) // 2 + base
    raise ValueError("no closed codimension formula for E6; see centralizer_dim")


def partitions(n: int, largest: int | None = None) -> Iterator[tuple]:
    """Integer partitions of n, parts in non-increasing order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def enumerate_strata(t: LieType) -> list:
    if t.family == "A":
        types = [MultiplicityType(t, 0, p) for p in partitions(t.rank + 1)]
    elif t.family == "D":
        types = []
        for zeros in range(t.rank + 1):
            for p in partitions(t.rank - zeros):
                types.append(MultiplicityType(t, 2 * zeros, p))
    else:
        raise ValueError("strata tables exist for families A and D only")
    reports = [StratumReport(mt, codim(mt), is_generic_type(mt)) for mt in types]
    reports.sort(key=lambda r: (r.codim, r.mtype.n0, r.mtype.parts))
    return reports


def min_nongeneric_codim(t: LieType) -> int | None:
    vals = [r.codim for r in enumerate_strata(t) if not r.generic]
    return min(vals) if vals else None


def centralizer_dim(rs: RootSystem, x: Sequence) -> int:
    """rank + number of roots orthogonal to x."""
    x = tuple(as_scalar(e) for e in x)
    return rs.rank + sum(1 for r in rs.roots if not dot(r, x))


# ---------------------------------------------------------------------------
# E6 probe
# ---------------------------------------------------------------------------

E6_DEGENERATE_TYPES = ((6,), (5, 1), (4, 2), (3, 3))


def random_rational(rng: random.Random, height: int = 9) -> Fraction:
    """Nonzero rational with numerator and denominator bounded by ``height``."""
    while True:
        num = rng.randint(-height, height)
        if num:
            return Fraction(num, rng.randint(1, height))


def random_point_of_type(rng: random.Random, parts: Sequence[int], height: int = 9) -> tuple:
    """Random vector in R^6 whose distinct entries have the given multiplicities."""
    values: list = []
    while len(values) < len(parts):
        q = random_rational(rng, height)
        if q not in values:
            values.append(q)
    entries = [v for v, k in zip(values, parts) for _ in range(k)]
    rng.shuffle(entries)
    return vector(entries)


def e6_generic_probe(rs: RootSystem, trials: int, seed: int) -> dict:
    """Sample degenerate-type E6 points and test genericity by orbit search."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    report = {"seed": seed, "trials": trials, "frame": rs.frame, "types": {}}
    for parts in E6_DEGENERATE_TYPES:
        failures = []
        for _ in range(trials):
            x = random_point_of_type(rng, parts)
            if not is_generic(rs.lie_type, x, rs):
                failures.append({
                    "point": [str(e) for e in x],
                    "centralizer_dim": centralizer_dim(rs, x),
                })
        report["types"]["{" + ",".join(map(str, parts)) + "}"] = {
            "failure_fraction": len(failures) / trials,
            "failures": failures,
        }
    return report
