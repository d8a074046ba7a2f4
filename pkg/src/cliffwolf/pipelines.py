"""End-to-end verification pipelines shared by the CLI and the test-suite."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import liegroup
from .quadric import (
    CenterCertificate,
    Verdict,
    center_forced,
    midpoint_affine_certify,
    symmetric_span_certify,
)
from .rootsys import RootSystem, iter_orbit, weyl_orbit


class ConcordanceError(AssertionError):
    """Two certifiers disagree; indicates a bug, never a mathematical outcome."""


@dataclass
class OrbitCertification:
    orbit_size: int
    certificates: dict  # method name -> CenterCertificate
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "orbit_size": self.orbit_size,
            "verdict": self.verdict.value,
            "certificates": {k: c.to_json() for k, c in self.certificates.items()},
        }


def cartan_basis(rs: RootSystem):
    """Chart basis for the Cartan space, or None when it is all of R^d."""
    return rs.simple_roots if rs.lie_type.family == "A" else None


def nullspace_certify(rs: RootSystem, x) -> CenterCertificate:
    """NULLSPACE decision on the Weyl orbit of x, consuming the orbit lazily."""
    return center_forced(iter_orbit(rs, x), basis=cartan_basis(rs))


def certify_point(rs: RootSystem, x, structural: bool = True) -> OrbitCertification:
    orbit = weyl_orbit(rs, x)
    certs = {}
    if structural:
        certs["SYMMETRIC_SPAN"] = symmetric_span_certify(orbit.points, dim=rs.rank)
        certs["MIDPOINT_AFFINE"] = midpoint_affine_certify(orbit.points, rs.simple_roots)
    ns = center_forced(orbit.points, basis=cartan_basis(rs))
    certs["NULLSPACE"] = ns
    for name, c in certs.items():
        if c.certified and not ns.certified:
            raise ConcordanceError(f"{name} certified but NULLSPACE answered {ns.verdict.value}")
    return OrbitCertification(len(orbit), certs, ns.verdict)


def coordinate_ad(family: str, n: int):
    basis = liegroup.algebra_basis(family, n)

    def ad(g, y):
        return liegroup.ad_matrix(g, basis) @ np.asarray(y, dtype=float)

    return ad


def haar_samples(family: str, n: int, count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return [liegroup.haar_sample(family, n, rng) for _ in range(count)]
