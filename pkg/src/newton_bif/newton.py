"""Face classification on the Newton polyhedron at infinity."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cone import Cone, is_simplicial
from .poly import SparsePoly
from .polytope import (FaceDescriptor, Fan, LatticePolytope, check_full_dimensional,
                       convex_hull, dual_fan)


@dataclass(frozen=True)
class FaceClassification:
    face: FaceDescriptor
    contains_origin: bool
    sigma: Cone
    atypical: bool
    relatively_simple: bool
    sigma_cap_orthant: Cone
    bad_partner: FaceDescriptor | None = None

    @property
    def dim(self) -> int:
        return self.face.dim

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.face.vertices],
                "dim": self.face.dim,
                "contains_origin": self.contains_origin,
                "sigma_rays": [list(r) for r in self.sigma.rays],
                "sigma_dim": self.sigma.dim,
                "sigma_cap_orthant_rays": [list(r) for r in self.sigma_cap_orthant.rays],
                "sigma_cap_orthant_dim": self.sigma_cap_orthant.dim,
                "atypical": self.atypical,
                "relatively_simple": self.relatively_simple,
                "bad_partner": None if self.bad_partner is None
                else [list(v) for v in self.bad_partner.vertices]}


def _require_nonzero(f: SparsePoly) -> None:
    if f.is_zero():
        raise ValueError("zero polynomial has no Newton polyhedron")


def newton_polytope(f: SparsePoly) -> LatticePolytope:
    _require_nonzero(f)
    return convex_hull(f.support)


def newton_polyhedron_at_infinity(f: SparsePoly) -> LatticePolytope:
    _require_nonzero(f)
    return convex_hull(list(f.support) + [(0,) * f.ambient_dim])


def is_convenient(f: SparsePoly) -> bool:
    n = f.ambient_dim
    for i in range(n):
        if not any(e[i] > 0 and all(e[j] == 0 for j in range(n) if j != i) for e in f.support):
            return False
    return True


def check_dim_full(f: SparsePoly) -> bool:
    if f.is_zero():
        return False
    return newton_polyhedron_at_infinity(f).dim == f.ambient_dim


def is_relatively_simple(c: FaceClassification) -> bool:
    return c.sigma.dim <= 3 or is_simplicial(c.sigma)


class NewtonAnalysis:
    """Newton polyhedron at infinity of ``f`` with its dual fan and face records."""

    def __init__(self, f: SparsePoly):
        _require_nonzero(f)
        self.f = f
        self.n = f.ambient_dim
        self.polytope = newton_polyhedron_at_infinity(f)
        self.f0 = f.constant_term

    @property
    def full_dimensional(self) -> bool:
        return self.polytope.dim == self.n

    @cached_property
    def fan(self) -> Fan:
        return dual_fan(self.polytope)

    @cached_property
    def shifted_np(self) -> LatticePolytope | None:
        """NP(f - f(0)), or None when f is constant."""
        g = self.f - self.f0
        return None if g.is_zero() else convex_hull(g.support)

    def classify(self, face: FaceDescriptor) -> FaceClassification:
        sigma = self.fan.cones[face]
        orth = Cone.orthant(self.n)
        cap = sigma.intersect(orth)
        atypical = face.contains_origin and face.dim >= 1 and not orth.contains_cone(sigma)
        simple = sigma.dim <= 3 or is_simplicial(sigma)
        partner = self._bad_partner(face) if atypical else None
        return FaceClassification(face, face.contains_origin, sigma, atypical, simple, cap,
                                  partner)

    def _delta(self, face: FaceDescriptor) -> FaceDescriptor | None:
        np_ = self.shifted_np
        if np_ is None:
            return None
        on_face = [v for v in np_.vertices if self.polytope.face_contains(face, v)]
        if not on_face:
            return np_.face([])
        return np_.face_by_vertices(on_face)

    def _bad_partner(self, face: FaceDescriptor) -> FaceDescriptor | None:
        delta = self._delta(face)
        if delta is not None and delta.dim == face.dim:
            return delta
        return None

    @cached_property
    def origin_classifications(self) -> list[FaceClassification]:
        check_full_dimensional(self.polytope)
        return [self.classify(f) for f in self.polytope.faces
                if f.dim >= 0 and f.contains_origin]

    @cached_property
    def atypical(self) -> list[FaceClassification]:
        return [c for c in self.origin_classifications if c.atypical]

    def bad_faces(self) -> list[tuple[FaceDescriptor | None, FaceDescriptor]]:
        return [(c.bad_partner, c.face) for c in self.atypical]

    def delta_of(self, face: FaceDescriptor) -> FaceDescriptor | None:
        return self._delta(face)


def atypical_faces(f: SparsePoly) -> list[FaceClassification]:
    return NewtonAnalysis(f).atypical


def bad_faces(f: SparsePoly) -> list[tuple[FaceDescriptor | None, FaceDescriptor]]:
    if (f - f.constant_term).is_zero():
        raise ValueError("bad_faces: f - f(0) is zero")
    return NewtonAnalysis(f).bad_faces()
