"""Lattice polytopes with full face lattices, supporting faces and dual fans."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from .cone import MAX_AMBIENT_DIM, Cone, GuardError, double_description, glex_key
from .linalg import Vector, det, dot, rank, saturated_basis, solve_in_span, sub


class NotFullDimensionalError(ValueError):
    pass


@dataclass(frozen=True)
class FaceDescriptor:
    vertex_indices: tuple[int, ...]
    dim: int
    vertices: tuple[Vector, ...]
    contains_origin: bool

    @property
    def key(self) -> frozenset[int]:
        return frozenset(self.vertex_indices)

    def __str__(self) -> str:
        return "conv{" + ", ".join(str(v) for v in self.vertices) + "}"

    def to_json(self) -> dict:
        return {"vertex_indices": list(self.vertex_indices), "dim": self.dim,
                "vertices": [list(v) for v in self.vertices],
                "contains_origin": self.contains_origin}


@dataclass(frozen=True)
class Facet:
    vertex_indices: frozenset[int]
    offset: int            # inequality offset + normal . x >= 0
    normal: Vector


class LatticePolytope:
    """Convex hull of finitely many integer points.

    ``faces`` holds every face (empty face and the polytope itself included),
    ordered by dimension and then by vertex indices.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in p) for p in points}, key=glex_key)
        if not pts:
            raise ValueError("convex_hull: empty point list")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("convex_hull: points of different dimensions")
        if n > MAX_AMBIENT_DIM:
            raise GuardError(f"ambient dimension {n} exceeds {MAX_AMBIENT_DIM}")
        self.ambient_dim = n
        homog = [(1,) + p for p in pts]
        lin, rays = double_description(homog, [], n + 1)
        # affine hull equations and facet inequalities as (offset, normal)
        self.equations: tuple[tuple[int, Vector], ...] = tuple((l[0], l[1:]) for l in lin)
        eq_normals = [e[1] for e in self.equations]
        verts = []
        for p in pts:
            tight = [r[1:] for r in rays if r[0] + dot(r[1:], p) == 0]
            if rank(tight + eq_normals) == n:
                verts.append(p)
        self.vertices: tuple[Vector, ...] = tuple(verts)
        self.facets: tuple[Facet, ...] = tuple(
            Facet(frozenset(i for i, v in enumerate(verts) if r[0] + dot(r[1:], v) == 0),
                  r[0], r[1:])
            for r in rays)
        self.dim = n - len(self.equations)
        self._build_faces()

    # ---- face lattice -------------------------------------------------
    def _affine_dim(self, idx: Iterable[int]) -> int:
        idx = sorted(idx)
        if not idx:
            return -1
        v0 = self.vertices[idx[0]]
        return rank([sub(self.vertices[i], v0) for i in idx[1:]]) if len(idx) > 1 else 0

    def _build_faces(self) -> None:
        full = frozenset(range(len(self.vertices)))
        seen = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for f in frontier:
                for fa in self.facets:
                    g = f & fa.vertex_indices
                    if g != f and g not in seen:
                        seen.add(g)
                        nxt.append(g)
            frontier = nxt
        seen.add(frozenset())
        origin = (0,) * self.ambient_dim
        faces = []
        for s in seen:
            idx = tuple(sorted(s))
            faces.append(FaceDescriptor(idx, self._affine_dim(idx),
                                        tuple(self.vertices[i] for i in idx),
                                        bool(idx) and self._face_contains(s, origin)))
        faces.sort(key=lambda f: (f.dim, f.vertex_indices))
        self.faces: tuple[FaceDescriptor, ...] = tuple(faces)
        self._by_key = {f.key: f for f in faces}

    def face(self, vertex_indices: Iterable[int]) -> FaceDescriptor:
        try:
            return self._by_key[frozenset(vertex_indices)]
        except KeyError:
            raise ValueError("vertex set is not a face of this polytope") from None

    def face_by_vertices(self, vertices: Iterable[Sequence[int]]) -> FaceDescriptor:
        pos = {v: i for i, v in enumerate(self.vertices)}
        try:
            return self.face(pos[tuple(v)] for v in vertices)
        except KeyError:
            raise ValueError("not a vertex of this polytope") from None

    def faces_of_dim(self, d: int) -> list[FaceDescriptor]:
        return [f for f in self.faces if f.dim == d]

    @property
    def whole(self) -> FaceDescriptor:
        return self.faces[-1]

    def owns(self, face: FaceDescriptor) -> bool:
        return self._by_key.get(face.key) == face

    # ---- membership ---------------------------------------------------
    def contains(self, point: Sequence) -> bool:
        return all(fa.offset + dot(fa.normal, point) >= 0 for fa in self.facets) and \
            all(o + dot(a, point) == 0 for o, a in self.equations)

    def _face_contains(self, key: frozenset[int], point: Sequence) -> bool:
        if not key or not self.contains(point):
            return False
        return all(fa.offset + dot(fa.normal, point) == 0
                   for fa in self.facets if key <= fa.vertex_indices)

    def face_contains(self, face: FaceDescriptor, point: Sequence) -> bool:
        if not self.owns(face):
            raise ValueError("face does not belong to this polytope")
        return self._face_contains(face.key, point)

    def subfaces(self, face: FaceDescriptor) -> list[FaceDescriptor]:
        return [g for g in self.faces if g.key <= face.key]

    # ---- geometry -------------------------------------------------------
    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "dim": self.dim,
                "vertices": [list(v) for v in self.vertices],
                "faces": [f.to_json() for f in self.faces]}

    def f_vector(self) -> list[int]:
        return [len(self.faces_of_dim(d)) for d in range(self.dim + 1)]

    @cached_property
    def _children(self) -> dict[frozenset[int], list[FaceDescriptor]]:
        out: dict[frozenset[int], list[FaceDescriptor]] = {}
        for f in self.faces:
            out[f.key] = [g for g in self.faces if g.dim == f.dim - 1 and g.key < f.key]
        return out

    def triangulation(self, face: FaceDescriptor | None = None) -> list[tuple[int, ...]]:
        """Pulling triangulation of a face into simplices (vertex index tuples)."""
        face = face or self.whole
        memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

        def tri(f: FaceDescriptor):
            if f.key in memo:
                return memo[f.key]
            if f.dim <= 0:
                res = [f.vertex_indices]
            else:
                apex = f.vertex_indices[0]
                res = []
                for g in self._children[f.key]:
                    if apex not in g.key:
                        res.extend((apex,) + s for s in tri(g))
            memo[f.key] = res
            return res

        return tri(face)


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope(points)


def supporting_face(p: LatticePolytope, u: Sequence[int]) -> FaceDescriptor:
    """Face where <u, .> attains its minimum over the polytope."""
    vals = [dot(u, v) for v in p.vertices]
    m = min(vals)
    return p.face(i for i, x in enumerate(vals) if x == m)


def lattice_basis_of_face_span(face: FaceDescriptor) -> list[Vector]:
    """Basis of the saturated lattice parallel to the face, in Hermite normal form."""
    if face.dim < 1:
        raise ValueError("lattice_basis_of_face_span: face has dimension < 1")
    v0 = face.vertices[0]
    diffs = [sub(v, v0) for v in face.vertices[1:]]
    return saturated_basis(diffs, len(v0))


def lattice_coordinates(points: Sequence[Sequence[int]], basis: Sequence[Sequence[int]],
                        origin: Sequence[int]) -> list[tuple[int, ...]]:
    out = []
    for p in points:
        c = solve_in_span(basis, sub(p, origin))
        if c is None or any(x.denominator != 1 for x in c):
            raise ValueError(f"point {p} is not in the lattice spanned by the basis")
        out.append(tuple(int(x) for x in c))
    return out


def normalized_volume(p: LatticePolytope, face: FaceDescriptor | None = None) -> int:
    """d! times the lattice volume, w.r.t. the lattice of the affine span."""
    face = face or p.whole
    if face.dim < 0:
        return 0
    if face.dim == 0:
        return 1
    basis = lattice_basis_of_face_span(face)
    v0 = face.vertices[0]
    coords = dict(zip(face.vertex_indices,
                      lattice_coordinates(face.vertices, basis, v0)))
    total = Fraction(0)
    for simplex in p.triangulation(face):
        base = coords[simplex[0]]
        total += abs(det([sub(coords[i], base) for i in simplex[1:]]))
    return int(total)


@dataclass
class Fan:
    ambient_dim: int
    cones: dict[FaceDescriptor, Cone] = field(default_factory=dict)

    def locate(self, u: Sequence[int]) -> FaceDescriptor:
        """The unique face whose cone has ``u`` in its relative interior."""
        hits = [f for f, c in self.cones.items() if c.in_relative_interior(u)]
        if len(hits) != 1:
            raise ArithmeticError(f"fan partition violated at {u}: {len(hits)} cones")
        return hits[0]

    def to_json(self) -> list[dict]:
        return [{"face": f.to_json(), "cone": c.to_json()} for f, c in self.cones.items()]


def dual_cone_of_face(p: LatticePolytope, face: FaceDescriptor) -> Cone:
    """Closure of {u : supporting_face(p, u) = face}."""
    w0 = face.vertices[0]
    ineqs = [sub(v, w0) for i, v in enumerate(p.vertices) if i not in face.key]
    eqs = [sub(w, w0) for w in face.vertices[1:]]
    return Cone.from_halfspaces(ineqs, p.ambient_dim, eqs=eqs)


def check_full_dimensional(p: LatticePolytope) -> None:
    if p.dim < p.ambient_dim:
        raise NotFullDimensionalError(
            "dual subdivision is not a fan; full-dimensional Γ_∞ required")


def dual_fan(p: LatticePolytope) -> Fan:
    check_full_dimensional(p)
    fan = Fan(p.ambient_dim)
    for f in p.faces:
        if f.dim >= 0:
            fan.cones[f] = dual_cone_of_face(p, f)
    return fan
