"""Rational polyhedral cones with dual V-/H-representations.

The only V<->H conversion engine is the double description method
(incremental, combinatorial adjacency test).  All arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import (Vector, canonical_line, dot, nullspace, primitive, rank,
                     rref)

MAX_AMBIENT_DIM = 8
MAX_RAYS = 64


class GuardError(RuntimeError):
    """Desk-scale limits (dimension, ray count) exceeded."""


def glex_key(v: Sequence[int]):
    return (sum(v), tuple(v))


def _independent_rows(rows: list[list[Fraction]], k: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    for i, r in enumerate(rows):
        if rank(basis + [r]) > len(basis):
            basis.append(r)
            chosen.append(i)
            if len(chosen) == k:
                break
    return chosen


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, _ = rref(aug)
    return [row[n:] for row in red]


def double_description(ineqs: Sequence[Sequence], eqs: Sequence[Sequence],
                       ambient_dim: int) -> tuple[list[Vector], list[Vector]]:
    """Generators of {x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}.

    Returns ``(lineality_basis, extreme_rays)``; rays are primitive integer
    vectors and are irredundant modulo the lineality space.
    """
    if ambient_dim > MAX_AMBIENT_DIM:
        raise GuardError(f"ambient dimension {ambient_dim} exceeds {MAX_AMBIENT_DIM}")
    ineqs = [tuple(Fraction(x) for x in a) for a in ineqs if any(a)]
    eqs = [tuple(Fraction(x) for x in e) for e in eqs if any(e)]
    lineality = nullspace(ineqs + eqs, ambient_dim) if (ineqs or eqs) else \
        nullspace([], ambient_dim)
    # parameterise the complement of the lineality space inside {E x = 0}
    w_basis = nullspace(eqs + [tuple(map(Fraction, l)) for l in lineality], ambient_dim)
    k = len(w_basis)
    if k == 0:
        return [canonical_line(l) for l in lineality], []
    a_red = [[sum(Fraction(a[i]) * w[i] for i in range(ambient_dim)) for w in w_basis]
             for a in ineqs]
    order = _independent_rows(a_red, k)
    if len(order) < k:
        # cannot happen: the reduced system is pointed by construction
        raise ArithmeticError("double description: reduced system not of full rank")
    b = [a_red[i] for i in order]
    binv = _inverse(b)
    # rays are the columns of B^{-1}; ray j is tight on rows order[i], i != j
    rays: list[tuple[tuple[Fraction, ...], int]] = []
    for j in range(k):
        col = tuple(binv[i][j] for i in range(k))
        tight = 0
        for i in range(k):
            if i != j:
                tight |= 1 << order[i]
        rays.append((col, tight))
    processed = set(order)
    for idx, a in enumerate(a_red):
        if idx in processed:
            continue
        processed.add(idx)
        bit = 1 << idx
        vals = [sum(x * y for x, y in zip(a, r)) for r, _ in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            rays = [(r, t | bit) if vals[i] == 0 else (r, t) for i, (r, t) in enumerate(rays)]
            continue
        new = []
        for p in pos:
            for q in neg:
                common = rays[p][1] & rays[q][1]
                if bin(common).count("1") < k - 2:
                    continue
                adjacent = True
                for s, (_, ts) in enumerate(rays):
                    if s != p and s != q and (ts & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                rp, rq = rays[p][0], rays[q][0]
                vp, vq = vals[p], vals[q]
                comb = tuple(vp * y - vq * x for x, y in zip(rp, rq))
                scaled = tuple(Fraction(x) for x in primitive(comb))
                new.append((scaled, common | bit))
        rays = [rays[i] for i in pos] + [(rays[i][0], rays[i][1] | bit) for i in zero] + new
        if len(rays) > 16 * MAX_RAYS:
            raise GuardError("double description: intermediate ray count exceeded")
    out = []
    for r, _ in rays:
        x = [sum(r[j] * w_basis[j][i] for j in range(k)) for i in range(ambient_dim)]
        out.append(primitive(x))
    out = sorted(set(out), key=glex_key)
    if len(out) > MAX_RAYS:
        raise GuardError(f"cone has {len(out)} extreme rays (> {MAX_RAYS})")
    return sorted({canonical_line(l) for l in lineality}, key=glex_key), out


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone {u : f.u >= 0 (f in facets), m.u = 0 (m in equations)}.

    ``rays`` and ``lineality`` give the V-representation.  Both sides are
    always populated and describe the same set.
    """

    ambient_dim: int
    rays: tuple[Vector, ...]
    lineality: tuple[Vector, ...] = ()
    facets: tuple[Vector, ...] = ()
    equations: tuple[Vector, ...] = ()
    _dim: int = field(default=-1, repr=False, compare=False)

    # ---- constructors -------------------------------------------------
    @classmethod
    def from_halfspaces(cls, ineqs: Iterable[Sequence], ambient_dim: int,
                        eqs: Iterable[Sequence] = ()) -> "Cone":
        lin, rays = double_description(list(ineqs), list(eqs), ambient_dim)
        return cls._from_generators(rays, lin, ambient_dim)

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence], ambient_dim: int,
                  lineality: Iterable[Sequence] = ()) -> "Cone":
        rays = [primitive(r) for r in rays if any(r)]
        lineality = [canonical_line(l) for l in lineality if any(l)]
        # H-rep first, then re-derive irredundant rays from it
        facets, eqs = _dual_facets(rays, lineality, ambient_dim)
        lin, ext = double_description(facets, eqs, ambient_dim)
        return cls(ambient_dim, tuple(ext), tuple(lin), tuple(facets), tuple(eqs))

    @classmethod
    def _from_generators(cls, rays, lineality, ambient_dim) -> "Cone":
        facets, eqs = _dual_facets(rays, lineality, ambient_dim)
        return cls(ambient_dim, tuple(rays), tuple(lineality), tuple(facets), tuple(eqs))

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        unit = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        return cls(n, tuple(sorted(unit, key=glex_key)), (), tuple(sorted(unit, key=glex_key)), ())

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls.from_halfspaces([], n, eqs=[tuple(int(i == j) for i in range(n))
                                               for j in range(n)])

    # ---- basic data ---------------------------------------------------
    @property
    def halfspaces(self) -> tuple[Vector, ...]:
        """Inward normals h with h.u >= 0; each equation appears as a +/- pair."""
        out = list(self.facets)
        for m in self.equations:
            out.append(m)
            out.append(tuple(-x for x in m))
        return tuple(out)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def dim(self) -> int:
        return rank(list(self.rays) + list(self.lineality))

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def contains(self, u: Sequence) -> bool:
        return all(dot(f, u) >= 0 for f in self.facets) and \
            all(dot(m, u) == 0 for m in self.equations)

    def in_relative_interior(self, u: Sequence) -> bool:
        return all(dot(f, u) > 0 for f in self.facets) and \
            all(dot(m, u) == 0 for m in self.equations)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays) and \
            all(self.contains(l) and self.contains(tuple(-x for x in l))
                for l in other.lineality)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.contains_cone(other) \
            and other.contains_cone(self)

    def __hash__(self):
        return hash((self.ambient_dim, self.rays, self.lineality))

    def intersect(self, other: "Cone") -> "Cone":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("cones live in different ambient spaces")
        return Cone.from_halfspaces(self.facets + other.facets, self.ambient_dim,
                                    eqs=self.equations + other.equations)

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays],
                "lineality": [list(l) for l in self.lineality],
                "halfspaces": [list(h) for h in self.halfspaces],
                "dim": self.dim}


def _dual_facets(rays, lineality, n) -> tuple[list[Vector], list[Vector]]:
    """Irredundant H-representation of cone(rays) + span(lineality)."""
    dual_lin, dual_rays = double_description(
        list(rays), list(lineality), n)
    return dual_rays, dual_lin


def cone_intersect(c1: Cone, c2: Cone) -> Cone:
    return c1.intersect(c2)


def is_simplicial(c: Cone) -> bool:
    """A pointed cone is simplicial when its extreme rays are linearly independent."""
    if not c.is_pointed:
        raise ValueError("is_simplicial: cone is not pointed (lineality present)")
    return len(c.rays) == c.dim


def face_of_orthant(c: Cone) -> frozenset[int] | None:
    """Coordinate set J with c = {u >= 0 : u_j = 0 for j not in J}, or None.

    Coordinates are 1-based.  Raises if ``c`` is not inside the orthant.
    """
    n = c.ambient_dim
    if not Cone.orthant(n).contains_cone(c):
        raise ValueError("face_of_orthant: cone is not contained in the nonnegative orthant")
    support = {i for r in c.rays for i, x in enumerate(r) if x != 0}
    for i in support:
        if not c.contains(tuple(int(j == i) for j in range(n))):
            return None
    return frozenset(i + 1 for i in support)


def common_edges_count(sigma: Cone) -> int:
    """Number of extreme rays shared by ``sigma`` and ``sigma`` cut with the orthant."""
    if not sigma.is_pointed:
        raise ValueError("common_edges_count: cone is not pointed")
    cut = sigma.intersect(Cone.orthant(sigma.ambient_dim))
    return len(set(sigma.rays) & set(cut.rays))


def e_function(tau: Cone) -> int:
    """1 when cutting ``tau`` with the orthant keeps its dimension, else 0."""
    if not tau.is_pointed:
        raise ValueError("e_function: cone is not pointed")
    cut = tau.intersect(Cone.orthant(tau.ambient_dim))
    return 1 if cut.dim == tau.dim else 0
