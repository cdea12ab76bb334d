"""Critical values on face tori, affine critical values and non-degeneracy checks.

Dimension 1 goes through an exact eliminant in the value variable.  In
dimension 2 curve components of the critical locus are split off with an
exact bivariate gcd, and the remaining isolated points come from resultants.
Higher dimensions only get a seeded multistart Newton search, and results
from it are labelled accordingly.
"""
from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import elim
from . import numeric as nm
from .linalg import torus_lift_exponents
from .numeric import Tolerances, Value
from .poly import AFFINE, LAURENT, SparsePoly, gamma_part, monomial_change_of_coordinates
from .polytope import FaceDescriptor, LatticePolytope, lattice_basis_of_face_span

log = logging.getLogger(__name__)

EXACT, NUMERIC, HEURISTIC = "exact", "numeric", "heuristic"
PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"
_STATUS_RANK = {EXACT: 0, NUMERIC: 1, HEURISTIC: 2}


class CriticalValuesNotFinite(ArithmeticError):
    """The critical locus carries infinitely many values."""


def weakest(*statuses: str) -> str:
    return max(statuses, key=_STATUS_RANK.__getitem__, default=EXACT)


def derive_rng(seed: int, key) -> random.Random:
    """Independent generator for one task, reproducible from (seed, key)."""
    h = hashlib.sha256(f"{seed}:{key}".encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


@dataclass
class CriticalValueSet:
    values: list[Value] = field(default_factory=list)
    status: str = EXACT
    source_face: FaceDescriptor | None = None
    eliminant: list[Fraction] | None = None
    notes: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def contains(self, b, tol: float = nm.ROOT_TOL) -> bool:
        return any(v.close_to(Value(b), tol) for v in self.values)

    def to_json(self) -> dict:
        out = {"values": [v.to_json() for v in self.values], "status": self.status}
        if self.source_face is not None:
            out["source_face"] = [list(v) for v in self.source_face.vertices]
        if self.eliminant is not None:
            out["eliminant"] = [str(c) for c in self.eliminant]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class Verdict:
    outcome: str
    method: str
    witnesses: list = field(default_factory=list)
    caveat: str | None = None

    def __post_init__(self):
        if self.outcome == FAIL and not self.witnesses:
            raise ValueError("a fail verdict needs a witness")

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "method": self.method, "witnesses": self.witnesses}
        if self.caveat:
            out["caveat"] = self.caveat
        return out


def combine(verdicts: Sequence[Verdict], method: str = "all faces") -> Verdict:
    fails = [w for v in verdicts if v.outcome == FAIL for w in v.witnesses]
    if fails:
        return Verdict(FAIL, method, fails)
    if any(v.outcome == UNKNOWN for v in verdicts):
        return Verdict(UNKNOWN, method, caveat="some faces could not be decided")
    return Verdict(PASS, method)


def dedupe(values: Sequence[Value], tol: float = nm.ROOT_TOL) -> list[Value]:
    """Merge equal values; an exact representative wins over a numeric one."""
    out: list[Value] = []
    for v in sorted(values, key=lambda v: not v.is_exact):
        if not any(w.close_to(v, tol) for w in out):
            out.append(v)
    return sorted(out, key=Value.sort_key)


def point_json(pt) -> list[dict]:
    return [Value(x).to_json() for x in pt]


# ---------------------------------------------------------------------------
# face restriction

def _face_polytope(f: SparsePoly, polytope: LatticePolytope | None) -> LatticePolytope:
    if polytope is not None:
        return polytope
    from .newton import newton_polyhedron_at_infinity
    return newton_polyhedron_at_infinity(f)


def restrict_to_face_torus(f: SparsePoly, face: FaceDescriptor,
                           polytope: LatticePolytope | None = None) -> SparsePoly:
    """f_gamma written in coordinates of the lattice spanned by an origin face."""
    if face.dim < 1:
        raise ValueError("restrict_to_face_torus: face must have dimension >= 1")
    if not face.contains_origin:
        raise ValueError("restrict_to_face_torus: face must contain the origin")
    fg = gamma_part(f, _face_polytope(f, polytope), face)
    return monomial_change_of_coordinates(fg, lattice_basis_of_face_span(face))


@dataclass(frozen=True)
class ReducedFace:
    """x^(-v0) f_gamma in lattice coordinates t, with x = t^M lifting back."""

    poly: SparsePoly
    basis: tuple
    origin: tuple
    lift: tuple

    def lift_point(self, t: Sequence) -> tuple:
        """A torus point x with x^(b_j) = t_j."""
        n = len(self.origin)
        out = []
        for r in range(n):
            x = Fraction(1) if all(isinstance(c, (int, Fraction)) for c in t) else mpmath.mpc(1)
            for j, tj in enumerate(t):
                x = x * tj ** self.lift[r][j]
            out.append(x)
        return tuple(out)


def reduced_face_polynomial(f: SparsePoly, face: FaceDescriptor,
                            polytope: LatticePolytope | None = None) -> ReducedFace:
    n = f.ambient_dim
    v0 = face.vertices[0]
    fg = gamma_part(f, _face_polytope(f, polytope), face)
    if face.dim == 0:
        return ReducedFace(SparsePoly({(): fg.coeff(v0)}, 0, LAURENT), (), v0, tuple(() for _ in range(n)))
    basis = lattice_basis_of_face_span(face)
    shifted = fg.shift(tuple(-x for x in v0))
    g = monomial_change_of_coordinates(shifted, basis)
    lift = torus_lift_exponents(basis, n)
    return ReducedFace(g, tuple(basis), v0, tuple(tuple(r) for r in lift))


# ---------------------------------------------------------------------------
# polynomial views

def _univariate(p: SparsePoly) -> list[Fraction]:
    """Coefficient list of an affine 1-variable polynomial."""
    out = [Fraction(0)] * (p.degree() + 1 if not p.is_zero() else 0)
    for e, c in p.items():
        out[e[0]] += c
    return nm.trim(out)


def _torus_equations(p: SparsePoly) -> list[SparsePoly]:
    """Numerators of t_i dp/dt_i: same zeros as the gradient on the torus."""
    return [p.euler_derivative(i).numerator()[0] for i in range(1, p.ambient_dim + 1)]


def _is_constant(p: SparsePoly) -> bool:
    return all(not any(e) for e in p.support)


def _exact_point(pt, polys: Sequence[SparsePoly], torus: bool) -> tuple | None:
    """Rational point near ``pt`` at which every poly vanishes exactly, if any."""
    cand = []
    for z in pt:
        r = nm.recognize_rational(z)
        if r is None or (torus and r == 0):
            return None
        cand.append(r)
    if all(q.evaluate(cand) == 0 for q in polys):
        return tuple(cand)
    return None


def _value_at(p: SparsePoly, pt, polys: Sequence[SparsePoly], torus: bool) -> Value:
    exact = _exact_point(pt, polys, torus)
    if exact is not None:
        return Value(p.evaluate(exact))
    with mpmath.workdps(nm.DPS):
        return Value(p.evaluate([mpmath.mpc(z) for z in pt]))


# ---------------------------------------------------------------------------
# critical values

def _eliminant_1d(p: SparsePoly, torus: bool) -> list[Fraction]:
    """R(s) with R(s) = 0 exactly when s is a critical value of p (one variable)."""
    if torus:
        k = max(0, -min(e[0] for e in p.support))
        num = _affine(p.shift((k,)))
        crit = nm.strip_zero_roots(_univariate(p.euler_derivative(1).numerator()[0]))
    else:
        num, k = p, 0
        crit = _univariate(p.derivative(1))
    q = SparsePoly({(0, e[0]): c for e, c in num.items()}, 2)
    q = q - SparsePoly({(1, k): 1}, 2)
    n_poly = SparsePoly({(0, j): c for j, c in enumerate(crit) if c}, 2)
    if len(crit) <= 1:
        return [Fraction(1)]
    return elim.resultant(elim.to_bivariate(n_poly, 2), elim.to_bivariate(q, 2))


def _critical_values_1d(p: SparsePoly, torus: bool) -> CriticalValueSet:
    if _is_constant(p):
        c = p.constant_term
        return CriticalValueSet([Value(c)], EXACT, notes=["constant: every point is critical"])
    if torus and len(p.support) == 1:
        return CriticalValueSet([], EXACT)
    r = nm.trim(_eliminant_1d(p, torus))
    values = []
    for z in nm.roots_exact(r):
        cand = nm.recognize_rational(z)
        if cand is not None and nm.ueval(r, cand) == 0:
            values.append(Value(cand))
        else:
            values.append(Value(z))
    lead = r[-1] if r else Fraction(1)
    return CriticalValueSet(dedupe(values), EXACT, eliminant=[c / lead for c in r])


def _sample_curve(a: SparsePoly, torus: bool, rng: random.Random, samples: int) -> list[list]:
    """Points on {a = 0}, grouped by the random abscissa they were found at."""
    groups = []
    for main in (2, 1):
        ba = elim.to_bivariate(a, main)
        if elim.bideg(ba) < 1:
            continue
        for _ in range(samples):
            with mpmath.workdps(nm.DPS):
                x = mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
                coeffs = [nm.ueval([nm._mp(c) for c in cc], x) if cc else mpmath.mpf(0) for cc in ba]
                ys = [y for y in nm.roots_numeric(coeffs) if not (torus and abs(y) < 1e-12)]
            groups.append([(x, y) if main == 2 else (y, x) for y in ys])
    return groups


def _critical_values_2d(p: SparsePoly, eqs: list[SparsePoly], torus: bool,
                        tol: Tolerances, rng: random.Random) -> CriticalValueSet:
    e1, e2 = eqs
    if e1.is_zero() and e2.is_zero():
        return CriticalValueSet([Value(p.constant_term)], EXACT,
                                notes=["constant: every point is critical"])
    a = elim.poly_gcd_2d(e1, e2)
    values: list[Value] = []
    status = EXACT
    notes = []
    if _is_constant(a):
        zs = elim.common_zeros_2d(e1, e2, torus=torus, tol=tol.residual, rng=rng)
        pts = zs.points
    else:
        r1, r2 = elim.poly_div_2d(e1, a), elim.poly_div_2d(e2, a)
        pts = elim.common_zeros_2d(r1, r2, torus=torus, tol=tol.residual, rng=rng).points
        curve_vals = _curve_values(p, a, torus, tol, rng)
        values.extend(curve_vals)
        if any(not v.is_exact for v in curve_vals):
            status = NUMERIC
        notes.append(f"critical curve {a.to_text()}")
    for pt in pts:
        v = _value_at(p, pt, eqs, torus)
        if not v.is_exact:
            status = weakest(status, NUMERIC)
        values.append(v)
    return CriticalValueSet(dedupe(values, tol.cluster), status, notes=notes)


def _curve_values(p: SparsePoly, a: SparsePoly, torus: bool, tol: Tolerances,
                  rng: random.Random) -> list[Value]:
    """Values of p on the curve {a = 0}; p is constant on each component."""
    groups = _sample_curve(a, torus, rng, samples=3)
    raw = []
    with mpmath.workdps(nm.DPS):
        for g in groups:
            raw.extend(Value(p.evaluate([mpmath.mpc(x), mpmath.mpc(y)])) for x, y in g)
    vals = dedupe(raw, max(tol.cluster, 1e-7))
    if len(vals) > max(a.degree(), 1):
        raise CriticalValuesNotFinite("critical values not finite")
    out = []
    for v in vals:
        r = nm.recognize_rational(v.approx)
        if r is not None:
            num = (p - r).numerator()[0] if p.mode == LAURENT else p - r
            if not _is_constant(elim.poly_gcd_2d(a, _affine(num))):
                out.append(Value(r))
                continue
        out.append(v)
    return out


def _affine(p: SparsePoly) -> SparsePoly:
    return SparsePoly(p.terms, p.ambient_dim, AFFINE)


def critical_values_torus(p: SparsePoly, d: int | None = None, tol: Tolerances = nm.DEFAULT_TOL,
                          rng: random.Random | None = None) -> CriticalValueSet:
    """Critical values of a Laurent polynomial on the torus (C*)^d."""
    d = p.ambient_dim if d is None else d
    if d != p.ambient_dim:
        raise ValueError("d must equal the number of variables")
    rng = rng or random.Random(0)
    if p.is_zero() or d == 0:
        return CriticalValueSet([Value(p.constant_term)] if d == 0 else [Value(0)], EXACT)
    if d == 1:
        return _critical_values_1d(p, torus=True)
    if d == 2:
        eqs = [_affine(e) for e in _torus_equations(p)]
        return _critical_values_2d(p, eqs, True, tol, rng)
    pts = multistart_newton(p.gradient(), d, rng, torus=True)
    vals = dedupe([Value(p.evaluate(pt)) for pt in pts], tol.cluster)
    return CriticalValueSet(vals, HEURISTIC, notes=["random multistart search; may be incomplete"])


def affine_critical_values(f: SparsePoly, tol: Tolerances = nm.DEFAULT_TOL,
                           rng: random.Random | None = None) -> CriticalValueSet:
    """f(Sing f) over C^n."""
    rng = rng or random.Random(0)
    n = f.ambient_dim
    if n == 0 or _is_constant(f):
        return CriticalValueSet([Value(f.constant_term)] if n else [], EXACT,
                                notes=["constant: every point is critical"] if n else [])
    if n == 1:
        return _critical_values_1d(f, torus=False)
    if n == 2:
        return _critical_values_2d(f, f.gradient(), False, tol, rng)
    pts = multistart_newton(f.gradient(), n, rng, torus=False)
    vals = dedupe([Value(f.evaluate(pt)) for pt in pts], tol.cluster)
    status = NUMERIC if n <= 4 else HEURISTIC
    return CriticalValueSet(vals, status, notes=["random multistart search; may be incomplete"])


# ---------------------------------------------------------------------------
# multistart Newton for square systems

class _Compiled:
    def __init__(self, p: SparsePoly):
        items = list(p.items())
        self.exps = np.array([e for e, _ in items], dtype=float).reshape(len(items), p.ambient_dim)
        self.coeffs = np.array([float(c) for _, c in items], dtype=complex)

    def terms(self, x: np.ndarray) -> np.ndarray:
        return self.coeffs * np.prod(x[None, :] ** self.exps, axis=1)

    def __call__(self, x: np.ndarray) -> complex:
        if not len(self.coeffs):
            return 0j
        return complex(np.sum(self.terms(x)))

    def converged(self, x: np.ndarray, rel: float) -> bool:
        """Residual small against the size of the individual terms."""
        if not len(self.coeffs):
            return True
        t = self.terms(x)
        return abs(np.sum(t)) <= rel * max(np.sum(np.abs(t)), 1e-300)


def multistart_newton(system: Sequence[SparsePoly], m: int, rng: random.Random,
                      torus: bool, starts: int | None = None, steps: int = 100) -> list[tuple]:
    """Distinct zeros of a square polynomial system found from random starts."""
    eqs = [_Compiled(q) for q in system]
    jac = [[_Compiled(q.derivative(j + 1)) for j in range(m)] for q in system]
    starts = starts or 64 * m
    found: list[np.ndarray] = []
    with np.errstate(all="ignore"):
        for _ in range(starts):
            x0 = np.array([np.exp(complex(rng.gauss(0, 1), rng.uniform(-np.pi, np.pi)))
                           for _ in range(m)])
            x = _newton_run(eqs, jac, x0, steps)
            if x is None or (torus and np.min(np.abs(x)) < 1e-8):
                continue
            if not any(np.linalg.norm(x - y) < 1e-7 * max(1.0, np.linalg.norm(y)) for y in found):
                found.append(x)
    return [tuple(complex(z) for z in x) for x in found]


def _newton_run(eqs, jac, x: np.ndarray, steps: int) -> np.ndarray | None:
    for _ in range(steps):
        fx = np.array([e(x) for e in eqs])
        if not np.all(np.isfinite(fx)) or np.max(np.abs(x)) > 1e8:
            return None
        if all(e.converged(x, 1e-12) for e in eqs):
            return x
        jx = np.array([[j(x) for j in row] for row in jac])
        try:
            step = np.linalg.solve(jx, fx)
        except np.linalg.LinAlgError:
            return None
        # damping keeps iterates from jumping across the torus
        limit = 0.5 * max(1.0, np.linalg.norm(x))
        if np.linalg.norm(step) > limit:
            step = step * (limit / np.linalg.norm(step))
        x = x - step
    return None


# ---------------------------------------------------------------------------
# non-degeneracy at infinity

def _face_key(face: FaceDescriptor) -> str:
    return ";".join(",".join(map(str, v)) for v in face.vertices)


def _check_reduced_1d(red: ReducedFace, fg: SparsePoly) -> Verdict:
    g = _univariate(red.poly.numerator()[0])
    g = nm.strip_zero_roots(g)
    h = nm.ugcd(g, nm.uderiv(g))
    if len(h) <= 1:
        return Verdict(PASS, "univariate gcd")
    witnesses = [{"kind": "repeated factor", "poly_t": [str(c) for c in h],
                  "basis": [list(b) for b in red.basis]}]
    for z in nm.roots_exact(h):
        r = nm.recognize_rational(z)
        if r is not None and r != 0 and nm.ueval(h, r) == 0:
            x = red.lift_point([r])
            ok = fg.evaluate(x) == 0 and all(q.evaluate(x) == 0 for q in fg.gradient())
            witnesses.append({"kind": "point", "point": point_json(x), "verified": ok})
        else:
            x = red.lift_point([z])
            witnesses.append({"kind": "point", "point": point_json(x), "verified": False})
    return Verdict(FAIL, "univariate gcd", witnesses)


def _check_reduced_2d(red: ReducedFace, fg: SparsePoly, tol: Tolerances,
                      rng: random.Random) -> Verdict:
    g = red.poly
    gn = _affine(g.numerator()[0])
    e1, e2 = (_affine(e) for e in _torus_equations(g))
    common = elim.poly_gcd_2d(gn, e1, e2)
    if not _is_constant(common):
        return Verdict(FAIL, "bivariate gcd",
                       [{"kind": "singular curve", "poly_t": common.to_text(),
                         "basis": [list(b) for b in red.basis]}])
    a = elim.poly_gcd_2d(gn, e1)
    cands = []
    if _is_constant(a):
        cands += elim.common_zeros_2d(gn, e1, torus=True, tol=tol.residual, rng=rng).points
    else:
        cands += elim.common_zeros_2d(elim.poly_div_2d(gn, a), elim.poly_div_2d(e1, a),
                                      torus=True, tol=tol.residual, rng=rng).points
        cands += elim.common_zeros_2d(a, e2, torus=True, tol=tol.residual, rng=rng).points
    with mpmath.workdps(nm.DPS):
        for pt in cands:
            scale = max(1.0, *(abs(complex(z)) for z in pt)) ** max(e2.degree(), 1)
            if abs(e2.evaluate([mpmath.mpc(z) for z in pt])) <= tol.residual * scale:
                exact = _exact_point(pt, [gn, e1, e2], torus=True)
                if exact is not None:
                    x = red.lift_point(exact)
                    ok = fg.evaluate(x) == 0 and all(q.evaluate(x) == 0 for q in fg.gradient())
                    w = {"kind": "point", "point": point_json(x), "verified": ok}
                else:
                    w = {"kind": "point", "point": point_json(red.lift_point(pt)),
                         "verified": False, "residual_tol": tol.residual}
                return Verdict(FAIL, "resultant", [w])
    return Verdict(PASS, "resultant")


def _check_face(f: SparsePoly, polytope: LatticePolytope, face: FaceDescriptor,
                tol: Tolerances, rng: random.Random) -> Verdict:
    fg = gamma_part(f, polytope, face)
    if len(fg.support) <= 1:
        return Verdict(PASS, "monomial")
    red = reduced_face_polynomial(f, face, polytope)
    k = face.dim
    if k == 1:
        return _check_reduced_1d(red, fg)
    if k == 2:
        return _check_reduced_2d(red, fg, tol, rng)
    g = red.poly
    pts = multistart_newton([g] + list(_torus_equations(g))[:k - 1], k, rng, torus=True)
    for pt in pts:
        resid = max(abs(q.evaluate(pt)) for q in [g] + g.gradient())
        if resid < tol.residual:
            return Verdict(FAIL, "multistart", [{"kind": "point", "point": point_json(red.lift_point(pt)),
                                                "verified": False}])
    return Verdict(UNKNOWN, "multistart",
                   caveat=f"face of dimension {k}: no exact method; no singular point found")


def nondegenerate_at_infinity(f: SparsePoly, polytope: LatticePolytope | None = None,
                              tol: Tolerances = nm.DEFAULT_TOL, seed: int = 0
                              ) -> tuple[dict[FaceDescriptor, Verdict], Verdict]:
    poly = _face_polytope(f, polytope)
    from .polytope import check_full_dimensional
    check_full_dimensional(poly)
    per_face = {}
    for face in poly.faces:
        if face.dim < 0 or face.contains_origin:
            continue
        per_face[face] = _check_face(f, poly, face, tol, derive_rng(seed, _face_key(face)))
    return per_face, combine(list(per_face.values()), "non-degeneracy")


# ---------------------------------------------------------------------------
# isolated singularities of the face fibers

def fiber_singularities_finite(p: SparsePoly, b) -> Verdict:
    """Is Sing(p^-1(b)) finite on the torus, for p in two torus coordinates?"""
    if not isinstance(b, (int, Fraction)):
        return _fiber_singularities_numeric(p, b)
    num = _affine((p - b).numerator()[0])
    if num.is_zero():
        return Verdict(FAIL, "bivariate gcd", [{"kind": "whole torus", "poly_t": "0"}])
    e1, e2 = (_affine(e) for e in _torus_equations(p))
    common = elim.poly_gcd_2d(num, e1, e2)
    if _is_constant(common):
        return Verdict(PASS, "bivariate gcd")
    return Verdict(FAIL, "bivariate gcd", [{"kind": "singular curve", "poly_t": common.to_text()}])


def _fiber_singularities_numeric(p: SparsePoly, b) -> Verdict:
    """b irrational: a singular curve in the fiber is a curve component of the
    critical locus on which p takes the value b."""
    e1, e2 = (_affine(e) for e in _torus_equations(p))
    a = elim.poly_gcd_2d(e1, e2)
    if _is_constant(a):
        return Verdict(PASS, "bivariate gcd")
    vals = _curve_values(p, a, True, nm.DEFAULT_TOL, random.Random(0))
    if any(v.close_to(Value(b)) for v in vals):
        return Verdict(FAIL, "curve sampling",
                       [{"kind": "critical curve", "poly_t": a.to_text(), "value": Value(b).to_json()}])
    return Verdict(PASS, "curve sampling", caveat="value compared numerically")


def isolated_singularities_over(f: SparsePoly, b, atypical, polytope: LatticePolytope | None = None
                                ) -> dict[FaceDescriptor, Verdict]:
    """ISAI check for each atypical face (records carrying ``.face``)."""
    poly = _face_polytope(f, polytope)
    out = {}
    b_val = b.exact if isinstance(b, Value) and b.is_exact else (b.approx if isinstance(b, Value) else b)
    for c in atypical:
        face = getattr(c, "face", c)
        if face.dim == 1:
            out[face] = Verdict(PASS, "dimension 1: fibers are finite")
        elif face.dim == 2:
            out[face] = fiber_singularities_finite(restrict_to_face_torus(f, face, poly), b_val)
        else:
            out[face] = Verdict(UNKNOWN, "none",
                                caveat=f"face of dimension {face.dim}: no exact method")
    return out
