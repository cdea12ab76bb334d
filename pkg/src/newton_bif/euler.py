"""Euler characteristics of plane curve fibers by projection to the x-line.

Write F = f - c as a polynomial in y whose coefficients a_k are polynomials
in x.  Over all but finitely many x the fiber has the same number r of
distinct points, so away from the exceptional abscissae S and the vertical
lines V the fiber is an r-sheeted unramified cover of a punctured line:

    chi = |V| + r * (1 - |S| - |V|) + sum_{x in S} r(x)

The generic count r is d - j0, with j0 the degree of gcd(F, F_y) over Q(x),
read off as the first non-vanishing principal subresultant coefficient.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import elim
from . import numeric as nm
from .numeric import Value
from .poly import SparsePoly


# Every root here is computed to nm.DPS digits, so fibers are clustered far
# below the user-facing tolerance; ramification points that coalesce as c
# approaches a critical value would otherwise look ambiguous.
FIBER_TOL = 1e-25


class EpsilonNotGeneric(ArithmeticError):
    pass


@dataclass
class FiberTopology:
    value: Value
    chi: int
    vertical_lines: list = field(default_factory=list)
    exceptional_points: list = field(default_factory=list)  # (x, distinct-root count)
    generic_root_count: int = 0

    def recomputed_chi(self) -> int:
        nv, ns = len(self.vertical_lines), len(self.exceptional_points)
        return nv + self.generic_root_count * (1 - ns - nv) + sum(r for _, r in self.exceptional_points)

    def to_json(self) -> dict:
        return {"value": self.value.to_json(),
                "chi": {"value": self.chi, "status": "numeric"},
                "vertical_lines": [Value(x).to_json() for x in self.vertical_lines],
                "exceptional_points": [{"x": Value(x).to_json(), "roots": r}
                                       for x, r in self.exceptional_points],
                "generic_root_count": self.generic_root_count}


def _scalar(c):
    if isinstance(c, Value):
        return c.exact if c.is_exact else c.approx
    return Fraction(c) if isinstance(c, int) else c


def _nonzero_numeric(coeffs, ref) -> bool:
    with mpmath.workdps(nm.DPS):
        return any(abs(c) > ref * mpmath.mpf(10) ** (-(nm.DPS // 2)) for c in coeffs)


def _merge(xs: Sequence, tol: float) -> list:
    return nm.cluster(xs, tol) if xs else []


def chi_affine_curve_fiber(f: SparsePoly, c, tol: float = FIBER_TOL) -> FiberTopology:
    """Euler characteristic of {f = c} in C^2."""
    if f.ambient_dim != 2:
        raise ValueError("chi_affine_curve_fiber expects a polynomial in two variables")
    c = _scalar(c)
    exact = isinstance(c, Fraction)
    if exact:
        g = f - c
        if g.is_zero():
            raise ValueError("f - c is identically zero")
        bi = elim.to_bivariate(g, 2)
    else:
        bi = elim.to_bivariate(f, 2)
        with mpmath.workdps(nm.DPS):
            bi[0] = nm.trim([nm._mp(x) for x in (bi[0] or [Fraction(0)])])
            bi[0] = [bi[0][0] - c if bi[0] else -mpmath.mpc(c)] + bi[0][1:]
    d = elim.bideg(bi)
    if d == 0:
        a0 = bi[0]
        if exact:
            roots = nm.roots_exact(a0)
        else:
            roots = _merge(nm.roots_numeric(a0), nm.ROOT_TOL)
            if len(roots) != elim.distinct_root_count(a0):
                raise nm.ClusterAmbiguityError("vertical line count disagrees with the gcd degree")
        return FiberTopology(Value(c), len(roots), vertical_lines=list(roots))

    # vertical lines: common roots of all a_k
    upper = [a for a in bi[1:] if a]
    g = upper[0]
    for a in upper[1:]:
        g = nm.ugcd(g, a)
    if exact:
        g = nm.ugcd(g, bi[0]) if bi[0] else g
        vertical = nm.roots_exact(g) if len(g) > 1 else []
    else:
        vertical = []
        if len(nm.trim(g)) > 1:
            for x in nm.roots_exact(g):
                with mpmath.workdps(nm.DPS):
                    if abs(nm.ueval(bi[0], x)) <= nm.RESIDUAL_TOL * nm.poly_scale(bi[0], x):
                        vertical.append(x)

    fy = [[k * x for x in a] for k, a in enumerate(bi)][1:]
    j0, lead_psc = None, None
    for j in range(d):
        if exact:
            p = elim.psc(bi, fy, j, d, d - 1)
            if p:
                j0, lead_psc = j, p
                break
        else:
            p = elim.psc_numeric(bi, fy, j, d, d - 1)
            ref = max([abs(x) for x in p] + [mpmath.mpf(1)])
            if _nonzero_numeric(p, ref):
                j0, lead_psc = j, p
                break
    r_gen = d - j0

    if exact:
        excep = nm.roots_exact(bi[d]) if len(bi[d]) > 1 else []
        excep += nm.roots_exact(lead_psc) if len(nm.trim(lead_psc)) > 1 else []
    else:
        excep = nm.roots_exact(bi[d]) if len(bi[d]) > 1 else []
        excep += _roots_of_numeric(lead_psc)
    # numeric coefficients split multiple roots by noise^(1/k); merge those at the shared tolerance
    mtol = tol if exact else max(tol, nm.ROOT_TOL)
    excep = _merge(excep, mtol)
    with mpmath.workdps(nm.DPS):
        excep = [x for x in excep if not any(abs(x - v) <= mtol * max(1, abs(v)) for v in vertical)]
        points = []
        for x in excep:
            coeffs = [nm.ueval([nm._mp(t) for t in a], x) if a else mpmath.mpf(0) for a in bi]
            points.append((x, elim.distinct_root_count(coeffs)))
    fib = FiberTopology(Value(c), 0, list(vertical), points, r_gen)
    fib.chi = fib.recomputed_chi()
    return fib


def _roots_of_numeric(p) -> list:
    with mpmath.workdps(nm.DPS):
        ref = max([abs(x) for x in p] + [mpmath.mpf(1)])
        p = [x if abs(x) > ref * mpmath.mpf(10) ** (-(nm.DPS // 2)) else mpmath.mpf(0) for x in p]
        p = nm.trim(p)
        return nm.roots_numeric(p) if len(p) > 1 else []


def swap_variables(f: SparsePoly) -> SparsePoly:
    return SparsePoly({(e[1], e[0]): c for e, c in f.items()}, 2, f.mode)


# ---------------------------------------------------------------------------

def _values(K) -> list[Value]:
    out = []
    for k in K:
        out.append(Value(getattr(k, "value", k)))
    return out


def _min_gap(vals: Sequence[Value]) -> float | None:
    gaps = [vals[i].distance(vals[j]) for i in range(len(vals)) for j in range(i)]
    return min(gaps) if gaps else None


def pick_generic_value(K, seed: int = 0) -> Fraction:
    """A rational value at least ``margin`` away from every element of K."""
    vals = _values(K)
    if not vals:
        return Fraction(0)
    gap = _min_gap(vals)
    margin = Fraction(1) if gap is None else Fraction(gap / 2).limit_denominator(10**6)
    if gap is not None and float(margin) > gap / 2:
        margin = Fraction(int(gap / 2 * 10**6), 10**6)

    def ok(c):
        return all(v.distance(c) >= float(margin) for v in vals)

    for j in range(64):
        for c in (j * margin, -j * margin):
            if ok(c):
                return c
    rng = random.Random(seed)
    while True:
        c = Fraction(rng.randint(-10**6, 10**6), 1000) * margin
        if ok(c):
            return c


def _epsilon(b: Value, vals: Sequence[Value]) -> Fraction:
    gap = _min_gap(vals)
    target = 1e-3 * (1.0 if gap is None else gap)
    k = 0
    while 10.0 ** (-k) > target:
        k += 1
    return Fraction(1, 10**k)


def euler_jump(f: SparsePoly, b, K=(), tol: float = nm.ROOT_TOL) -> int:
    """E_f(b) = -(chi(b + eps) - chi(b)) for n = 2; ``tol`` matches b against K."""
    b = Value(_scalar(b) if not isinstance(b, Value) else b)
    vals = _values(K)
    if not any(v.close_to(b, tol) for v in vals):
        vals.append(b)
    eps = _epsilon(b, vals)
    if b.is_exact:
        base, shifts = b.exact, (eps, eps / 2)
    else:
        base, shifts = b.approx, (nm._mp(eps), nm._mp(eps / 2))
    chi_b = chi_affine_curve_fiber(f, base).chi
    near, half = (chi_affine_curve_fiber(f, base + s).chi for s in shifts)
    if near != half:
        raise EpsilonNotGeneric("eps not generic: chi changes under halving")
    return -(near - chi_b)
