"""Resultant elimination for two-variable systems.

Principal subresultant coefficients are computed exactly by evaluating the
Sylvester-type determinant at integer nodes and interpolating; coefficient
entries keep their formal degree so that evaluation commutes with the
determinant.  Polynomials with inexact (mpmath) coefficients are handled with
roots-of-unity nodes instead.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import mpmath

from . import numeric as nm
from .poly import SparsePoly

UPoly = list  # coefficient list, lowest degree first
BiPoly = list  # list over main-variable degree of UPoly in the other variable


def to_bivariate(p: SparsePoly, main: int) -> BiPoly:
    """View a 2-variable polynomial as a polynomial in variable ``main`` (1 or 2)."""
    if p.ambient_dim != 2:
        raise ValueError("to_bivariate expects a 2-variable polynomial")
    if any(x < 0 for e in p.support for x in e):
        raise ValueError("to_bivariate expects nonnegative exponents")
    other = 2 if main == 1 else 1
    out: BiPoly = []
    for e, c in p.items():
        k, j = e[main - 1], e[other - 1]
        while len(out) <= k:
            out.append([])
        row = out[k]
        while len(row) <= j:
            row.append(Fraction(0))
        row[j] += c
    return [nm.trim(r) for r in out]


def bideg(p: BiPoly) -> int:
    """Degree in the main variable (-1 for zero)."""
    d = len(p) - 1
    while d >= 0 and not p[d]:
        d -= 1
    return d


def specialize(p: BiPoly, x) -> list:
    return [nm.ueval(c, x) if c else 0 for c in p]


def _det_int_rows(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant, rows scaled to integers then fraction-free Bareiss."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for r in rows:
        den = lcm(*[x.denominator for x in r]) if r else 1
        scale *= den
        m.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1]) / scale


def _psc_matrix(a: Sequence, b: Sequence, m: int, n: int, j: int) -> list[list]:
    """Square matrix whose determinant is the j-th principal subresultant coefficient."""
    width = m + n - j
    rows = []
    for i in reversed(range(n - j)):
        row = [0] * width
        for k in range(m + 1):
            # coefficient of y^(k+i) sits in column width-1-(k+i)
            row[width - 1 - (k + i)] = a[k]
        rows.append(row)
    for i in reversed(range(m - j)):
        row = [0] * width
        for k in range(n + 1):
            row[width - 1 - (k + i)] = b[k]
        rows.append(row)
    size = m + n - 2 * j
    return [r[:size] for r in rows]


def _pad(p: BiPoly, deg: int) -> BiPoly:
    return list(p) + [[] for _ in range(deg + 1 - len(p))]


def _newton_interp(xs: list[int], ys: list[Fraction]) -> UPoly:
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner in Newton basis
    out: UPoly = [coef[n - 1]]
    for i in range(n - 2, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * (len(out) + 1)
        for k, c in enumerate(out):
            new[k + 1] += c
            new[k] -= c * xs[i]
        new[0] += coef[i]
        out = new
    return nm.trim(out)


def psc(p: BiPoly, q: BiPoly, j: int, m: int | None = None, n: int | None = None) -> UPoly:
    """j-th principal subresultant coefficient w.r.t. the main variable (exact)."""
    m = bideg(p) if m is None else m
    n = bideg(q) if n is None else n
    if m < 0 or n < 0:
        raise ValueError("psc of a zero polynomial")
    p, q = _pad(p, m), _pad(q, n)
    dp = max((len(c) - 1 for c in p), default=0)
    dq = max((len(c) - 1 for c in q), default=0)
    bound = max(0, (n - j) * max(dp, 0) + (m - j) * max(dq, 0))
    xs = list(range(bound + 1))
    ys = []
    for x in xs:
        a = [Fraction(nm.ueval(c, x)) if c else Fraction(0) for c in p]
        b = [Fraction(nm.ueval(c, x)) if c else Fraction(0) for c in q]
        ys.append(_det_int_rows(_psc_matrix(a, b, m, n, j)))
    return _newton_interp(xs, ys)


def resultant(p: BiPoly, q: BiPoly) -> UPoly:
    return psc(p, q, 0)


def _det_numeric(rows: list[list]):
    """Determinant by partial pivoting; mpmath.det trips over zero pivot columns."""
    m = [[mpmath.mpc(x) for x in r] for r in rows]
    n = len(m)
    det = mpmath.mpc(1)
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(m[i][k]))
        if m[piv][k] == 0:
            return mpmath.mpc(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            r = m[i][k] / m[k][k]
            if r:
                for c in range(k, n):
                    m[i][c] -= r * m[k][c]
    return det


def distinct_root_count(p: Sequence, rel: float = 1e-30) -> int:
    """Distinct roots of a numeric univariate polynomial as deg p - deg gcd(p, p').

    The gcd degree is the index of the first principal subresultant that is not
    negligible against its Hadamard bound.  Unlike clustering computed roots,
    this is linear in coefficient noise: a k-fold root split by noise d moves
    apart by d^(1/k) but the subresultants only by d.
    """
    with mpmath.workdps(nm.DPS):
        p = [mpmath.mpc(c) for c in p]
        scale = max([abs(c) for c in p] + [mpmath.mpf(0)])
        if scale == 0:
            raise ValueError("distinct_root_count: zero polynomial")
        p = [c / scale for c in p]
        while abs(p[-1]) <= rel:
            p.pop()
        m = len(p) - 1
        if m <= 0:
            return 0
        dp = [k * p[k] for k in range(1, m + 1)]
        for j in range(m):
            mat = _psc_matrix(p, dp, m, m - 1, j)
            bound = mpmath.mpf(1)
            for row in mat:
                bound *= mpmath.sqrt(sum(abs(x) ** 2 for x in row))
            if abs(_det_numeric(mat)) > rel * bound:
                return m - j
        return 1


def psc_numeric(p: BiPoly, q: BiPoly, j: int, m: int, n: int) -> list:
    """Same as :func:`psc` for coefficient polynomials with mpc entries."""
    p, q = _pad(p, m), _pad(q, n)
    dp = max((len(c) - 1 for c in p), default=0)
    dq = max((len(c) - 1 for c in q), default=0)
    bound = max(0, (n - j) * dp + (m - j) * dq)
    npts = bound + 1
    with mpmath.workdps(nm.DPS + 20):
        nodes = [mpmath.expjpi(2 * mpmath.mpf(k) / npts) for k in range(npts)]
        vals = []
        for x in nodes:
            a = [nm.ueval([nm._mp(c) for c in cc], x) if cc else 0 for cc in p]
            b = [nm.ueval([nm._mp(c) for c in cc], x) if cc else 0 for cc in q]
            mat = _psc_matrix(a, b, m, n, j)
            vals.append(_det_numeric(mat))
        coeffs = [sum(vals[k] * mpmath.expjpi(-2 * mpmath.mpf(i * k) / npts)
                      for k in range(npts)) / npts for i in range(npts)]
    return coeffs


# ---------------------------------------------------------------------------
@dataclass
class ZeroSet:
    """Common zeros of two bivariate polynomials."""

    points: list[tuple] = field(default_factory=list)
    positive_dim: bool = False
    curve_samples: list[tuple] = field(default_factory=list)


def _is_zero_num(coeffs, scale_ref) -> bool:
    with mpmath.workdps(nm.DPS):
        return all(abs(c) <= scale_ref * mpmath.mpf(10) ** (-(nm.DPS // 2)) for c in coeffs)


def _common_roots_at(pa: BiPoly, qa: BiPoly, x, tol: float, torus: bool):
    """Common roots y of P(x, .) and Q(x, .); returns (roots, vertical_line)."""
    with mpmath.workdps(nm.DPS):
        a = [nm.ueval([nm._mp(c) for c in cc], x) if cc else mpmath.mpf(0) for cc in pa]
        b = [nm.ueval([nm._mp(c) for c in cc], x) if cc else mpmath.mpf(0) for cc in qa]
        ref = max([abs(c) for c in a + b] + [mpmath.mpf(1)])
        za, zb = _is_zero_num(a, ref), _is_zero_num(b, ref)
        if za and zb:
            return [], True
        if za or (not zb and len(nm.trim(b)) < len(nm.trim(a))):
            a, b = b, a
        cands = nm.cluster(nm.roots_numeric(a), nm.ROOT_TOL, check=False)
        out = []
        for y in cands:
            if torus and abs(y) <= tol:
                continue
            if not b or _is_zero_num(b, ref):
                out.append(y)
                continue
            res = abs(nm.ueval(b, y))
            if res <= tol * nm.poly_scale(b, y):
                out.append(y)
        return out, False


def common_zeros_2d(p: SparsePoly, q: SparsePoly, torus: bool = False,
                    tol: float = nm.RESIDUAL_TOL, rng: random.Random | None = None,
                    samples: int = 4) -> ZeroSet:
    """Common zeros in C^2 (or the torus) of two polynomials in two variables.

    When the zero set has a curve component the isolated points are not
    enumerated; instead ``curve_samples`` holds points found on the curve(s)
    at random abscissae (and ordinates, for vertical components).
    """
    rng = rng or random.Random(0)
    if p.is_zero() or q.is_zero():
        return ZeroSet(positive_dim=True, curve_samples=_sample_curves(p, q, torus, tol, rng, samples))
    for main in (2, 1):
        pa, qa = to_bivariate(p, main), to_bivariate(q, main)
        h = resultant(pa, qa)
        if not h:
            continue
        if torus:
            h = nm.strip_zero_roots(h)
        pts = []
        vertical = False
        for x in nm.roots_exact(h):
            ys, vert = _common_roots_at(pa, qa, x, tol, torus)
            if vert:
                vertical = True
                break
            for y in ys:
                pts.append((x, y) if main == 2 else (y, x))
        if vertical:
            break
        return ZeroSet(points=pts)
    return ZeroSet(positive_dim=True, curve_samples=_sample_curves(p, q, torus, tol, rng, samples))


def _sample_curves(p, q, torus, tol, rng, samples):
    out = []
    for main in (2, 1):
        pa, qa = to_bivariate(p, main), to_bivariate(q, main)
        for _ in range(samples):
            x = Fraction(rng.randint(-997, 997), rng.randint(1, 97))
            if x == 0:
                x = Fraction(1, 3)
            with mpmath.workdps(nm.DPS):
                xm = mpmath.mpc(nm._mp(x), nm._mp(Fraction(rng.randint(-97, 97), 101)))
            ys, vert = _common_roots_at(pa, qa, xm, tol, torus)
            if vert:
                continue
            for y in ys:
                out.append((xm, y) if main == 2 else (y, xm))
    return out


# ---------------------------------------------------------------------------
# exact arithmetic in Q[x][y]; a BiPoly here always has main variable 2

def _uadd(a, b):
    n = max(len(a), len(b))
    return nm.trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _umul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return nm.trim(out)


def _uexact_div(a, b):
    q, r = nm.udivmod(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def _bitrim(p: BiPoly) -> BiPoly:
    p = [nm.trim(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def bi_content(p: BiPoly) -> list:
    g: list = []
    for c in p:
        if c:
            g = nm.ugcd(g, c) if g else nm.ugcd(c, c)
    return g


def _bi_div_univariate(p: BiPoly, c) -> BiPoly:
    return [_uexact_div(x, c) if x else [] for x in p]


def bi_primitive_part(p: BiPoly) -> BiPoly:
    p = _bitrim(p)
    return _bi_div_univariate(p, bi_content(p)) if p else p


def _bi_prem(a: BiPoly, b: BiPoly) -> BiPoly:
    a, db = _bitrim(a), bideg(b)
    lc = b[db]
    while a and bideg(a) >= db:
        da = bideg(a)
        la = a[da]
        a = [_umul(x, lc) for x in a]
        for k in range(db + 1):
            a[k + da - db] = _uadd(a[k + da - db], [-x for x in _umul(la, b[k])])
        a = _bitrim(a)
    return a


def bi_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """gcd in Q[x, y] by the primitive remainder sequence, up to a rational unit."""
    a, b = _bitrim(a), _bitrim(b)
    if not a or not b:
        return a or b
    c = nm.ugcd(bi_content(a), bi_content(b))
    a, b = bi_primitive_part(a), bi_primitive_part(b)
    if bideg(a) < bideg(b):
        a, b = b, a
    while b:
        r = _bi_prem(a, b)
        a, b = b, bi_primitive_part(r) if r else []
    g = [[Fraction(1)]] if bideg(a) == 0 else a
    return _bitrim([_umul(c, x) for x in g])


def bi_exact_div(a: BiPoly, b: BiPoly) -> BiPoly:
    a, b = _bitrim(a), _bitrim(b)
    db = bideg(b)
    lc = b[db]
    q: BiPoly = [[] for _ in range(max(bideg(a) - db + 1, 0))]
    while a and bideg(a) >= db:
        da = bideg(a)
        t = _uexact_div(a[da], lc)
        q[da - db] = t
        for k in range(db + 1):
            a[k + da - db] = _uadd(a[k + da - db], [-x for x in _umul(t, b[k])])
        a = _bitrim(a)
    if a:
        raise ArithmeticError("inexact bivariate division")
    return _bitrim(q)


def from_bivariate(p: BiPoly) -> SparsePoly:
    return SparsePoly({(j, k): c for k, row in enumerate(p) for j, c in enumerate(row) if c}, 2)


def poly_gcd_2d(*polys: SparsePoly) -> SparsePoly:
    """gcd of affine polynomials in two variables, normalized to a primitive integer form."""
    g: BiPoly = []
    for p in polys:
        g = bi_gcd(g, to_bivariate(p, 2)) if g else _bitrim(to_bivariate(p, 2))
    return _normalize(from_bivariate(g))


def poly_div_2d(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return from_bivariate(bi_exact_div(to_bivariate(a, 2), to_bivariate(b, 2)))


def _normalize(p: SparsePoly) -> SparsePoly:
    if p.is_zero():
        return p
    lead = list(p.items())[-1][1]
    return p.scale(1 / lead)
