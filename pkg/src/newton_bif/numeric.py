"""Root finding, clustering and exact/numeric scalar values.

Numeric work runs in mpmath at ``DPS`` decimal digits.  Seeds come from
numpy's companion-matrix eigenvalues (LAPACK balances the matrix) and are
Newton-polished on the exact square-free polynomial; polynomials with
inexact coefficients go through mpmath's own eigenvalue routine instead.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

log = logging.getLogger(__name__)

DPS = 60
ROOT_TOL = 1e-9        # relative clustering threshold
RESIDUAL_TOL = 1e-8    # back-substitution filter
RATIONAL_TOL = 1e-10
MAX_DENOMINATOR = 10**6


class ClusterAmbiguityError(ArithmeticError):
    """Two root clusters are too close to separate reliably."""


@dataclass(frozen=True)
class Tolerances:
    root: float = ROOT_TOL
    residual: float = RESIDUAL_TOL
    cluster: float = ROOT_TOL

    def __post_init__(self):
        if min(self.root, self.residual, self.cluster) <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerances()


class Value:
    """A complex scalar, exact (rational) when ``exact`` is set."""

    __slots__ = ("exact", "approx")

    def __init__(self, v):
        if isinstance(v, Value):
            self.exact, self.approx = v.exact, v.approx
            return
        if isinstance(v, (int, Fraction)):
            self.exact = Fraction(v)
            with mpmath.workdps(DPS):
                self.approx = mpmath.mpc(mpmath.mpf(self.exact.numerator) / self.exact.denominator)
        else:
            self.exact = None
            with mpmath.workdps(DPS):
                self.approx = mpmath.mpc(v)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __complex__(self):
        return complex(self.approx)

    def close_to(self, other: "Value", tol: float = ROOT_TOL) -> bool:
        other = Value(other)
        if self.is_exact and other.is_exact:
            return self.exact == other.exact
        scale = max(1.0, abs(complex(self.approx)), abs(complex(other.approx)))
        with mpmath.workdps(DPS):
            return abs(self.approx - other.approx) <= tol * scale

    def distance(self, other: "Value") -> float:
        with mpmath.workdps(DPS):
            return float(abs(self.approx - Value(other).approx))

    def __repr__(self):
        return f"Value({self})"

    def __str__(self):
        if self.is_exact:
            return str(self.exact)
        z = complex(self.approx)
        if abs(z.imag) <= 1e-14 * max(1.0, abs(z)):
            return f"{z.real:.12g}"
        return f"{z.real:.12g}{z.imag:+.12g}j"

    def to_json(self) -> dict:
        if self.is_exact:
            return {"exact": str(self.exact), "re": float(self.exact), "im": 0.0,
                    "status": "exact"}
        z = complex(self.approx)
        return {"re": z.real, "im": z.imag, "status": "numeric"}

    def sort_key(self):
        z = complex(self.approx)
        return (round(z.real, 9), round(z.imag, 9))


# ---------------------------------------------------------------------------
# univariate helpers (coefficient lists, lowest degree first)
def trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def ueval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def uderiv(p: Sequence) -> list:
    return trim([k * p[k] for k in range(1, len(p))])


def udivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list, list]:
    a, b = trim([Fraction(x) for x in a]), trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a = trim(a)
    return trim(q), a


def ugcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a, b = trim([Fraction(x) for x in a]), trim([Fraction(x) for x in b])
    while b:
        a, b = b, udivmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [x / lead for x in a]


def squarefree(p: Sequence) -> list[Fraction]:
    p = trim([Fraction(x) for x in p])
    if len(p) <= 2:
        return p
    g = ugcd(p, uderiv(p))
    return udivmod(p, g)[0] if len(g) > 1 else p


def strip_zero_roots(p: Sequence) -> list:
    p = trim(p)
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return p[k:]


def _mp(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpmathify(c)


def _newton_polish(coeffs_mp, z, steps=80):
    d = [k * coeffs_mp[k] for k in range(1, len(coeffs_mp))]
    for _ in range(steps):
        fz = mpmath.polyval(list(reversed(coeffs_mp)), z)
        dz = mpmath.polyval(list(reversed(d)), z)
        if dz == 0:
            return z, False
        step = fz / dz
        z -= step
        if abs(step) <= mpmath.mpf(10) ** (-DPS + 5) * max(1, abs(z)):
            return z, True
    return z, abs(step) <= mpmath.mpf(10) ** (-DPS // 2) * max(1, abs(z))


def roots_exact(p: Sequence[Fraction]) -> list:
    """Distinct complex roots (mpc) of an exact polynomial."""
    p = squarefree(p)
    deg = len(p) - 1
    if deg < 1:
        return []
    with mpmath.workdps(DPS):
        if deg == 1:
            return [mpmath.mpc(_mp(-p[0] / p[1]))]
        cm = [_mp(c) for c in p]
        scale = max(abs(c) for c in p)
        seeds = np.roots([float(c / scale) for c in reversed(p)])
        out = []
        ok = len(seeds) == deg
        for s in seeds:
            z, conv = _newton_polish(cm, mpmath.mpc(complex(s)))
            ok = ok and conv
            out.append(z)
        if ok and _distinct(out):
            return out
        log.debug("newton polish failed; falling back to mpmath.polyroots (deg %d)", deg)
        rts = mpmath.polyroots(list(reversed(cm)), maxsteps=400, extraprec=4 * DPS)
        return [mpmath.mpc(r) for r in rts]


def _distinct(zs) -> bool:
    for i in range(len(zs)):
        for j in range(i):
            if abs(zs[i] - zs[j]) <= mpmath.mpf(10) ** (-DPS // 3) * max(1, abs(zs[i])):
                return False
    return True


def _uderiv_mp(p: list, k: int) -> list:
    for _ in range(k):
        p = [i * p[i] for i in range(1, len(p))]
    return p


def _roots_from_seeds(p: list, seeds) -> list | None:
    """Roots with multiplicity from double-precision seeds, or None if unsure.

    A k-fold root scatters its seeds by about eps^(1/k); each cluster is
    polished on the (k-1)-th derivative, where the root is simple, and the
    multiplicity is then confirmed on the lower derivatives.
    """
    deg = len(p) - 1
    if len(seeds) != deg or not np.all(np.isfinite(seeds)):
        return None
    groups: list[list] = []
    for s in seeds:
        for g in groups:
            if abs(s - np.mean(g)) <= 1e-3 * max(1.0, abs(np.mean(g))):
                g.append(s)
                break
        else:
            groups.append([s])
    tiny = mpmath.mpf(10) ** (-(DPS // 2))
    out, reps = [], []
    for g in groups:
        k = len(g)
        q = _uderiv_mp(p, k - 1)
        z, conv = _newton_polish(q, mpmath.mpc(complex(np.mean(g))))
        if not conv:
            return None
        for j in range(k):
            pj = _uderiv_mp(p, j)
            if abs(ueval(pj, z)) > tiny * poly_scale(pj, z):
                return None
        dk = _uderiv_mp(p, k)
        if abs(ueval(dk, z)) <= tiny * poly_scale(dk, z):
            return None
        out.extend([z] * k)
        reps.append(z)
    return out if _distinct(reps) else None


def roots_numeric(p: Sequence) -> list:
    """All complex roots with multiplicity of a polynomial with mpc coefficients."""
    with mpmath.workdps(DPS):
        p = [mpmath.mpmathify(c) for c in p]
        scale = max([abs(c) for c in p] + [mpmath.mpf(0)])
        if scale == 0:
            raise ValueError("roots_numeric: zero polynomial")
        thresh = scale * mpmath.mpf(10) ** (-(DPS * 2) // 3)
        while p and abs(p[-1]) <= thresh:
            p.pop()
        deg = len(p) - 1
        if deg < 1:
            return []
        if deg == 1:
            return [-p[0] / p[1]]
        fast = _roots_from_seeds(p, np.roots([complex(c / scale) for c in reversed(p)]))
        if fast is not None:
            return fast
        comp = mpmath.zeros(deg, deg)
        for i in range(1, deg):
            comp[i, i - 1] = 1
        for i in range(deg):
            comp[i, deg - 1] = -p[i] / p[deg]
        ev = mpmath.eig(comp, left=False, right=False)
        return [mpmath.mpc(z) for z in ev]


def cluster(values: Iterable, tol: float = ROOT_TOL, check: bool = True) -> list:
    """Merge numerically equal complex values; representatives are cluster means."""
    groups: list[list] = []
    with mpmath.workdps(DPS):
        for v in values:
            v = mpmath.mpc(v)
            for g in groups:
                c = g[0]
                if abs(v - c) <= tol * max(1, abs(c)):
                    g.append(v)
                    break
            else:
                groups.append([v])
        reps = [sum(g) / len(g) for g in groups]
        if check:
            for i in range(len(reps)):
                for j in range(i):
                    if abs(reps[i] - reps[j]) <= 10 * tol * max(1, abs(reps[i])):
                        raise ClusterAmbiguityError(
                            "root clusters within 10x tolerance; increase precision")
    return reps


def count_distinct_roots(p: Sequence, tol: float = ROOT_TOL) -> int:
    return len(cluster(roots_numeric(p), tol))


def recognize_rational(z, tol: float = RATIONAL_TOL,
                       max_den: int = MAX_DENOMINATOR) -> Fraction | None:
    """Nearby rational with small denominator (candidate only; verify exactly)."""
    zc = complex(z)
    scale = max(1.0, abs(zc))
    if abs(zc.imag) > tol * scale:
        return None
    with mpmath.workdps(DPS):
        re = mpmath.re(mpmath.mpc(z))
        fr = Fraction(str(mpmath.nstr(re, 40, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)))
    cand = fr.limit_denominator(max_den)
    if abs(float(cand - fr)) <= tol * scale:
        return cand
    return None


def poly_scale(coeffs_mp, z) -> float:
    """Sum of |c_k| |z|^k, the natural scale for a residual at z."""
    with mpmath.workdps(DPS):
        return float(sum(abs(c) * abs(z) ** k for k, c in enumerate(coeffs_mp))) or 1.0
