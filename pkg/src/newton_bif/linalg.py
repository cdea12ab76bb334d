"""Exact integer / rational linear algebra used by the polyhedral code.

Everything here works on plain Python ints and ``fractions.Fraction`` so that
no rounding ever enters the polyhedral classification.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence) -> Vector:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = content(ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def canonical_line(v: Sequence) -> Vector:
    """Primitive vector with first nonzero entry positive (for lineality generators)."""
    p = primitive(v)
    for x in p:
        if x != 0:
            return p if x > 0 else tuple(-y for y in p)
    return p


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Integer basis (primitive vectors) of the rational kernel of ``rows``."""
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[fc]
        basis.append(primitive(v))
    return basis


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in matrix]
    n = len(m)
    if n == 0:
        return Fraction(1)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        pv = m[c][c]
        result *= pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def solve_in_span(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_k basis_k = v, or None if v is not in the span."""
    k = len(basis)
    n = len(v)
    # augmented system: columns are basis vectors
    rows = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    red, piv = rref(rows)
    if k in piv:
        return None
    coeffs = [Fraction(0)] * k
    for row, pc in zip(red, piv):
        coeffs[pc] = row[k]
    return coeffs


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[Vector]:
    """Row-style HNF of an integer matrix (nonzero rows only, positive pivots).

    The row lattice is preserved; the result is the canonical basis of it.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # euclid on column c among rows r..
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [tuple(row) for row in m[:r] if any(row)]


def _column_reduce(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], int]:
    """Unimodular column operations on [A; I] putting A in column echelon form.

    Returns the transformed columns and the number of nonzero echelon columns.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    cols = [[a[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(ncols)]
            for j in range(ncols)]
    c0 = 0
    for i in range(m):
        while True:
            nz = [j for j in range(c0, ncols) if cols[j][i] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            cols[c0], cols[j0] = cols[j0], cols[c0]
            done = True
            for j in range(c0 + 1, ncols):
                if cols[j][i] != 0:
                    q = cols[j][i] // cols[c0][i]
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[c0])]
                    if cols[j][i] != 0:
                        done = False
            if done:
                break
        if c0 < ncols and cols[c0][i] != 0:
            c0 += 1
    return cols, c0


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of {x in Z^n : rows . x = 0}; saturated by construction."""
    cols, c0 = _column_reduce(rows, ncols)
    m = len(rows)
    return [tuple(col[m:]) for col in cols[c0:]]


def saturated_basis(vectors: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of span_R(vectors) intersected with Z^n, in Hermite normal form."""
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return []
    perp = nullspace(vecs, ncols)
    if not perp:
        basis = [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    else:
        basis = integer_kernel(perp, ncols)
    return hermite_normal_form(basis)


def torus_lift_exponents(basis: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer matrix M (n x k) with x = t^M satisfying x^{b_j} = t_j.

    ``basis`` must be a basis of a saturated lattice; then column reduction
    gives B U = [H | 0] with H unimodular and M = U[:, :k] H^{-1}.
    """
    k = len(basis)
    cols, _ = _column_reduce(basis, ncols)
    h = [[cols[j][i] for j in range(k)] for i in range(k)]
    u = [[cols[j][k + r] for j in range(k)] for r in range(ncols)]
    aug = [list(map(Fraction, h[i])) + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    red, piv = rref(aug)
    if len(piv) < k:
        raise ValueError("basis is not linearly independent")
    hinv = [row[k:] for row in red]
    if any(x.denominator != 1 for row in hinv for x in row):
        raise ValueError("basis does not span a saturated lattice")
    return [[int(sum(u[r][j] * hinv[j][c] for j in range(k))) for c in range(k)]
            for r in range(ncols)]
