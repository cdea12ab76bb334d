"""Exact sparse (Laurent) polynomials with rational coefficients."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .linalg import Vector, rref

if TYPE_CHECKING:
    from .polytope import FaceDescriptor, LatticePolytope

AFFINE = "affine"
LAURENT = "laurent"


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def glex(e: Sequence[int]):
    return (sum(e), tuple(e))


class SparsePoly:
    """Immutable map exponent-vector -> nonzero Fraction."""

    __slots__ = ("_terms", "ambient_dim", "mode", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] | Iterable = (),
                 ambient_dim: int = 1, mode: str = AFFINE):
        if mode not in (AFFINE, LAURENT):
            raise ValueError(f"unknown mode {mode!r}")
        if ambient_dim < 0:
            raise ValueError("ambient_dim must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Vector, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != ambient_dim:
                raise ValueError(f"exponent {e} has wrong length for n={ambient_dim}")
            if mode == AFFINE and any(x < 0 for x in e):
                raise ValueError("negative exponent in affine mode")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self._terms = {e: acc[e] for e in sorted(acc, key=glex) if acc[e] != 0}
        self.ambient_dim = ambient_dim
        self.mode = mode
        self._hash = None

    # ---- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, c, n: int, mode: str = AFFINE) -> "SparsePoly":
        return cls({(0,) * n: c}, n, mode)

    @classmethod
    def variable(cls, i: int, n: int, mode: str = AFFINE) -> "SparsePoly":
        return cls({tuple(int(j == i - 1) for j in range(n)): 1}, n, mode)

    @classmethod
    def monomial(cls, e: Sequence[int], c=1, mode: str = AFFINE) -> "SparsePoly":
        return cls({tuple(e): c}, len(e), mode)

    # ---- data -----------------------------------------------------------
    @property
    def terms(self) -> dict[Vector, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def support(self) -> list[Vector]:
        return list(self._terms)

    def coeff(self, e: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.ambient_dim)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(other, self.ambient_dim, self.mode)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"SparsePoly({self.to_text()!r}, n={self.ambient_dim}, {self.mode})"

    def __str__(self):
        return self.to_text()

    def degree(self, i: int | None = None) -> int:
        """Total degree, or degree in variable ``i`` (1-based); -1 for zero."""
        if not self._terms:
            return -1
        if i is None:
            return max(sum(e) for e in self._terms)
        return max(e[i - 1] for e in self._terms)

    def min_degree(self, i: int) -> int:
        return min(e[i - 1] for e in self._terms) if self._terms else 0

    def variables(self) -> list[int]:
        return [i + 1 for i in range(self.ambient_dim) if any(e[i] for e in self._terms)]

    # ---- arithmetic -----------------------------------------------------
    def _mode_with(self, other: "SparsePoly") -> str:
        return LAURENT if LAURENT in (self.mode, other.mode) else AFFINE

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.ambient_dim != self.ambient_dim:
                raise ValueError("ambient dimensions differ")
            return other
        return SparsePoly.constant(Fraction(other), self.ambient_dim, self.mode)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return SparsePoly(acc, self.ambient_dim, self._mode_with(other))

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({e: -c for e, c in self._terms.items()}, self.ambient_dim, self.mode)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: dict[Vector, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return SparsePoly(acc, self.ambient_dim, self._mode_with(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (e, c), = self._terms.items()
            return SparsePoly({tuple(x * k for x in e): c ** k}, self.ambient_dim, LAURENT)
        out = SparsePoly.constant(1, self.ambient_dim, self.mode)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "SparsePoly":
        return SparsePoly({e: v * Fraction(c) for e, v in self._terms.items()},
                          self.ambient_dim, self.mode)

    def as_laurent(self) -> "SparsePoly":
        return SparsePoly(self._terms, self.ambient_dim, LAURENT)

    def shift(self, e: Sequence[int]) -> "SparsePoly":
        """Multiply by the monomial x^e (result is Laurent if needed)."""
        new = {tuple(a + b for a, b in zip(k, e)): c for k, c in self._terms.items()}
        mode = AFFINE if all(min(k) >= 0 for k in new) or not new else LAURENT
        if self.mode == LAURENT:
            mode = LAURENT
        return SparsePoly(new, self.ambient_dim, mode)

    def numerator(self) -> tuple["SparsePoly", Vector]:
        """(q, s) with q = x^s * self a polynomial not divisible by any variable."""
        if not self._terms:
            return SparsePoly({}, self.ambient_dim, AFFINE), (0,) * self.ambient_dim
        s = tuple(-min(e[i] for e in self._terms) for i in range(self.ambient_dim))
        q = SparsePoly({tuple(a + b for a, b in zip(k, s)): c for k, c in self._terms.items()},
                       self.ambient_dim, AFFINE)
        return q, s

    # ---- calculus / evaluation ------------------------------------------
    def derivative(self, i: int) -> "SparsePoly":
        if not 1 <= i <= self.ambient_dim:
            raise IndexError(f"variable index {i} out of range 1..{self.ambient_dim}")
        j = i - 1
        acc = {}
        for e, c in self._terms.items():
            if e[j] != 0:
                e2 = list(e)
                e2[j] -= 1
                acc[tuple(e2)] = c * e[j]
        return SparsePoly(acc, self.ambient_dim, self.mode)

    def euler_derivative(self, i: int) -> "SparsePoly":
        """x_i * d/dx_i, which has the same zeros on the torus as the partial."""
        j = i - 1
        return SparsePoly({e: c * e[j] for e, c in self._terms.items()},
                          self.ambient_dim, self.mode)

    def gradient(self) -> list["SparsePoly"]:
        return [self.derivative(i) for i in range(1, self.ambient_dim + 1)]

    def evaluate(self, point: Sequence):
        """Value at ``point``; exact when all coordinates are int/Fraction."""
        if len(point) != self.ambient_dim:
            raise ValueError("point has wrong dimension")
        exact = all(isinstance(x, (int, Fraction)) for x in point)
        if exact:
            point = [Fraction(x) for x in point]
        total = Fraction(0) if exact else 0
        for e, c in self._terms.items():
            term = c if exact else _cast(c, point)
            for x, k in zip(point, e):
                if k < 0 and x == 0:
                    raise ZeroDivisionError("pole: zero coordinate under a negative exponent")
                if k:
                    term = term * x ** k
            total = total + term
        return total

    __call__ = evaluate

    def substitute(self, i: int, value) -> "SparsePoly":
        """Exact substitution x_i := value (value rational); keeps ambient_dim."""
        j = i - 1
        value = Fraction(value)
        acc: dict[Vector, Fraction] = {}
        for e, c in self._terms.items():
            e2 = list(e)
            k = e2[j]
            e2[j] = 0
            if k < 0 and value == 0:
                raise ZeroDivisionError("pole: zero coordinate under a negative exponent")
            acc[tuple(e2)] = acc.get(tuple(e2), 0) + c * value ** k
        return SparsePoly(acc, self.ambient_dim, self.mode)

    # ---- printing / serialisation -----------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
                            for i, k in enumerate(e) if k != 0)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list:
        return [[c.numerator, c.denominator, list(e)] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data, ambient_dim: int | None = None, mode: str = AFFINE) -> "SparsePoly":
        if isinstance(data, str):
            data = json.loads(data)
        if ambient_dim is None:
            if not data:
                raise ValueError("ambient_dim required for an empty term list")
            ambient_dim = len(data[0][2])
        return cls({tuple(e): Fraction(num, den) for num, den, e in data}
                   if len({tuple(t[2]) for t in data}) == len(data) else
                   _sum_terms(data), ambient_dim, mode)


def _sum_terms(data):
    acc: dict = {}
    for num, den, e in data:
        acc[tuple(e)] = acc.get(tuple(e), 0) + Fraction(num, den)
    return acc


def _cast(c: Fraction, point):
    try:
        import mpmath
        if any(isinstance(x, (mpmath.mpf, mpmath.mpc)) for x in point):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return c.numerator / c.denominator


# ---------------------------------------------------------------------------
# parsing
_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+|[xyzw])|(\*\*|[-+*/^()]))")
_ALIASES = {"x": 1, "y": 2, "z": 3, "w": 4}


class _Parser:
    def __init__(self, text: str, n: int, mode: str):
        self.text, self.n, self.mode = text, n, mode
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
            start = m.start(m.lastindex)
            kind = ("num", "var", "op")[m.lastindex - 1]
            val = m.group(m.lastindex)
            self.tokens.append((kind, "^" if val == "**" else val, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, val):
        t = self.take()
        if t[1] != val:
            raise PolynomialSyntaxError(f"expected {val!r}", t[2])

    def parse(self) -> SparsePoly:
        if not self.tokens:
            raise PolynomialSyntaxError("empty expression", 0)
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise PolynomialSyntaxError(f"unexpected token {t[1]!r}", t[2])
        return p

    def expr(self) -> SparsePoly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        out = self.product().scale(sign)
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            term = self.product()
            out = out + term if op == "+" else out - term
        return out

    def product(self) -> SparsePoly:
        out = self.power()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op[1] == "*":
                out = out * rhs
            else:
                if len(rhs) != 1 or rhs.support[0] != (0,) * self.n:
                    raise PolynomialSyntaxError("division only by nonzero constants", op[2])
                out = out.scale(1 / rhs.constant_term)
        return out

    def power(self) -> SparsePoly:
        base_tok = self.peek()
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            t = self.take()
            if t[0] != "num":
                raise PolynomialSyntaxError("expected integer exponent", t[2])
            k = int(t[1])
            if neg:
                if self.mode == AFFINE and base_tok[0] == "var":
                    raise PolynomialSyntaxError("negative exponent", t[2])
                if len(base) != 1:
                    raise PolynomialSyntaxError("negative power of a non-monomial", t[2])
                (e, c), = base.items()
                if c == 0:
                    raise PolynomialSyntaxError("division by zero", t[2])
                return SparsePoly({tuple(-k * x for x in e): Fraction(1) / c ** k},
                                  self.n, self.mode)
            return base ** k
        return base

    def atom(self) -> SparsePoly:
        kind, val, pos = self.take()
        if kind == "num":
            return SparsePoly.constant(int(val), self.n, self.mode)
        if kind == "var":
            k = _ALIASES[val] if val in _ALIASES else int(val[1:])
            if not 1 <= k <= self.n:
                raise PolynomialSyntaxError(f"variable index {k} out of range 1..{self.n}", pos)
            return SparsePoly.variable(k, self.n, self.mode)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolynomialSyntaxError(f"unexpected token {val!r}", pos)


def parse_polynomial(text: str, ambient_dim: int, mode: str = AFFINE) -> SparsePoly:
    """Parse ``3/2*x1^2*x2 - x2 + 1``-style text (x, y, z, w alias x1..x4)."""
    return _Parser(text, ambient_dim, mode).parse()


def load_polynomial(text: str, ambient_dim: int | None = None, mode: str = AFFINE) -> SparsePoly:
    """Accept either polynomial text or a JSON term list."""
    s = text.strip()
    if s.startswith("["):
        return SparsePoly.from_json(s, ambient_dim, mode)
    if ambient_dim is None:
        idx = [int(m) for m in re.findall(r"x(\d+)", s)]
        alias = [_ALIASES[m] for m in re.findall(r"(?<![\dx])([xyzw])(?!\d)", s)]
        ambient_dim = max(idx + alias + [1])
    return parse_polynomial(s, ambient_dim, mode)


# ---------------------------------------------------------------------------
def gamma_part(p: SparsePoly, polytope: "LatticePolytope", face: "FaceDescriptor") -> SparsePoly:
    """Sub-sum of ``p`` over the exponents lying on ``face``."""
    if not polytope.owns(face):
        raise ValueError("face does not belong to the supplied polytope")
    return SparsePoly({e: c for e, c in p.items() if polytope.face_contains(face, e)},
                      p.ambient_dim, p.mode)


def monomial_change_of_coordinates(p: SparsePoly, basis: Sequence[Sequence[int]]) -> SparsePoly:
    """Rewrite ``p`` in the torus coordinates t with x^v = t^c for v = sum c_k b_k."""
    d = len(basis)
    n = p.ambient_dim
    # pick d coordinates on which the basis is invertible
    cols = [[Fraction(basis[k][i]) for k in range(d)] for i in range(n)]
    red, piv = rref([[basis[k][i] for i in range(n)] for k in range(d)])
    if len(piv) < d:
        raise ValueError("basis vectors are linearly dependent")
    sub_rows = [cols[i] for i in piv]  # d x d, rows = chosen coordinates
    aug = [r + [Fraction(int(i == j)) for j in range(d)] for i, r in enumerate(sub_rows)]
    inv = [r[d:] for r in rref(aug)[0]]
    acc = {}
    for e, c in p.items():
        coords = [sum(inv[k][j] * e[piv[j]] for j in range(d)) for k in range(d)]
        if any(x.denominator != 1 for x in coords) or \
                any(sum(coords[k] * basis[k][i] for k in range(d)) != e[i] for i in range(n)):
            raise ValueError(f"exponent {e} is not in the lattice spanned by the basis")
        acc[tuple(int(x) for x in coords)] = c
    return SparsePoly(acc, d, LAURENT)


def partial_derivative(p: SparsePoly, i: int) -> SparsePoly:
    return p.derivative(i)


def evaluate(p: SparsePoly, point: Sequence):
    return p.evaluate(point)
