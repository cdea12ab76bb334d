import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from newton_bif.linalg import (det, hermite_normal_form, integer_kernel, nullspace, primitive,
                               rank, saturated_basis, solve_in_span, torus_lift_exponents)

small = st.integers(-6, 6)


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def test_primitive_scales_rationals():
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert primitive([0, 0]) == (0, 0)


def test_saturation_examples():
    assert saturated_basis([(2, 2)], 2) == [(1, 1)]
    assert saturated_basis([(2, 0, 0)], 3) == [(1, 0, 0)]
    b = saturated_basis([(1, 0), (0, 1), (3, 5)], 2)
    assert abs(det(b)) == 1


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_kernel_vectors_annihilate(rows):
    for v in nullspace(rows, 4):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert len(nullspace(rows, 4)) == 4 - rank(rows)
    for v in integer_kernel(rows, 4):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_hnf_preserves_rank(rows):
    h = hermite_normal_form(rows)
    assert len(h) == rank(rows)
    for r in rows:
        assert solve_in_span(h, r) is not None


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_saturated_basis_is_saturated(vectors):
    b = saturated_basis(vectors, 4)
    if not b:
        return
    assert len(b) == rank(vectors)
    # an integer point of the span has integer coordinates in the basis
    rnd = random.Random(len(vectors))
    for _ in range(5):
        lam = [rnd.randint(-3, 3) for _ in b]
        v = [sum(l * x for l, x in zip(lam, col)) for col in zip(*b)]
        c = solve_in_span(b, v)
        assert c is not None and all(x.denominator == 1 for x in c)
    m = torus_lift_exponents(b, 4)
    assert matmul([list(r) for r in b], m) == [[int(i == j) for j in range(len(b))] for i in range(len(b))]
