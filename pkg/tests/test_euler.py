import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from newton_bif.certify import assemble_Kf
from newton_bif.euler import (EpsilonNotGeneric, chi_affine_curve_fiber, euler_jump,
                              pick_generic_value, swap_variables)
from newton_bif.newton import check_dim_full

from conftest import CASE_A, CASE_B, P


@pytest.mark.parametrize("text,c,chi", [
    ("x*y", 1, 0),
    ("x*y", Fraction(-7, 3), 0),
    ("x", 0, 1),
    ("y", 5, 1),
    (CASE_A, 3, -1),
    (CASE_A, Fraction(-1, 4), 0),
    (CASE_A, 0, 0),
    (CASE_B, 0, 1),
    (CASE_B, 2, 0),
    ("x^2 + y^2", 0, 1),
    ("x^2 + y^2", 1, 0),
    ("y^2 - x^3", 0, 1),
    # triple roots in y over x^2 - 3x = c: noise splits them by eps^(1/3)
    ("x^2 - 3*x + 2*x^3*y^3", Fraction(1, 10**5), -4),
    ("x^2 - 3*x + 2*x^3*y^3", 0, -1),
])
def test_fiber_euler_characteristics(text, c, chi):
    fib = chi_affine_curve_fiber(P(text), c)
    assert fib.chi == chi
    assert fib.recomputed_chi() == fib.chi


def test_fiber_structure_of_case_b_at_zero():
    # x + x^2 y = x (1 + x y): the line x = 0 plus a copy of C*
    fib = chi_affine_curve_fiber(P(CASE_B), 0)
    assert fib.vertical_lines == [0]
    assert fib.generic_root_count == 1


def test_triple_root_count_is_projection_independent():
    f = P("x^2 - 3*x + 2*x^3*y^3")
    for k in range(1, 9):
        c = Fraction(1, 10**k)
        assert chi_affine_curve_fiber(f, c).chi == chi_affine_curve_fiber(swap_variables(f), c).chi


def test_numeric_base_value():
    import mpmath
    fib = chi_affine_curve_fiber(P(CASE_A), mpmath.mpc(0.3, 0.2))
    assert fib.chi == -1


def test_identically_zero_fiber_is_refused():
    with pytest.raises(ValueError):
        chi_affine_curve_fiber(P("0*x + 2"), 2)


@pytest.mark.parametrize("b", [Fraction(-1, 4), Fraction(0)])
def test_jumps_of_case_a(b):
    assert euler_jump(P(CASE_A), b, [Fraction(-1, 4), Fraction(0)]) == 1


@pytest.mark.parametrize("b", [0, 3, Fraction(-2, 7)])
def test_no_jump_for_a_coordinate(b):
    assert euler_jump(P("x"), b, [b]) == 0


def test_generic_value_margin():
    c = pick_generic_value([Fraction(0), Fraction(-1, 4)])
    assert min(abs(c), abs(c + Fraction(1, 4))) >= Fraction(1, 8)
    assert pick_generic_value([]) == 0
    assert pick_generic_value([Fraction(0)]) == 1


@st.composite
def plane_polys(draw):
    exps = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                         min_size=2, max_size=5, unique=True))
    terms = " + ".join(f"({draw(st.integers(-3, 3).filter(bool))})*x^{a}*y^{b}" for a, b in exps)
    f = P(terms)
    if f.degree() < 1:
        return P("x*y")
    return f


@settings(max_examples=25)
@given(plane_polys(), st.fractions(-3, 3, max_denominator=5))
def test_chi_independent_of_projection(f, c):
    if (f - c).is_zero():
        return
    assert chi_affine_curve_fiber(f, c).chi == chi_affine_curve_fiber(swap_variables(f), c).chi


@settings(max_examples=15)
@given(plane_polys(), st.integers(0, 2**16))
def test_chi_locally_constant_off_candidates(f, seed):
    assume(check_dim_full(f))
    kf = assemble_Kf(f, seed=seed)
    assume(kf.nondegeneracy.outcome == "pass")
    K = [c.value for c in kf.candidates]
    c0 = pick_generic_value(K, seed)
    room = min([v.distance(c0) for v in K] + [1.0]) / 2
    rng = random.Random(seed)
    chis = {chi_affine_curve_fiber(f, c0 + Fraction(rng.randint(-100, 100), 100) * Fraction(room).limit_denominator(1000)).chi
            for _ in range(3)}
    assert len(chis) == 1
