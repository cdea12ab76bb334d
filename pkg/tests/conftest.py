import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from newton_bif.poly import SparsePoly, parse_polynomial
from newton_bif.polytope import convex_hull

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

TETRA_SUPPORT = [(2, 0, 0), (2, 2, 0), (2, 2, 3)]
CASE_A = "x + x*y + x^2*y^2"
CASE_B = "x + x^2*y"


def P(text, n=None):
    return parse_polynomial(text, n or (3 if "z" in text else 2))


@pytest.fixture
def tetra_poly():
    return SparsePoly({e: 1 for e in TETRA_SUPPORT}, 3)


@st.composite
def full_dim_supports(draw, n=None, max_points=10, max_coord=4):
    """Nonzero exponent sets whose hull with the origin is full-dimensional."""
    n = n or draw(st.integers(2, 4))
    pts = draw(st.lists(st.tuples(*[st.integers(0, max_coord)] * n),
                        min_size=n, max_size=max_points, unique=True))
    pts = [p for p in pts if any(p)]
    from hypothesis import assume
    assume(len(pts) >= n and convex_hull(pts + [(0,) * n]).dim == n)
    return pts


def polynomial_from_support(support, rng: random.Random, constant=0):
    n = len(support[0])
    terms = {e: rng.choice([-3, -2, -1, 1, 2, 3]) for e in support}
    if constant:
        terms[(0,) * n] = constant
    return SparsePoly(terms, n)


def random_full_dim_support(rng: random.Random, n: int, max_points=10, max_coord=4):
    while True:
        k = rng.randint(n, max_points)
        pts = {tuple(rng.randint(0, max_coord) for _ in range(n)) for _ in range(k)}
        pts.discard((0,) * n)
        pts = sorted(pts)
        if len(pts) >= n and convex_hull(pts + [(0,) * n]).dim == n:
            return pts


def random_convenient_support(rng: random.Random, n: int, extra=4, max_coord=4):
    pts = {tuple(rng.randint(1, max_coord) if j == i else 0 for j in range(n)) for i in range(n)}
    for _ in range(extra):
        pts.add(tuple(rng.randint(0, max_coord) for _ in range(n)))
    pts.discard((0,) * n)
    return sorted(pts)
