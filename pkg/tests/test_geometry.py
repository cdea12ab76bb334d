"""Hull, cones and the dual fan on small lattice polytopes."""
import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newton_bif.cone import (Cone, GuardError, common_edges_count, double_description,
                             e_function, face_of_orthant, is_simplicial)
from newton_bif.linalg import rref
from newton_bif.polytope import (NotFullDimensionalError, convex_hull, dual_fan,
                                 lattice_basis_of_face_span, normalized_volume, supporting_face)

from conftest import TETRA_SUPPORT, full_dim_supports

TETRA = [(0, 0, 0)] + TETRA_SUPPORT


@pytest.fixture
def tetra():
    return convex_hull(TETRA)


def test_tetrahedron_face_counts(tetra):
    assert tetra.dim == 3 and tetra.f_vector() == [4, 6, 4, 1]
    assert normalized_volume(tetra) == 12


def test_collinear_and_singleton_hulls():
    seg = convex_hull([(0, 0), (1, 0), (2, 0)])
    assert seg.dim == 1 and sorted(seg.vertices) == [(0, 0), (2, 0)]
    pt = convex_hull([(1, 1)])
    assert pt.dim == 0
    assert normalized_volume(convex_hull([(0, 0), (2, 2)])) == 2
    assert normalized_volume(convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])) == 1


def test_supporting_faces(tetra):
    assert sorted(supporting_face(tetra, (1, -1, 0)).vertices) == [(0, 0, 0), (2, 2, 0), (2, 2, 3)]
    assert supporting_face(tetra, (0, 0, 0)) == tetra.whole
    assert supporting_face(tetra, (1, 1, 1)).vertices == ((0, 0, 0),)


def test_dual_cones(tetra):
    fan = dual_fan(tetra)
    seg = tetra.face_by_vertices([(0, 0, 0), (2, 2, 0)])
    assert fan.cones[seg] == Cone.from_rays([(1, -1, 0), (0, 0, 1)], 3)
    tri = tetra.face_by_vertices([(0, 0, 0), (2, 0, 0), (2, 2, 0)])
    assert fan.cones[tri] == Cone.from_rays([(0, 0, 1)], 3)
    assert fan.cones[tetra.whole].dim == 0


def test_lower_dimensional_hull_has_no_fan():
    with pytest.raises(NotFullDimensionalError, match="full-dimensional"):
        dual_fan(convex_hull([(0, 0), (1, 0), (2, 0)]))


def test_orthant_cut_of_edge_cone(tetra):
    sigma = dual_fan(tetra).cones[tetra.face_by_vertices([(0, 0, 0), (2, 0, 0)])]
    cut = sigma.intersect(Cone.orthant(3))
    assert cut == Cone.from_rays([(0, 1, 0), (0, 0, 1)], 3) and cut.dim == 2
    assert face_of_orthant(cut) == frozenset({2, 3})
    assert common_edges_count(sigma) == 1


def test_small_cone_facts():
    ray = Cone.from_rays([(1, -1)], 2)
    assert ray.intersect(Cone.orthant(2)) == Cone.zero(2)
    assert Cone.orthant(3).intersect(Cone.orthant(3)) == Cone.orthant(3)
    assert is_simplicial(Cone.from_rays([(1, -1, 0), (0, 0, 1)], 3))
    square = Cone.from_rays([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], 3)
    assert square.dim == 3 and not is_simplicial(square)
    assert is_simplicial(Cone.zero(3))
    assert face_of_orthant(Cone.from_rays([(1, 1)], 2)) is None
    assert face_of_orthant(Cone.zero(2)) == frozenset()
    assert e_function(Cone.zero(2)) == 1 and e_function(ray) == 0
    assert e_function(Cone.from_rays([(1, 2), (0, 1)], 2)) == 1
    assert common_edges_count(ray) == 0


def test_lineality_is_not_simplicial():
    with pytest.raises(ValueError):
        is_simplicial(Cone.from_rays([], 2, lineality=[(1, 0)]))


def test_face_of_orthant_requires_orthant_cone():
    with pytest.raises(ValueError):
        face_of_orthant(Cone.from_rays([(1, -1)], 2))


def test_guard_on_ambient_dimension():
    with pytest.raises(GuardError):
        double_description([[1] * 9], [], 9)


def test_face_span_bases():
    seg = convex_hull([(0, 0), (2, 2)]).whole
    assert lattice_basis_of_face_span(seg) == [(1, 1)]
    edge = convex_hull([(0, 0, 0), (2, 0, 0)]).whole
    assert lattice_basis_of_face_span(edge) == [(1, 0, 0)]
    full = convex_hull([(0, 0), (3, 1), (1, 2)]).whole
    b = lattice_basis_of_face_span(full)
    assert abs(b[0][0] * b[1][1] - b[0][1] * b[1][0]) == 1
    with pytest.raises(ValueError):
        lattice_basis_of_face_span(convex_hull([(1, 1)]).whole)


def _brute_force_vertices(points):
    """Points not in the hull of the others, by checking all simplices of the rest."""
    out = []
    for p in points:
        rest = [q for q in points if q != p]
        inside = False
        for k in range(1, len(rest) + 1):
            for sub in itertools.combinations(rest, k):
                # solve p = sum l_i q_i, sum l_i = 1 exactly; accept if l >= 0
                rows = [[q[i] for q in sub] + [p[i]] for i in range(len(p))] + [[1] * k + [1]]
                red, piv = rref(rows)
                if k in piv:
                    continue
                if len(piv) < k:
                    continue
                lam = [Fraction(0)] * k
                for row, c in zip(red, piv):
                    lam[c] = row[k]
                if all(x >= 0 for x in lam):
                    inside = True
                    break
            if inside:
                break
        if not inside:
            out.append(p)
    return sorted(out)


@settings(max_examples=25)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
                min_size=1, max_size=7, unique=True))
def test_hull_vertices_match_brute_force(points):
    assert sorted(convex_hull(points).vertices) == _brute_force_vertices(points)


@given(full_dim_supports(max_points=7), st.randoms(use_true_random=False))
def test_fan_partition_and_dimensions(support, rnd):
    n = len(support[0])
    p = convex_hull(support + [(0,) * n])
    fan = dual_fan(p)
    for face, cone in fan.cones.items():
        assert cone.dim + face.dim == n
    for _ in range(100):
        u = tuple(rnd.randint(-6, 6) for _ in range(n))
        face = supporting_face(p, u)
        assert fan.locate(u) == face
        assert fan.cones[face].contains(u)


@given(full_dim_supports(max_points=6))
def test_rays_halfspaces_round_trip(support):
    n = len(support[0])
    p = convex_hull(support + [(0,) * n])
    for cone in dual_fan(p).cones.values():
        again = Cone.from_halfspaces(cone.halfspaces, n)
        assert set(again.rays) == set(cone.rays)
        back = Cone.from_rays(again.rays, n, again.lineality)
        assert back == cone


def _random_unimodular(rnd, n):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(6):
        i, j = rnd.sample(range(n), 2)
        k = rnd.randint(-2, 2)
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return m


@given(full_dim_supports(max_points=6), st.randoms(use_true_random=False))
def test_volume_unimodular_invariance(support, rnd):
    n = len(support[0])
    pts = support + [(0,) * n]
    m = _random_unimodular(rnd, n)
    moved = [tuple(sum(m[i][j] * v[j] for j in range(n)) for i in range(n)) for v in pts]
    p = convex_hull(pts)
    assert normalized_volume(p) == normalized_volume(convex_hull(moved))
    # additivity over the triangulation used
    simplices = p.triangulation()
    total = sum(normalized_volume(convex_hull([p.vertices[i] for i in s])) for s in simplices)
    assert total == normalized_volume(p)
