import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from newton_bif.certify import (AFFINE_CRITICAL, CANDIDATE_ONLY, CERTIFIED, F_AT_ZERO, FACE,
                                SCOPE_REASON, CandidateValue, Certificate, HypothesisCheck,
                                TheoremCheck, assemble_Kf, certify, inclusion_report)
from newton_bif.cone import Cone, e_function
from newton_bif.newton import check_dim_full
from newton_bif.numeric import Value
from newton_bif.torus import FAIL, PASS

from conftest import CASE_A, CASE_B, P, polynomial_from_support, random_full_dim_support


def by_value(kf):
    return {str(c.value): c for c in kf.candidates}


@pytest.fixture(scope="module")
def kf_a():
    return assemble_Kf(P(CASE_A))


def test_case_a_candidates(kf_a):
    cands = by_value(kf_a)
    assert set(cands) == {"0", "-1/4"}
    assert cands["0"].origins == {AFFINE_CRITICAL, F_AT_ZERO}
    assert cands["-1/4"].origins == {FACE}
    assert [sorted(f.vertices) for f in cands["-1/4"].faces] == [[(0, 0), (2, 2)]]
    assert cands["-1/4"].in_theorem_scope and not cands["0"].in_theorem_scope


def test_case_a_certificate(kf_a):
    cert = certify(kf_a, by_value(kf_a)["-1/4"], full_trace=True)
    assert cert.verdict == CERTIFIED and cert.theorem == "nz-equality-n2"
    assert cert.euler_jump == 1
    trivial = next(t for t in cert.hypothesis_trace if t.theorem == "orthant-trivial")
    assert trivial.outcome == PASS
    (c,) = kf_a.faces_containing(Value(Fraction(-1, 4)))
    assert c.sigma_cap_orthant.dim == 0 and c.relatively_simple


def test_f_at_zero_is_out_of_scope(kf_a):
    cert = certify(kf_a, by_value(kf_a)["0"])
    assert cert.verdict == CANDIDATE_ONLY and cert.reason == SCOPE_REASON
    assert cert.euler_jump == 1


def test_case_b_has_no_in_scope_candidates():
    kf = assemble_Kf(P(CASE_B))
    assert [str(c.value) for c in kf.candidates] == ["0"]
    assert kf.candidates[0].origins == {F_AT_ZERO}
    assert all(len(ks) == 0 for ks in kf.face_values.values())


def test_three_variables_certified_by_isolated_singularities():
    kf = assemble_Kf(P("x + x*y + x^2*y^2 + z"))
    cert = certify(kf, by_value(kf)["-1/4"])
    assert cert.verdict == CERTIFIED and cert.theorem == "n3-isolated"
    names = [h.key for h in cert.hypothesis_trace[-1].hypotheses]
    assert names == ["ambient-dimension", "full-dimension", "non-degenerate", "isolated-singularities"]


def test_inclusion_statements(kf_a):
    assert inclusion_report(kf_a)["statement"] == "B_f = K_f"
    assert inclusion_report(assemble_Kf(P("x + x*y + x^2*y^2 + z")))["statement"].startswith("B_f ⊆ K_f")
    bad = inclusion_report(assemble_Kf(P("(x + y)^2")))
    assert not bad["asserted"] and "warning" in bad


def test_assumed_critical_values_replace_computed_ones():
    kf = assemble_Kf(P(CASE_A), assume_critical_values=[Fraction(-1, 4)])
    assert by_value(kf)["-1/4"].in_theorem_scope is False


def test_certified_requires_passing_theorem():
    cand = CandidateValue(Value(1), {FACE})
    failing = TheoremCheck("nz-equality-n2", [HypothesisCheck("n = 2", "ambient-dimension", FAIL)])
    with pytest.raises(AssertionError):
        Certificate(cand, CERTIFIED, "nz-equality-n2", [failing])
    with pytest.raises(ValueError):
        CandidateValue(Value(1), set())


def test_e_function_on_orthant_faces():
    for k in range(4):
        rays = [tuple(int(i == j) for i in range(3)) for j in range(k)]
        assert e_function(Cone.from_rays(rays, 3)) == 1
    assert e_function(Cone.from_rays([(1, -1)], 2)) == 0


def _check_soundness(kf):
    for cand in kf.candidates:
        cert = certify(kf, cand, full_trace=True, with_jump=kf.n == 2)
        if cert.verdict != CERTIFIED:
            continue
        cited = next(t for t in cert.hypothesis_trace if t.theorem == cert.theorem)
        assert all(h.status == PASS for h in cited.hypotheses)
        if kf.n == 2 and cand.in_theorem_scope:
            assert cert.euler_jump is not None and cert.euler_jump >= 1, cand.value


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_soundness_in_the_plane(seed):
    rnd = random.Random(seed)
    f = polynomial_from_support(random_full_dim_support(rnd, 2, max_points=5, max_coord=3), rnd,
                                constant=rnd.choice([0, 1, -2]))
    kf = assemble_Kf(f, seed=seed)
    _check_soundness(kf)
    if kf.nondegeneracy.outcome == PASS:
        assert all(certify(kf, c, with_jump=False).verdict == CERTIFIED
                   for c in kf.candidates if c.in_theorem_scope)


@settings(max_examples=10)
@given(st.integers(0, 2**32))
def test_soundness_in_three_variables(seed):
    rnd = random.Random(seed)
    f = polynomial_from_support(random_full_dim_support(rnd, 3, max_points=5, max_coord=2), rnd)
    _check_soundness(assemble_Kf(f, seed=seed))
