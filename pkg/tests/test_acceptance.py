"""Acceptance suite: nine criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or directly as a script.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from newton_bif.certify import CERTIFIED, assemble_Kf, certify  # noqa: E402
from newton_bif.cone import Cone, common_edges_count, e_function  # noqa: E402
from newton_bif.euler import chi_affine_curve_fiber, euler_jump, pick_generic_value, swap_variables  # noqa: E402
from newton_bif.newton import NewtonAnalysis, atypical_faces  # noqa: E402
from newton_bif.numeric import Value  # noqa: E402
from newton_bif.poly import SparsePoly, parse_polynomial  # noqa: E402
from newton_bif.polytope import convex_hull, dual_fan, normalized_volume, supporting_face  # noqa: E402
from newton_bif.torus import FAIL, PASS, nondegenerate_at_infinity  # noqa: E402

from conftest import (TETRA_SUPPORT, polynomial_from_support, random_convenient_support,  # noqa: E402
                      random_full_dim_support)

SEED = 20240917
FUZZ_PLANE = 40
FUZZ_SPACE = 10


def _line(k: int, ok: bool, detail: str) -> str:
    return f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"


def _vs(face):
    return tuple(sorted(face.vertices))


def criterion_1():
    t = time.perf_counter()
    f = SparsePoly({e: 1 for e in TETRA_SUPPORT}, 3)
    na = NewtonAnalysis(f)
    classes = {_vs(c.face): c for c in na.origin_classifications}
    seg_diag = classes[((0, 0, 0), (2, 2, 0))]
    seg_axis = classes[((0, 0, 0), (2, 0, 0))]
    tri = classes[((0, 0, 0), (2, 0, 0), (2, 2, 0))]
    elapsed = time.perf_counter() - t
    ok = (seg_diag.atypical and seg_axis.atypical and not tri.atypical
          and seg_axis.sigma_cap_orthant.dim == 2 and elapsed < 1.0)
    return ok, (f"[0,(2,2,0)] atypical={seg_diag.atypical}, [0,(2,0,0)] atypical={seg_axis.atypical}, "
                f"triangle atypical={tri.atypical}, dim σ∩R³₊={seg_axis.sigma_cap_orthant.dim}, "
                f"{elapsed:.2f}s")


def criterion_2(supports=50, directions=1000):
    rng = random.Random(SEED)
    failures = 0
    checked = 0
    for k in range(supports):
        n = 2 + k % 3
        pts = random_full_dim_support(rng, n, max_points=10)
        p = convex_hull(pts + [(0,) * n])
        fan = dual_fan(p)
        for face, cone in fan.cones.items():
            if cone.dim != n - face.dim:
                failures += 1
        faces = list(fan.cones.items())
        for _ in range(directions):
            u = tuple(rng.randint(-10, 10) for _ in range(n))
            gu = supporting_face(p, u)
            try:
                if fan.locate(u) != gu:
                    failures += 1
            except ArithmeticError:
                failures += 1
            for face, cone in faces:
                if cone.contains(u) != (face.key <= gu.key):
                    failures += 1
            checked += 1
    return failures == 0, f"{supports} supports, {checked} directions, {failures} failures"


def criterion_3(count=50):
    rng = random.Random(SEED + 3)
    bad = 0
    for k in range(count):
        n = 2 + k % 3
        f = polynomial_from_support(random_convenient_support(rng, n), rng)
        if atypical_faces(f):
            bad += 1
    return bad == 0, f"{count} convenient polynomials, {bad} with atypical faces"


def criterion_4():
    t = time.perf_counter()
    f = parse_polynomial("x + x*y + x^2*y^2", 2)
    kf = assemble_Kf(f)
    cands = {str(c.value): c for c in kf.candidates}
    quarter = Fraction(-1, 4)
    ok = set(cands) == {"0", "-1/4"}
    ok &= cands["0"].origins == {"affine-critical", "f(0)"}
    ok &= cands["-1/4"].origins == {"face"} and cands["-1/4"].value.exact == quarter
    cert = certify(kf, cands["-1/4"], with_jump=False)
    (c,) = kf.faces_containing(Value(quarter))
    ok &= cert.verdict == CERTIFIED and c.sigma_cap_orthant.dim == 0 and c.relatively_simple
    K = [quarter, Fraction(0)]
    jumps = [euler_jump(f, b, K) for b in K]
    gen = chi_affine_curve_fiber(f, pick_generic_value(K)).chi
    chis = [chi_affine_curve_fiber(f, b).chi for b in K]
    elapsed = time.perf_counter() - t
    ok &= jumps == [1, 1] and gen == -1 and chis == [0, 0] and elapsed < 5.0
    return ok, (f"K_f={sorted(cands)}, -1/4 {cert.verdict} via {cert.theorem}, jumps={jumps}, "
                f"generic chi={gen}, chi(-1/4), chi(0)={chis}, {elapsed:.2f}s")


def criterion_5():
    t = time.perf_counter()
    f = parse_polynomial("x + x^2*y", 2)
    kf = assemble_Kf(f)
    vals = [str(c.value) for c in kf.candidates]
    origins = [sorted(c.origins) for c in kf.candidates]
    k1_empty = all(len(ks) == 0 for ks in kf.face_values.values())
    gen = chi_affine_curve_fiber(f, pick_generic_value([Fraction(0)])).chi
    chi0 = chi_affine_curve_fiber(f, 0).chi
    elapsed = time.perf_counter() - t
    ok = (vals == ["0"] and origins == [["f(0)"]] and len(kf.affine) == 0 and k1_empty
          and gen == 0 and chi0 == 1 and elapsed < 5.0)
    return ok, (f"K_f={vals} origins={origins}, Sing f empty={len(kf.affine) == 0}, K_1 empty={k1_empty}, "
                f"generic chi={gen}, chi(0)={chi0}, {elapsed:.2f}s")


def criterion_6():
    f = parse_polynomial("(x + y)^2", 2)
    _, overall = nondegenerate_at_infinity(f)
    verified = False
    for w in overall.witnesses:
        if w["kind"] == "point" and w["verified"]:
            pt = [Fraction(c["exact"]) for c in w["point"]]
            # recheck the witness independently on the top edge part
            g = parse_polynomial("(x + y)^2", 2)
            verified = g.evaluate(pt) == 0 and all(q.evaluate(pt) == 0 for q in g.gradient()) \
                and all(x != 0 for x in pt)
    return overall.outcome == FAIL and verified, f"outcome={overall.outcome}, exact witness verified={verified}"


def _plane_corpus():
    rng = random.Random(SEED + 7)
    for _ in range(FUZZ_PLANE):
        yield polynomial_from_support(random_full_dim_support(rng, 2, max_points=5, max_coord=3), rng,
                                      constant=rng.choice([0, 1, -2]))


def _space_corpus():
    rng = random.Random(SEED + 8)
    for _ in range(FUZZ_SPACE):
        yield polynomial_from_support(random_full_dim_support(rng, 3, max_points=5, max_coord=2), rng)


def criterion_7():
    violations, certified, checked = [], 0, 0
    for n, corpus in ((2, _plane_corpus()), (3, _space_corpus())):
        for f in corpus:
            kf = assemble_Kf(f, seed=SEED)
            for cand in kf.candidates:
                cert = certify(kf, cand, full_trace=True, with_jump=n == 2)
                checked += 1
                if cert.verdict != CERTIFIED:
                    continue
                certified += 1
                cited = next(t for t in cert.hypothesis_trace if t.theorem == cert.theorem)
                if any(h.status != PASS for h in cited.hypotheses):
                    violations.append(f"{f.to_text()} @ {cand.value}: non-pass hypothesis")
                if n == 2 and cand.in_theorem_scope and (cert.euler_jump is None or cert.euler_jump < 1):
                    violations.append(f"{f.to_text()} @ {cand.value}: jump {cert.euler_jump}")
    detail = f"{checked} candidates, {certified} certified, {len(violations)} violations"
    if violations:
        detail += "; first: " + violations[0]
    return not violations, detail


def criterion_8():
    rng = random.Random(SEED + 9)
    mismatches = []
    instances = 0
    for f in _plane_corpus():
        instances += 1
        kf = assemble_Kf(f, seed=SEED)
        K = [c.value for c in kf.candidates]
        values = list(K)
        c0 = pick_generic_value(K, SEED)
        generic = [c0]
        while len(generic) < 3:
            c = Fraction(rng.randint(-400, 400), 100)
            if all(v.distance(c) >= 0.05 for v in K):
                generic.append(c)
        values += generic
        for b in values:
            a = chi_affine_curve_fiber(f, b).chi
            s = chi_affine_curve_fiber(swap_variables(f), b).chi
            if a != s:
                mismatches.append(f"{f.to_text()} @ {b}: swap {a} vs {s}")
        chis = {chi_affine_curve_fiber(f, c).chi for c in generic}
        if len(chis) != 1:
            mismatches.append(f"{f.to_text()}: generic chis {sorted(chis)} "
                              f"(non-degeneracy {kf.nondegeneracy.outcome})")
    detail = f"{instances} instances, {len(mismatches)} mismatches"
    if mismatches:
        detail += "; first: " + mismatches[0]
    return not mismatches, detail


def criterion_9():
    tetra = convex_hull([(0, 0, 0)] + TETRA_SUPPORT)
    vol = normalized_volume(tetra)
    e0 = e_function(Cone.zero(2))
    e1 = e_function(Cone.from_rays([(1, -1)], 2))
    sigma = dual_fan(tetra).cones[tetra.face_by_vertices([(0, 0, 0), (2, 0, 0)])]
    edges = common_edges_count(sigma)
    ok = vol == 12 and e0 == 1 and e1 == 0 and edges == 1
    return ok, f"volume={vol}, e({{0}})={e0}, e(ray(1,-1))={e1}, common edges={edges}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, check in enumerate(CRITERIA, 1):
        ok, detail = check()
        results.append(ok)
        print(_line(k, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
