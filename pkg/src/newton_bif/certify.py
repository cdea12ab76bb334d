"""Candidate bifurcation values and hypothesis checking for their certification."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

from . import numeric as nm
from .cone import Cone, common_edges_count, e_function, face_of_orthant  # noqa: F401
from .newton import FaceClassification, NewtonAnalysis
from .numeric import Tolerances, Value
from .poly import SparsePoly
from .polytope import FaceDescriptor, check_full_dimensional
from .torus import (EXACT, FAIL, HEURISTIC, PASS, UNKNOWN, CriticalValueSet, Verdict, combine,
                    critical_values_torus, dedupe, derive_rng, affine_critical_values,
                    isolated_singularities_over, nondegenerate_at_infinity,
                    restrict_to_face_torus, weakest)

log = logging.getLogger(__name__)

CERTIFIED, CANDIDATE_ONLY, UNDECIDED = "certified-in-B_f", "candidate-only", "unknown"
AFFINE_CRITICAL, F_AT_ZERO, FACE = "affine-critical", "f(0)", "face"
SCOPE_REASON = "theorem scope excludes f(Sing f) ∪ {f(0)}"


@dataclass
class CandidateValue:
    value: Value
    origins: set[str] = field(default_factory=set)
    faces: list[FaceDescriptor] = field(default_factory=list)
    in_theorem_scope: bool | None = True
    status: str = EXACT

    def __post_init__(self):
        if not self.origins:
            raise ValueError("a candidate value needs at least one origin")

    def to_json(self) -> dict:
        v = self.value.to_json()
        if not self.value.is_exact:
            v["status"] = weakest(self.status, nm_status(self.value))
        return {"value": v,
                "origins": sorted(self.origins),
                "faces": [[list(x) for x in f.vertices] for f in self.faces],
                "in_theorem_scope": self.in_theorem_scope}


def nm_status(v: Value) -> str:
    return EXACT if v.is_exact else "numeric"


@dataclass
class HypothesisCheck:
    name: str
    key: str
    status: str
    evidence: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "key": self.key, "status": self.status, "evidence": self.evidence}


@dataclass
class TheoremCheck:
    theorem: str
    hypotheses: list[HypothesisCheck]

    @property
    def outcome(self) -> str:
        st = [h.status for h in self.hypotheses]
        if FAIL in st:
            return FAIL
        return UNKNOWN if UNKNOWN in st else PASS

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "outcome": self.outcome,
                "hypotheses": [h.to_json() for h in self.hypotheses]}


@dataclass
class Certificate:
    value: CandidateValue
    verdict: str
    theorem: str | None
    hypothesis_trace: list[TheoremCheck] = field(default_factory=list)
    euler_jump: int | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.verdict == CERTIFIED:
            cited = next((t for t in self.hypothesis_trace if t.theorem == self.theorem), None)
            if cited is None or cited.outcome != PASS:
                raise AssertionError("certified verdict without a fully passing theorem")

    def to_json(self) -> dict:
        return {"value": self.value.to_json(),
                "verdict": self.verdict,
                "theorem": self.theorem,
                "reason": self.reason,
                "hypothesis_trace": [t.to_json() for t in self.hypothesis_trace],
                "euler_jump": None if self.euler_jump is None
                else {"value": self.euler_jump, "status": "numeric"}}


# ---------------------------------------------------------------------------

@dataclass
class KfAssembly:
    f: SparsePoly
    newton: NewtonAnalysis
    affine: CriticalValueSet
    face_values: dict[FaceDescriptor, CriticalValueSet]
    nondegeneracy: Verdict
    nondegeneracy_faces: dict[FaceDescriptor, Verdict]
    candidates: list[CandidateValue]
    tol: Tolerances = nm.DEFAULT_TOL
    seed: int = 0

    @property
    def n(self) -> int:
        return self.f.ambient_dim

    @cached_property
    def classification(self) -> dict[FaceDescriptor, FaceClassification]:
        return {c.face: c for c in self.newton.atypical}

    def faces_containing(self, b: Value) -> list[FaceClassification]:
        return [self.classification[face] for face, ks in self.face_values.items()
                if ks.contains(b, self.tol.cluster)]


def _face_values(newton: NewtonAnalysis, c: FaceClassification, tol: Tolerances,
                 seed: int) -> CriticalValueSet:
    f = newton.f
    if c.bad_partner is None and c.face.dim > 2:
        # f_gamma - f(0) is weighted homogeneous, so the Euler relation gives K_i ⊆ {f(0)}
        return CriticalValueSet([Value(newton.f0)], EXACT, c.face,
                                notes=["upper bound {f(0)}: gamma meets NP(f - f(0)) in lower dimension"])
    p = restrict_to_face_torus(f, c.face, newton.polytope)
    key = ";".join(",".join(map(str, v)) for v in c.face.vertices)
    ks = critical_values_torus(p, c.face.dim, tol, derive_rng(seed, key))
    ks.source_face = c.face
    return ks


def assemble_Kf(f: SparsePoly, tol: Tolerances = nm.DEFAULT_TOL, seed: int = 0,
                skip_nondegeneracy: bool = False,
                assume_critical_values: Sequence | None = None) -> KfAssembly:
    """K_f = f(Sing f) ∪ {f(0)} ∪ K_i with per-value origins."""
    newton = NewtonAnalysis(f)
    check_full_dimensional(newton.polytope)
    if skip_nondegeneracy:
        nd_faces, nd = {}, Verdict(UNKNOWN, "skipped", caveat="check skipped on request")
    else:
        nd_faces, nd = nondegenerate_at_infinity(f, newton.polytope, tol, seed)
    if assume_critical_values is not None:
        vals = dedupe([Value(v) for v in assume_critical_values], tol.cluster)
        affine = CriticalValueSet(vals, EXACT if all(v.is_exact for v in vals) else "numeric",
                                  notes=["supplied by the user"])
    else:
        affine = affine_critical_values(f, tol, derive_rng(seed, "affine"))
    face_values = {c.face: _face_values(newton, c, tol, seed) for c in newton.atypical}

    entries: list[tuple[Value, str, FaceDescriptor | None, str]] = []
    entries += [(v, AFFINE_CRITICAL, None, affine.status) for v in affine]
    entries.append((Value(newton.f0), F_AT_ZERO, None, EXACT))
    for face, ks in face_values.items():
        entries += [(v, FACE, face, ks.status) for v in ks]

    cands: list[CandidateValue] = []
    for v, origin, face, status in sorted(entries, key=lambda e: not e[0].is_exact):
        hit = next((c for c in cands if c.value.close_to(v, tol.cluster)), None)
        if hit is None:
            hit = CandidateValue(v, {origin}, [], status=status)
            cands.append(hit)
        hit.origins.add(origin)
        hit.status = weakest(hit.status, status)
        if face is not None and face not in hit.faces:
            hit.faces.append(face)
    for c in cands:
        c.in_theorem_scope = _scope(c, affine, newton.f0, tol)
    cands.sort(key=lambda c: c.value.sort_key())
    return KfAssembly(f, newton, affine, face_values, nd, nd_faces, cands, tol, seed)


def _scope(c: CandidateValue, affine: CriticalValueSet, f0, tol: Tolerances) -> bool | None:
    if c.origins & {AFFINE_CRITICAL, F_AT_ZERO}:
        return False
    if affine.status == HEURISTIC:
        return None
    for v in list(affine) + [Value(f0)]:
        if v.is_exact and c.value.is_exact:
            continue
        if c.value.close_to(v, 10 * tol.cluster):
            return None
    return True


# ---------------------------------------------------------------------------
# hypotheses

def _relint_positive(face: FaceDescriptor, n: int) -> bool:
    return all(any(v[i] > 0 for v in face.vertices) for i in range(n))


def _faces_text(cs: Sequence[FaceClassification]) -> str:
    return ", ".join(str(c.face) for c in cs) or "none"


class _Checker:
    def __init__(self, kf: KfAssembly, cand: CandidateValue):
        self.kf, self.cand, self.n = kf, cand, kf.n
        self.faces_b = kf.faces_containing(cand.value)

    def dimension(self, n: int) -> HypothesisCheck:
        return HypothesisCheck(f"n = {n}", "ambient-dimension",
                               PASS if self.n == n else FAIL, f"n = {self.n}")

    def full_dim(self) -> HypothesisCheck:
        d = self.kf.newton.polytope.dim
        return HypothesisCheck("dim Γ_∞(f) = n", "full-dimension",
                               PASS if d == self.n else FAIL, f"dim Γ_∞(f) = {d}")

    def nondegenerate(self) -> HypothesisCheck:
        v = self.kf.nondegeneracy
        return HypothesisCheck("f non-degenerate at infinity", "non-degenerate", v.outcome,
                               v.caveat or v.method)

    @cached_property
    def isai(self) -> HypothesisCheck:
        b = self.cand.value
        per = isolated_singularities_over(self.kf.f, b, self.kf.newton.atypical,
                                          self.kf.newton.polytope)
        v = combine(list(per.values()), "isolated singularities over b")
        bad = [str(face) for face, w in per.items() if w.outcome != PASS]
        return HypothesisCheck("isolated singularities at infinity over b", "isolated-singularities",
                               v.outcome, "non-isolated or undecided on: " + ", ".join(bad)
                               if bad else f"{len(per)} atypical faces checked")

    def nonempty(self) -> HypothesisCheck:
        return HypothesisCheck("b ∈ K_i for some atypical γ_i", "b-in-some-Ki",
                               PASS if self.faces_b else FAIL, _faces_text(self.faces_b))

    def orthant_trivial(self) -> HypothesisCheck:
        cone_side = [c.sigma_cap_orthant.dim == 0 for c in self.faces_b]
        face_side = [_relint_positive(c.face, self.n) for c in self.faces_b]
        if cone_side != face_side:
            raise AssertionError("relint(γ_i) ⊂ Int(R^n_+) disagrees with σ_i ∩ R^n_+ = {0}")
        bad = [c for c, ok in zip(self.faces_b, cone_side) if not ok]
        return HypothesisCheck("σ_i ∩ R^n_+ = {0} for all i with b ∈ K_i", "orthant-trivial",
                               FAIL if bad else PASS,
                               f"fails on {_faces_text(bad)}" if bad else "relint(γ_i) ⊂ Int(R^n_+) agrees")

    def some_relatively_simple(self, extra: Callable[[FaceClassification], bool] | None = None,
                               name: str = "some γ_i with b ∈ K_i is relatively simple"
                               ) -> HypothesisCheck:
        good = [c for c in self.faces_b if c.relatively_simple and (extra is None or extra(c))]
        return HypothesisCheck(name, "relatively-simple", PASS if good else FAIL,
                               f"witness {good[0].face}" if good else "no such face")

    def orthant_face(self) -> HypothesisCheck:
        bad = [c for c in self.faces_b
               if c.sigma_cap_orthant.dim > 2 or face_of_orthant(c.sigma_cap_orthant) is None]
        return HypothesisCheck("σ_i ∩ R^n_+ is a face of R^n_+ of dim ≤ 2 for all i with b ∈ K_i",
                               "orthant-face", FAIL if bad else PASS,
                               f"fails on {_faces_text(bad)}" if bad else "holds")

    def all_faces(self, pred: Callable[[FaceClassification], bool], name: str, key: str
                  ) -> HypothesisCheck:
        bad = [c for c in self.faces_b if not pred(c)]
        return HypothesisCheck(name, key, FAIL if bad else PASS,
                               f"fails on {_faces_text(bad)}" if bad else "holds")

    def exists_face(self, pred: Callable[[FaceClassification], bool], name: str, key: str
                    ) -> HypothesisCheck:
        good = [c for c in self.faces_b if pred(c)]
        return HypothesisCheck(name, key, PASS if good else FAIL,
                               f"witness {good[0].face}" if good else "no such face")


def _common_edges_ok(c: FaceClassification) -> bool:
    return c.sigma_cap_orthant.dim != 2 or common_edges_count(c.sigma) <= 1


def _n4_no_common_edge(c: FaceClassification) -> bool:
    if c.sigma.dim == 3 and c.sigma_cap_orthant.dim == 3:
        return common_edges_count(c.sigma) == 0
    return True


def _n4_edge_bound(c: FaceClassification) -> bool:
    if c.sigma.dim == 3 and c.sigma_cap_orthant.dim == 2:
        return common_edges_count(c.sigma) <= 1
    return True


def _theorems(ch: _Checker) -> list[tuple[str, Callable[[], list[HypothesisCheck]]]]:
    standing = lambda: [ch.full_dim(), ch.nondegenerate(), ch.isai]  # noqa: E731
    return [
        ("nz-equality-n2", lambda: [ch.dimension(2), ch.nondegenerate()]),
        ("n3-isolated", lambda: [ch.dimension(3)] + standing()),
        ("orthant-trivial", lambda: standing() + [ch.orthant_trivial(), ch.some_relatively_simple()]),
        ("orthant-face", lambda: standing() + [
            ch.orthant_face(),
            ch.some_relatively_simple(_common_edges_ok,
                                      "some γ_i with b ∈ K_i is relatively simple, with at most "
                                      "one common edge when dim σ_i ∩ R^n_+ = 2")]),
        ("n4-no-common-edge", lambda: [ch.dimension(4)] + standing() + [
            ch.all_faces(_n4_no_common_edge,
                         "no common edge when dim σ_i = dim σ_i ∩ R^4_+ = 3", "no-common-edge"),
            ch.exists_face(_n4_edge_bound,
                           "some γ_i with at most one common edge when dim σ_i = 3 and "
                           "dim σ_i ∩ R^4_+ = 2", "edge-bound")]),
        ("n4-small-cone", lambda: [ch.dimension(4)] + standing() + [
            ch.nonempty(),
            ch.all_faces(lambda c: c.sigma_cap_orthant.dim <= 1 or c.sigma.dim <= 2,
                         "dim σ_i ∩ R^4_+ ≤ 1 or dim σ_i ≤ 2 for all i with b ∈ K_i",
                         "small-cone")]),
    ]


THEOREM_ORDER = ("nz-equality-n2", "n3-isolated", "orthant-trivial", "orthant-face",
                 "n4-no-common-edge", "n4-small-cone")


def _jump(kf: KfAssembly, cand: CandidateValue) -> int | None:
    if kf.n != 2:
        return None
    from .euler import EpsilonNotGeneric, euler_jump
    try:
        return euler_jump(kf.f, cand.value, [c.value for c in kf.candidates], kf.tol.cluster)
    except (EpsilonNotGeneric, nm.ClusterAmbiguityError) as exc:
        log.warning("euler jump at %s not computed: %s", cand.value, exc)
        return None


def certify(kf: KfAssembly, cand: CandidateValue, full_trace: bool = False,
            with_jump: bool = True) -> Certificate:
    jump = _jump(kf, cand) if with_jump else None
    if cand.in_theorem_scope is False:
        return Certificate(cand, CANDIDATE_ONLY, None, euler_jump=jump, reason=SCOPE_REASON)
    if cand.in_theorem_scope is None:
        return Certificate(cand, UNDECIDED, None, euler_jump=jump,
                           reason="value too close to f(Sing f) ∪ {f(0)} to decide scope")
    ch = _Checker(kf, cand)
    trace: list[TheoremCheck] = []
    cited = None
    for name, hyps in _theorems(ch):
        t = TheoremCheck(name, hyps())
        trace.append(t)
        if t.outcome == PASS and cited is None:
            cited = name
            if not full_trace:
                break
    if cited is not None:
        verdict = CERTIFIED
    elif any(t.outcome == UNKNOWN for t in trace):
        verdict = UNDECIDED
    else:
        verdict = CANDIDATE_ONLY
    reason = None if cited else "no theorem has all hypotheses satisfied"
    return Certificate(cand, verdict, cited, trace, jump, reason)


def inclusion_report(kf: KfAssembly) -> dict:
    nd = kf.nondegeneracy.outcome
    if nd != PASS:
        return {"asserted": False, "statement": None,
                "warning": f"non-degeneracy at infinity is {nd}; inclusion B_f ⊆ K_f not asserted"}
    if kf.n == 2:
        return {"asserted": True, "statement": "B_f = K_f"}
    return {"asserted": True, "statement": "B_f ⊆ K_f; certified subset listed below"}
