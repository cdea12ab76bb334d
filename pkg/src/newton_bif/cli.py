"""Command-line front end.

    newton-bif "x + x*y + x^2*y^2"                 full report
    newton-bif "x + x*y + x^2*y^2" certify -1/4    one candidate
    newton-bif poly.txt chi 1 --format text

Exit codes: 0 success, 1 bad input, 2 degenerate at infinity, 3 guard hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from . import numeric as nm
from .certify import (KfAssembly, assemble_Kf, certify, inclusion_report)
from .cone import GuardError
from .euler import EpsilonNotGeneric, chi_affine_curve_fiber, euler_jump, pick_generic_value
from .newton import NewtonAnalysis, is_convenient
from .numeric import Tolerances, Value
from .poly import PolynomialSyntaxError, SparsePoly, load_polynomial
from .polytope import NotFullDimensionalError, normalized_volume
from .torus import FAIL, CriticalValuesNotFinite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_GUARD = 0, 1, 2, 3
COMMANDS = ("analyze", "faces", "fan", "kf", "certify", "chi", "jump")

log = logging.getLogger("newton_bif")


@dataclass
class RunConfig:
    polynomial: str
    ambient_dim: int | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    fmt: str = "json"
    full_trace: bool = False
    skip_nondegeneracy: bool = False
    assume_critical_values: list | None = None
    command: str = "analyze"
    argument: str | None = None


def parse_value(text: str):
    """'-1/4' -> Fraction, '0.5+0.1j' -> mpc."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        z = complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise ValueError(f"cannot parse value {text!r}") from exc
    with mpmath.workdps(nm.DPS):
        return mpmath.mpc(z)


def read_polynomial(source: str, n: int | None) -> SparsePoly:
    path = Path(source)
    text = path.read_text() if len(source) < 4096 and path.is_file() else source
    return load_polynomial(text.strip(), n)


# ---------------------------------------------------------------------------
# report sections

def _header(cfg: RunConfig, f: SparsePoly) -> dict:
    t = cfg.tolerances
    return {"schema_version": SCHEMA_VERSION,
            "seed": cfg.seed,
            "tolerances": {"root": t.root, "residual": t.residual, "cluster": t.cluster},
            "input": {"polynomial": f.to_text(), "ambient_dim": f.ambient_dim},
            "command": cfg.command}


def _polyhedron(na: NewtonAnalysis) -> dict:
    p = na.polytope
    return {"vertices": [list(v) for v in p.vertices], "dim": p.dim, "f_vector": p.f_vector(),
            "normalized_volume": {"value": normalized_volume(p), "status": "exact"},
            "convenient": is_convenient(na.f)}


def _faces(na: NewtonAnalysis) -> dict:
    return {"origin_faces": [c.to_json() for c in na.origin_classifications],
            "atypical": [[list(v) for v in c.face.vertices] for c in na.atypical],
            "bad_faces": [{"gamma": [list(v) for v in g.vertices],
                           "delta": None if d is None else [list(v) for v in d.vertices]}
                          for d, g in na.bad_faces()]}


def _nondegeneracy(kf: KfAssembly) -> dict:
    return {"overall": kf.nondegeneracy.to_json(),
            "faces": [{"face": [list(v) for v in face.vertices], "verdict": v.to_json()}
                      for face, v in kf.nondegeneracy_faces.items()]}


def _kf(kf: KfAssembly) -> dict:
    return {"affine_critical_values": kf.affine.to_json(),
            "face_critical_values": [ks.to_json() for ks in kf.face_values.values()],
            "candidates": [c.to_json() for c in kf.candidates],
            "inclusion": inclusion_report(kf)}


def _euler_table(kf: KfAssembly) -> dict:
    f = kf.f
    gen = pick_generic_value([c.value for c in kf.candidates], kf.seed)
    rows = []
    for c in kf.candidates:
        fib = chi_affine_curve_fiber(f, c.value)
        try:
            jump = euler_jump(f, c.value, [d.value for d in kf.candidates], kf.tol.cluster)
        except EpsilonNotGeneric:
            jump = None
        rows.append({"value": c.value.to_json(), "chi": {"value": fib.chi, "status": "numeric"},
                     "jump": None if jump is None else {"value": jump, "status": "numeric"}})
    generic = chi_affine_curve_fiber(f, gen)
    return {"generic_value": Value(gen).to_json(),
            "generic_chi": {"value": generic.chi, "status": "numeric"},
            "table": rows}


def run(cfg: RunConfig) -> tuple[dict, int]:
    f = read_polynomial(cfg.polynomial, cfg.ambient_dim)
    report = _header(cfg, f)
    code = EXIT_OK
    if cfg.command == "chi":
        if f.ambient_dim != 2:
            raise ValueError("chi needs a polynomial in two variables")
        report["fiber"] = chi_affine_curve_fiber(f, parse_value(cfg.argument)).to_json()
        return report, code

    na = NewtonAnalysis(f)
    report["polyhedron"] = _polyhedron(na)
    if cfg.command == "fan":
        report["fan"] = na.fan.to_json()
        return report, code
    report["faces"] = _faces(na)
    if cfg.command == "faces":
        return report, code

    kf = assemble_Kf(f, cfg.tolerances, cfg.seed, cfg.skip_nondegeneracy,
                     cfg.assume_critical_values)
    report["nondegeneracy"] = _nondegeneracy(kf)
    if kf.nondegeneracy.outcome == FAIL:
        code = EXIT_DEGENERATE
    report["kf"] = _kf(kf)
    if cfg.command == "kf":
        return report, code

    if cfg.command == "jump":
        if f.ambient_dim != 2:
            raise ValueError("jump needs a polynomial in two variables")
        b = parse_value(cfg.argument)
        j = euler_jump(f, b, [c.value for c in kf.candidates], cfg.tolerances.cluster)
        report["jump"] = {"value": Value(b).to_json(), "jump": {"value": j, "status": "numeric"}}
        return report, code

    if cfg.command == "certify":
        b = Value(parse_value(cfg.argument))
        cand = next((c for c in kf.candidates if c.value.close_to(b, cfg.tolerances.cluster)), None)
        if cand is None:
            report["certificates"] = []
            report["note"] = "value is not in K_f"
        else:
            report["certificates"] = [certify(kf, cand, cfg.full_trace).to_json()]
        return report, code

    report["certificates"] = [certify(kf, c, cfg.full_trace, with_jump=False).to_json()
                              for c in kf.candidates]
    if f.ambient_dim == 2:
        report["euler"] = _euler_table(kf)
        for cert, row in zip(report["certificates"], report["euler"]["table"]):
            cert["euler_jump"] = row["jump"]
    return report, code


# ---------------------------------------------------------------------------
# text rendering

def _fmt_value(v: dict) -> str:
    if "exact" in v:
        return v["exact"]
    z = complex(v["re"], v["im"])
    return f"{z.real:.10g}" if abs(z.imag) < 1e-14 else f"{z.real:.10g}{z.imag:+.10g}i"


def render_text(report: dict) -> str:
    lines = [f"f = {report['input']['polynomial']}  (n = {report['input']['ambient_dim']}, "
             f"seed {report['seed']})"]
    if "fiber" in report:
        fb = report["fiber"]
        lines.append(f"chi(f^-1({_fmt_value(fb['value'])})) = {fb['chi']['value']}")
        return "\n".join(lines)
    poly = report["polyhedron"]
    lines.append(f"Γ_∞: dim {poly['dim']}, f-vector {poly['f_vector']}, "
                 f"volume {poly['normalized_volume']['value']}, convenient {poly['convenient']}")
    if "fan" in report:
        lines.append("dual fan:")
        for row in report["fan"]:
            lines.append(f"  {row['face']['vertices']}  ->  rays {row['cone']['rays']}"
                         + (f" lineality {row['cone']['lineality']}" if row['cone']['lineality'] else ""))
        return "\n".join(lines)
    faces = report["faces"]
    lines.append("atypical faces:")
    for rec in faces["origin_faces"]:
        if rec["atypical"]:
            lines.append(f"  {rec['vertices']}  σ rays {rec['sigma_rays']}  "
                         f"dim σ∩R+ {rec['sigma_cap_orthant_dim']}  "
                         f"rel. simple {rec['relatively_simple']}  bad partner {rec['bad_partner']}")
    if not faces["atypical"]:
        lines.append("  none")
    if "nondegeneracy" not in report:
        return "\n".join(lines)
    nd = report["nondegeneracy"]["overall"]
    lines.append(f"non-degenerate at infinity: {nd['outcome']}"
                 + (f" ({nd['caveat']})" if nd.get("caveat") else ""))
    for w in nd["witnesses"]:
        lines.append(f"  witness: {json.dumps(w, ensure_ascii=False)}")
    kf = report["kf"]
    lines.append("K_f:")
    for c in kf["candidates"]:
        scope = {True: "in scope", False: "out of scope", None: "scope undecided"}[c["in_theorem_scope"]]
        lines.append(f"  {_fmt_value(c['value']):>14}  {', '.join(c['origins'])}  [{scope}]")
    inc = kf["inclusion"]
    lines.append(inc["statement"] if inc["asserted"] else f"warning: {inc['warning']}")
    for cert in report.get("certificates", []):
        lines.append(f"{_fmt_value(cert['value']['value'])}: {cert['verdict']}"
                     + (f" via {cert['theorem']}" if cert["theorem"] else "")
                     + (f" ({cert['reason']})" if cert["reason"] else ""))
        for t in cert["hypothesis_trace"]:
            lines.append(f"    {t['theorem']}: {t['outcome']}")
            for h in t["hypotheses"]:
                lines.append(f"      [{h['status']:>7}] {h['name']}  ({h['evidence']})")
    if "euler" in report:
        e = report["euler"]
        lines.append(f"generic chi = {e['generic_chi']['value']} "
                     f"(at {_fmt_value(e['generic_value'])})")
        lines.append(f"  {'value':>14}  chi  jump")
        for r in e["table"]:
            j = r["jump"]["value"] if r["jump"] else "?"
            lines.append(f"  {_fmt_value(r['value']):>14}  {r['chi']['value']:>3}  {j:>4}")
    if "jump" in report:
        lines.append(f"E_f({_fmt_value(report['jump']['value'])}) = {report['jump']['jump']['value']}")
    if report.get("note"):
        lines.append(report["note"])
    return "\n".join(lines)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="newton-bif",
                                description="Candidate bifurcation values from the Newton "
                                            "polyhedron at infinity, with certificates.")
    p.add_argument("polynomial", help="polynomial text, JSON term list, or a file holding either")
    p.add_argument("command", nargs="?", default="analyze", choices=COMMANDS)
    p.add_argument("argument", nargs="?", help="value for certify / chi / jump")
    p.add_argument("-n", "--ambient-dim", type=int)
    p.add_argument("--root-tol", type=float, default=nm.ROOT_TOL)
    p.add_argument("--residual-tol", type=float, default=nm.RESIDUAL_TOL)
    p.add_argument("--cluster-tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--full-trace", action="store_true")
    p.add_argument("--skip-nondegeneracy-check", action="store_true")
    p.add_argument("--assume-critical-values", default=None,
                   help="comma-separated f(Sing f), replacing the computed set")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command in ("certify", "chi", "jump") and args.argument is None:
        raise ValueError(f"{args.command} needs a value argument")
    seed = args.seed if args.seed is not None else int(os.environ.get("NEWTON_BIF_SEED", "0"))
    tol = Tolerances(args.root_tol, args.residual_tol,
                     args.cluster_tol if args.cluster_tol is not None else args.root_tol)
    assumed = None
    if args.assume_critical_values is not None:
        assumed = [parse_value(s) for s in args.assume_critical_values.split(",") if s.strip()]
    return RunConfig(args.polynomial, args.ambient_dim, tol, seed, args.format, args.full_trace,
                     args.skip_nondegeneracy_check, assumed, args.command, args.argument)


_NEGATIVE = re.compile(r"^-(\d|\.\d)")


def _protect_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-1/4" as an option; a leading space keeps it positional
    return [" " + a if _NEGATIVE.match(a) else a for a in argv]


def main(argv: list[str] | None = None) -> int:
    argv = _protect_negative_values(sys.argv[1:] if argv is None else list(argv))
    args = build_parser().parse_intermixed_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except (GuardError, NotFullDimensionalError) as exc:
        print(f"newton-bif: guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (PolynomialSyntaxError, ValueError, CriticalValuesNotFinite,
            nm.ClusterAmbiguityError, EpsilonNotGeneric) as exc:
        print(f"newton-bif: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.fmt == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
