"""Run the full pipeline on a list of polynomials and print one summary line each.

Usage: python3 scripts/case_sweep.py [POLY ...]
"""
from __future__ import annotations

import sys

from newton_bif.certify import assemble_Kf, certify
from newton_bif.poly import load_polynomial

DEFAULT = ["x + x*y + x^2*y^2", "x + x^2*y", "x*y + x^2*y^2 + y",
           "x^2*y^2 + x*y + x + y", "x + y^2 + x*y*z + z^3"]


def main(polys: list[str]) -> None:
    for text in polys:
        f = load_polynomial(text)
        kf = assemble_Kf(f)
        parts = []
        for cand in kf.candidates:
            cert = certify(kf, cand, with_jump=f.ambient_dim == 2)
            jump = "" if cert.euler_jump is None else f" jump={cert.euler_jump}"
            parts.append(f"{cand.value} [{','.join(sorted(cand.origins))}] {cert.verdict}{jump}")
        print(f"{text}: nondeg={kf.nondegeneracy.outcome}; " + "; ".join(parts))


if __name__ == "__main__":
    main(sys.argv[1:] or DEFAULT)
