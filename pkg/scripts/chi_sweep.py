"""Dump chi(f = c) on a grid of rational c, plus the values in K_f, as CSV.

Usage: python3 scripts/chi_sweep.py POLY [LO HI STEPS]
"""
from __future__ import annotations

import csv
import sys
from fractions import Fraction

from newton_bif.certify import assemble_Kf
from newton_bif.euler import chi_affine_curve_fiber
from newton_bif.poly import parse_polynomial


def main(argv: list[str]) -> None:
    text = argv[0] if argv else "x + x*y + x^2*y^2"
    lo, hi, steps = (Fraction(argv[1]), Fraction(argv[2]), int(argv[3])) if len(argv) > 3 \
        else (Fraction(-2), Fraction(2), 40)
    f = parse_polynomial(text, 2)
    kf = assemble_Kf(f)
    writer = csv.writer(sys.stdout)
    writer.writerow(["c", "chi", "in_Kf"])
    for cand in kf.candidates:
        writer.writerow([cand.value, chi_affine_curve_fiber(f, cand.value).chi, 1])
    for k in range(steps + 1):
        c = lo + (hi - lo) * k / steps
        if any(cand.value.distance(c) < 1e-9 for cand in kf.candidates):
            continue
        writer.writerow([c, chi_affine_curve_fiber(f, c).chi, 0])


if __name__ == "__main__":
    main(sys.argv[1:])
