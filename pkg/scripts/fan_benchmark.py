"""Time dual-fan construction and check the partition property on random supports.

Usage: python3 scripts/fan_benchmark.py [SUPPORTS] [DIRECTIONS]
"""
from __future__ import annotations

import random
import sys
import time

from newton_bif.polytope import convex_hull, dual_fan, supporting_face


def random_support(rng: random.Random, n: int, points: int, coord: int = 4) -> list[tuple]:
    pts = {tuple(rng.randint(0, coord) for _ in range(n)) for _ in range(points)}
    pts |= {tuple(coord if i == j else 0 for i in range(n)) for j in range(n)}
    return sorted(pts)


def main(supports: int, directions: int) -> None:
    rng = random.Random(7)
    for n in (2, 3, 4):
        built = checked = bad = 0
        t = time.perf_counter()
        for _ in range(supports):
            p = convex_hull([(0,) * n] + random_support(rng, n, 10))
            fan = dual_fan(p)
            built += 1
            for _ in range(directions):
                u = tuple(rng.randint(-10, 10) for _ in range(n))
                bad += fan.locate(u) != supporting_face(p, u)
                checked += 1
        dt = time.perf_counter() - t
        print(f"n={n}: {built} fans, {checked} directions, {bad} mismatches, {dt:.2f}s")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:]]
    main(*(args + [20, 500][len(args):]))
