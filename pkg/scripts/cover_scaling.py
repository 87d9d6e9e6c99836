"""Measure biclique cover size against the n log^2 n yardstick.

Builds random square instances (n uniform points, n random boxes whose
half-extents shrink like alpha/sqrt(n)) and tabulates sigma and the
normalized ratio sigma / (n log2(n)^2) per size.  The ratio should stay
flat or decline as n grows; a climbing column means the multi-level
decomposition is producing oversized parts.
"""

import argparse
import math
import random
import time

from geomatch.cover import box_cover, cover_size
from geomatch.geometry import Box, Point


def make_instance(n, alpha, rng):
    pts = [Point((rng.random(), rng.random())) for _ in range(n)]
    bound = alpha / math.sqrt(n)
    boxes = []
    for _ in range(n):
        cx, cy = rng.random(), rng.random()
        w, h = rng.random() * bound, rng.random() * bound
        boxes.append(Box(Point((cx - w, cy - h)), Point((cx + w, cy + h))))
    return pts, boxes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument(
        "--exponents",
        type=int,
        nargs="+",
        default=list(range(10, 17)),
        help="instance sizes as powers of two (default 10..16)",
    )
    ap.add_argument("--alpha", type=float, default=2.0, help="box half-extent scale")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'n':>8}  {'sigma':>10}  {'parts':>8}  {'sigma/(n lg^2 n)':>17}  {'seconds':>8}")
    for exp in args.exponents:
        n = 2**exp
        pts, boxes = make_instance(n, args.alpha, rng)
        t0 = time.perf_counter()
        cover = box_cover(pts, boxes)
        dt = time.perf_counter() - t0
        sigma = cover_size(cover)
        ratio = sigma / (n * math.log2(n) ** 2)
        print(f"{n:>8}  {sigma:>10}  {len(cover.parts):>8}  {ratio:>17.4f}  {dt:>8.2f}")


if __name__ == "__main__":
    main()
