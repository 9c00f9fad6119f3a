#!/usr/bin/env python3
"""Write seeded synthetic TSPLIB EUC_2D files (uniform or clustered points).

Python's random.Random is a documented Mersenne Twister, so the files are
reproducible across platforms for a given seed.
"""
import argparse
import random


def uniform(rng, n, side):
    return [(rng.randrange(side), rng.randrange(side)) for _ in range(n)]


def clustered(rng, n, side, clusters):
    centres = [(rng.uniform(0.1, 0.9) * side, rng.uniform(0.1, 0.9) * side) for _ in range(clusters)]
    points = []
    for i in range(n):
        cx, cy = centres[i % clusters]
        x = min(side - 1, max(0, round(rng.gauss(cx, side / 20))))
        y = min(side - 1, max(0, round(rng.gauss(cy, side / 20))))
        points.append((x, y))
    return points


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("name")
    ap.add_argument("nodes", type=int)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--side", type=int, default=10000)
    ap.add_argument("--clusters", type=int, default=0, help="0 for uniform points")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    if args.clusters:
        points = clustered(rng, args.nodes, args.side, args.clusters)
    else:
        points = uniform(rng, args.nodes, args.side)
    kind = f"{args.clusters} clusters" if args.clusters else "uniform"
    with open(args.out, "w", newline="\n") as f:
        f.write(f"NAME : {args.name}\n")
        f.write(f"COMMENT : synthetic {kind}, {args.nodes} nodes, seed {args.seed}\n")
        f.write("TYPE : TSP\n")
        f.write(f"DIMENSION : {args.nodes}\n")
        f.write("EDGE_WEIGHT_TYPE : EUC_2D\n")
        f.write("NODE_COORD_SECTION\n")
        for i, (x, y) in enumerate(points, start=1):
            f.write(f"{i} {x} {y}\n")
        f.write("EOF\n")


if __name__ == "__main__":
    main()
