#!/usr/bin/env python3
"""Sweep every trivalent leaf-activation pattern of a PTA FCM and report
convergence behavior and round counts."""

import argparse
import itertools
import sys
from collections import Counter

from pta_engine.assets import asset_path
from pta_engine.fcm import evaluate, parse_fcm


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fcm", default=str(asset_path("pta_fcm.json")),
                        help="FCM document to sweep (default: bundled model)")
    parser.add_argument("--values", default="-1,0,1",
                        help="comma-separated activation levels per leaf")
    args = parser.parse_args()

    model = parse_fcm(open(args.fcm, encoding="utf-8").read())
    levels = [float(x) for x in args.values.split(",")]
    leaves = model.leaf_ids()
    total = len(levels) ** len(leaves)
    if total > 200_000:
        print(f"refusing to sweep {total} patterns; reduce --values or leaves",
              file=sys.stderr)
        return 1

    rounds = Counter()
    cycles = 0
    for bits in itertools.product(levels, repeat=len(leaves)):
        result = evaluate(model, dict(zip(leaves, bits)))
        rounds[result.rounds] += 1
        cycles += result.cycle_detected

    print(f"model: {args.fcm}")
    print(f"leaves: {len(leaves)}  patterns: {total}  cycles detected: {cycles}")
    for count, patterns in sorted(rounds.items()):
        print(f"  converged in {count} rounds: {patterns}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
