"""Census of solved grids reached by annealing the unconstrained problem.

Draws a large batch of readouts on the empty-grid instance and reports how
often the ground state is hit, how many distinct grids appear, and the
multiplicity profile (how many grids were seen once, twice, ...). The
annealer makes no uniformity promise over the solution space; this script
is how to see what the distribution actually looks like.

Usage: python3 scripts/sample_census.py [--readouts N] [--seed N]
"""

from __future__ import annotations

import argparse
import collections
import time

import numpy as np

from qudoku import SOLUTION_ENERGY, anneal, build_sudoku_qubo, decode_bits, grid_to_line


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--readouts", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--show", type=int, default=3, help="grids to print")
    args = parser.parse_args(argv)

    q = build_sudoku_qubo()
    t0 = time.perf_counter()
    samples = anneal(q, args.readouts, seed=args.seed)
    dt = time.perf_counter() - t0

    ground = np.nonzero(samples.energies == SOLUTION_ENERGY)[0]
    multiplicity = collections.Counter(
        samples.bits[r].tobytes() for r in ground
    )
    print(
        f"{args.readouts} readouts in {dt:.1f}s: {ground.size} at ground energy "
        f"({ground.size / args.readouts:.2%}), {len(multiplicity)} distinct grids"
    )
    if multiplicity:
        profile = collections.Counter(multiplicity.values())
        for seen, count in sorted(profile.items()):
            print(f"  {count} grids appeared {seen}x")
        print("\nexamples:")
        for key, _ in multiplicity.most_common(args.show):
            grid = decode_bits(np.frombuffer(key, dtype=np.uint8))
            print(f"  {grid_to_line(grid)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
