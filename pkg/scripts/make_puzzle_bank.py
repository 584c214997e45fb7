"""Regenerate data/puzzle_bank.csv and data/ambiguous_puzzle.txt.

The bank mirrors the schema of the big public Sudoku dumps
(id,puzzle,solution,clues,difficulty) at fixture scale: a handful of
unique-solution puzzles at every clue count the bench command cares about.
Solved grids come from the package's own sampler; digging removes clues in
random order and keeps a removal only if an exact backtracking count still
certifies a unique solution.

Row order matters to `qudoku bench` (it benchmarks the first row per clue
count), so the designated first picks are written before all other rows,
chosen so that the full-clamp reduced variable count is non-increasing as
the clue count grows. Candidate picks at neighboring counts can violate that
by accident of clue position; the arrangement step just selects a monotone
chain, it never edits a puzzle.

Usage: python3 scripts/make_puzzle_bank.py [--seed N] [--out PATH]
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from qudoku import ClueSet, clues_to_assignment, grid_to_line, sample_solutions

TARGET_COUNTS = range(23, 32)
SNAPSHOT_COUNTS = range(23, 37)
CANDIDATES_PER_COUNT = 4


def count_solutions(grid: np.ndarray, cap: int = 2) -> int:
    """Exact solution count up to ``cap`` by backtracking (most-constrained cell)."""
    rows = [set(range(1, 10)) - set(map(int, grid[r])) for r in range(9)]
    cols = [set(range(1, 10)) - set(map(int, grid[:, c])) for c in range(9)]
    blocks = [
        set(range(1, 10))
        - set(map(int, grid[3 * (b // 3) : 3 * (b // 3) + 3, 3 * (b % 3) : 3 * (b % 3) + 3].ravel()))
        for b in range(9)
    ]
    empties = [(r, c) for r in range(9) for c in range(9) if grid[r, c] == 0]
    found = 0

    def recurse() -> bool:
        nonlocal found
        best = None
        best_moves = None
        for r, c in empties:
            if grid[r, c]:
                continue
            moves = rows[r] & cols[c] & blocks[3 * (r // 3) + c // 3]
            if best_moves is None or len(moves) < len(best_moves):
                best, best_moves = (r, c), moves
                if not moves:
                    return False
                if len(moves) == 1:
                    break
        if best is None:
            found += 1
            return found >= cap
        r, c = best
        b = 3 * (r // 3) + c // 3
        for digit in sorted(best_moves):
            grid[r, c] = digit
            rows[r].discard(digit)
            cols[c].discard(digit)
            blocks[b].discard(digit)
            stop = recurse()
            grid[r, c] = 0
            rows[r].add(digit)
            cols[c].add(digit)
            blocks[b].add(digit)
            if stop:
                return True
        return False

    recurse()
    return found


def backtrack_difficulty(grid: np.ndarray) -> int:
    """Cheap difficulty proxy: branch points visited while re-counting to 2."""
    work = grid.copy()
    branches = 0

    rows = [set(range(1, 10)) - set(map(int, work[r])) for r in range(9)]
    cols = [set(range(1, 10)) - set(map(int, work[:, c])) for c in range(9)]
    blocks = [
        set(range(1, 10))
        - set(map(int, work[3 * (b // 3) : 3 * (b // 3) + 3, 3 * (b % 3) : 3 * (b % 3) + 3].ravel()))
        for b in range(9)
    ]
    empties = [(r, c) for r in range(9) for c in range(9) if work[r, c] == 0]
    found = 0

    def recurse() -> bool:
        nonlocal found, branches
        best = None
        best_moves = None
        for r, c in empties:
            if work[r, c]:
                continue
            moves = rows[r] & cols[c] & blocks[3 * (r // 3) + c // 3]
            if best_moves is None or len(moves) < len(best_moves):
                best, best_moves = (r, c), moves
                if not moves:
                    return False
                if len(moves) == 1:
                    break
        if best is None:
            found += 1
            return found >= 2
        if len(best_moves) > 1:
            branches += 1
        r, c = best
        b = 3 * (r // 3) + c // 3
        for digit in sorted(best_moves):
            work[r, c] = digit
            rows[r].discard(digit)
            cols[c].discard(digit)
            blocks[b].discard(digit)
            stop = recurse()
            work[r, c] = 0
            rows[r].add(digit)
            cols[c].add(digit)
            blocks[b].add(digit)
            if stop:
                return True
        return False

    recurse()
    return branches


def dig(solution: np.ndarray, rng: np.random.Generator) -> dict[int, np.ndarray]:
    """Remove clues in random order while uniqueness holds; snapshot by count."""
    puzzle = solution.copy()
    snapshots: dict[int, np.ndarray] = {}
    for cell in rng.permutation(81):
        r, c = divmod(int(cell), 9)
        kept = puzzle[r, c]
        if kept == 0:
            continue
        puzzle[r, c] = 0
        if count_solutions(puzzle.copy()) != 1:
            puzzle[r, c] = kept
            continue
        n_clues = int(np.count_nonzero(puzzle))
        if n_clues in SNAPSHOT_COUNTS:
            snapshots[n_clues] = puzzle.copy()
        if n_clues <= min(SNAPSHOT_COUNTS):
            break
    return snapshots


def reduced_vars(puzzle: np.ndarray) -> int:
    return clues_to_assignment(ClueSet.from_grid(puzzle), level="full").m


def pick_monotone_firsts(candidates: dict[int, list]) -> dict[int, dict]:
    """One pick per target count with reduced_vars non-increasing in the count.

    Greedy from the highest clue count: take the smallest reduced size there,
    then at each lower count the smallest reduced size that stays >= the pick
    below it, preferring a pick carved from a different solution grid than
    the previous one so the firsts are not one nested dig run. Returns {} if
    no chain exists (caller should add candidates).
    """
    picks: dict[int, dict] = {}
    floor = -1
    prev_solution = None
    for count in sorted(TARGET_COUNTS, reverse=True):
        pool = candidates.get(count, ())
        feasible = [rec for rec in pool if rec["m"] >= floor]
        if not feasible:
            return {}
        feasible.sort(
            key=lambda rec: (
                prev_solution is not None
                and rec["solution"].tobytes() == prev_solution,
                rec["m"],
            )
        )
        picks[count] = feasible[0]
        floor = feasible[0]["m"]
        prev_solution = feasible[0]["solution"].tobytes()
    return picks


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument(
        "--out", type=Path, default=Path(__file__).resolve().parent.parent / "data"
    )
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    candidates: dict[int, list] = {c: [] for c in SNAPSHOT_COUNTS}
    base_seed = args.seed
    trajectory = 0
    while any(len(candidates[c]) < CANDIDATES_PER_COUNT for c in TARGET_COUNTS):
        grids = sample_solutions(300, seed=base_seed + trajectory)
        if not grids:
            trajectory += 1
            continue
        solution = grids[int(rng.integers(len(grids)))]
        for _ in range(2):
            snapshots = dig(solution, rng)
            for count, puzzle in snapshots.items():
                assert count_solutions(puzzle.copy()) == 1
                candidates[count].append(
                    {
                        "puzzle": puzzle,
                        "solution": solution,
                        "clues": count,
                        "m": reduced_vars(puzzle),
                    }
                )
            print(
                f"trajectory {trajectory}: snapshots at "
                f"{sorted(snapshots)}",
                file=sys.stderr,
            )
        trajectory += 1
        if trajectory > 40:
            raise RuntimeError("digging stalled; raise the trajectory budget")

    firsts = pick_monotone_firsts(candidates)
    while not firsts:
        grids = sample_solutions(300, seed=base_seed + 1000 + trajectory)
        solution = grids[int(rng.integers(len(grids)))]
        snapshots = dig(solution, rng)
        for count, puzzle in snapshots.items():
            candidates[count].append(
                {
                    "puzzle": puzzle,
                    "solution": solution,
                    "clues": count,
                    "m": reduced_vars(puzzle),
                }
            )
        trajectory += 1
        firsts = pick_monotone_firsts(candidates)

    rows = []
    first_ids = set()
    for count in sorted(TARGET_COUNTS):
        rec = firsts[count]
        rows.append(rec)
        first_ids.add(id(rec))
    rest = [
        rec
        for count in sorted(candidates)
        for rec in candidates[count]
        if id(rec) not in first_ids
    ]
    rng.shuffle(rest)
    rows.extend(rest)

    args.out.mkdir(parents=True, exist_ok=True)
    bank_path = args.out / "puzzle_bank.csv"
    with bank_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "puzzle", "solution", "clues", "difficulty"])
        for i, rec in enumerate(rows, start=1):
            writer.writerow(
                [
                    i,
                    grid_to_line(rec["puzzle"], empty="0"),
                    grid_to_line(rec["solution"], empty="0"),
                    rec["clues"],
                    backtrack_difficulty(rec["puzzle"]),
                ]
            )
    print(f"wrote {len(rows)} rows to {bank_path}", file=sys.stderr)
    for count in sorted(TARGET_COUNTS):
        print(
            f"  first pick at {count} clues: {firsts[count]['m']} reduced vars",
            file=sys.stderr,
        )

    # Ambiguous fixture: drop clues from a unique puzzle until the count rises.
    ambiguous = None
    for rec in rows:
        puzzle = rec["puzzle"].copy()
        filled = [tuple(map(int, rc)) for rc in np.argwhere(puzzle)]
        for r, c in filled:
            trial = puzzle.copy()
            trial[r, c] = 0
            if count_solutions(trial.copy()) >= 2:
                ambiguous = trial
                break
        if ambiguous is not None:
            break
    if ambiguous is None:
        raise RuntimeError("no ambiguous variant found; unexpected for these counts")
    amb_path = args.out / "ambiguous_puzzle.txt"
    amb_path.write_text(grid_to_line(ambiguous, empty="0") + "\n")
    print(
        f"wrote ambiguous fixture ({int(np.count_nonzero(ambiguous))} clues, "
        f"{count_solutions(ambiguous.copy())}+ solutions) to {amb_path}",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
