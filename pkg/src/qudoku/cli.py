"""Command-line interface.

Subcommands: build (emit instance files), solve (anneal a puzzle), bench
(sweep a CSV of puzzles by clue count), sample (census of solved grids),
generate (carve a new puzzle). Exit codes: 0 success / solved, 1 ran but did
not solve, 2 bad input.
"""

from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import __version__
from .anneal import AnnealSchedule, anneal, best, summarize, write_samples_csv
from .generate import GenerationError, distinct_solution_grids, generate_puzzle
from .qubo import clamp, expand, fold_to_upper, instance_to_text, symmetric_matrix
from .sudoku import (
    CLAMP_LEVELS,
    DEFAULT_PENALTY,
    SOLUTION_ENERGY,
    ClueSet,
    InconsistentCluesError,
    PuzzleFormatError,
    build_sudoku_qubo,
    clues_to_assignment,
    decode_bits,
    format_grid,
    grid_to_line,
    parse_grid,
)

EXIT_OK = 0
EXIT_UNSOLVED = 1
EXIT_INPUT = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_INPUT)


def _read_puzzle_arg(puzzle: str) -> np.ndarray:
    """PUZZLE is either an 81-character string or a path to a file holding one."""
    text = puzzle
    path = Path(puzzle)
    if path.is_file():
        text = path.read_text()
    try:
        return parse_grid(text)
    except PuzzleFormatError as exc:
        _fail(str(exc))


def _schedule_options(fn):
    fn = click.option(
        "--sweeps", type=int, default=AnnealSchedule().sweeps, show_default=True,
        help="Monte Carlo sweeps per readout.",
    )(fn)
    fn = click.option(
        "--beta-start", type=float, default=AnnealSchedule().beta_start,
        show_default=True, help="Initial inverse temperature.",
    )(fn)
    fn = click.option(
        "--beta-end", type=float, default=AnnealSchedule().beta_end,
        show_default=True, help="Final inverse temperature.",
    )(fn)
    fn = click.option(
        "--interpolation", type=click.Choice(["geometric", "linear"]),
        default="geometric", show_default=True,
        help="Spacing of the inverse-temperature ladder.",
    )(fn)
    return fn


def _build_schedule(sweeps, beta_start, beta_end, interpolation) -> AnnealSchedule:
    try:
        return AnnealSchedule(
            beta_start=beta_start,
            beta_end=beta_end,
            sweeps=sweeps,
            interpolation=interpolation,
        )
    except ValueError as exc:
        _fail(str(exc))


@click.group()
@click.version_option(version=__version__, prog_name="qudoku")
def main():
    """Sudoku as binary quadratic optimization."""


@main.command()
@click.argument("puzzle", required=False)
@click.option(
    "--lambda", "lam", type=float, default=DEFAULT_PENALTY, show_default=True,
    help="Penalty weight for conflicting placements (must exceed 2).",
)
@click.option(
    "--clamp-level", type=click.Choice(list(CLAMP_LEVELS)), default="full",
    show_default=True, help="How aggressively clues eliminate variables.",
)
@click.option(
    "--from-dense", "from_dense", type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Build from a whitespace-separated dense square matrix instead; "
    "off-diagonal weight is folded into the upper triangle.",
)
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False), default=None,
    help="Write the instance here instead of stdout.",
)
@click.option(
    "--dump-symmetric", type=click.Path(dir_okay=False), default=None,
    help="Also write the symmetrized dense matrix (W + W^T)/2 to this path.",
)
def build(puzzle, lam, clamp_level, from_dense, output, dump_symmetric):
    """Emit a QUBO instance in plain text.

    With no PUZZLE the full 729-variable empty-grid instance is produced;
    with a PUZZLE (81 characters, or a file containing them) the clue-clamped
    reduced instance is produced.
    """
    if from_dense and puzzle:
        _fail("PUZZLE and --from-dense are mutually exclusive")
    if from_dense:
        try:
            dense = np.loadtxt(from_dense, dtype=np.float64, ndmin=2)
            q = fold_to_upper(dense)
        except ValueError as exc:
            _fail(f"could not read dense matrix from {from_dense}: {exc}")
        header = f"# folded from dense matrix {from_dense}"
    else:
        try:
            q = build_sudoku_qubo(lam)
        except ValueError as exc:
            _fail(str(exc))
        header = f"# sudoku placement instance, penalty={lam}"
        if puzzle:
            grid = _read_puzzle_arg(puzzle)
            try:
                clues = ClueSet.from_grid(grid)
                pa = clues_to_assignment(clues, level=clamp_level)
            except InconsistentCluesError as exc:
                _fail(str(exc))
            q = clamp(q, pa)
            header = (
                f"# sudoku instance, penalty={lam}, {len(clues)} clues, "
                f"clamp={clamp_level}, {pa.m} free variables"
            )
    text = header + "\n" + instance_to_text(q)
    if output:
        Path(output).write_text(text)
        click.echo(f"wrote {q.n}-variable instance to {output}")
    else:
        click.echo(text, nl=False)
    if dump_symmetric:
        np.savetxt(dump_symmetric, symmetric_matrix(q), fmt="%.17g")
        click.echo(f"wrote symmetrized matrix to {dump_symmetric}")


@main.command()
@click.argument("puzzle")
@click.option(
    "--lambda", "lam", type=float, default=DEFAULT_PENALTY, show_default=True,
    help="Penalty weight for conflicting placements (must exceed 2).",
)
@click.option(
    "--readouts", type=int, default=1000, show_default=True,
    help="Independent annealing chains to run.",
)
@_schedule_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--clamp-level", type=click.Choice(list(CLAMP_LEVELS)), default="full",
    show_default=True, help="How aggressively clues eliminate variables.",
)
@click.option(
    "--random-order", is_flag=True, default=False,
    help="Visit variables in a fresh random order each sweep.",
)
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text",
    show_default=True,
)
@click.option(
    "--dump-samples", type=click.Path(dir_okay=False), default=None,
    help="Write every readout (index, energy, packed bits) to this CSV.",
)
@click.option("-v", "--verbose", is_flag=True, default=False)
def solve(puzzle, lam, readouts, sweeps, beta_start, beta_end, interpolation,
          seed, clamp_level, random_order, fmt, dump_samples, verbose):
    """Anneal PUZZLE (81 characters, or a file) and report the best grid.

    Exits 0 when a readout reaches a complete valid grid consistent with the
    clues, 1 when annealing finishes without solving, 2 on bad input.
    """
    grid = _read_puzzle_arg(puzzle)
    schedule = _build_schedule(sweeps, beta_start, beta_end, interpolation)
    if readouts < 1:
        _fail(f"readouts must be at least 1, got {readouts}")
    try:
        clues = ClueSet.from_grid(grid)
        pa_basic = clues_to_assignment(clues, level="basic")
        pa = pa_basic if clamp_level == "basic" else clues_to_assignment(clues, "full")
    except InconsistentCluesError as exc:
        _fail(str(exc))

    try:
        q = build_sudoku_qubo(lam)
    except ValueError as exc:
        _fail(str(exc))
    reduced = clamp(q, pa)

    start = time.perf_counter()
    samples = anneal(reduced, readouts, schedule=schedule, seed=seed,
                     random_order=random_order)
    elapsed = time.perf_counter() - start

    best_bits, best_energy = best(samples)
    solved = best_energy == SOLUTION_ENERGY
    stats = summarize(samples, target=SOLUTION_ENERGY)
    if dump_samples:
        write_samples_csv(samples, dump_samples)

    solution_grid = None
    if solved:
        solution_grid = decode_bits(expand(pa, best_bits))

    if fmt == "json":
        payload = {
            "puzzle": grid_to_line(grid),
            "num_clues": len(clues),
            "clamp_level": clamp_level,
            "free_variables": pa.m,
            "free_variables_basic": pa_basic.m,
            "readouts": readouts,
            "sweeps": sweeps,
            "seed": seed,
            "seconds": elapsed,
            "solved": solved,
            "best_energy": best_energy,
            "energy": stats.as_dict(),
        }
        if solution_grid is not None:
            payload["solution"] = grid_to_line(solution_grid)
        click.echo(json.dumps(payload, indent=2))
    else:
        if verbose:
            click.echo(f"clues: {len(clues)}")
            click.echo(
                f"free variables: {pa.m} ({clamp_level} clamp; "
                f"basic would leave {pa_basic.m})"
            )
            click.echo(f"readouts: {readouts}, sweeps: {sweeps}, seed: {seed}")
            click.echo(
                f"energy: min {stats.minimum:g}, median {stats.median:g}, "
                f"mean {stats.mean:g}, max {stats.maximum:g}"
            )
            click.echo(
                f"readouts at ground energy: "
                f"{int(round(stats.fraction_at_target * stats.count))} / {stats.count}"
            )
            click.echo(f"elapsed: {elapsed:.2f}s")
        if solved:
            click.echo(format_grid(solution_grid))
        else:
            click.echo(
                f"not solved: best energy {best_energy:g} over {readouts} readouts "
                f"(ground would be {SOLUTION_ENERGY:g})"
            )
    if dump_samples and verbose:
        click.echo(f"wrote {len(samples)} readouts to {dump_samples}", err=True)
    sys.exit(EXIT_OK if solved else EXIT_UNSOLVED)


def _parse_counts(spec: str) -> list[int]:
    """Clue-count spec: comma-separated values and inclusive ranges, e.g. 23-25,28."""
    counts = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo_text, hi_text = part.split("-", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            counts.extend(range(lo, hi + 1))
        else:
            counts.append(int(part))
    seen = set()
    unique = []
    for c in counts:
        if c not in seen:
            seen.add(c)
            unique.append(c)
    return unique


@main.command()
@click.argument("bank", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--counts", default="23-31", show_default=True,
    help="Clue counts to benchmark: comma-separated values and ranges.",
)
@click.option(
    "--lambda", "lam", type=float, default=DEFAULT_PENALTY, show_default=True,
    help="Penalty weight for conflicting placements (must exceed 2).",
)
@click.option("--readouts", type=int, default=1000, show_default=True)
@_schedule_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--clamp-level", type=click.Choice(list(CLAMP_LEVELS)), default="full",
    show_default=True,
)
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False), default=None,
    help="Write the results CSV here instead of stdout.",
)
@click.option("-v", "--verbose", is_flag=True, default=False)
def bench(bank, counts, lam, readouts, sweeps, beta_start, beta_end,
          interpolation, seed, clamp_level, output, verbose):
    """Benchmark annealing across clue counts using a puzzle bank CSV.

    BANK must have a 'puzzle' column of 81-character grids. For each requested
    clue count the first matching row is annealed (clue counts are recomputed
    from the puzzle text, never trusted from other columns). Each row gets its
    own deterministic seed derived from --seed and the clue count.
    """
    schedule = _build_schedule(sweeps, beta_start, beta_end, interpolation)
    try:
        wanted = _parse_counts(counts)
    except ValueError as exc:
        _fail(f"bad --counts spec {counts!r}: {exc}")
    if readouts < 1:
        _fail(f"readouts must be at least 1, got {readouts}")
    try:
        q = build_sudoku_qubo(lam)
    except ValueError as exc:
        _fail(str(exc))

    chosen: dict[int, str] = {}
    remaining = set(wanted)
    with open(bank, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "puzzle" not in reader.fieldnames:
            _fail(f"{bank} has no 'puzzle' column")
        for row in reader:
            if not remaining:
                break
            line = (row["puzzle"] or "").strip()
            if not line:
                continue
            nc = sum(1 for ch in line if ch not in ".0")
            if nc in remaining:
                try:
                    parse_grid(line)
                except PuzzleFormatError as exc:
                    _fail(f"bank row with {nc} clues is malformed: {exc}")
                chosen[nc] = line
                remaining.discard(nc)
    if verbose and remaining:
        click.echo(
            f"no puzzles found for clue counts: {sorted(remaining)}", err=True
        )

    fieldnames = [
        "clues", "puzzle", "reduced_vars", "min_energy", "median_energy",
        "max_energy", "mean_energy", "stddev_energy", "solved", "seconds",
    ]
    dest = open(output, "w", newline="") if output else sys.stdout
    try:
        writer = csv.DictWriter(dest, fieldnames=fieldnames)
        writer.writeheader()
        for nc in sorted(chosen):
            line = chosen[nc]
            clues = ClueSet.from_string(line)
            pa = clues_to_assignment(clues, level=clamp_level)
            reduced = clamp(q, pa)
            row_seed = int(
                np.random.SeedSequence([seed, nc]).generate_state(1, np.uint64)[0]
            )
            t0 = time.perf_counter()
            samples = anneal(reduced, readouts, schedule=schedule, seed=row_seed)
            dt = time.perf_counter() - t0
            stats = summarize(samples, target=SOLUTION_ENERGY)
            writer.writerow({
                "clues": nc,
                "puzzle": line,
                "reduced_vars": pa.m,
                "min_energy": stats.minimum,
                "median_energy": stats.median,
                "max_energy": stats.maximum,
                "mean_energy": stats.mean,
                "stddev_energy": stats.stddev,
                "solved": int(stats.minimum == SOLUTION_ENERGY),
                "seconds": f"{dt:.3f}",
            })
            if verbose:
                click.echo(
                    f"{nc} clues: {pa.m} vars, min {stats.minimum:g}, "
                    f"{dt:.1f}s", err=True,
                )
    finally:
        if output:
            dest.close()
    sys.exit(EXIT_OK)


@main.command()
@click.option(
    "--readouts", type=int, default=10000, show_default=True,
    help="Independent annealing chains over the empty grid.",
)
@click.option(
    "--lambda", "lam", type=float, default=DEFAULT_PENALTY, show_default=True,
    help="Penalty weight for conflicting placements (must exceed 2).",
)
@_schedule_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text",
    show_default=True,
)
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False), default=None,
    help="Write one 81-character grid per line to this file.",
)
@click.option("-v", "--verbose", is_flag=True, default=False)
def sample(readouts, lam, sweeps, beta_start, beta_end, interpolation, seed,
           fmt, output, verbose):
    """Sample distinct solved grids by annealing the unconstrained problem."""
    schedule = _build_schedule(sweeps, beta_start, beta_end, interpolation)
    if readouts < 1:
        _fail(f"readouts must be at least 1, got {readouts}")
    try:
        q = build_sudoku_qubo(lam)
    except ValueError as exc:
        _fail(str(exc))
    t0 = time.perf_counter()
    samples = anneal(q, readouts, schedule=schedule, seed=seed)
    dt = time.perf_counter() - t0
    grids = distinct_solution_grids(samples)
    hits = int((samples.energies == SOLUTION_ENERGY).sum())
    lines = [grid_to_line(g) for g in grids]
    if output:
        Path(output).write_text("".join(line + "\n" for line in lines))
    if fmt == "json":
        payload = {
            "readouts": readouts,
            "ground_energy_readouts": hits,
            "distinct_grids": len(grids),
            "seed": seed,
            "seconds": dt,
        }
        if not output:
            payload["grids"] = lines
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(
            f"{hits} of {readouts} readouts reached ground energy; "
            f"{len(grids)} distinct grids"
        )
        if verbose:
            click.echo(f"elapsed: {dt:.2f}s", err=True)
        if not output:
            for line in lines:
                click.echo(line)
    sys.exit(EXIT_OK)


@main.command()
@click.option(
    "--min-clues", type=int, default=30, show_default=True,
    help="Number of givens to keep (at least 17).",
)
@click.option(
    "--k-checks", type=int, default=50, show_default=True,
    help="Annealing readouts spent probing each candidate for ambiguity.",
)
@click.option("--max-restarts", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--lambda", "lam", type=float, default=DEFAULT_PENALTY, show_default=True,
    help="Penalty weight for conflicting placements (must exceed 2).",
)
@_schedule_options
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text",
    show_default=True,
)
@click.option("-v", "--verbose", is_flag=True, default=False)
def generate(min_clues, k_checks, max_restarts, seed, lam, sweeps, beta_start,
             beta_end, interpolation, fmt, verbose):
    """Generate a puzzle whose clamped instance anneals to a single grid."""
    schedule = _build_schedule(sweeps, beta_start, beta_end, interpolation)
    try:
        puzzle = generate_puzzle(
            min_clues=min_clues,
            k_checks=k_checks,
            max_restarts=max_restarts,
            seed=seed,
            schedule=schedule,
            penalty=lam,
        )
    except ValueError as exc:
        _fail(str(exc))
    except GenerationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_UNSOLVED)
    if fmt == "json":
        click.echo(puzzle.to_json())
    else:
        click.echo(puzzle.puzzle_line())
        if verbose:
            click.echo(f"restarts: {puzzle.restarts}", err=True)
            click.echo("solution:", err=True)
            click.echo(format_grid(puzzle.solution), err=True)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
