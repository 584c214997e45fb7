"""Grid sampling and puzzle generation on top of the annealer.

A solved grid is any 729-bit state at the ground energy -81; the annealer
reaches that level often enough at default settings to act as a sampler over
the solution space. Puzzle generation keeps a random subset of a sampled
grid's cells as clues and accepts the puzzle only if repeated annealing of
the clamped instance never produces a second distinct solution.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .anneal import AnnealSchedule, SampleSet, anneal
from .qubo import clamp, expand
from .sudoku import (
    DEFAULT_PENALTY,
    MIN_UNIQUE_CLUES,
    NUM_VARIABLES,
    SOLUTION_ENERGY,
    ClueSet,
    build_sudoku_qubo,
    clues_to_assignment,
    decode_bits,
    grid_to_line,
)

log = logging.getLogger(__name__)


class GenerationError(RuntimeError):
    """Raised when no puzzle passes the ambiguity check within the restart budget."""

    def __init__(self, message: str, restarts: int):
        super().__init__(message)
        self.restarts = restarts


def distinct_solution_grids(samples: SampleSet) -> list[np.ndarray]:
    """Decoded grids of the ground-energy readouts, deduplicated.

    Order follows first appearance in the sample set. Samples must be over
    the full 729 variables; clamped sample sets should be expanded first.
    """
    if samples.instance_n != NUM_VARIABLES:
        raise ValueError(
            f"expected samples over {NUM_VARIABLES} variables, got {samples.instance_n}"
        )
    grids = []
    seen = set()
    for r in np.nonzero(samples.energies == SOLUTION_ENERGY)[0]:
        key = samples.bits[r].tobytes()
        if key not in seen:
            seen.add(key)
            grids.append(decode_bits(samples.bits[r]))
    return grids


def sample_solutions(
    readouts: int,
    seed: int = 0,
    schedule: AnnealSchedule | None = None,
    penalty: float = DEFAULT_PENALTY,
) -> list[np.ndarray]:
    """Sample solved grids by annealing the unconstrained 729-variable problem.

    Returns however many distinct grids the ground-energy readouts decode to,
    possibly none; an empty result is a sampling outcome, not an error.
    """
    samples = anneal(build_sudoku_qubo(penalty), readouts, schedule=schedule, seed=seed)
    grids = distinct_solution_grids(samples)
    hits = int((samples.energies == SOLUTION_ENERGY).sum())
    log.info(
        "sampled %d readouts: %d at ground energy, %d distinct grids",
        readouts,
        hits,
        len(grids),
    )
    return grids


def sample_puzzle_solutions(
    clues: ClueSet,
    readouts: int,
    seed: int = 0,
    schedule: AnnealSchedule | None = None,
    penalty: float = DEFAULT_PENALTY,
    level: str = "full",
) -> list[np.ndarray]:
    """Distinct solved grids found for a clue set by annealing the clamped QUBO.

    The clamp carries couplings to clue bits into the reduced instance, so
    reduced energies equal full-grid energies and the ground test stays -81.
    """
    pa = clues_to_assignment(clues, level=level)
    reduced = anneal(
        clamp(build_sudoku_qubo(penalty), pa), readouts, schedule=schedule, seed=seed
    )
    full_bits = np.array([expand(pa, row) for row in reduced.bits], dtype=np.uint8)
    full = SampleSet(
        full_bits.reshape(len(reduced), NUM_VARIABLES),
        reduced.energies,
        NUM_VARIABLES,
        reduced.seed,
    )
    return distinct_solution_grids(full)


@dataclass(frozen=True, eq=False)
class GeneratedPuzzle:
    """A generated puzzle, the grid it was carved from, and search diagnostics."""

    clues: ClueSet
    solution: np.ndarray
    restarts: int
    k_checks: int
    seed: int

    def puzzle_grid(self) -> np.ndarray:
        return self.clues.to_grid()

    def puzzle_line(self, empty: str = ".") -> str:
        return grid_to_line(self.puzzle_grid(), empty=empty)

    def record(self) -> dict:
        """JSON-ready summary; clue cells are 1-based [row, col, digit] triples."""
        return {
            "puzzle": self.puzzle_line(),
            "solution": grid_to_line(self.solution, empty="."),
            "clues": [[p.row + 1, p.col + 1, p.digit] for p in self.clues],
            "num_clues": len(self.clues),
            "restarts": self.restarts,
            "k_checks": self.k_checks,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.record(), indent=2)


def generate_puzzle(
    min_clues: int,
    k_checks: int = 50,
    max_restarts: int = 100,
    seed: int = 0,
    solution_readouts: int = 400,
    schedule: AnnealSchedule | None = None,
    penalty: float = DEFAULT_PENALTY,
) -> GeneratedPuzzle:
    """Carve a puzzle with ``min_clues`` givens out of a sampled solved grid.

    Each attempt samples a solved grid s, keeps ``min_clues`` uniformly random
    cells, and anneals the clamped instance ``k_checks`` times. The attempt is
    accepted only if every ground-energy readout decodes back to s itself;
    finding any other grid, even without seeing two distinct alternatives in
    the same batch, counts as evidence of ambiguity and triggers a restart.
    Raises GenerationError (carrying the restart count) when the budget runs
    out without an accepted puzzle.
    """
    if min_clues < MIN_UNIQUE_CLUES:
        raise ValueError(
            f"min_clues must be at least {MIN_UNIQUE_CLUES} "
            f"(no unique-solution puzzle has fewer givens), got {min_clues}"
        )
    if min_clues > 81:
        raise ValueError(f"min_clues cannot exceed 81, got {min_clues}")
    if k_checks < 2:
        raise ValueError(f"k_checks must be at least 2, got {k_checks}")
    if max_restarts < 1:
        raise ValueError(f"max_restarts must be at least 1, got {max_restarts}")
    root = np.random.SeedSequence(seed)
    for attempt in range(max_restarts):
        cell_ss, grid_ss, check_ss = root.spawn(3)
        grid_seed = int(grid_ss.generate_state(1, dtype=np.uint64)[0])
        grids = sample_solutions(
            solution_readouts, seed=grid_seed, schedule=schedule, penalty=penalty
        )
        if not grids:
            log.info("attempt %d: no solved grid sampled, restarting", attempt)
            continue
        solution = grids[0]
        rng = np.random.default_rng(cell_ss)
        kept = rng.choice(81, size=min_clues, replace=False)
        clue_grid = np.zeros_like(solution)
        clue_grid[kept // 9, kept % 9] = solution[kept // 9, kept % 9]
        clues = ClueSet.from_grid(clue_grid)
        check_seed = int(check_ss.generate_state(1, dtype=np.uint64)[0])
        found = sample_puzzle_solutions(
            clues, k_checks, seed=check_seed, schedule=schedule, penalty=penalty
        )
        if found and all(np.array_equal(g, solution) for g in found):
            log.info(
                "attempt %d: accepted %d-clue puzzle after %d checks",
                attempt,
                min_clues,
                k_checks,
            )
            return GeneratedPuzzle(
                clues=clues,
                solution=solution,
                restarts=attempt,
                k_checks=k_checks,
                seed=seed,
            )
        log.info(
            "attempt %d: rejected (%d distinct grids found%s)",
            attempt,
            len(found),
            "" if found else ", none at ground energy",
        )
    raise GenerationError(
        f"no {min_clues}-clue puzzle passed the ambiguity check "
        f"in {max_restarts} attempts",
        restarts=max_restarts,
    )
