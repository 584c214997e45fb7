"""Sudoku as binary quadratic optimization.

The pieces: :mod:`qudoku.qubo` holds the generic upper-triangular QUBO
machinery (evaluation, clamping, exhaustive minimization, text round-trip),
:mod:`qudoku.sudoku` maps grids onto 729 placement bits and builds the
penalty matrix, :mod:`qudoku.anneal` runs reproducible multi-readout
simulated annealing, and :mod:`qudoku.generate` samples solved grids and
carves puzzles from them.
"""

__version__ = "0.1.0"

from .anneal import (
    AnnealSchedule,
    SampleSet,
    SummaryStats,
    anneal,
    best,
    summarize,
    write_samples_csv,
)
from .generate import (
    GeneratedPuzzle,
    GenerationError,
    distinct_solution_grids,
    generate_puzzle,
    sample_puzzle_solutions,
    sample_solutions,
)
from .qubo import (
    MAX_BRUTE_FORCE_VARS,
    PartialAssignment,
    QuboInstance,
    as_bit_vector,
    brute_force_min,
    clamp,
    energies,
    energy,
    expand,
    flip_delta,
    fold_to_upper,
    instance_from_text,
    instance_to_text,
    load_instance,
    save_instance,
    symmetric_matrix,
)
from .sudoku import (
    DEFAULT_PENALTY,
    GRID_SIZE,
    MIN_UNIQUE_CLUES,
    NUM_VARIABLES,
    SOLUTION_ENERGY,
    ClueSet,
    DecodeConflictError,
    InconsistentCluesError,
    Placement,
    PuzzleFormatError,
    ValidityReport,
    build_sudoku_qubo,
    clues_to_assignment,
    conflicts,
    decode_bits,
    encode_grid,
    format_grid,
    grid_to_line,
    index_to_placement,
    parse_grid,
    validate_grid,
    variable_index,
)

__all__ = [
    "AnnealSchedule",
    "ClueSet",
    "DecodeConflictError",
    "DEFAULT_PENALTY",
    "GeneratedPuzzle",
    "GenerationError",
    "GRID_SIZE",
    "InconsistentCluesError",
    "MAX_BRUTE_FORCE_VARS",
    "MIN_UNIQUE_CLUES",
    "NUM_VARIABLES",
    "PartialAssignment",
    "Placement",
    "PuzzleFormatError",
    "QuboInstance",
    "SampleSet",
    "SOLUTION_ENERGY",
    "SummaryStats",
    "ValidityReport",
    "anneal",
    "as_bit_vector",
    "best",
    "brute_force_min",
    "build_sudoku_qubo",
    "clamp",
    "clues_to_assignment",
    "conflicts",
    "decode_bits",
    "distinct_solution_grids",
    "encode_grid",
    "energies",
    "energy",
    "expand",
    "flip_delta",
    "fold_to_upper",
    "format_grid",
    "generate_puzzle",
    "grid_to_line",
    "index_to_placement",
    "instance_from_text",
    "instance_to_text",
    "load_instance",
    "parse_grid",
    "sample_puzzle_solutions",
    "sample_solutions",
    "save_instance",
    "summarize",
    "symmetric_matrix",
    "validate_grid",
    "variable_index",
    "write_samples_csv",
]
