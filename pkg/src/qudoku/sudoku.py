"""Sudoku as a 729-variable QUBO.

Each binary variable x_u asserts "cell (row, col) holds num", with

    u = 81 * row + 9 * col + num,      row, col, num all in 0..8.

The weight matrix rewards every placement with -1 on the diagonal and
penalizes each conflicting pair with +lambda above the diagonal. A complete
violation-free grid switches on exactly 81 rewards and no penalties, so its
energy is -81; any other configuration costs strictly more whenever
lambda > 2. Clue handling turns given digits into a partial assignment on
the variables: the clue bits themselves are fixed to 1, and (optionally)
every placement a clue rules out is fixed to 0.

Grids are 9x9 int8 arrays with digits 1..9 and 0 for empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qubo import PartialAssignment, QuboInstance

GRID_SIZE = 9
NUM_VARIABLES = 729
SOLUTION_ENERGY = -81.0
DEFAULT_PENALTY = 3.0
# Fewest givens for which a unique-solution puzzle exists.
MIN_UNIQUE_CLUES = 17

CLAMP_LEVELS = ("basic", "full")


class PuzzleFormatError(ValueError):
    """Raised for text that does not parse as an 81-cell grid."""


class InconsistentCluesError(ValueError):
    """Raised when two given digits conflict with each other."""


class DecodeConflictError(ValueError):
    """Raised when a bit vector asserts two digits for one cell."""


class Placement(NamedTuple):
    """One candidate assignment: digit num+1 into cell (row, col), all 0-based."""

    row: int
    col: int
    num: int

    @property
    def digit(self) -> int:
        return self.num + 1

    def __str__(self):
        return f"digit {self.digit} at row {self.row + 1}, column {self.col + 1}"


def variable_index(row: int, col: int, num: int) -> int:
    """Flat variable index 81*row + 9*col + num."""
    for name, value in (("row", row), ("col", col), ("num", num)):
        if not 0 <= value < GRID_SIZE:
            raise ValueError(f"{name} must be in 0..8, got {value}")
    return 81 * row + 9 * col + num


def index_to_placement(u: int) -> Placement:
    if not 0 <= u < NUM_VARIABLES:
        raise ValueError(f"variable index must be in 0..728, got {u}")
    row, rest = divmod(u, 81)
    col, num = divmod(rest, 9)
    return Placement(row, col, num)


def conflicts(a: Placement, b: Placement) -> bool:
    """Whether two placements cannot coexist in a valid grid.

    Same digit: clash when the cells share a row, column, or 3x3 block.
    Different digits: clash only when they target the same cell.
    """
    if a == b:
        return False
    if a.num == b.num:
        return (
            a.row == b.row
            or a.col == b.col
            or (a.row // 3 == b.row // 3 and a.col // 3 == b.col // 3)
        )
    return a.row == b.row and a.col == b.col


def build_sudoku_qubo(penalty: float = DEFAULT_PENALTY) -> QuboInstance:
    """The 729x729 upper-triangular weight matrix for the empty grid.

    Diagonal entries are -1 (placement reward); each conflicting pair gets
    +penalty above the diagonal. The penalty must exceed 2: flipping one bit
    of a solved grid removes one -1 reward but a cheap penalty could then pay
    for two rewards elsewhere, so anything <= 2 lets violating configurations
    reach or beat -81.
    """
    if not penalty > 2:
        raise ValueError(
            f"penalty must exceed 2 (got {penalty}); weaker penalties let "
            "configurations with constraint violations tie or beat valid grids"
        )
    u = np.arange(NUM_VARIABLES)
    row, col, num = u // 81, (u // 9) % 9, u % 9
    same_row = row[:, None] == row[None, :]
    same_col = col[:, None] == col[None, :]
    same_block = (row[:, None] // 3 == row[None, :] // 3) & (
        col[:, None] // 3 == col[None, :] // 3
    )
    same_num = num[:, None] == num[None, :]
    clash = (same_num & (same_row | same_col | same_block)) | (
        same_row & same_col & ~same_num
    )
    weights = np.where(np.triu(clash, 1), float(penalty), 0.0)
    np.fill_diagonal(weights, -1.0)
    return QuboInstance(weights)


@dataclass(frozen=True)
class ClueSet:
    """A validated, mutually consistent collection of given digits."""

    placements: tuple

    def __post_init__(self):
        seen = {}
        ordered = []
        for p in self.placements:
            p = Placement(*p)
            if p.num < 0 or p.num > 8 or p.row < 0 or p.row > 8 or p.col < 0 or p.col > 8:
                raise ValueError(f"placement out of range: {tuple(p)}")
            key = (p.row, p.col)
            if key in seen and seen[key] != p:
                raise InconsistentCluesError(
                    f"cell (row {p.row + 1}, column {p.col + 1}) is given "
                    f"two digits: {seen[key].digit} and {p.digit}"
                )
            if key not in seen:
                seen[key] = p
                ordered.append(p)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                if conflicts(a, b):
                    raise InconsistentCluesError(f"clues conflict: {a} vs {b}")
        object.__setattr__(self, "placements", tuple(sorted(ordered)))

    def __len__(self):
        return len(self.placements)

    def __iter__(self):
        return iter(self.placements)

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> "ClueSet":
        g = np.asarray(grid)
        if g.shape != (GRID_SIZE, GRID_SIZE):
            raise ValueError(f"grid must be 9x9, got shape {g.shape}")
        rows, cols = np.nonzero(g)
        return cls(tuple(Placement(int(r), int(c), int(g[r, c]) - 1) for r, c in zip(rows, cols)))

    @classmethod
    def from_string(cls, text: str) -> "ClueSet":
        return cls.from_grid(parse_grid(text))

    def to_grid(self) -> np.ndarray:
        grid = np.zeros((GRID_SIZE, GRID_SIZE), dtype=np.int8)
        for p in self.placements:
            grid[p.row, p.col] = p.digit
        return grid


def clues_to_assignment(clues, level: str = "full") -> PartialAssignment:
    """Partial assignment over the 729 variables induced by given digits.

    ``basic`` fixes each clue's own bit to 1 and the other eight digits of
    that cell to 0, leaving 729 - 9k free variables for k clues. ``full``
    additionally zeroes the clue's digit everywhere else in its row, column,
    and block, which prunes much harder. A contradiction between two clues
    (reachable only for raw placement iterables, since ClueSet validates on
    construction) raises InconsistentCluesError naming both.
    """
    if level not in CLAMP_LEVELS:
        raise ValueError(f"level must be one of {CLAMP_LEVELS}, got {level!r}")
    if not isinstance(clues, ClueSet):
        clues = tuple(Placement(*p) for p in clues)
    ones: dict[int, Placement] = {}
    zeros: dict[int, Placement] = {}
    for p in clues:
        u = variable_index(p.row, p.col, p.num)
        if u in zeros:
            raise InconsistentCluesError(f"clues conflict: {zeros[u]} vs {p}")
        ones[u] = p
        ruled_out = [Placement(p.row, p.col, k) for k in range(9) if k != p.num]
        if level == "full":
            for r in range(9):
                if r != p.row:
                    ruled_out.append(Placement(r, p.col, p.num))
            for c in range(9):
                if c != p.col:
                    ruled_out.append(Placement(p.row, c, p.num))
            br, bc = 3 * (p.row // 3), 3 * (p.col // 3)
            for r in range(br, br + 3):
                for c in range(bc, bc + 3):
                    if r != p.row and c != p.col:
                        ruled_out.append(Placement(r, c, p.num))
        for q in ruled_out:
            v = variable_index(q.row, q.col, q.num)
            if v in ones:
                raise InconsistentCluesError(f"clues conflict: {ones[v]} vs {p}")
            zeros.setdefault(v, p)
    return PartialAssignment(
        NUM_VARIABLES, zeros=frozenset(zeros), ones=frozenset(ones)
    )


# ---------------------------------------------------------------------------
# Grid text format: 81 characters row-major, digits 1-9 for givens and
# either '0' or '.' for empty cells. Whitespace is stripped first.
# ---------------------------------------------------------------------------


def parse_grid(text: str) -> np.ndarray:
    compact = "".join(text.split())
    if len(compact) != 81:
        raise PuzzleFormatError(
            f"puzzle must contain exactly 81 cells, got {len(compact)}"
        )
    grid = np.zeros((GRID_SIZE, GRID_SIZE), dtype=np.int8)
    for pos, ch in enumerate(compact):
        if ch in "0.":
            continue
        if ch not in "123456789":
            raise PuzzleFormatError(
                f"invalid character {ch!r} at position {pos + 1}; "
                "use digits 1-9 and '0' or '.' for empty cells"
            )
        grid[pos // 9, pos % 9] = int(ch)
    return grid


def grid_to_line(grid: np.ndarray, empty: str = ".") -> str:
    g = np.asarray(grid)
    if g.shape != (GRID_SIZE, GRID_SIZE):
        raise ValueError(f"grid must be 9x9, got shape {g.shape}")
    return "".join(empty if v == 0 else str(int(v)) for v in g.ravel())


def format_grid(grid: np.ndarray, empty: str = ".") -> str:
    """Human-readable 9x9 layout with 3x3 block separators."""
    g = np.asarray(grid)
    lines = []
    for r in range(GRID_SIZE):
        cells = [empty if g[r, c] == 0 else str(int(g[r, c])) for c in range(GRID_SIZE)]
        lines.append(" | ".join(" ".join(cells[b : b + 3]) for b in (0, 3, 6)))
        if r in (2, 5):
            lines.append("------+-------+------")
    return "\n".join(lines)


def encode_grid(grid: np.ndarray) -> np.ndarray:
    """One-hot encode a (possibly partial) grid into a 729-bit vector."""
    g = np.asarray(grid)
    if g.shape != (GRID_SIZE, GRID_SIZE):
        raise ValueError(f"grid must be 9x9, got shape {g.shape}")
    bits = np.zeros(NUM_VARIABLES, dtype=np.uint8)
    rows, cols = np.nonzero(g)
    nums = g[rows, cols].astype(np.int64) - 1
    bits[81 * rows + 9 * cols + nums] = 1
    return bits


def decode_bits(bits) -> np.ndarray:
    """Map a 729-bit vector back to a grid; empty cells decode to 0.

    A cell with more than one digit switched on has no grid meaning and
    raises DecodeConflictError.
    """
    b = np.asarray(bits, dtype=np.uint8).reshape(NUM_VARIABLES)
    cells = b.reshape(81, 9)
    counts = cells.sum(axis=1)
    bad = np.nonzero(counts > 1)[0]
    if bad.size:
        cell = int(bad[0])
        digits = [int(d) + 1 for d in np.nonzero(cells[cell])[0]]
        raise DecodeConflictError(
            f"cell (row {cell // 9 + 1}, column {cell % 9 + 1}) asserts "
            f"multiple digits: {digits}"
        )
    grid = np.zeros((GRID_SIZE, GRID_SIZE), dtype=np.int8)
    filled, digit = np.nonzero(cells)
    grid[filled // 9, filled % 9] = digit + 1
    return grid


@dataclass(frozen=True)
class ValidityReport:
    """Constraint audit of a grid: duplicate digits per unit, completeness."""

    complete: bool
    row_violations: tuple
    col_violations: tuple
    block_violations: tuple

    @property
    def is_valid(self) -> bool:
        """Complete and free of duplicates in every row, column, and block."""
        return self.complete and not (
            self.row_violations or self.col_violations or self.block_violations
        )


def validate_grid(grid: np.ndarray) -> ValidityReport:
    g = np.asarray(grid)
    if g.shape != (GRID_SIZE, GRID_SIZE):
        raise ValueError(f"grid must be 9x9, got shape {g.shape}")
    rows = []
    cols = []
    blocks = []
    for k in range(GRID_SIZE):
        for digit in range(1, 10):
            if np.count_nonzero(g[k, :] == digit) > 1:
                rows.append((k, digit))
            if np.count_nonzero(g[:, k] == digit) > 1:
                cols.append((k, digit))
            block = g[3 * (k // 3) : 3 * (k // 3) + 3, 3 * (k % 3) : 3 * (k % 3) + 3]
            if np.count_nonzero(block == digit) > 1:
                blocks.append((k, digit))
    return ValidityReport(
        complete=bool((g != 0).all()),
        row_violations=tuple(rows),
        col_violations=tuple(cols),
        block_violations=tuple(blocks),
    )
