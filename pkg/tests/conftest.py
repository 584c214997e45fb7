import pathlib

import hypothesis
import pytest

from qudoku import ClueSet, build_sudoku_qubo

hypothesis.settings.register_profile(
    "suite", deadline=None, max_examples=50, derandomize=True
)
hypothesis.settings.load_profile("suite")

REPO = pathlib.Path(__file__).resolve().parent.parent

# 24-clue reference puzzle used across the suite; tests/oracles.py certifies
# that its solution is unique and equals REFERENCE_SOLUTION.
REFERENCE_PUZZLE = (
    "000000020000090040000302007605100008000705100030200005090070003080000090004006500"
)
REFERENCE_SOLUTION = (
    "713854629852697341469312857645139278928765134137248965296571483581423796374986512"
)

# Lines the acceptance tests queue up; printed uncaptured at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def reference_puzzle() -> str:
    return REFERENCE_PUZZLE


@pytest.fixture(scope="session")
def reference_solution() -> str:
    return REFERENCE_SOLUTION


@pytest.fixture(scope="session")
def reference_clues() -> ClueSet:
    return ClueSet.from_string(REFERENCE_PUZZLE)


@pytest.fixture(scope="session")
def sudoku_q():
    return build_sudoku_qubo()


@pytest.fixture(scope="session")
def bank_path() -> pathlib.Path:
    return REPO / "data" / "puzzle_bank.csv"


@pytest.fixture(scope="session")
def ambiguous_puzzle_path() -> pathlib.Path:
    return REPO / "data" / "ambiguous_puzzle.txt"
