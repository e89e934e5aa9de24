from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from shockinteract import interaction, problems  # noqa: E402
from shockinteract.fluid import Eos  # noqa: E402
from shockinteract.scheme import IterationConfig  # noqa: E402
from shockinteract.validate import Problem  # noqa: E402

EPSILON = 5e-3
STUDY_TOL = 1e-13

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def eos():
    return Eos(2.0, 1.0)


@pytest.fixture(scope="session")
def sym_setup(eos):
    f1, f2 = problems.symmetric_fields(1.0)
    return interaction.setup_interaction(f1, f2, eos, 1.0)


@pytest.fixture(scope="session")
def sym_problem(sym_setup):
    return Problem(sym_setup, EPSILON, IterationConfig(tol_fix=1e-10))


@pytest.fixture(scope="session")
def sym_problem_tight(sym_setup):
    return Problem(sym_setup, EPSILON, IterationConfig(tol_fix=STUDY_TOL))


@pytest.fixture(scope="session")
def sym32(sym_problem_tight):
    return sym_problem_tight.solve(32)


@pytest.fixture(scope="session")
def sym_solutions(sym_problem_tight):
    """Converged symmetric runs at N = 32, 64, 128 (tight tolerance)."""
    return {N: sym_problem_tight.solve(N) for N in (32, 64, 128)}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
