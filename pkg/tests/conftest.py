from functools import lru_cache
from pathlib import Path

import pytest

from linklabels import census
from linklabels.equations import assemble
from linklabels.solver import select_geometric, solve_all, solve_symmetric

DATA = Path(__file__).resolve().parent.parent / "data"

# restart budgets that find every census solution on seed 0 with margin,
# kept small so the whole suite stays quick
BUDGETS = {"fig8": 12, "borromean": 12, "turks_head": 24, "9a37": 24, "11a79": 24}


@lru_cache(maxsize=None)
def solved(name: str):
    """(system, solutions, geometric solution) for a census name."""
    system = assemble(census.diagram(name))
    if name.startswith("Ln:") and int(name[3:]) > 12:
        sols = solve_symmetric(system, census.L_symmetry(int(name[3:])))
    else:
        sols = solve_all(system, budget=BUDGETS.get(name, 12))
    return system, sols, select_geometric(sols, system.diagram.is_alternating())


@pytest.fixture
def data_dir() -> Path:
    return DATA


# acceptance criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
