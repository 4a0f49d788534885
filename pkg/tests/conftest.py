import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from seifert_tight.lattice import HFLattice  # noqa: E402

PATH_STATS = {"paths": 0}
ACCEPTANCE = []  # (criterion number, PASS/FAIL line)


def check_full_path(lat, path):
    """Legality of every push, endpoint types and constant degree."""
    steps = path.steps
    assert lat.is_initial(steps[0]) and lat.is_terminal(steps[-1])
    for a, b, v in zip(steps, steps[1:], path.pushed):
        assert lat.push(a, lat.tree.index[v]) == b
    degs = {lat.degree(s) for s in steps}
    assert degs == {path.degree}, f"degree not constant along path: {degs}"


@pytest.fixture(autouse=True, scope="session")
def _every_path_has_constant_degree():
    original = HFLattice.full_path_through

    def checked(self, K):
        path = original(self, K)
        if path is not None:
            check_full_path(self, path)
            PATH_STATS["paths"] += 1
        return path

    HFLattice.full_path_through = checked
    yield
    HFLattice.full_path_through = original


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
    terminalreporter.write_line(f"full paths checked for constant degree: {PATH_STATS['paths']}")
