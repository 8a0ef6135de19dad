from fractions import Fraction

import pytest

from pwdyn.pinned import pinned_map, PINNED_NAMES


@pytest.fixture(scope="session")
def maps():
    return {name: pinned_map(name) for name in PINNED_NAMES}


def F(num, den=1):
    return Fraction(num, den)


def pytest_terminal_summary(terminalreporter):
    import sys

    for name, mod in list(sys.modules.items()):
        lines = getattr(mod, "RESULT_LINES", None)
        if lines and name.rsplit(".", 1)[-1] == "test_acceptance":
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
            return
