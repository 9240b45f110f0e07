import pathlib

import pytest

from toricobm.fan import (
    cube_fan,
    hirzebruch,
    product_fan,
    projective_space,
    two_sided_fan,
)

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def smooth_complete_fans():
    p1 = projective_space(1)
    return {
        "P1": p1,
        "P2": projective_space(2),
        "P1xP1": product_fan(p1, p1),
        "F1": hirzebruch(1),
        "F2": hirzebruch(2),
        "P3": projective_space(3),
        "P2xP1": product_fan(projective_space(2), p1),
    }


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def two_sided():
    return {nm: two_sided_fan(*nm) for nm in [(1, 1), (2, 3), (3, 2), (2, 2)]}


@pytest.fixture(scope="session")
def cube():
    return cube_fan()


ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record ``(criterion, passed, seconds, detail)`` lines for the run summary."""
    def record(n, ok, seconds, detail=""):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}".rstrip()
        ACCEPTANCE[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
