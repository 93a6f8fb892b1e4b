import math

import pytest

from lsverify.bernstein import PureLaplacian
from lsverify.covering import build_covering
from lsverify.geometry import Box, ExtendedInterval, GeneralizedRectangle, PeriodicBoxUnion
from lsverify.spectral import BoundaryCondition, RectangleTrig, random_function

SIDE = 0.1 / math.sqrt(2.0)


def unit_square():
    return GeneralizedRectangle((ExtendedInterval(0, 1), ExtendedInterval(0, 1)))


def square_pattern():
    """Centred square of area 0.005 repeated with period 0.1: gamma = 1/2 at rho = 0.1."""
    c = (0.1 - SIDE) / 2
    return PeriodicBoxUnion((0.1, 0.1), (Box((c, c), (SIDE, SIDE)),))


@pytest.fixture(scope="session")
def square():
    return unit_square()


@pytest.fixture(scope="session")
def omega():
    return square_pattern()


@pytest.fixture(scope="session")
def square_cov():
    return build_covering(unit_square(), 0.1)


@pytest.fixture(scope="session")
def dirichlet_basis():
    return RectangleTrig(Box((0, 0), (1, 1)), BoundaryCondition.DIRICHLET)


@pytest.fixture(scope="session")
def corpus(dirichlet_basis):
    """Twenty random functions below lambda = 200 on the Dirichlet unit square."""
    return [random_function(dirichlet_basis, 200.0, seed) for seed in range(20)]


@pytest.fixture(scope="session")
def laplacian():
    return PureLaplacian()


# --- acceptance reporting -----------------------------------------------------------------

_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; printed at the end of the session."""
    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
