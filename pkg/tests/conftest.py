"""Shared fixtures: the four worked example systems."""

from pathlib import Path

import pytest

from dvarkit.dvariety import build_system
from dvarkit.parsing import parse_problem_file

DATA = Path(__file__).parent / "data"


def load_system(name):
    spec = parse_problem_file((DATA / name).read_text())
    return spec, build_system(spec)


@pytest.fixture(scope="session")
def cubic_system():
    """y' = -1/2*y^3 with declared integral t - 1/y^2."""
    return load_system("cubic.dv")


@pytest.fixture(scope="session")
def linear_system():
    """Product system a' = 2a, y'' = 4y' - 4y."""
    return load_system("linear.dv")


@pytest.fixture(scope="session")
def elliptic_system():
    """Implicit relation y'^2 = 4y^3 + 4y + 1."""
    return load_system("elliptic.dv")


@pytest.fixture(scope="session")
def painleve_system():
    """y'' = 6y^2 + t, the classical non-integrable test case."""
    return load_system("painleve1.dv")
