import random
from fractions import Fraction

import pytest
from hypothesis import settings

from cliffwolf.rootsys import LieType, build_root_system

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def e6_listed():
    return build_root_system(LieType("E6", 6))


@pytest.fixture(scope="session")
def e6():
    return build_root_system(LieType("E6", 6), "a5a1")


@pytest.fixture
def rng():
    return random.Random(20240601)


def rand_q(rng, height=7, nonzero=False):
    while True:
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if q or not nonzero:
            return q


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
