import random

import pytest
from hypothesis import settings

from autoseries.fields import FqField

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda pe: f"F{pe[0] ** pe[1]}")
def field(request):
    return FqField(*request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        if n in mod.RESULTS:
            terminalreporter.write_line(mod.RESULTS[n])
    if "csv" in mod.RESULTS:
        terminalreporter.write_line("complexity benchmark CSV:")
        for line in mod.RESULTS["csv"].splitlines():
            terminalreporter.write_line("  " + line)
