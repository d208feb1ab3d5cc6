import pytest

from hmtd.config import ScenarioParams, build_scenario
from hmtd.fleet import allocate_mes
from hmtd.model import data_rate


class Point:
    """One UAV of the default scenario with its rate and MES share resolved."""

    def __init__(self, params=ScenarioParams()):
        sc = build_scenario(params)
        slot = sc.uavs[0]
        self.params = params
        self.task, self.uav, self.q, self.link = slot.task, slot.profile, slot.quality, slot.link
        self.rate = data_rate(slot.link, slot.profile)
        self.f_i = allocate_mes(sc.mes, sc.n)[0]

    @property
    def args(self):
        return self.task, self.uav, self.q, self.rate, self.f_i


@pytest.fixture(scope="session")
def point():
    return Point()


@pytest.fixture(scope="session")
def make_point():
    return Point


# criterion -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
