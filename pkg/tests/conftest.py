"""Shared fixtures.  The Euler identity is audited across the whole run: every
validation appends to ``EULER_LOG``, and tests that build invalid graphs on purpose
are marked ``invalid_graphs`` so their entries are discarded."""

import pytest
from hypothesis import settings

from arcop import surface
from arcop.field import F2, Q
from arcop.fixtures import system_cp2cp1, system_pt

EULER_AUDIT = {"checked": 0, "bad": []}

# derandomized examples keep the whole run reproducible
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


def pytest_configure(config):
    config.addinivalue_line("markers", "invalid_graphs: test builds graphs that must fail validation")
    config.addinivalue_line("markers", "slow: heavier sweeps")


def pytest_sessionfinish(session, exitstatus):
    if EULER_AUDIT["bad"]:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    bad = EULER_AUDIT["bad"]
    terminalreporter.write_line(f"euler audit: {EULER_AUDIT['checked']} validations, {len(bad)} mismatches")
    for nodeid, (lhs, rhs) in bad[:10]:
        terminalreporter.write_line(f"  {nodeid}: {lhs} != {rhs}")


@pytest.fixture(autouse=True)
def _euler_audit(request):
    start = len(surface.EULER_LOG)
    yield
    new = surface.EULER_LOG[start:]
    del surface.EULER_LOG[start:]
    if request.node.get_closest_marker("invalid_graphs"):
        return
    EULER_AUDIT["checked"] += len(new)
    EULER_AUDIT["bad"].extend((request.node.nodeid, e) for e in new if e[0] != e[1])


@pytest.fixture(params=["pt", "cp2cp1"])
def system(request):
    return {"pt": system_pt, "cp2cp1": system_cp2cp1}[request.param](Q)


@pytest.fixture
def pt():
    return system_pt(Q)


@pytest.fixture
def cp2cp1():
    return system_cp2cp1(Q)


@pytest.fixture
def pt_f2():
    return system_pt(F2)
