import pytest

from alarmcorr.alarms import AlarmQueue, AlarmType
from alarmcorr.topology import load_topology

# filled by test_acceptance, printed once at the end of the session
CRITERIA = {}


def record(number, ok, detail=""):
    CRITERIA[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


A = AlarmType(30, 42, 7)
B = AlarmType(20, 7, 3)


@pytest.fixture
def chain_model():
    return load_topology([(10, 1, 0, 0), (20, 7, 10, 1), (30, 42, 20, 7)])


@pytest.fixture
def abab():
    # a@1, b@2, a@3, b@4
    return AlarmQueue.from_events([(A, 1), (B, 2), (A, 3), (B, 4)])
