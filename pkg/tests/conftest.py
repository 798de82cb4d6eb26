import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "linfkit", max_examples=40, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("linfkit")

ACCEPTANCE_LINES = []
_START = time.perf_counter()


@pytest.fixture
def record_criterion():
    def record(line):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
    elapsed = time.perf_counter() - _START
    verdict = "PASS" if elapsed < 180 else "FAIL"
    terminalreporter.write_line(f"suite wall time: {elapsed:.1f}s (limit 180s) {verdict}")
