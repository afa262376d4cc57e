import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# outcomes recorded by test_acceptance, summarized once at the end
ACCEPTANCE_OUTCOMES = []


@pytest.fixture(scope="session")
def groups():
    from nilcover.acceptance import group
    return group


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_OUTCOMES:
        return
    from nilcover.acceptance import summarize
    tr = terminalreporter
    tr.section("acceptance criteria")
    for o in ACCEPTANCE_OUTCOMES:
        if not o.passed:
            tr.write_line(o.line())
    for line in summarize(ACCEPTANCE_OUTCOMES):
        tr.write_line(line)
