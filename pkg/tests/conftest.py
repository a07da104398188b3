import os
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).parent / "fixtures"

# criterion name -> "PASS"/"FAIL", filled by test_acceptance
ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


RUNTIME_LIMIT = 60.0
_session = {}


def pytest_sessionstart(session):
    _session["start"] = time.perf_counter()


def pytest_collection_modifyitems(items):
    _session["modules"] = {item.module.__name__ for item in items}


def pytest_terminal_summary(terminalreporter, exitstatus):
    if not ACCEPTANCE_RESULTS:
        return
    # the runtime criterion only means something when the whole suite ran
    if len(_session.get("modules", ())) > 1:
        elapsed = time.perf_counter() - _session["start"]
        ok = elapsed < RUNTIME_LIMIT and exitstatus == 0
        ACCEPTANCE_RESULTS[f"full suite passes in under 60 s (took {elapsed:.1f} s)"] = "PASS" if ok else "FAIL"
    terminalreporter.section("acceptance criteria")
    for name, status in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"[{status}] {name}")
