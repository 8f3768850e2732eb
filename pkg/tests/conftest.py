import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record the verdict of one acceptance criterion for the summary."""
    results = request.config.stash[_ACCEPTANCE]
    number = request.node.get_closest_marker("criterion").args[0]
    results[number] = ("FAIL", "did not finish")

    def record(ok: bool, detail: str) -> None:
        results[number] = ("PASS" if ok else "FAIL", detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        verdict, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {verdict} ({detail})")
