import os
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run slow exact certifications (minutes)")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exact runs taking minutes; enable with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or os.environ.get("SUPERINT_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow; use --runslow or SUPERINT_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def golden(name: str, text: str, update: bool = False) -> str:
    """Compare against ``tests/golden/<name>``; ``SUPERINT_UPDATE_GOLDEN=1`` rewrites it."""
    path = GOLDEN / name
    if update or os.environ.get("SUPERINT_UPDATE_GOLDEN") == "1":
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    if not path.exists():
        pytest.fail(f"missing golden file {name}; regenerate with SUPERINT_UPDATE_GOLDEN=1")
    return path.read_text(encoding="utf-8")


_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA[num] = (report.outcome, report.duration, name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outcome, secs, name = _CRITERIA[num]
        verdict = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"criterion {num:>2}: {verdict:<7} {secs:8.2f} s  {name}")
