import os

import pytest

# The suite never touches the network; profiles come from the bundled fixture.
os.environ["TAMERAY_OFFLINE"] = "1"

_ACCEPTANCE = {}


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("TAMERAY_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("TAMERAY_OFFLINE", "1")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        for key, val in report.user_properties:
            if key == "criterion":
                crit = val
    if crit is None:
        return
    if report.when == "call" or report.failed:
        ok = report.passed and _ACCEPTANCE.get(crit, True)
        _ACCEPTANCE[crit] = ok


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if _ACCEPTANCE[crit] else 'FAIL'}")
