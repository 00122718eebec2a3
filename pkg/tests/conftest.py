import contextlib
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
FIXTURE7 = TESTS / "data" / "fixture7"
GOLDEN = TESTS / "golden"

_acceptance = {}


@pytest.fixture
def fixture7_paths():
    return [str(FIXTURE7 / f"{k}.csv") for k in ("publications", "citations", "journals")]


@pytest.fixture
def fixture7(fixture7_paths):
    from citemet.ingest import load_dataset

    return load_dataset(*fixture7_paths)


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture(autouse=True)
def _no_data_dir(monkeypatch):
    monkeypatch.delenv("CITEMET_DATA_DIR", raising=False)


@pytest.fixture
def criterion():
    """Record one acceptance criterion's outcome for the terminal summary."""

    @contextlib.contextmanager
    def record(number, title):
        _acceptance[number] = (False, title)
        yield
        _acceptance[number] = (True, title)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        ok, title = _acceptance[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{number}: {title}")
