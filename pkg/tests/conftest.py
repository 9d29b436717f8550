from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path

import pytest

from molvoice.pdbio import load_pdb
from molvoice.scene import new_scene

FIXTURE_PATH = Path(__file__).resolve().parent.parent / "fixtures" / "mini.pdb"

# criterion name -> (passed, info); insertion order is report order
_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def fixture_text() -> str:
    return FIXTURE_PATH.read_text("utf-8")


@pytest.fixture
def fixture_scene(fixture_text):
    return new_scene(load_pdb(fixture_text))


@pytest.fixture
def criterion():
    """Context manager for acceptance tests: records PASS/FAIL per name for
    the terminal summary, then lets the assertion propagate."""

    @contextmanager
    def run(name: str, info: str = ""):
        try:
            yield
        except BaseException:
            _ACCEPTANCE[name] = (False, info)
            raise
        else:
            _ACCEPTANCE[name] = (True, info)

    return run


@pytest.fixture
def note_criterion():
    """For criteria that carry a measured value in their report line."""

    def note(name: str, passed: bool, info: str = "") -> None:
        _ACCEPTANCE[name] = (passed, info)

    return note


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, info) in _ACCEPTANCE.items():
        status = "PASS" if passed else "FAIL"
        suffix = f" ({info})" if info else ""
        terminalreporter.write_line(f"ACCEPTANCE: {name}: {status}{suffix}")
