from __future__ import annotations

from pathlib import Path

import pytest

from entropia.corpus import load_corpus

FIXTURES = Path(__file__).parent / "fixtures"
P2_FIXTURE = FIXTURES / "p2_equivalent.moo"

# filled by test_acceptance.py, printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {label}")
