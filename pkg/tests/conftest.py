"""Shared pytest fixtures for the test suite."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def announce(capsys):
    """Prints a line straight to the terminal, bypassing capture.

    Used by the acceptance suite so each criterion reports one visible
    pass/fail line even under pytest's default output capturing.
    """

    def _announce(line: str) -> None:
        with capsys.disabled():
            print(line, flush=True)

    return _announce
