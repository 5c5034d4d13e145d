from __future__ import annotations

import math

import pytest
from hypothesis import settings

from lutt_quench.model import ModelParams

settings.register_profile("repo", max_examples=40, deadline=None)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def reference() -> ModelParams:
    return ModelParams(1.0, math.pi)


@pytest.fixture
def record():
    def _record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
