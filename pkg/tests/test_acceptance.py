"""Acceptance suite: one test per criterion, each printing its PASS/FAIL line."""

from __future__ import annotations

import pytest

from k3cm.acceptance import ALL_CRITERIA

_lines: list[str] = []


@pytest.mark.parametrize("criterion", ALL_CRITERIA, ids=lambda c: c.__name__.removeprefix("criterion_"))
def test_criterion(criterion):
    result = criterion()
    line = result.line()
    _lines.append(line)
    print(line)
    assert result.passed, line


def test_summary(capsys):
    # runs last in this module; re-emit every line so the summary sits together
    with capsys.disabled():
        print()
        for line in _lines:
            print(line)
    assert len(_lines) == len(ALL_CRITERIA)
