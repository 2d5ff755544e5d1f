from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

from nonfill_scl.lp import build_program, solve  # noqa: E402
from nonfill_scl.model import load_spec, validate  # noqa: E402
from nonfill_scl.turnpaths import build_side_graph, enumerate_taut_turn_paths  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def fixture_path(name):
    return FIXTURES / f"{name}.json"


@lru_cache(maxsize=None)
def fixture_spec(name):
    return load_spec(fixture_path(name))


def pipeline(spec, single_slot=False):
    """(report, graph, paths, instance, result) for a valid spec."""
    report = validate(spec)
    graph = build_side_graph(report, single_slot=single_slot)
    paths = enumerate_taut_turn_paths(graph)
    inst = build_program(report, paths)
    return report, graph, paths, inst, solve(inst)


@lru_cache(maxsize=None)
def fixture_pipeline(name, single_slot=False):
    return pipeline(fixture_spec(name), single_slot)


@pytest.fixture
def sep2():
    return fixture_pipeline("SEP2")


@pytest.fixture
def ann():
    return fixture_pipeline("ANN")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
