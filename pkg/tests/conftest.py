import os
import sys
from pathlib import Path

import pytest

from sgnkit.graph import new_graph

sys.path.insert(0, str(Path(__file__).parent))

DATA_DIR = Path(__file__).parent / "data"
MUTAG_DIR = DATA_DIR / "MUTAG"

_acceptance_lines = []


def record_acceptance(criterion, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
    _acceptance_lines.append(line)
    print(line)


def record_not_run(criterion, reason):
    _acceptance_lines.append(f"[NOT RUN] {criterion}: {reason}")
    pytest.skip(reason)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def tu_dir(name):
    """Directory for a TU dataset: vendored MUTAG, else under $SGN_DATA_ROOT."""
    from sgnkit.datasets import DatasetError, resolve_dataset_dir

    if name == "MUTAG" and MUTAG_DIR.exists():
        return MUTAG_DIR, "MUTAG"
    try:
        return resolve_dataset_dir(name)
    except DatasetError:
        return None


@pytest.fixture
def k3():
    return new_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return new_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def p3():
    return new_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def p4():
    return new_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star4():
    return new_graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def mutag():
    from sgnkit.datasets import load_tu_dataset

    return load_tu_dataset(MUTAG_DIR, "MUTAG")
