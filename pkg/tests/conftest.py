import random

import pytest

from toricdyn.dynamics import random_monomial_map

CORPUS_SEED = 1
CORPUS_SIZE = 50

_results: dict[int, tuple[bool, str, str]] = {}


def corpus():
    """50 seeded nonsingular maps, n alternating 2 and 3, entries in [-3, 3]."""
    rng = random.Random(CORPUS_SEED)
    return [random_monomial_map(rng, 2 + i % 2, 3) for i in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def maps():
    return corpus()


@pytest.fixture
def record():
    def _record(number: int, title: str, passed: bool, detail: str = ""):
        _results[number] = (passed, title, detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        passed, title, detail = _results[number]
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}"
        terminalreporter.write_line(line + (f": {detail}" if detail else ""))
