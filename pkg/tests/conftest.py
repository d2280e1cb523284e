import functools
import sys

import pytest

from itnforge.grammar import default_grammar


@pytest.fixture(scope="session")
def g():
    return default_grammar()


@pytest.fixture(scope="session")
def mock_cmd():
    """Command line prefix that starts the mock backend with this interpreter."""
    return f"{sys.executable} -m itnforge.mock_backend"


def brute_edit_distance(a, b):
    """Textbook recursive edit distance, memoized; used as an independent oracle."""
    a, b = tuple(a), tuple(b)

    @functools.lru_cache(maxsize=None)
    def d(i, j):
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        return min(
            d(i + 1, j + 1) + (a[i] != b[j]),
            d(i + 1, j) + 1,
            d(i, j + 1) + 1,
        )

    return d(0, 0)


# One line per acceptance criterion, printed after the test summary.
ACCEPTANCE_LINES = []


def acceptance(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
