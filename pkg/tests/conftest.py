import itertools
from fractions import Fraction

import pytest

# lines collected by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: dict[str, list[tuple[str, bool]]] = {}


def record_acceptance(criterion: str, label: str, ok: bool) -> None:
    ACCEPTANCE_LINES.setdefault(criterion, []).append((label, bool(ok)))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_LINES, key=lambda c: int(c.split()[0])):
        parts = ACCEPTANCE_LINES[criterion]
        ok = all(p for _, p in parts)
        failed = [label for label, p in parts if not p]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}"
        if failed:
            line += "  (failed: " + "; ".join(failed) + ")"
        terminalreporter.write_line(line)


def cycles_of(word):
    """Cycle count of a 1-based one-line word, written independently of the package."""
    n = len(word)
    seen = [False] * n
    count = 0
    for s in range(n):
        if not seen[s]:
            count += 1
            x = s
            while not seen[x]:
                seen[x] = True
                x = word[x] - 1
    return count


def brute_force_expectation(n, theta, statistic):
    """E_theta[statistic(word)] summed over all of S_n with exact Ewens weights."""
    theta = Fraction(theta)
    num = Fraction(0)
    den = Fraction(0)
    for word in itertools.permutations(range(1, n + 1)):
        k = cycles_of(word)
        w = theta**k if theta != 0 else Fraction(int(k == 1))
        num += w * statistic(word)
        den += w
    return num / den


def word_inverts(word, i, j):
    return word.index(i) > word.index(j)


@pytest.fixture
def brute():
    return brute_force_expectation
