"""Exact certification by enumerating S_n.

One streamed pass over S_n (lexicographic order, processed in fixed-size
chunks) records, for every cycle count k, how many permutations invert each
pair (i, j). Everything else here is exact rational arithmetic on those
integer tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .permcore import cycle_counts_rows, inverse_rows

__all__ = [
    "ENUMERATION_CAP",
    "CapabilityError",
    "PairCoefficientTable",
    "TotalCoefficientTable",
    "enumerate_pair_coefficients",
    "enumerate_total_coefficients",
    "exact_pair_probability",
    "exact_expected_inversions",
    "total_cyclic_inversions",
    "stirling_cross_check",
    "stirling_first_kind",
    "parse_rational",
    "format_rational",
]

ENUMERATION_CAP = 10
_HARD_CAP = 11
_CHUNK = 40_320


class CapabilityError(RuntimeError):
    """Requested enumeration is larger than the configured cap."""


@dataclass(frozen=True)
class PairCoefficientTable:
    n: int
    i: int
    j: int
    counts: Mapping[int, int]

    def rows(self):
        return [(self.n, self.i, self.j, k, self.counts[k]) for k in sorted(self.counts)]


@dataclass(frozen=True)
class TotalCoefficientTable:
    n: int
    counts: Mapping[int, int]

    def rows(self):
        return [(self.n, k, self.counts[k]) for k in sorted(self.counts)]


@dataclass(frozen=True)
class _Enumeration:
    n: int
    # pair_counts[k, i, j]: permutations with k cycles inverting (i+1, j+1), i < j
    pair_counts: np.ndarray
    cycle_counts: tuple[int, ...]


def _check_cap(n: int, cap: int) -> None:
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    cap = min(cap, _HARD_CAP)
    if n > cap:
        raise CapabilityError(f"enumeration of S_{n} exceeds the cap n <= {cap}")


@lru_cache(maxsize=None)
def _enumerate(n: int) -> _Enumeration:
    pair_counts = np.zeros((n + 1, n, n), dtype=np.int64)
    by_k = np.zeros(n + 1, dtype=np.int64)
    perms_iter = itertools.permutations(range(n))
    while True:
        chunk = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(perms_iter, _CHUNK)),
            dtype=np.int64,
        )
        if chunk.size == 0:
            break
        perms = chunk.reshape(-1, n)
        ks = cycle_counts_rows(perms)
        inv = inverse_rows(perms)
        # inverted[r, a, b] = pi^{-1}(a) > pi^{-1}(b), kept only for a < b
        inverted = inv[:, :, None] > inv[:, None, :]
        by_k += np.bincount(ks, minlength=n + 1)
        for k in np.unique(ks):
            pair_counts[k] += inverted[ks == k].sum(axis=0)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    pair_counts[:, ~upper] = 0
    pair_counts.setflags(write=False)
    return _Enumeration(n, pair_counts, tuple(int(x) for x in by_k))


def enumerate_pair_coefficients(n: int, i: int, j: int, cap: int = ENUMERATION_CAP) -> PairCoefficientTable:
    """a[k] = #{pi in S_n : pi has k cycles and (i, j) is an inversion}."""
    _check_cap(n, cap)
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= {n}, got ({i}, {j})")
    e = _enumerate(n)
    return PairCoefficientTable(n, i, j, {k: int(e.pair_counts[k, i - 1, j - 1]) for k in range(1, n + 1)})


def enumerate_total_coefficients(n: int, cap: int = ENUMERATION_CAP) -> TotalCoefficientTable:
    """b[k] = total inversions over permutations of [n] with k cycles."""
    _check_cap(n, cap)
    e = _enumerate(n)
    return TotalCoefficientTable(n, {k: int(e.pair_counts[k].sum()) for k in range(1, n + 1)})


def _weighted(counts: Mapping[int, int], n: int, theta: Fraction) -> Fraction:
    if theta < 0:
        raise ValueError("theta must be >= 0")
    if theta == 0:
        # only single-cycle permutations carry weight, each 1/(n-1)!
        return Fraction(counts[1], math.factorial(n - 1))
    num = sum(c * theta**k for k, c in counts.items())
    den = 1
    for k in range(n):
        den *= theta + k
    return Fraction(num) / den


def exact_pair_probability(n: int, i: int, j: int, theta, cap: int = ENUMERATION_CAP) -> Fraction:
    table = enumerate_pair_coefficients(n, i, j, cap)
    return _weighted(table.counts, n, Fraction(theta))


def exact_expected_inversions(n: int, theta, cap: int = ENUMERATION_CAP) -> Fraction:
    table = enumerate_total_coefficients(n, cap)
    return _weighted(table.counts, n, Fraction(theta))


def total_cyclic_inversions(n: int, cap: int = ENUMERATION_CAP) -> int:
    """Total inversions over the (n-1)! single-cycle permutations of [n]."""
    return enumerate_total_coefficients(n, cap).counts[1]


def stirling_first_kind(n: int) -> dict[int, int]:
    """Unsigned Stirling numbers c(n, k), k = 1..n, from the standard recurrence."""
    row = {0: 1}
    for m in range(1, n + 1):
        row = {k: row.get(k - 1, 0) + (m - 1) * row.get(k, 0) for k in range(0, m + 1)}
    return {k: row[k] for k in range(1, n + 1)}


def stirling_cross_check(n: int, cap: int = ENUMERATION_CAP) -> dict[int, int]:
    """Number of permutations with k cycles, counted during the enumeration pass."""
    _check_cap(n, cap)
    counts = _enumerate(n).cycle_counts
    return {k: counts[k] for k in range(1, n + 1)}


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal string into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
