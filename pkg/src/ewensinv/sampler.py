"""Ewens-distributed permutations from the Chinese restaurant construction.

Random streams
--------------
A ``RandomSeed(seed, stream_id)`` selects the bit generator
``PCG64(SeedSequence(seed, spawn_key=(stream_id,)))``. Uniforms in [0, 1) are
``(raw >> 11) * 2**-53`` where ``raw`` is the next 64-bit output of
``random_raw``. Both PCG64 and SeedSequence have a frozen bit stream in numpy,
so a seed yields the same permutations on every platform.

Seating
-------
Arrival number t (t >= 2) finds m = t - 1 people seated and consumes exactly
one uniform u. If u < theta/(theta + m) the newcomer opens a table; otherwise
they sit to the left of seated person number floor(u * (theta + m) - theta)
in arrival order. The first arrival sits down without a draw, so a sample of
size n uses n - 1 uniforms. Sigma(i) is the person seated to the left of i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .permcore import Permutation

__all__ = [
    "EwensParams",
    "RandomSeed",
    "SeatingState",
    "make_generator",
    "uniforms",
    "sample_ewens",
    "sample_ewens_with_order",
    "sample_consistent_chain",
    "sample_array",
    "natural_order",
    "pair_last_order",
]

_U53 = 2.0 ** -53


@dataclass(frozen=True)
class EwensParams:
    n: int
    theta: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        theta = float(self.theta)
        if not math.isfinite(theta) or theta < 0:
            raise ValueError(f"theta must be finite and >= 0, got {self.theta!r}")


@dataclass(frozen=True)
class RandomSeed:
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= v < 2**64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")


def make_generator(seed: RandomSeed, block: int | None = None) -> np.random.PCG64:
    """Bit generator for ``seed``; ``block`` selects an independent child stream."""
    key = (seed.stream_id,) if block is None else (seed.stream_id, block)
    return np.random.PCG64(np.random.SeedSequence(seed.seed, spawn_key=key))


def _bitgen(seed: RandomSeed | np.random.PCG64) -> np.random.PCG64:
    # passing a live generator continues its stream instead of restarting it
    return seed if isinstance(seed, np.random.PCG64) else make_generator(seed)


def uniforms(bitgen: np.random.PCG64, shape) -> np.ndarray:
    """Doubles in [0, 1) built from the top 53 bits of consecutive raw outputs."""
    size = int(np.prod(shape))
    raw = np.asarray(bitgen.random_raw(size), dtype=np.uint64).reshape(shape)
    return (raw >> np.uint64(11)).astype(np.float64) * _U53


@dataclass
class SeatingState:
    """Round tables, each listed clockwise, and the number of people seated.

    Reading a table clockwise, each person's successor in the list sits to
    their left, so the table reads directly as a cycle of Sigma.
    """

    tables: list[list[int]]
    seated_count: int = 0

    def seat_new_table(self, person: int) -> None:
        self.tables.append([person])
        self.seated_count += 1

    def seat_left_of(self, person: int, neighbour: int) -> None:
        for table in self.tables:
            if neighbour in table:
                table.insert(table.index(neighbour) + 1, person)
                self.seated_count += 1
                return
        raise KeyError(neighbour)

    def cycles(self) -> list[list[int]]:
        return [list(t) for t in self.tables]


def _choose(u: float, theta: float, m: int) -> int:
    """-1 for a new table, else the index (in arrival order) of the chosen neighbour."""
    if u < theta / (theta + m):
        return -1
    return min(max(int(u * (theta + m) - theta), 0), m - 1)


def natural_order(n: int) -> list[int]:
    return list(range(1, n + 1))


def pair_last_order(n: int, i: int, j: int) -> list[int]:
    """Arrival order 1..n with i and j moved to the end, i before j."""
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= {n}")
    return [k for k in range(1, n + 1) if k not in (i, j)] + [i, j]


def _check_order(order: Sequence[int], n: int) -> list[int]:
    order = [int(x) for x in order]
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"arrival_order must be a permutation of 1..{n}")
    return order


def _run(params: EwensParams, order: Sequence[int], draws: np.ndarray) -> list[int]:
    n, theta = params.n, float(params.theta)
    left = [0] * (n + 1)  # left[p] = person seated to the left of p
    left[order[0]] = order[0]
    for m in range(1, n):
        person = order[m]
        k = _choose(float(draws[m - 1]), theta, m)
        if k < 0:
            left[person] = person
        else:
            nb = order[k]
            left[person] = left[nb]
            left[nb] = person
    return left


def sample_ewens_with_order(
    params: EwensParams, arrival_order: Sequence[int], seed: RandomSeed | np.random.PCG64
) -> Permutation:
    order = _check_order(arrival_order, params.n)
    draws = uniforms(_bitgen(seed), (params.n - 1,))
    left = _run(params, order, draws)
    return Permutation(tuple(left[1:]))


def sample_ewens(params: EwensParams, seed: RandomSeed | np.random.PCG64) -> Permutation:
    """One P_theta sample with people arriving in the order 1, ..., n."""
    return sample_ewens_with_order(params, natural_order(params.n), seed)


def sample_consistent_chain(params: EwensParams, seed: RandomSeed | np.random.PCG64) -> list[Permutation]:
    """Sigma_1, ..., Sigma_n read off a single restaurant run after each arrival.

    Uses the same draws as ``sample_ewens``, so the last element equals
    ``sample_ewens(params, seed)``.
    """
    n, theta = params.n, float(params.theta)
    draws = uniforms(_bitgen(seed), (n - 1,))
    state = SeatingState([])
    state.seat_new_table(1)
    chain = [Permutation((1,))]
    for m in range(1, n):
        k = _choose(float(draws[m - 1]), theta, m)
        if k < 0:
            state.seat_new_table(m + 1)
        else:
            state.seat_left_of(m + 1, k + 1)
        chain.append(_from_tables(state.tables, m + 1))
    return chain


def _from_tables(tables: list[list[int]], size: int) -> Permutation:
    images = [0] * size
    for t in tables:
        for a, b in zip(t, t[1:] + t[:1]):
            images[a - 1] = b
    return Permutation(tuple(images))


def sample_array(
    params: EwensParams,
    count: int,
    seed: RandomSeed | np.random.PCG64,
    arrival_order: Sequence[int] | None = None,
) -> np.ndarray:
    """``count`` samples as a (count, n) array of 0-based images.

    Row r consumes draws r*(n-1) .. (r+1)*(n-1)-1 of the stream, so a row is
    identical to what the r-th consecutive scalar sample would produce.
    """
    n, theta = params.n, float(params.theta)
    order = np.asarray(
        _check_order(arrival_order, n) if arrival_order is not None else natural_order(n)
    ) - 1
    u = uniforms(_bitgen(seed), (count, n - 1))
    perms = np.empty((count, n), dtype=np.int64)
    rows = np.arange(count)
    perms[:, order[0]] = order[0]
    for m in range(1, n):
        person = order[m]
        col = u[:, m - 1]
        new = col < theta / (theta + m)
        k = np.clip((col * (theta + m) - theta).astype(np.int64), 0, m - 1)
        nb = order[k]
        old = perms[rows, nb]
        perms[:, person] = np.where(new, person, old)
        sit = ~new
        perms[rows[sit], nb[sit]] = person
    return perms
