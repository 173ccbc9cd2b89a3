"""Permutations of [n] with cycle and inversion statistics.

External surfaces are 1-based: ``Permutation((2, 3, 1))`` maps 1->2, 2->3, 3->1.
A pair (i, j) with i < j is an inversion when i appears to the right of j in the
one-line word, i.e. when pi^{-1}(i) > pi^{-1}(j).

The ``*_rows`` helpers operate on 2-D integer arrays holding one 0-based
permutation per row; the Monte Carlo harness uses them for batches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Permutation",
    "CycleDecomposition",
    "make_permutation",
    "identity",
    "inverse",
    "cycle_count",
    "decompose",
    "delete_label",
    "fixed_point_count",
    "is_inversion",
    "inversion_count",
    "inversion_count_naive",
    "inversion_set",
    "image_inversion_count",
    "inverse_rows",
    "inversion_counts_rows",
    "fixed_point_counts_rows",
    "cycle_type_rows",
    "cycle_counts_rows",
]


class PermutationError(ValueError):
    """Raised for malformed permutation input or out-of-range indices."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Permutation:
    """A bijection of [n] stored in 1-based one-line form."""

    images: tuple[int, ...]

    def __post_init__(self):
        _validate(self.images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    def to_list(self) -> list[int]:
        return list(self.images)


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycles rotated to start at their minimum and sorted by that minimum."""

    cycles: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def to_list(self) -> list[list[int]]:
        return [list(c) for c in self.cycles]

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)

    @classmethod
    def canonical(cls, cycles: Iterable[Sequence[int]]) -> "CycleDecomposition":
        rotated = []
        for c in cycles:
            c = list(c)
            if not c:
                continue
            k = c.index(min(c))
            rotated.append(tuple(c[k:] + c[:k]))
        rotated.sort(key=lambda c: c[0])
        return cls(tuple(rotated))


def _validate(images: Sequence[int]) -> None:
    n = len(images)
    if n == 0:
        raise PermutationError("permutation must be non-empty")
    seen = [False] * (n + 1)
    for idx, v in enumerate(images):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise PermutationError(f"entry at index {idx + 1} is not an integer: {v!r}", idx + 1)
        if not 1 <= v <= n:
            raise PermutationError(f"entry at index {idx + 1} out of range [1, {n}]: {v}", idx + 1)
        if seen[v]:
            raise PermutationError(f"duplicate value {v} at index {idx + 1}", idx + 1)
        seen[v] = True


def make_permutation(one_line: Sequence[int]) -> Permutation:
    """Validate a 1-based one-line word and wrap it."""
    return Permutation(tuple(int(v) if isinstance(v, np.integer) else v for v in one_line))


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, v in enumerate(p.images, start=1):
        inv[v - 1] = i
    return Permutation(tuple(inv))


def decompose(p: Permutation) -> CycleDecomposition:
    n = p.n
    seen = [False] * (n + 1)
    cycles = []
    # starting from the smallest unseen element gives canonical order directly
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = p.images[x - 1]
        cycles.append(tuple(cycle))
    return CycleDecomposition(tuple(cycles))


def cycle_count(p: Permutation) -> int:
    return len(decompose(p))


def delete_label(cycles: CycleDecomposition, label: int) -> CycleDecomposition:
    """Remove ``label`` from its cycle, dropping the cycle if it becomes empty."""
    return CycleDecomposition.canonical(
        [x for x in c if x != label] for c in cycles.cycles
    )


def fixed_point_count(p: Permutation) -> int:
    return sum(1 for i, v in enumerate(p.images, start=1) if i == v)


def _check_pair(n: int, i: int, j: int) -> None:
    if not (1 <= i < j <= n):
        raise PermutationError(f"need 1 <= i < j <= {n}, got (i, j) = ({i}, {j})")


def is_inversion(p: Permutation, i: int, j: int) -> bool:
    _check_pair(p.n, i, j)
    # pi^{-1}(i) > pi^{-1}(j) without building the full inverse
    pos_i = pos_j = 0
    for pos, v in enumerate(p.images):
        if v == i:
            pos_i = pos
        elif v == j:
            pos_j = pos
    return pos_i > pos_j


def _count_inversions_word(word: Sequence[int]) -> int:
    # Fenwick tree over values; counts earlier entries greater than the current one
    n = len(word)
    tree = [0] * (n + 1)
    total = 0
    for seen, v in enumerate(word):
        s = 0
        k = v
        while k > 0:
            s += tree[k]
            k -= k & -k
        total += seen - s
        k = v
        while k <= n:
            tree[k] += 1
            k += k & -k
    return total


def inversion_count(p: Permutation) -> int:
    """|Inv(p)| in O(n log n): word inversions of the one-line form of p^{-1}."""
    return _count_inversions_word(inverse(p).images)


def inversion_count_naive(p: Permutation) -> int:
    n = p.n
    return sum(
        1 for i in range(1, n + 1) for j in range(i + 1, n + 1) if is_inversion(p, i, j)
    )


def inversion_set(p: Permutation) -> list[tuple[int, int]]:
    inv = inverse(p).images
    n = p.n
    return [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if inv[i - 1] > inv[j - 1]
    ]


def image_inversion_count(p: Permutation) -> int:
    """Inversions under the image convention: pairs i < j with p(i) > p(j)."""
    return _count_inversions_word(p.images)


# ---------------------------------------------------------------------------
# batched statistics on 0-based arrays, one permutation per row


def inverse_rows(perms: np.ndarray) -> np.ndarray:
    perms = np.asarray(perms)
    rows, n = perms.shape
    inv = np.empty_like(perms)
    np.put_along_axis(inv, perms, np.broadcast_to(np.arange(n, dtype=perms.dtype), perms.shape), axis=1)
    return inv


def inversion_counts_rows(perms: np.ndarray) -> np.ndarray:
    """Inversion counts for each row, using a Fenwick tree vectorised across rows."""
    word = inverse_rows(perms)
    rows, n = word.shape
    tree = np.zeros((rows, n + 1), dtype=np.int64)
    total = np.zeros(rows, dtype=np.int64)
    ridx = np.arange(rows)
    for t in range(n):
        v = word[:, t].astype(np.int64) + 1
        s = np.zeros(rows, dtype=np.int64)
        k = v.copy()
        while True:
            live = k > 0
            if not live.any():
                break
            s[live] += tree[ridx[live], k[live]]
            k = np.where(live, k - (k & -k), 0)
        total += t - s
        k = v
        while True:
            live = k <= n
            if not live.any():
                break
            tree[ridx[live], k[live]] += 1
            k = np.where(live, k + (k & -k), n + 1)
    return total


def fixed_point_counts_rows(perms: np.ndarray) -> np.ndarray:
    perms = np.asarray(perms)
    return (perms == np.arange(perms.shape[1])).sum(axis=1)


def _cycle_roots_and_sizes(perms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # pointer doubling: after r rounds lab[x] = min over pi^0..pi^(2^r - 1) of x
    perms = np.asarray(perms, dtype=np.int64)
    rows, n = perms.shape
    lab = np.broadcast_to(np.arange(n, dtype=np.int64), perms.shape).copy()
    jump = perms.copy()
    span = 1
    while span < n:
        lab = np.minimum(lab, np.take_along_axis(lab, jump, axis=1))
        jump = np.take_along_axis(jump, jump, axis=1)
        span *= 2
    offsets = (np.arange(rows, dtype=np.int64) * n)[:, None]
    sizes = np.bincount((lab + offsets).ravel(), minlength=rows * n).reshape(rows, n)
    return lab, sizes


def cycle_type_rows(perms: np.ndarray, m: int) -> np.ndarray:
    """Number of cycles of length ``m`` in each row."""
    _, sizes = _cycle_roots_and_sizes(perms)
    return (sizes == m).sum(axis=1)


def cycle_counts_rows(perms: np.ndarray) -> np.ndarray:
    _, sizes = _cycle_roots_and_sizes(perms)
    return (sizes > 0).sum(axis=1)
