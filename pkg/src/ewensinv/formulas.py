"""Closed forms for inversion statistics under the Ewens measure.

The ``*_form_a`` / ``*_form_b`` helpers and the derivative helpers are written
with plain arithmetic, so they evaluate exactly when ``theta`` is a
``fractions.Fraction`` and in double precision when it is a float. The result
wrappers always report floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .sampler import EwensParams

Number = Union[int, float, Fraction]

__all__ = [
    "PairProbabilityResult",
    "ExpectedInversionsResult",
    "rising_factorial",
    "pair_probability_form_a",
    "pair_probability_form_b",
    "expected_inversions_form_a",
    "expected_inversions_form_b",
    "pair_inversion_probability",
    "expected_inversions",
    "pair_derivative_value",
    "expected_derivative_value",
    "pair_probability_derivative",
    "expected_inversions_derivative",
    "is_pair_probability_decreasing",
    "is_expected_inversions_convex",
    "is_pair_probability_completely_monotone",
    "theta_infinity_limit_pair",
    "theta_infinity_limit_expected",
    "asymptotic_pair_probability",
    "asymptotic_expected_inversions",
    "scaling_regime_asymptote",
    "expected_fixed_points",
    "finite_difference_weights",
    "finite_difference",
]


@dataclass(frozen=True)
class PairProbabilityResult:
    value: float
    form_a_value: float
    form_b_value: float


@dataclass(frozen=True)
class ExpectedInversionsResult:
    value: float
    form_a_value: float
    form_b_value: float


def _check_n(n: int) -> None:
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")


def _check_pair(n: int, i: int, j: int) -> None:
    _check_n(n)
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= {n}, got (i, j) = ({i}, {j})")


def rising_factorial(theta: Number, n: int) -> Number:
    """theta * (theta + 1) * ... * (theta + n - 1); 1 for n = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1
    for k in range(n):
        out *= theta + k
    return out


# --- pair probability -------------------------------------------------------


def pair_probability_form_a(n: int, i: int, j: int, theta: Number) -> Number:
    l = j - i
    num = theta * (n - l) + math.comb(n - 1, 2) + l - 1
    return num / ((theta + n - 1) * (theta + n - 2))


def _pair_partial_fractions(n: int, l: int) -> tuple[int, int]:
    # p = A / (2 (theta + n - 1)) - B / (2 (theta + n - 2))
    return n * (n - 2 * l + 1), (n - 1) * (n - 2 * l)


def pair_probability_form_b(n: int, i: int, j: int, theta: Number) -> Number:
    a, b = _pair_partial_fractions(n, j - i)
    if isinstance(theta, Fraction):
        return Fraction(a, 2) / (theta + n - 1) - Fraction(b, 2) / (theta + n - 2)
    return a / (2 * (theta + n - 1)) - b / (2 * (theta + n - 2))


def pair_inversion_probability(params: EwensParams, i: int, j: int) -> PairProbabilityResult:
    _check_pair(params.n, i, j)
    theta = float(params.theta)
    a = float(pair_probability_form_a(params.n, i, j, theta))
    b = float(pair_probability_form_b(params.n, i, j, theta))
    return PairProbabilityResult(value=a, form_a_value=a, form_b_value=b)


# --- expected number of inversions -------------------------------------------


def expected_inversions_form_a(n: int, theta: Number) -> Number:
    c2n3 = math.comb(2 * n, 3)
    cn3 = math.comb(n, 3)
    if isinstance(theta, Fraction):
        num = theta * Fraction(c2n3, 4) + Fraction((3 * n - 1) * cn3, 2)
    else:
        num = theta * c2n3 / 4 + (3 * n - 1) * cn3 / 2
    return num / ((theta + n - 1) * (theta + n - 2))


def _expected_partial_fractions(n: int) -> tuple[int, int]:
    # g = A / (12 (theta + n - 1)) - B / (12 (theta + n - 2))
    return (n + 1) * n * n * (n - 1), n * (n - 1) ** 2 * (n - 2)


def expected_inversions_form_b(n: int, theta: Number) -> Number:
    a, b = _expected_partial_fractions(n)
    if isinstance(theta, Fraction):
        return Fraction(a, 12) / (theta + n - 1) - Fraction(b, 12) / (theta + n - 2)
    return a / (12 * (theta + n - 1)) - b / (12 * (theta + n - 2))


def expected_inversions(params: EwensParams) -> ExpectedInversionsResult:
    theta = float(params.theta)
    a = float(expected_inversions_form_a(params.n, theta))
    b = float(expected_inversions_form_b(params.n, theta))
    return ExpectedInversionsResult(value=a, form_a_value=a, form_b_value=b)


# --- derivatives -------------------------------------------------------------


def _check_order(m: int) -> None:
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ValueError(f"derivative order must be a positive integer, got {m!r}")


def pair_derivative_value(n: int, i: int, j: int, theta: Number, m: int) -> Number:
    """m-th theta-derivative of the pair probability, exact for Fraction theta."""
    _check_pair(n, i, j)
    _check_order(m)
    a, b = _pair_partial_fractions(n, j - i)
    if isinstance(theta, Fraction):
        bracket = Fraction(a) / (theta + n - 1) ** (m + 1) - Fraction(b) / (theta + n - 2) ** (m + 1)
        return (-1) ** m * Fraction(math.factorial(m), 2) * bracket
    bracket = a / (theta + n - 1) ** (m + 1) - b / (theta + n - 2) ** (m + 1)
    return (-1) ** m * math.factorial(m) / 2 * bracket


def expected_derivative_value(n: int, theta: Number, m: int) -> Number:
    _check_n(n)
    _check_order(m)
    hi = (n + 1) * n
    lo = (n - 1) * (n - 2)
    if isinstance(theta, Fraction):
        bracket = Fraction(hi) / (theta + n - 1) ** (m + 1) - Fraction(lo) / (theta + n - 2) ** (m + 1)
        return (-1) ** m * Fraction(math.factorial(m) * n * (n - 1), 12) * bracket
    bracket = hi / (theta + n - 1) ** (m + 1) - lo / (theta + n - 2) ** (m + 1)
    return (-1) ** m * math.factorial(m) / 12 * n * (n - 1) * bracket


def pair_probability_derivative(params: EwensParams, i: int, j: int, m: int) -> float:
    return float(pair_derivative_value(params.n, i, j, float(params.theta), m))


def expected_inversions_derivative(params: EwensParams, m: int) -> float:
    return float(expected_derivative_value(params.n, float(params.theta), m))


# --- shape criteria ----------------------------------------------------------


def is_pair_probability_decreasing(n: int, i: int, j: int) -> bool:
    _check_pair(n, i, j)
    return j - i >= 2


def is_expected_inversions_convex(n: int) -> bool:
    _check_n(n)
    return n >= 5


def is_pair_probability_completely_monotone(n: int, i: int, j: int) -> bool:
    _check_pair(n, i, j)
    return 2 * (j - i) >= n


# --- limits and asymptotics --------------------------------------------------


def theta_infinity_limit_pair(n: int, i: int, j: int) -> int:
    """lim theta * P_theta((i, j) inverted) as theta -> infinity."""
    _check_pair(n, i, j)
    return n - (j - i)


def theta_infinity_limit_expected(n: int) -> Fraction:
    _check_n(n)
    return Fraction(math.comb(2 * n, 3), 4)


def asymptotic_pair_probability(n: int, i: int, j: int, theta: Number) -> Number:
    """Explicit terms 1/2 + (1 - theta)(j - i)/n^2 of the large-n expansion."""
    _check_pair(n, i, j)
    if theta < 0:
        raise ValueError("theta must be >= 0")
    if isinstance(theta, Fraction):
        return Fraction(1, 2) + (1 - theta) * (j - i) / Fraction(n * n)
    return 0.5 + (1 - theta) * (j - i) / (n * n)


def asymptotic_expected_inversions(n: int, theta: Number) -> Number:
    """n(n-1)/4 + (1 - theta) n/6 + theta(theta - 1)/12."""
    _check_n(n)
    if theta < 0:
        raise ValueError("theta must be >= 0")
    if isinstance(theta, Fraction):
        return Fraction(n * (n - 1), 4) + (1 - theta) * n / Fraction(6) + theta * (theta - 1) / Fraction(12)
    return n * (n - 1) / 4 + (1 - theta) * n / 6 + theta * (theta - 1) / 12


def scaling_regime_asymptote(n: int, c: float, alpha: float) -> float:
    """Leading behaviour of E at theta = c * n**alpha, by regime of alpha."""
    if not c > 0:
        raise ValueError(f"c must be > 0, got {c}")
    if alpha > 1:
        return n ** (3 - alpha) / (3 * c)
    if alpha == 1:
        return (4 * c + 3) / (12 * (c + 1) ** 2) * n**2
    return n**2 / 4


def expected_fixed_points(n: int, theta: Number) -> Number:
    """Exact mean number of fixed points, n * theta / (theta + n - 1); tends to theta."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # each label is a fixed point with probability theta / (theta + n - 1)
    return n * theta / (theta + n - 1)


# --- finite differences (used to cross-check the hand-coded derivatives) -----


def finite_difference_weights(offsets: Sequence[int], m: int) -> list[Fraction]:
    """Exact stencil weights w with sum_k w_k f(x + offsets_k h) ~ h^m f^(m)(x).

    Solves the moment conditions sum_k w_k offsets_k^q / q! = [q == m] for
    q = 0 .. len(offsets) - 1 by Gaussian elimination over the rationals.
    """
    size = len(offsets)
    if m >= size:
        raise ValueError("need more stencil points than the derivative order")
    rows = [
        [Fraction(o) ** q / math.factorial(q) for o in offsets] + [Fraction(int(q == m))]
        for q in range(size)
    ]
    for col in range(size):
        piv = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[k][size] for k in range(size)]


def finite_difference(
    f: Callable[[Fraction], Number],
    theta: Number,
    m: int,
    h: Number = Fraction(1, 10_000),
) -> Fraction:
    """m-th derivative of ``f`` at ``theta`` from a stencil evaluated in exact arithmetic.

    Uses a 5-point central stencil, or a forward stencil with m + 4 points when
    a central one would step below theta = 0. ``f`` should accept Fractions so
    the only error left is the stencil truncation error.
    """
    _check_order(m)
    x = Fraction(theta)
    h = Fraction(h)
    if x - 2 * h >= 0:
        offsets = [-2, -1, 0, 1, 2]
    else:
        offsets = list(range(m + 4))
    weights = finite_difference_weights(offsets, m)
    return sum(w * Fraction(f(x + o * h)) for w, o in zip(weights, offsets)) / h**m
