import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ewensinv import formulas as f
from ewensinv.sampler import EwensParams

from conftest import brute_force_expectation, word_inverts

THETA_GRID = [0.0, 0.1, 1.0, 7.0, 1e3]


def test_rising_factorial():
    assert f.rising_factorial(3.5, 0) == 1
    assert f.rising_factorial(1, 6) == math.factorial(6)
    assert f.rising_factorial(2, 3) == 24
    assert f.rising_factorial(Fraction(1, 2), 2) == Fraction(3, 4)


def test_pair_probability_examples():
    for n in (3, 7, 12):
        for i, j in [(1, 2), (1, n), (2, n - 1)] if n > 3 else [(1, 2), (1, 3), (2, 3)]:
            assert f.pair_inversion_probability(EwensParams(n, 1.0), i, j).value == pytest.approx(0.5, abs=1e-15)
    assert f.pair_inversion_probability(EwensParams(5, 0.0), 1, 4).value == pytest.approx(2 / 3, rel=1e-15)
    # brute force over S_4 gives 2/5
    assert f.pair_inversion_probability(EwensParams(4, 2.0), 1, 3).value == pytest.approx(0.4, rel=1e-15)


def test_pair_probability_matches_brute_force():
    for theta in (Fraction(0), Fraction(1, 3), Fraction(2), Fraction(9)):
        for i, j in [(1, 2), (1, 3), (2, 4), (1, 5), (3, 5)]:
            ex = brute_force_expectation(5, theta, lambda w: word_inverts(w, i, j))
            assert f.pair_probability_form_a(5, i, j, theta) == ex
            assert f.pair_probability_form_b(5, i, j, theta) == ex


def test_expected_inversions_examples():
    for n in (3, 10, 40):
        assert f.expected_inversions(EwensParams(n, 1.0)).value == pytest.approx(n * (n - 1) / 4, rel=1e-14)
    assert f.expected_inversions(EwensParams(3, 0.0)).value == pytest.approx(2, rel=1e-15)
    assert f.expected_inversions(EwensParams(4, 2.0)).value == pytest.approx(2.5, rel=1e-15)


def test_argument_errors():
    with pytest.raises(ValueError):
        f.pair_inversion_probability(EwensParams(5, 1.0), 3, 3)
    with pytest.raises(ValueError):
        f.pair_inversion_probability(EwensParams(5, 1.0), 4, 2)
    with pytest.raises(ValueError):
        f.pair_probability_derivative(EwensParams(5, 1.0), 1, 2, 0)
    with pytest.raises(ValueError):
        f.expected_inversions_derivative(EwensParams(5, 1.0), 0)
    with pytest.raises(ValueError):
        f.is_expected_inversions_convex(2)
    with pytest.raises(ValueError):
        f.theta_infinity_limit_expected(2)
    with pytest.raises(ValueError):
        f.scaling_regime_asymptote(100, 0.0, 1.0)


@pytest.mark.parametrize("n", range(3, 51))
def test_form_equivalence(n):
    for theta in THETA_GRID:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                r = f.pair_inversion_probability(EwensParams(n, theta), i, j)
                assert r.form_a_value == pytest.approx(r.form_b_value, rel=1e-12, abs=1e-15)
                assert 0 <= r.value <= 1
        e = f.expected_inversions(EwensParams(n, theta))
        assert abs(e.form_a_value - e.form_b_value) <= 1e-12 * max(1.0, e.value)
        assert 0 <= e.value <= n * (n - 1) / 2


@pytest.mark.parametrize("n", range(3, 31))
def test_pair_sum_is_expectation(n):
    for theta in THETA_GRID:
        params = EwensParams(n, theta)
        total = sum(
            f.pair_inversion_probability(params, i, j).value
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
        )
        assert total == pytest.approx(f.expected_inversions(params).value, rel=1e-10)


def test_derivative_examples():
    assert f.pair_probability_derivative(EwensParams(3, 0.0), 1, 2, 1) == pytest.approx(0.25, rel=1e-14)
    for n in (3, 5, 9):
        for theta in (0.0, 1.0, 10.0):
            params = EwensParams(n, theta)
            assert all(
                f.pair_probability_derivative(params, i, j, 1) < 0
                for i in range(1, n + 1)
                for j in range(i + 2, n + 1)
            )
            assert f.expected_inversions_derivative(params, 1) < 0
        assert f.pair_probability_derivative(EwensParams(n, 0.0), 1, 2, 1) > 0
    for theta in (0.0, 1.0, 10.0):
        assert f.expected_inversions_derivative(EwensParams(5, theta), 2) > 0
    assert f.expected_inversions_derivative(EwensParams(3, 0.0), 3) > 0


DERIV_GRID = [
    (n, i, j, theta)
    for n in (3, 4, 6, 11)
    for (i, j) in {(1, 2), (1, n), (2, n - 1 if n > 3 else 3), (1, 1 + n // 2)}
    if i < j
    for theta in (Fraction(0), Fraction(1, 4), Fraction(1), Fraction(5), Fraction(64))
]


@pytest.mark.parametrize("n, i, j, theta", DERIV_GRID)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_pair_derivative_vs_finite_differences(n, i, j, theta, m):
    closed = f.pair_derivative_value(n, i, j, theta, m)
    fd = f.finite_difference(lambda t: f.pair_probability_form_a(n, i, j, t), theta, m)
    assert abs(fd - closed) <= Fraction(1, 10**6) * abs(closed)
    assert f.pair_probability_derivative(EwensParams(n, float(theta)), i, j, m) == pytest.approx(float(closed), rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 8, 20])
@pytest.mark.parametrize("theta", [Fraction(0), Fraction(1, 4), Fraction(1), Fraction(5), Fraction(64)])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_expected_derivative_vs_finite_differences(n, theta, m):
    closed = f.expected_derivative_value(n, theta, m)
    fd = f.finite_difference(lambda t: f.expected_inversions_form_a(n, t), theta, m)
    assert abs(fd - closed) <= Fraction(1, 10**6) * abs(closed)


def test_finite_difference_weights():
    assert f.finite_difference_weights([-1, 0, 1], 2) == [1, -2, 1]
    assert f.finite_difference_weights([-2, -1, 0, 1, 2], 1) == [
        Fraction(1, 12), Fraction(-2, 3), 0, Fraction(2, 3), Fraction(-1, 12)
    ]


def test_predicates():
    assert not f.is_pair_probability_decreasing(5, 1, 2)
    assert f.is_pair_probability_decreasing(5, 1, 3)
    assert f.is_pair_probability_decreasing(3, 1, 3)
    assert not f.is_expected_inversions_convex(4)
    assert f.is_expected_inversions_convex(5)
    assert f.is_expected_inversions_convex(100)
    assert f.is_pair_probability_completely_monotone(6, 1, 4)
    assert not f.is_pair_probability_completely_monotone(6, 1, 3)
    assert f.is_pair_probability_completely_monotone(5, 1, 4)


def test_theta_infinity_limits():
    assert f.theta_infinity_limit_pair(5, 2, 4) == 3
    assert f.theta_infinity_limit_pair(3, 1, 3) == 1
    assert f.theta_infinity_limit_expected(3) == 5
    assert f.theta_infinity_limit_expected(4) == 14
    big = 1e6
    p = f.pair_inversion_probability(EwensParams(5, big), 2, 4).value
    assert big * p == pytest.approx(3, rel=1e-4)
    e = f.expected_inversions(EwensParams(4, big)).value
    assert big * e == pytest.approx(14, rel=1e-4)


def test_theta_limit_error_shrinks():
    n, i, j = 7, 2, 4
    target = f.theta_infinity_limit_pair(n, i, j)
    errs = [
        abs(t * f.pair_probability_form_a(n, i, j, Fraction(t)) - target) for t in (10**3, 10**4, 10**5)
    ]
    assert errs[0] > errs[1] > errs[2]
    # error is O(1/theta)
    assert errs[2] * 10**5 < 2 * errs[0] * 10**3


def test_asymptotic_examples():
    assert f.asymptotic_pair_probability(17, 3, 9, 1.0) == 0.5
    assert f.asymptotic_pair_probability(100, 1, 51, 0.0) == pytest.approx(0.505, rel=1e-15)
    for n in (3, 10, 99):
        assert f.asymptotic_expected_inversions(n, 1.0) == n * (n - 1) / 4
    assert f.asymptotic_expected_inversions(12, 0.0) == pytest.approx(35, rel=1e-15)
    assert f.expected_inversions_form_a(12, Fraction(0)) == 35
    assert f.asymptotic_expected_inversions(12, Fraction(0)) == 35


@pytest.mark.parametrize("theta", [Fraction(0), Fraction(2), Fraction(1, 2), Fraction(3)])
def test_expansion_residual_is_order_n_minus_2(theta):
    scaled_a = []
    scaled_b = []
    for n in (50, 100, 200, 400):
        l = n // 2
        ra = f.pair_probability_form_a(n, 1, 1 + l, theta) - f.asymptotic_pair_probability(n, 1, 1 + l, theta)
        rb = f.expected_inversions_form_a(n, theta) - f.asymptotic_expected_inversions(n, theta)
        scaled_a.append(abs(ra) * n * n)
        scaled_b.append(abs(rb) * n * n)
    assert max(scaled_a) <= 10 * min(scaled_a)
    assert max(scaled_b) <= 10 * min(scaled_b)


def test_expansion_is_exact_at_theta_0_1_2():
    for theta in (Fraction(0), Fraction(1), Fraction(2)):
        for n in (3, 8, 50, 400):
            assert f.expected_inversions_form_a(n, theta) == f.asymptotic_expected_inversions(n, theta)


def test_scaling_regimes():
    assert f.scaling_regime_asymptote(100, 1.0, 1.0) == pytest.approx(7 / 48 * 1e4, rel=1e-15)
    assert f.scaling_regime_asymptote(100, 1.0, 0.0) == 2500
    assert f.scaling_regime_asymptote(100, 2.0, 2.0) == pytest.approx(100 / 6, rel=1e-15)
    n = 2000
    for alpha in (0.5, 1.0, 2.0):
        e = f.expected_inversions(EwensParams(n, n**alpha)).value
        assert e / f.scaling_regime_asymptote(n, 1.0, alpha) == pytest.approx(1, abs=0.02)


def test_expected_fixed_points():
    for n in (4, 5, 6):
        for theta in (Fraction(1, 2), Fraction(2)):
            ex = brute_force_expectation(n, theta, lambda w: sum(1 for k, v in enumerate(w, 1) if k == v))
            assert f.expected_fixed_points(n, theta) == ex
    assert f.expected_fixed_points(50, 1.0) == 1.0


@given(
    st.integers(3, 40).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(1, n - 1)).flatmap(
            lambda t: st.tuples(st.just(t[0]), st.integers(1, t[0] - t[1]), st.just(t[1]))
        )
    ),
    st.fractions(min_value=0, max_value=1000, max_denominator=50),
)
def test_pair_forms_agree_exactly(nil, theta):
    n, i, l = nil
    j = i + l
    a = f.pair_probability_form_a(n, i, j, theta)
    assert a == f.pair_probability_form_b(n, i, j, theta)
    assert 0 <= a <= 1
