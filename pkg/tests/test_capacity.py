"""Closed-form rates, capacities, and bound ordering — all exact rationals."""

from fractions import Fraction

import pytest

from graphspir.capacity import (
    achievable_rate,
    bound_set,
    general_rate_rho,
    pir_capacity,
    upper_bound,
)
from graphspir.catalog import get_family
from graphspir.convert import scheme_stats

NS = range(3, 33)


def test_achievable_rate_closed_forms():
    expected_path = {
        3: Fraction(4, 9),
        4: Fraction(3, 8),
        5: Fraction(8, 25),
        6: Fraction(5, 18),
        7: Fraction(12, 49),
        8: Fraction(7, 32),
    }
    expected_cycle = {
        3: Fraction(4, 11),
        4: Fraction(6, 19),
        5: Fraction(8, 29),
        6: Fraction(10, 41),
        7: Fraction(12, 55),
        8: Fraction(14, 71),
    }
    for n, want in expected_path.items():
        assert achievable_rate("path", n) == want
    for n, want in expected_cycle.items():
        assert achievable_rate("cycle", n) == want


@pytest.mark.parametrize("kind", ["path", "cycle"])
@pytest.mark.parametrize("n", NS)
def test_rate_capacity_identity(kind, n):
    # removing the converted scheme's randomness download leaves the plain
    # retrieval capacity: 1/R = 1/C + N/(2(N-1))
    rate = achievable_rate(kind, n)
    cap = pir_capacity(kind, n)
    assert 1 / rate == 1 / cap + Fraction(n, 2 * (n - 1))
    if kind == "path":
        assert cap == Fraction(2, n)
    else:
        assert cap == Fraction(2, n + 1)


@pytest.mark.parametrize("kind", ["path", "cycle"])
@pytest.mark.parametrize("n", NS)
def test_randomness_ratio_identity(kind, n):
    if kind == "path":
        stats = general_rate_rho(2, n, n, n - 1)
    else:
        stats = general_rate_rho(2 * (n - 1), (n + 1) * (n - 1), n, n)
    assert stats.rate == achievable_rate(kind, n)
    assert stats.rho == 1 / stats.rate - 1


@pytest.mark.parametrize("n", NS)
def test_upper_bound_closed_forms(n):
    assert upper_bound("path", n) == 2 / (n + Fraction(2, n - 1))
    assert upper_bound("cycle", n) == 2 / (n + 1 + Fraction(1, n - 1))


def test_upper_bound_spot_values():
    assert upper_bound("path", 3) == Fraction(1, 2)
    assert upper_bound("cycle", 3) == Fraction(4, 9)
    assert upper_bound("path", 4) == Fraction(3, 7)


@pytest.mark.parametrize("kind", ["path", "cycle"])
@pytest.mark.parametrize("n", NS)
def test_bound_sandwich(kind, n):
    b = bound_set(kind, n)
    assert Fraction(1, n) == b.graph_replicated
    assert b.graph_replicated <= b.lower <= b.upper <= b.pir
    if (kind, n) == ("path", 3):
        assert b.lower == b.upper == Fraction(1, 2)
        assert b.rho_lower_bound == Fraction(1)
    else:
        assert b.lower < b.upper
        assert b.rho_lower_bound is None


def test_bounds_reject_bad_input():
    with pytest.raises(ValueError):
        achievable_rate("path", 2)
    with pytest.raises(ValueError):
        bound_set("ring", 4)
    with pytest.raises(ValueError):
        upper_bound("cycle", 1)


@pytest.mark.parametrize("n", range(3, 9))
def test_formulas_agree_with_the_actual_converted_schemes(n):
    stats = scheme_stats(get_family(f"path-{n}"))
    assert stats.rate == achievable_rate("path", n)
    expected = general_rate_rho(2, n, n, n - 1)
    assert stats.rho == expected.rho


def test_cycle_formula_agrees_with_the_actual_scheme():
    stats = scheme_stats(get_family("c3"))
    assert stats.rate == achievable_rate("cycle", 3)
    assert stats.rho == Fraction(7, 4)


def test_hand_built_scheme_attains_the_path3_bounds():
    stats = scheme_stats(get_family("p3-capacity"))
    b = bound_set("path", 3)
    assert stats.rate == b.lower == b.upper
    assert stats.rho == b.rho_lower_bound
