#!/usr/bin/env python3
"""
Tests for partial-fraction rational functions.

Topics covered:
- Products of poles and polynomial parts
- Derivatives and Laurent coefficients
- Substitution t -> 1/s
"""
from fractions import Fraction

import pytest

from gaudin_lab.rational import RationalFunction

F = Fraction
t = RationalFunction.variable()


def pole(point, order=1, coeff=1):
    return RationalFunction.pole(F(point), order, F(coeff))


class TestArithmetic:
    def test_product_of_simple_poles_splits(self):
        assert pole(0) * pole(1) == -pole(0) + pole(1)

    def test_pole_times_variable_is_constant(self):
        assert pole(0) * t == 1

    def test_polynomial_division_by_pole(self):
        f = pole(1) * (t * t)
        assert f.poly == (1, 1)
        assert f.principal_part(1) == (1,)

    def test_coincident_poles_raise_order(self):
        assert (pole(2) ** 3).pole_order(2) == 3

    def test_cancellation_removes_point(self):
        f = pole(3, 2) - pole(3, 2)
        assert f.is_zero()
        assert f.points == ()

    def test_division_by_function_is_rejected(self):
        with pytest.raises(TypeError):
            pole(0) / pole(1)

    @pytest.mark.parametrize("value", [F(1, 3), F(-2), F(7, 5)])
    def test_evaluation_matches_arithmetic(self, value):
        f = pole(0) * pole(1, 2, 3) + t * t
        expected = 1 / value * 3 / (value - 1) ** 2 + value ** 2
        assert f(value) == expected


class TestCalculus:
    def test_derivative_of_simple_pole(self):
        assert pole(F(1, 2)).derivative() == pole(F(1, 2), 2, -1)

    def test_derivative_of_polynomial(self):
        assert (t ** 3).derivative() == t * t * 3

    @pytest.mark.parametrize("order, expected", [
        (-1, 1),
        (0, -1),
        (1, -1),
        (2, -1),
    ])
    def test_laurent_coefficients_at_zero(self, order, expected):
        # 1/t + 1/(t - 1) = 1/t - 1 - t - t^2 - ...
        f = pole(0) + pole(1)
        assert f.laurent_coefficient(0, order) == expected

    def test_laurent_includes_polynomial_part(self):
        f = t * t + pole(0, 2)
        # around t = 1: t^2 = 1 + 2(t - 1) + (t - 1)^2
        assert [f.laurent_coefficient(1, n) for n in range(3)] == [2, 0, 4]


class TestComposeInverse:
    @pytest.mark.parametrize("f", [
        pole(2),
        pole(0, 2, 5) + t,
        pole(F(1, 3), 3, -1) + pole(-1) + t * t,
    ], ids=["simple", "origin-and-line", "mixed"])
    def test_substitution(self, f):
        g = f.compose_inverse()
        for s in (F(1, 7), F(2, 9), F(-3, 4)):
            assert g(s) == f(1 / s)

    def test_polynomial_becomes_pole_at_zero(self):
        assert t.compose_inverse() == pole(0)


def test_json_lists_nonzero_terms():
    f = pole(0, 2, F(1, 2)) + t
    assert f.to_json() == {"poles": [["0", 2, "1/2"]], "polynomial": ["0", "1"]}
