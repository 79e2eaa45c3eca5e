#!/usr/bin/env python3
"""
Tests for canonical opers, Cartan connections and the Miura transformation.

Topics covered:
- Canonical form of constant and rational Borel connections
- Gauge invariance and idempotence of the canonical form
- Pole cancellation at Bethe roots
- m-residues at marked points and at infinity
- The eigenvalue function of the quadratic Gaudin generating function
"""
from fractions import Fraction

import numpy as np
import pytest

from gaudin_lab.bethe import (
    BetheProblem,
    BetheSolution,
    SolverStrategy,
    eigen_check,
    hamiltonians_for,
    solve,
)
from gaudin_lab.errors import BetheResidualError, ResidueOrderError
from gaudin_lab.opers import (
    CartanConnection,
    canonicalize,
    eigenvalue_function,
    gauge_transform,
    infinity_residue,
    miura,
    oper_at_infinity,
    oper_basis,
    oper_eigenvalue_function,
    oper_from_bethe,
    point_residue,
    regular_oper_residue,
    residue_m,
    residue_sum_rule,
    slice_coordinates,
)
from gaudin_lab.rational import RationalFunction

F = Fraction
t = RationalFunction.variable()
H, E, FF = 0, 1, 2


def pole(point, order=1, coeff=1):
    return RationalFunction.pole(F(point), order, F(coeff))


def borel(g, entries):
    b = [RationalFunction() for _ in range(g.dim)]
    for a, value in entries.items():
        b[a] = RationalFunction.lift(value)
    return b


def as_borel(g, oper):
    """The connection p_-1 + sum_j v_j p_j of a canonical oper, as Borel entries."""
    b = [RationalFunction() for _ in range(g.dim)]
    for v, p in zip(oper.coefficients, oper_basis(g)):
        for a, c in enumerate(p):
            if c != 0:
                b[a] = b[a] + v.scale(c)
    return b


@pytest.fixture
def exact_problem(a1):
    """A1, one point of weight 2 at 0, chi = 4: the Bethe root is w = 1/2."""
    return BetheProblem.for_block(a1, [F(0)], [(2,)], (F(4),), (0,))


@pytest.fixture
def exact_solution():
    return BetheSolution((F(1, 2),), (0.0,), float("inf"), 0.5)


class TestCanonicalForm:
    def test_zero_connection(self, a2):
        oper = canonicalize(a2, [0] * a2.dim)
        assert all(v.is_zero() for v in oper.coefficients)
        assert oper.degrees == (1, 2)

    @pytest.mark.parametrize("beta", [F(1, 2), F(-3), F(5, 7)])
    def test_constant_cartan_term(self, a1, beta):
        # d/dt + f + beta h ~ d/dt + f + beta^2 e
        oper = canonicalize(a1, borel(a1, {H: beta}))
        assert oper.coefficients[0] == beta ** 2

    def test_riccati_form(self, a1):
        beta = pole(0, 1, F(1, 3)) + t
        oper = canonicalize(a1, borel(a1, {H: beta}))
        assert oper.coefficients[0] == beta * beta + beta.derivative()

    @pytest.mark.parametrize("kappa", [F(1, 3), F(-1, 2), F(2)])
    def test_euler_connection(self, a1, kappa):
        oper = canonicalize(a1, borel(a1, {H: pole(0, 1, kappa)}))
        assert oper.coefficients[0] == pole(0, 2, kappa ** 2 - kappa)

    def test_f_component_is_rejected(self, a1):
        with pytest.raises(ValueError) as excinfo:
            canonicalize(a1, borel(a1, {FF: 1}))
        assert "Borel" in str(excinfo.value)

    def test_wrong_length_is_rejected(self, a2):
        with pytest.raises(ValueError):
            canonicalize(a2, [0, 0, 0])

    def test_idempotent(self, a2):
        b = borel(a2, {0: pole(1, 1, 2), 1: t, 2: pole(0), 3: F(1, 4)})
        oper = canonicalize(a2, b)
        assert canonicalize(a2, as_borel(a2, oper)) == oper


class TestGaugeInvariance:
    def _e_indices(self, g):
        return [a for a in range(g.dim) if g.basis_kind(a)[0] == "e"]

    def test_constant_unipotent(self, a2, random_rational):
        b = borel(a2, {0: pole(0, 1, F(3, 2)), 1: pole(2, 1, -1), 4: t})
        coeffs = random_rational(len(self._e_indices(a2)))
        n = [RationalFunction() for _ in range(a2.dim)]
        for a, c in zip(self._e_indices(a2), coeffs):
            n[a] = RationalFunction.constant(c)
        moved = gauge_transform(a2, b, n)
        assert canonicalize(a2, moved) == canonicalize(a2, b)

    def test_rational_unipotent(self, a2):
        b = borel(a2, {0: F(1, 2), 1: pole(1, 1, 3)})
        n = [RationalFunction() for _ in range(a2.dim)]
        e1, e2, e12 = self._e_indices(a2)
        n[e1] = t * 2
        n[e2] = pole(-1, 1, F(1, 5))
        n[e12] = t * t
        assert canonicalize(a2, gauge_transform(a2, b, n)) == canonicalize(a2, b)

    @pytest.mark.parametrize("label, entries", [
        ("A1", {H: pole(0, 4, F(1, 2)) + pole(1, 2, -1) + t, E: pole(0, 3, 2) + F(1, 3)}),
        ("A2", {0: pole(0, 4, F(3, 2)), 1: pole(1, 2, -1) + t, 2: pole(0, 3, F(1, 4)),
                4: pole(1, 1, 2) + t * t}),
    ], ids=["A1", "A2"])
    def test_random_polynomial_unipotents(self, request, random_rational, label, entries):
        g = request.getfixturevalue(label.lower())
        b = borel(g, entries)
        expected = canonicalize(g, b)
        assert canonicalize(g, as_borel(g, expected)) == expected
        for _ in range(10):
            n = [RationalFunction() for _ in range(g.dim)]
            for a in self._e_indices(g):
                c0, c1, c2 = random_rational(3)
                n[a] = RationalFunction.constant(c0) + t * c1 + t * t * c2
            moved = gauge_transform(g, b, n)
            assert canonicalize(g, moved) == expected


class TestMiura:
    def test_exact_bethe_root_is_regular(self, exact_problem, exact_solution):
        oper = oper_from_bethe(exact_problem, exact_solution)
        assert oper.is_exact
        assert oper.singular_points() == [0]
        assert oper.points == {"z1": 0, "w1": F(1, 2)}

    @pytest.mark.numeric
    def test_numeric_roots_cancel_after_chop(self, a1):
        problem = BetheProblem.for_block(a1, [F(0), F(1)], [(1,), (1,)], (F(7, 3),), (0,))
        for s in solve(problem, SolverStrategy(seed=1)):
            oper = oper_from_bethe(problem, s, chop=1e-7)
            assert oper.coefficients[0].pole_order(s.w[0], tol=1e-7) == 0

    def test_perturbed_root_leaves_simple_pole(self, exact_problem):
        w = F(1, 2) + F(1, 100)
        oper = miura(CartanConnection.from_bethe(exact_problem, [w]))
        assert oper.coefficients[0].pole_order(w) == 1

    def test_non_solution_is_rejected(self, exact_problem):
        wrong = BetheSolution((F(1, 3),), (0.0,), float("inf"), 1 / 3)
        with pytest.raises(BetheResidualError):
            oper_from_bethe(exact_problem, wrong)

    def test_connection_residues(self, exact_problem):
        connection = CartanConnection.from_bethe(exact_problem, [F(1, 2)])
        assert connection.residue(0) == (2,)
        assert connection.residue(F(1, 2)) == (-2,)
        assert connection.finite_residue_sum() == (0,)

    def test_residue_sum_rule(self, exact_problem):
        at_infinity, expected = residue_sum_rule(
            CartanConnection.from_bethe(exact_problem, [F(1, 2)]))
        assert at_infinity == expected


class TestResidues:
    @pytest.mark.parametrize("level", [0, 1, 2, 5])
    def test_point_residue_of_a1(self, a1, level):
        assert point_residue(a1, (level,)) == (F(level + 1, 2) ** 2,)

    def test_regular_residue(self, a1, a2):
        assert regular_oper_residue(a1) == (F(1, 4),)
        assert regular_oper_residue(a2) == point_residue(a2, (0, 0))

    def test_one_residue_at_marked_point(self, exact_problem, exact_solution):
        oper = oper_from_bethe(exact_problem, exact_solution)
        assert residue_m(oper, 0, 1) == point_residue(exact_problem.algebra, (2,))

    def test_regular_point_has_regular_residue(self, exact_problem, exact_solution):
        oper = oper_from_bethe(exact_problem, exact_solution)
        assert residue_m(oper, F(1, 2), 1) == regular_oper_residue(exact_problem.algebra)

    def test_two_residue_at_infinity(self, exact_problem, exact_solution):
        oper = oper_from_bethe(exact_problem, exact_solution)
        at_infinity = oper_at_infinity(oper)
        assert residue_m(at_infinity, 0, 2) == infinity_residue(exact_problem.algebra,
                                                                 exact_problem.chi)

    def test_order_bound_is_enforced(self, a1):
        oper = canonicalize(a1, borel(a1, {E: pole(0, 3)}))
        with pytest.raises(ResidueOrderError) as excinfo:
            residue_m(oper, 0, 1)
        assert (excinfo.value.order, excinfo.value.bound) == (3, 2)
        assert residue_m(oper, 0, 2) == (0,)

    def test_slice_of_principal_nilpotent(self, a1):
        assert slice_coordinates(a1, [0, 1, 0]) == (1,)


@pytest.mark.numeric
def test_eigenvalue_function_matches_spectrum(a1, v1_v1):
    problem = BetheProblem.for_block(a1, [F(0), F(1)], [(1,), (1,)], (F(7, 3),), (0,))
    operators = hamiltonians_for(problem, v1_v1)
    for s in solve(problem, SolverStrategy(seed=1)):
        energies = eigen_check(problem, s, operators).eigenvalues
        from_oper = oper_eigenvalue_function(oper_from_bethe(problem, s, chop=1e-7))
        expected = eigenvalue_function(problem, energies)
        for z in problem.points:
            for order in (-2, -1):
                assert complex(from_oper.laurent_coefficient(z, order)) == pytest.approx(
                    complex(expected.laurent_coefficient(z, order)), abs=1e-8)
        assert np.isclose(complex(from_oper.poly[0]), complex(expected.poly[0]))
