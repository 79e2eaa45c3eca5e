#!/usr/bin/env python3
"""
Tests for the classical layer: Lie-Poisson brackets, shift of argument,
the classical Gaudin L-operator and quantization symbols.

Topics covered:
- Casimirs and Poisson commutativity of shift-of-argument generators
- Jacobian ranks at regular, nilpotent and zero shifts
- Partial-fraction coefficients of P_1(eta(u))
- Symbols of DMT and shifted Gaudin Hamiltonians
- Exact polynomial identities behind the DMT generation statement
"""
from fractions import Fraction

import pytest

from gaudin_lab.classical import (
    LOperatorP1,
    cartan_direction,
    classical_gaudin_generators,
    commutation_defects,
    expansion_identity,
    generation_identity,
    independence_rank,
    is_regular,
    poisson_bracket,
    root_derivative_identity,
    shift_arg_generators,
    symbol_check,
    vinberg_quadratic,
)
from gaudin_lab.errors import ArityMismatchError, CoincidentPointsError, NonRegularElementError
from gaudin_lab.hamiltonians import dmt_element, shifted_gaudin_element
from gaudin_lab.liealg import (
    algebra_to_dual,
    from_type,
    invariant_polynomials,
    principal_data,
    weight_to_cartan,
    weight_to_dual,
)
from gaudin_lab.polynomials import PhaseSpace

REGULAR_CHIS = [
    (Fraction(2), Fraction(-1, 3)),
    (Fraction(1, 2), Fraction(5, 4)),
    (Fraction(-3), Fraction(7, 2)),
]


def test_quadratic_casimir_is_poisson_central(a2):
    casimir_poly = invariant_polynomials(a2)[0]
    space = casimir_poly.space
    for a in range(a2.dim):
        coordinate = space.wrap(space.coordinate(0, a))
        assert poisson_bracket(casimir_poly, coordinate).is_zero()


def test_bracket_of_coordinates_is_structure_constant(a1):
    space = PhaseSpace(a1)
    x_e, x_f = space.wrap(space.coordinate(0, 1)), space.wrap(space.coordinate(0, 2))
    # {x_e, x_f} = x_[e, f] = x_h
    assert poisson_bracket(x_e, x_f) == space.wrap(space.coordinate(0, 0))


def test_bracket_rejects_mixed_arity(a1):
    one = PhaseSpace(a1, 1)
    two = PhaseSpace(a1, 2)
    with pytest.raises(ArityMismatchError) as excinfo:
        poisson_bracket(one.constant(1), two.constant(1))
    assert excinfo.value.arities == (1, 2)


@pytest.mark.exact
@pytest.mark.parametrize("label", [
    "A1",
    "A2",
    pytest.param("A3", marks=pytest.mark.slow),
])
def test_shift_of_argument_generators_commute(label, random_rational):
    g = from_type(label)
    chi = weight_to_dual(g, [Fraction(k + 1) for k in range(g.rank)])
    gens = shift_arg_generators(g, chi)
    assert len(gens) == (g.dim + g.rank) // 2
    assert commutation_defects(gens) == []
    assert independence_rank(gens, random_rational(g.dim)) == len(gens)


@pytest.mark.exact
@pytest.mark.parametrize("label", [
    "A1",
    "A2",
    pytest.param("A3", marks=pytest.mark.slow),
])
def test_full_rank_across_random_regular_shifts(label, random_rational):
    g = from_type(label)
    dim_b = (g.dim + g.rank) // 2
    ranks = []
    while len(ranks) < 20:
        chi = weight_to_dual(g, random_rational(g.rank))
        if not is_regular(g, chi):
            continue
        gens = shift_arg_generators(g, chi)
        ranks.append(independence_rank(gens, random_rational(g.dim)))
    assert ranks == [dim_b] * 20


@pytest.mark.exact
def test_independence_at_regular_nilpotent(a2, random_rational):
    nilpotent = algebra_to_dual(a2, principal_data(a2).p_1)
    gens = shift_arg_generators(a2, nilpotent)
    assert not commutation_defects(gens)
    assert independence_rank(gens, random_rational(a2.dim)) == 5


def test_zero_shift_keeps_only_invariants(a2, random_rational, caplog):
    gens = shift_arg_generators(a2, [0] * a2.dim, strict=False)
    assert independence_rank(gens, random_rational(a2.dim)) == a2.rank
    assert "non-regular" in caplog.text


@pytest.mark.parametrize("chi_weight, defect", [
    ((0, 0), 6),
    ((1, -1), 2),
], ids=["zero", "theta-wall"])
def test_non_regular_shift_names_the_defect(a2, chi_weight, defect):
    chi = weight_to_dual(a2, chi_weight)
    assert not is_regular(a2, chi)
    with pytest.raises(NonRegularElementError) as excinfo:
        shift_arg_generators(a2, chi)
    assert excinfo.value.defect == defect


@pytest.mark.exact
def test_expansion_identity(a2):
    chi = weight_to_dual(a2, (Fraction(1, 2), 3))
    for p in invariant_polynomials(a2):
        assert expansion_identity(p, chi)


class TestClassicalGaudin:
    """Partial fractions of P_1(eta(u)) for two sites."""

    def test_pairing_term_without_chi(self, a1):
        L = LOperatorP1.build(a1, [0, 1])
        coefficients = classical_gaudin_generators(L)
        space = L.space
        pairing = space.ring.zero
        for a in range(a1.dim):
            pairing += space.coordinate(0, a) * space.dual_coordinate(1, a)
        # (A_1, A_2) / (z_1 - z_2) with z = (0, 1)
        assert coefficients[(0, 1, 1)] == space.wrap(-pairing)
        assert coefficients[(1, 1, 1)] == space.wrap(pairing)

    def test_double_pole_is_site_casimir(self, a1):
        L = LOperatorP1.build(a1, [0, 1])
        coefficients = classical_gaudin_generators(L)
        casimir_0 = invariant_polynomials(a1, space=L.space)[0]
        assert coefficients[(0, 1, 2)] == casimir_0

    def test_residues_poisson_commute(self, a2):
        chi = weight_to_dual(a2, (1, 2))
        L = LOperatorP1.build(a2, [0, Fraction(1, 2), 2], chi)
        coefficients = classical_gaudin_generators(L)
        residues = [coefficients[(i, 1, 1)] for i in range(3)]
        assert commutation_defects(residues) == []

    @pytest.mark.exact
    def test_shifted_gaudin_symbol_matches(self, a1):
        points, chi = [Fraction(0), Fraction(1)], (Fraction(3, 2),)
        L = LOperatorP1.build(a1, points, weight_to_dual(a1, chi))
        coefficients = classical_gaudin_generators(L)
        chi_h = tuple(-x for x in chi)
        for i in range(2):
            verdict = symbol_check(shifted_gaudin_element(a1, points, chi_h, i),
                                   coefficients[(i, 1, 1)], full=True)
            assert verdict.equal, verdict.message

    def test_points_must_be_distinct(self, a1):
        with pytest.raises(CoincidentPointsError):
            LOperatorP1.build(a1, [1, 1])


@pytest.mark.exact
@pytest.mark.parametrize("chi", REGULAR_CHIS, ids=["chi0", "chi1", "chi2"])
def test_dmt_symbol_is_vinberg_quadratic(a2, chi):
    for gamma in [(1, 0), (0, 1), (Fraction(1, 2), -2)]:
        verdict = symbol_check(dmt_element(a2, gamma, chi), vinberg_quadratic(a2, gamma, chi))
        assert verdict.equal


def test_symbol_check_reports_degree_mismatch(a2):
    quadratic = vinberg_quadratic(a2, (1, 0), REGULAR_CHIS[0])
    cubic = invariant_polynomials(a2, space=quadratic.space)[1]
    verdict = symbol_check(dmt_element(a2, (1, 0), REGULAR_CHIS[0]), cubic)
    assert not verdict.equal
    assert verdict.quantum_degree == 2 and verdict.classical_degree == 3


@pytest.mark.exact
@pytest.mark.parametrize("chi", REGULAR_CHIS, ids=["chi0", "chi1", "chi2"])
def test_generation_identity(a2, chi):
    for p in invariant_polynomials(a2):
        check = generation_identity(a2, p, chi)
        assert check.holds


@pytest.mark.exact
def test_root_derivative_identity(a2):
    chi = REGULAR_CHIS[1]
    cubic = invariant_polynomials(a2)[1]
    for root in a2.positive_roots:
        check = root_derivative_identity(a2, cubic, chi, root)
        assert check.lhs == check.rhs


def test_cartan_direction_pairs_through_the_form(a1):
    # kappa(h, h) = 2 and kappa(h, e) = kappa(h, f) = 0
    assert list(cartan_direction(a1, [1])) == [2, 0, 0]
    assert weight_to_cartan(a1, [2]) == (1,)
