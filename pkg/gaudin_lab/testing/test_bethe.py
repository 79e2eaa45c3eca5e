#!/usr/bin/env python3
"""
Tests for the Bethe equations, their solutions and Bethe vectors.

Topics covered:
- Closed-form solutions for A1 with one and two marked points
- Collisions, non-regular chi and rescaling covariance
- Ordered partitions and the two Bethe vector formulas
- Eigenvector checks and the completeness census
- CSV export of solutions
"""
import csv
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from gaudin_lab import exact
from gaudin_lab.bethe import (
    CSV_COLUMNS,
    BetheProblem,
    BetheSolution,
    SolverStrategy,
    bethe_vector,
    bethe_vector_one_site,
    counts_by_m,
    eigen_check,
    equations,
    full_census,
    hamiltonian_chi,
    hamiltonians_for,
    ordered_partitions,
    rescale_solution,
    residual,
    same_class,
    solutions_to_csv,
    solutions_to_rows,
    solve,
    solve_with_diagnostics,
)
from gaudin_lab.errors import CollisionError, NonRegularElementError, WeightError

F = Fraction
CHI = (F(7, 3),)
F_INDEX = 2


@pytest.fixture
def pair_problem(a1):
    """A1, V1 x V1 at z = (0, 1), one Bethe root."""
    return BetheProblem.for_block(a1, [F(0), F(1)], [(1,), (1,)], CHI, (0,))


@pytest.fixture
def pair_solutions(pair_problem):
    return solve(pair_problem, SolverStrategy(seed=1))


class TestProblem:
    def test_coloring_from_block(self, a1):
        problem = BetheProblem.for_block(a1, [0, 1], [(1,), (1,)], CHI, (-2,))
        assert problem.coloring == (0, 0)
        assert problem.m == 2
        assert problem.target_weight == (-2,)

    def test_a2_coloring(self, a2):
        problem = BetheProblem.for_block(a2, [0], [(1, 1)], (1, 2), (0, 0))
        assert sorted(problem.coloring) == [0, 1]

    def test_block_above_highest_weight_is_rejected(self, a1):
        with pytest.raises(WeightError):
            BetheProblem.for_block(a1, [0], [(1,)], CHI, (3,))

    def test_hamiltonian_chi_flips_sign(self, pair_problem):
        assert hamiltonian_chi(pair_problem) == (F(-7, 3),)

    def test_rescale(self, pair_problem):
        scaled = pair_problem.rescale(F(2))
        assert scaled.points == (0, 2)
        assert scaled.chi == (F(7, 6),)


@pytest.mark.numeric
class TestSolve:
    def test_no_roots_gives_single_empty_solution(self, a1):
        problem = BetheProblem.for_block(a1, [0, 1], [(1,), (1,)], CHI, (2,))
        solutions = solve(problem)
        assert len(solutions) == 1
        assert solutions[0].w == ()

    def test_quadratic_case_has_two_classes(self, pair_problem, pair_solutions):
        # 1/w + 1/(w - 1) = c  <=>  c w^2 - (2 + c) w + 1 = 0
        c = float(CHI[0])
        expected = sorted(np.roots([c, -(2 + c), 1]).real)
        assert len(pair_solutions) == 2
        found = sorted(s.w[0].real for s in pair_solutions)
        assert found == pytest.approx(expected, abs=1e-9)
        for s in pair_solutions:
            assert s.max_residual <= 1e-10

    @pytest.mark.parametrize("level, chi", [(1, F(1, 2)), (3, F(5)), (2, F(-4, 3))])
    def test_single_root_at_one_point(self, a1, level, chi):
        problem = BetheProblem.for_block(a1, [F(1, 3)], [(level,)], (chi,), (level - 2,))
        (solution,) = solve(problem)
        assert solution.w[0] == pytest.approx(complex(F(1, 3) + level / chi), abs=1e-9)

    def test_one_point_counts_match_irrep(self, a1):
        counts = []
        for m in range(4):
            problem = BetheProblem.for_block(a1, [0], [(3,)], (F(3, 2),), (3 - 2 * m,))
            counts.append(len(solve(problem)))
        assert counts == [1, 1, 1, 1]

    def test_non_regular_chi_is_rejected(self, a1):
        problem = BetheProblem.for_block(a1, [0, 1], [(1,), (1,)], (0,), (0,))
        with pytest.raises(NonRegularElementError) as excinfo:
            solve(problem)
        assert excinfo.value.root == (1,)

    def test_diagnostics_account_for_attempts(self, pair_problem):
        report = solve_with_diagnostics(pair_problem, SolverStrategy(n_random=8))
        assert report.attempts == report.converged + report.failures
        assert report.converged == len(report.solutions) + report.duplicates

    def test_homotopy_finds_the_same_classes(self, pair_problem, pair_solutions):
        strategy = SolverStrategy(n_random=0, perturbative=False, homotopy=True)
        tracked = solve(pair_problem, strategy)
        assert len(tracked) == len(pair_solutions)

    def test_rescaling_covariance(self, pair_problem, pair_solutions):
        scaled = pair_problem.rescale(F(3))
        for s in pair_solutions:
            assert residual(scaled, rescale_solution(s, 3)).max() <= 1e-10


def test_collision_is_reported(pair_problem):
    with pytest.raises(CollisionError) as excinfo:
        residual(pair_problem, [0j])
    assert excinfo.value.distance == 0.0


def test_equations_at_known_root(a1):
    problem = BetheProblem.for_block(a1, [0], [(2,)], (F(4),), (0,))
    assert abs(equations(problem, np.array([0.5 + 0j]))[0]) < 1e-14


def test_same_class_ignores_order_within_a_color(a1):
    problem = BetheProblem.for_block(a1, [0], [(3,)], CHI, (-1,))
    w = [1 + 2j, -0.5 + 0j]
    assert same_class(problem, w, w[::-1], 1e-12)
    assert not same_class(problem, w, [1 + 2j, -0.4 + 0j], 1e-6)


@pytest.mark.parametrize("m, n_parts", [(0, 2), (1, 3), (2, 2), (3, 2), (3, 3)])
def test_ordered_partition_count(m, n_parts):
    parts = list(ordered_partitions(m, n_parts))
    assert len(parts) == factorial(m) * comb(m + n_parts - 1, n_parts - 1)
    assert len(set(parts)) == len(parts)
    for p in parts:
        assert sorted(i for chain in p for i in chain) == list(range(m))


class TestBetheVectors:
    def test_two_site_single_root(self, pair_problem, v1_v1):
        w = 0.3 + 0.1j
        solution = BetheSolution((w,), (0.0,), float("inf"), 0.3)
        vec = bethe_vector(pair_problem, solution, v1_v1)
        top = v1_v1.highest_vector()
        expected = (exact.to_complex(v1_v1.act(F_INDEX, 0, top)) / w
                    + exact.to_complex(v1_v1.act(F_INDEX, 1, top)) / (w - 1))
        np.testing.assert_allclose(vec.vector, expected, atol=1e-12)
        assert vec.block == (0,)

    def test_one_site_formula_agrees(self, a1):
        problem = BetheProblem.for_block(a1, [F(1, 2)], [(3,)], (F(3, 2),), (-1,))
        (solution,) = solve(problem)
        general = bethe_vector(problem, solution)
        single = bethe_vector_one_site(problem, solution, general.space)
        np.testing.assert_allclose(general.vector, single, atol=1e-10)
        assert not general.is_zero

    def test_one_site_formula_needs_one_point(self, pair_problem, pair_solutions):
        with pytest.raises(ValueError):
            bethe_vector_one_site(pair_problem, pair_solutions[0])

    def test_verma_components_for_one_root(self, a1):
        problem = BetheProblem.for_block(a1, [0], [(1,)], (F(2),), (-1,))
        solution = BetheSolution((0.5 + 0j,), (0.0,), float("inf"), 0.5)
        vec = bethe_vector(problem, solution, in_verma=True)
        # PBW monomials are tuples of positive-root indices
        assert vec.verma_components == pytest.approx({((0,),): 2.0})


@pytest.mark.numeric
class TestEigenCheck:
    def test_bethe_vectors_are_eigenvectors(self, pair_problem, pair_solutions, v1_v1):
        operators = hamiltonians_for(pair_problem, v1_v1)
        for s in pair_solutions:
            check = eigen_check(pair_problem, s, operators)
            assert check.passed, check.residuals

    def test_highest_vector_eigenvalues(self, a1, v1_v1):
        problem = BetheProblem.for_block(a1, [0, 1], [(1,), (1,)], CHI, (2,))
        (solution,) = solve(problem)
        check = eigen_check(problem, solution, hamiltonians_for(problem, v1_v1))
        # (lambda_1, lambda_2)/(z_i - z_j) - <lambda_i, chi>/2 with (omega, omega) = 1/2
        assert [v.real for v in check.eigenvalues] == pytest.approx([-5 / 3, -2 / 3])

    def test_operator_block_must_match(self, pair_problem, pair_solutions, v1_v1):
        wrong = hamiltonians_for(pair_problem, v1_v1, block=(2,))
        with pytest.raises(ValueError):
            eigen_check(pair_problem, pair_solutions[0], wrong)


@pytest.mark.numeric
def test_census_of_two_fundamentals(v1_v1):
    results = full_census(v1_v1, [F(0), F(1)], CHI, SolverStrategy(seed=3))
    assert counts_by_m(results) == {0: 1, 1: 2, 2: 1}
    assert all(r.complete for r in results)
    assert [r.block_dimension for r in results] == [1, 2, 1]


@pytest.mark.numeric
def test_census_across_random_regular_chi(v1_v1, random_rational):
    for draw in range(5):
        chi = tuple(random_rational(1))
        results = full_census(v1_v1, [F(0), F(1)], chi, SolverStrategy(seed=draw))
        assert counts_by_m(results) == {0: 1, 1: 2, 2: 1}, chi
        assert all(r.complete for r in results), chi
        assert all(r.eigenvalues_in_spectrum for r in results), chi
        assert all(c.passed for r in results for c in r.eigen_checks), chi


def test_csv_export(tmp_path, pair_problem, pair_solutions):
    rows = solutions_to_rows(pair_problem, pair_solutions)
    path = tmp_path / "solutions.csv"
    solutions_to_csv(rows, str(path))
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        read = list(reader)
    assert tuple(reader.fieldnames) == CSV_COLUMNS
    assert len(read) == len(pair_solutions)
    assert {r["color"] for r in read} == {"1"}
    assert read[0]["block"] == "0"
