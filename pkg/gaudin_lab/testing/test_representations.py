#!/usr/bin/env python3
"""
Tests for truncated Verma modules, irreducible quotients and tensor products.

Topics covered:
- Dimensions and weight multiplicities against the Weyl formula
- Shapovalov Gram determinants
- Exact generator matrices as a representation of g
- Weight blocks and per-site actions of tensor products
"""
import itertools
from fractions import Fraction

import numpy as np
import pytest

from gaudin_lab import exact
from gaudin_lab.errors import SiteError, WeightError
from gaudin_lab.hamiltonians import casimir, spectrum
from gaudin_lab.representations import (
    build_irrep,
    build_verma_truncated,
    shapovalov_determinant,
    weyl_dimension,
)


@pytest.mark.parametrize("label, weight, dim", [
    ("A1", (1,), 2),
    ("A1", (3,), 4),
    ("A2", (1, 0), 3),
    ("A2", (1, 1), 8),
    ("A2", (2, 0), 6),
], ids=["A1-fund", "A1-spin3/2", "A2-fund", "A2-adjoint", "A2-sym2"])
def test_irrep_dimension_matches_weyl(request, label, weight, dim):
    g = request.getfixturevalue(label.lower())
    V = build_irrep(g, weight)
    assert V.dim == dim
    assert weyl_dimension(g, weight) == dim


def test_adjoint_zero_weight_multiplicity(a2):
    V = build_irrep(a2, (1, 1))
    assert V.weight_multiplicities()[(Fraction(0), Fraction(0))] == 2


@pytest.mark.exact
@pytest.mark.parametrize("weight", [(1, 0), (1, 1), (0, 2)], ids=str)
def test_generator_matrices_form_a_representation(a2, weight):
    V = build_irrep(a2, weight)
    for a, b in itertools.combinations(range(a2.dim), 2):
        bracket = a2.bracket(a2.basis(a), a2.basis(b))
        assert (exact.commutator(V.matrices[a], V.matrices[b]) == V.matrix_of(bracket)).all()


def test_verma_weight_space_dimensions(a1, a2):
    verma = build_verma_truncated(a1, (Fraction(5, 2),), 2)
    assert [verma.dimension(d) for d in verma.defects()] == [1, 1, 1]
    generic = build_verma_truncated(a2, (Fraction(1, 3), Fraction(2, 7)), 2)
    # f_1 f_2 v and f_{12} v span the weight lambda - alpha_1 - alpha_2
    assert generic.dimension((1, 1)) == 2


@pytest.mark.exact
def test_shapovalov_determinant_vanishes_at_singular_vector(a1):
    verma = build_verma_truncated(a1, (1,), 2)
    assert shapovalov_determinant(verma, (1,)) == 1
    assert shapovalov_determinant(verma, (2,)) == 0


@pytest.mark.parametrize("weight, message", [
    ((Fraction(1, 2),), "not integral"),
    ((-1,), "not dominant"),
    ((1, 1), "expected 1 coroot pairings"),
    ((0.5,), "exact rationals"),
], ids=["fractional", "negative", "length", "float"])
def test_build_irrep_rejects_bad_weights(a1, weight, message):
    with pytest.raises(WeightError) as excinfo:
        build_irrep(a1, weight)
    assert message in str(excinfo.value)


def test_project_kills_singular_vector(a1):
    V = build_irrep(a1, (1,))
    # f^2 v is singular in M_1, so it vanishes in V_1
    vector = V.verma.apply_word((2, 2), {(): Fraction(1)})
    assert exact.is_zero(V.project(vector))


class TestTensorSpace:
    """Weight blocks and actions of V_1 (x) V_1."""

    def test_blocks(self, v1_v1):
        dims = {tuple(int(x) for x in w): len(basis) for w, basis in v1_v1.blocks.items()}
        assert dims == {(2,): 1, (0,): 2, (-2,): 1}
        assert list(v1_v1.blocks)[0] == v1_v1.highest_weight

    def test_site_out_of_range(self, v1_v1):
        with pytest.raises(SiteError) as excinfo:
            v1_v1.act(0, 2, v1_v1.highest_vector())
        assert excinfo.value.n_sites == 2

    def test_diagonal_action_is_sum_of_sites(self, v1_v1, rng):
        vector = rng.normal(size=v1_v1.dim) + 0j
        f = 2
        total = v1_v1.act(f, 0, vector) + v1_v1.act(f, 1, vector)
        assert np.allclose(v1_v1.act(f, "diagonal", vector), total)

    def test_block_round_trip(self, v1_v1):
        vector = v1_v1.act(2, "diagonal", v1_v1.highest_vector())
        coords = v1_v1.block_vector((0,), vector)
        assert (v1_v1.embed_block((0,), coords) == vector).all()

    @pytest.mark.numeric
    def test_diagonal_casimir_spectrum(self, v1_v1):
        found = []
        for op in casimir(v1_v1, "diagonal").values():
            data = spectrum(op)
            for value, mult in zip(data.eigenvalues, data.multiplicities):
                found.extend([round(value.real, 9)] * mult)
        # half the sum J_a J^a: 4/2 on the triplet, 0 on the singlet
        assert sorted(found) == [0.0, 2.0, 2.0, 2.0]

    def test_operator_to_json(self, v1_v1):
        op = casimir(v1_v1, "diagonal", blocks=[(2,)])[(Fraction(2),)]
        document = v1_v1.operator_to_json(op)
        assert document == {"block_weight": ["2"], "dim": 1, "entries": [[0, 0, "2"]]}
