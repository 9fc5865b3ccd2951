"""Tests for monodromy operators, Smith reduction, and cover homology."""

from __future__ import annotations

import random
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bplinks.errors import BudgetExceeded, InvalidExponent
from bplinks.monodromy import (
    FgAbelianGroup,
    cokernel_group,
    cover_homology,
    link_rank,
    milnor_lattice,
    monodromy_period,
    smith_normal_decomposition,
    smith_normal_form,
)

matrices = st.lists(
    st.lists(st.integers(-9, 9), min_size=1, max_size=5),
    min_size=1,
    max_size=5,
).filter(lambda rows: len({len(r) for r in rows}) == 1)


class TestMonodromyOperator:
    def test_single_exponent_companion(self):
        op = milnor_lattice((3,))
        assert op.matrix == ((0, -1), (1, -1))
        assert op.size == 2
        assert op.period == 3

    def test_two_squares_is_identity(self):
        op = milnor_lattice((2, 2))
        assert op.matrix == ((1,),)
        assert op.period == 1
        assert monodromy_period(op) == 1

    def test_period_matches_brute_matrix_order(self):
        for exps in ((3,), (4,), (5,), (3, 2), (4, 3), (3, 3), (5, 2, 2), (3, 2, 2, 2), (2, 2, 2, 2)):
            op = milnor_lattice(exps)
            assert op.period == oracles.matrix_order(op.matrix), exps

    def test_matrix_size_is_milnor_number(self):
        for exps in ((4, 3), (3, 3, 3), (6, 3, 2)):
            op = milnor_lattice(exps)
            assert op.size == prod(a - 1 for a in exps)
            assert len(op.matrix) == op.size

    def test_characteristic_polynomial_from_lattice_data(self):
        for exps in ((3,), (4,), (3, 3), (4, 3), (5, 2, 2), (3, 2, 2, 2), (2, 2, 2, 2)):
            op = milnor_lattice(exps)
            assert oracles.actual_charpoly_coeffs(op.matrix) == oracles.expected_charpoly_coeffs(exps), exps

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            milnor_lattice((10, 10, 10), budget=100)

    def test_invalid_exponents(self):
        with pytest.raises(InvalidExponent):
            milnor_lattice((1, 3))


class TestSmithNormalForm:
    def test_examples(self):
        assert smith_normal_form(((2, 0), (0, 3))) == (1, 6)
        assert smith_normal_form(((1, 0, 0), (0, 1, 0), (0, 0, 1))) == (1, 1, 1)
        assert smith_normal_form(((0,),)) == (0,)
        assert smith_normal_form(((2, 4), (6, 8))) == (2, 4)
        assert smith_normal_form(((0, 0), (0, 0))) == (0, 0)

    def test_rectangular(self):
        assert smith_normal_form(((2, 0, 0), (0, 4, 0))) == (2, 4)
        assert smith_normal_form(((3,), (0,), (0,))) == (3,)

    def test_decomposition_on_examples(self):
        samples = [
            ((2, 4), (6, 8)),
            ((1, 2, 3), (4, 5, 6), (7, 8, 9)),
            ((0, 2), (3, 0)),
            ((5,),),
            ((-4, 2, 0), (6, -2, 2)),
        ]
        for matrix in samples:
            self._check_decomposition(matrix)

    @staticmethod
    def _check_decomposition(matrix):
        rows, cols = len(matrix), len(matrix[0])
        u, divisors, v = smith_normal_decomposition(matrix)
        assert len(divisors) == min(rows, cols)
        assert abs(oracles.det_int(u)) == 1
        assert abs(oracles.det_int(v)) == 1
        product = oracles.matmul(oracles.matmul([list(r) for r in u], [list(r) for r in matrix]), [list(r) for r in v])
        for i in range(rows):
            for j in range(cols):
                expected = divisors[i] if i == j and i < len(divisors) else 0
                assert product[i][j] == expected, (matrix, i, j)
        nonzero = [d for d in divisors if d]
        assert all(d > 0 for d in nonzero)
        for a, b in zip(nonzero, nonzero[1:]):
            assert b % a == 0
        assert divisors[len(nonzero):] == (0,) * (len(divisors) - len(nonzero))

    @given(matrices)
    @settings(max_examples=120, deadline=None)
    def test_decomposition_properties(self, rows):
        self._check_decomposition(tuple(tuple(r) for r in rows))

    def test_determinism(self):
        matrix = ((3, 1, 4), (1, 5, 9), (2, 6, 5))
        first = smith_normal_decomposition(matrix)
        second = smith_normal_decomposition(matrix)
        assert first == second


class TestAbelianGroups:
    def test_str_forms(self):
        assert str(FgAbelianGroup(0)) == "0"
        assert str(FgAbelianGroup(2)) == "Z^2"
        assert str(FgAbelianGroup(1)) == "Z"
        assert str(FgAbelianGroup(0, (3,))) == "Z/3"
        assert str(FgAbelianGroup(1, (2,))) == "Z + Z/2"
        assert str(FgAbelianGroup(0, (2, 2))) == "Z/2 + Z/2"

    def test_validation(self):
        with pytest.raises(ValueError):
            FgAbelianGroup(-1)
        with pytest.raises(ValueError):
            FgAbelianGroup(0, (1,))
        with pytest.raises(ValueError):
            FgAbelianGroup(0, (4, 2))

    def test_torsion_order(self):
        assert FgAbelianGroup(0).torsion_order() == 1
        assert FgAbelianGroup(0, (2, 6)).torsion_order() == 12
        assert FgAbelianGroup(3, (5,)).torsion_order() == 5

    def test_is_trivial(self):
        assert FgAbelianGroup(0).is_trivial
        assert not FgAbelianGroup(1).is_trivial
        assert not FgAbelianGroup(0, (2,)).is_trivial

    def test_cokernel_group(self):
        assert cokernel_group((1, 1, 6), 3) == FgAbelianGroup(0, (6,))
        assert cokernel_group((1, 0), 2) == FgAbelianGroup(1)
        assert cokernel_group((), 2) == FgAbelianGroup(2)


class TestCoverHomology:
    def test_frozen_tower_over_trefoil_branch(self):
        branch = (3, 2, 2, 2)
        expected = {
            1: FgAbelianGroup(0),
            2: FgAbelianGroup(0, (3,)),
            3: FgAbelianGroup(0, (2, 2)),
            4: FgAbelianGroup(0, (3,)),
            5: FgAbelianGroup(0),
            6: FgAbelianGroup(2),
            7: FgAbelianGroup(0),
        }
        for fold, group in expected.items():
            assert cover_homology(branch, fold) == group, fold

    def test_periodicity_and_reflection(self):
        branch = (3, 2, 2, 2)
        for k in range(1, 13):
            assert cover_homology(branch, k + 6) == cover_homology(branch, k), k
        for k in range(1, 6):
            assert cover_homology(branch, 6 - k) == cover_homology(branch, k), k

    def test_rank_agrees_with_link_rank(self):
        for branch in ((3, 2, 2), (5, 2, 2), (3, 2, 2, 2)):
            for fold in range(2, 9):
                cover = cover_homology(branch, fold)
                assert cover.rank == link_rank((fold,) + branch), (branch, fold)

    def test_fold_one_is_a_sphere(self):
        assert cover_homology((3, 2, 2, 2), 1).is_trivial
        assert cover_homology((2, 2), 1).is_trivial

    def test_bad_fold(self):
        with pytest.raises(ValueError):
            cover_homology((3, 2, 2, 2), 0)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            cover_homology((10, 10, 10), 2, budget=100)


class TestLinkRank:
    FROZEN = {
        (2, 2, 2): 0,
        (3, 2, 2, 2): 0,
        (6, 3, 2, 2, 2): 2,
        (4, 4, 2, 2, 2, 2): 3,
        (22, 11, 2, 2, 2, 2, 2): 10,
        (10, 5, 2, 2): 4,
        (4, 4, 2, 2): 3,
        (6, 6, 2, 2): 5,
        (8, 8, 2, 2, 2, 2): 7,
    }

    def test_frozen_values(self):
        for exps, expected in self.FROZEN.items():
            assert link_rank(exps) == expected, exps

    def test_matches_brute_oracle(self):
        rng = random.Random(31337)
        for _ in range(20):
            size = rng.choice((3, 4, 5))
            exps = tuple(rng.choice((2, 2, 3, 4, 6)) for _ in range(size))
            assert link_rank(exps) == oracles.brute_rank(exps), exps

    def test_permutation_invariance(self):
        assert link_rank((2, 2, 6, 3, 2)) == 2
        assert link_rank((2, 2, 22, 2, 11, 2, 2)) == 10
