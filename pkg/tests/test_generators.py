"""Tests for the exact tuple generators."""

import numpy as np
import pytest

from krange.errors import InvalidTupleError, ShapeMismatchError
from krange.generators import (
    bidisk_expected_defect,
    bidisk_triplet,
    circle_sup_sq,
    corona_triplet,
    random_tuple,
    shift_matrix,
    toeplitz_analytic,
)

SQ2 = np.sqrt(2.0)


class TestToeplitz:
    def test_shift_symbol(self):
        np.testing.assert_array_equal(toeplitz_analytic([0, 1], 3), shift_matrix(3))

    def test_constant_symbol(self):
        np.testing.assert_array_equal(toeplitz_analytic([2.5], 4), 2.5 * np.eye(4))

    def test_shift_squares_to_z2(self):
        prod = toeplitz_analytic([0, 1], 4) @ toeplitz_analytic([0, 1], 4)
        np.testing.assert_array_equal(prod, toeplitz_analytic([0, 0, 1], 4))

    @pytest.mark.parametrize("seed", range(4))
    def test_multiplicativity_integer_symbols(self, seed):
        # zero tolerance: products of integer-coefficient truncations are exact
        rng = np.random.default_rng(seed)
        phi = rng.integers(-3, 4, size=4).astype(complex)
        psi = rng.integers(-3, 4, size=3).astype(complex)
        n = 6
        lhs = toeplitz_analytic(phi, n) @ toeplitz_analytic(psi, n)
        rhs = toeplitz_analytic(np.convolve(phi, psi), n)
        np.testing.assert_array_equal(lhs, rhs)

    def test_long_symbol_truncated(self):
        m = toeplitz_analytic([1, 2, 3, 4, 5], 3)
        np.testing.assert_array_equal(m, [[1, 0, 0], [2, 1, 0], [3, 2, 1]])

    def test_rejects_bad_size(self):
        with pytest.raises(ShapeMismatchError):
            toeplitz_analytic([1], 0)


class TestCircleSup:
    def test_monomial(self):
        assert circle_sup_sq([[0, 1]]) == pytest.approx(1.0)

    def test_pair_sums(self):
        # |z/sqrt2|^2 + |z^2/sqrt2|^2 = 1 identically on the circle
        assert circle_sup_sq([[0, 1 / SQ2], [0, 0, 1 / SQ2]]) == pytest.approx(1.0)

    def test_binomial(self):
        # |1 + z|^2 peaks at 4 on the circle
        assert circle_sup_sq([[1, 1]]) == pytest.approx(4.0, abs=1e-9)


class TestCorona:
    def test_reference_symbols_are_full(self):
        t, diag = corona_triplet([0, 1 / SQ2], [0, 0, 1 / SQ2], [1 / SQ2], [1 / SQ2], n=5)
        assert t.validation.level == "full"
        assert diag.row_ok and diag.col_ok

    def test_degenerate_cancellation(self):
        # phi2 = 0, psi1 = 1: the triplet is (T, 0, T) with zero defect
        t, _ = corona_triplet([0, 0.5, 0.25], [0], [1], [0], n=4)
        np.testing.assert_allclose(t.defect, np.zeros((4, 4)), atol=1e-15)
        assert t.validation.level == "full"
        assert t.validation.min_eig == pytest.approx(0.0, abs=1e-12)

    def test_constants(self):
        t, _ = corona_triplet([1], [0], [0.5], [0], n=3)
        np.testing.assert_allclose(t.defect, 0.75 * np.eye(3), atol=1e-15)
        assert t.validation.level == "full"

    def test_third_symbol_is_bilinear_combination(self):
        t, _ = corona_triplet([0, 1 / SQ2], [0, 0, 1 / SQ2], [1 / SQ2], [1 / SQ2], n=5)
        expected = toeplitz_analytic([0, 0.5, 0.5], 5)
        np.testing.assert_allclose(t.ops[2], expected, atol=1e-15)

    def test_over_norm_symbols_warn_and_raise(self):
        # psi1 = 2 drives the third slot past the positive ones: D = -3 I
        with pytest.warns(UserWarning):
            with pytest.raises(InvalidTupleError):
                corona_triplet([1.0], [0], [2.0], [0], n=3)

    @pytest.mark.parametrize("n", [3, 5])
    def test_compression_consistency(self, n):
        # leading block of the larger defect equals the smaller defect
        deg = 2  # degrees of the symbols below
        t_small, _ = corona_triplet([0, 1 / SQ2], [0, 0, 1 / SQ2], [1 / SQ2], [1 / SQ2], n=n)
        t_large, _ = corona_triplet([0, 1 / SQ2], [0, 0, 1 / SQ2], [1 / SQ2], [1 / SQ2], n=n + deg)
        for small_op, large_op in zip(t_small.ops, t_large.ops):
            gram_small = small_op @ small_op.conj().T
            gram_large = large_op @ large_op.conj().T
            assert np.linalg.norm(gram_large[:n, :n] - gram_small) <= 1e-12


class TestBidisk:
    def test_one_dimensional_collapse(self):
        t = bidisk_triplet(1)
        for op in t.ops:
            np.testing.assert_array_equal(op, np.zeros((1, 1)))
        np.testing.assert_array_equal(t.defect, np.zeros((1, 1)))

    def test_n2_defect_by_hand(self):
        t = bidisk_triplet(2)
        np.testing.assert_allclose(t.defect, np.diag([0.0, 1.0, 1.0, 1.0]), atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 17))
    def test_defect_identity_exact(self, n):
        t = bidisk_triplet(n)
        assert np.linalg.norm(t.defect - bidisk_expected_defect(n)) <= 1e-13

    def test_full_validity(self):
        assert bidisk_triplet(4).validation.level == "full"


class TestRandomTuple:
    def test_determinism(self):
        t1 = random_tuple(2, 1, 4, seed=7)
        t2 = random_tuple(2, 1, 4, seed=7)
        for a, b in zip(t1.ops, t2.ops):
            np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("seed", range(100))
    def test_always_full_validity(self, seed):
        dim = 2 + seed % 11
        t = random_tuple(2, 1, dim, seed=seed, margin=0.5)
        assert t.validation.level == "full"
        assert t.validation.min_eig >= -1e-10

    def test_no_negatives_reduces_to_row_case(self):
        t = random_tuple(3, 0, 3, seed=11)
        assert t.n_ops == 3
        assert all(s == 1 for s in t.signature)
        acc = sum(op @ op.conj().T for op in t.ops)
        np.testing.assert_allclose(t.defect, (acc + acc.conj().T) / 2, atol=1e-14)

    def test_margin_bounds_norm(self):
        t = random_tuple(2, 1, 4, seed=13, margin=0.3)
        assert t.validation.max_eig <= (1 - 0.3) ** 2 + 1e-12

    def test_rejects_bad_margin(self):
        with pytest.raises(ShapeMismatchError):
            random_tuple(2, 1, 3, seed=0, margin=1.5)
