"""Tests for the truncated, exact, and complement solvers."""

import numpy as np
import pytest

from krange.dbr import dbr_norm
from krange.errors import (
    InvalidTupleError,
    NotFullValidityError,
    NotInRangeError,
    ZeroDefectError,
)
from krange.generators import bidisk_triplet, random_tuple
from krange.krein import KreinVector, Signature, krein_inner
from krange.solver import (
    convergence_sweep,
    extended_tuple,
    geometric_schedule,
    lambda_min_positive,
    solve_complement,
    solve_exact,
    solve_truncated,
)
from krange.tuples import SignedOperatorTuple, row_apply

PPM = Signature((1, 1, -1))


def diag_tuple():
    z = np.zeros((2, 2))
    return SignedOperatorTuple([np.diag([1.0, 0.5]), z, z], PPM)


def scalar_triplet():
    return SignedOperatorTuple([[[1.0]], [[1.0]], [[1.0]]], PPM)


class TestSolveTruncated:
    def test_diagonal_above_small_eigenvalue(self):
        # eps = 0.7 keeps only the unit eigenvalue: half of u survives
        rep = solve_truncated(diag_tuple(), [1.0, 0.5], 0.7)
        assert rep.residual == pytest.approx(0.5, abs=1e-12)
        assert rep.krein_norm_sq == pytest.approx(1.0, abs=1e-12)
        assert rep.truncated_norm_sq == pytest.approx(1.0, abs=1e-12)
        assert rep.target_norm_sq == pytest.approx(2.0, abs=1e-12)

    def test_diagonal_below_small_eigenvalue(self):
        rep = solve_truncated(diag_tuple(), [1.0, 0.5], 0.3)
        assert rep.residual <= 1e-12
        assert rep.krein_norm_sq == pytest.approx(2.0, abs=1e-12)

    def test_scalar_triplet(self):
        rep = solve_truncated(scalar_triplet(), [1.0], 0.5)
        np.testing.assert_allclose(rep.z.blocks, [[1.0], [1.0], [1.0]], atol=1e-12)
        assert rep.residual <= 1e-12
        assert rep.krein_norm_sq == pytest.approx(1.0, abs=1e-12)

    def test_row_image_is_truncated_target(self):
        # the row map sends z_eps to T x_eps identically
        t = random_tuple(2, 1, 5, seed=21)
        rng = np.random.default_rng(0)
        u = t.defect_sqrt @ (rng.standard_normal(5) + 1j * rng.standard_normal(5))
        for eps in (0.5, 0.2, 0.05):
            rep = solve_truncated(t, u, eps)
            assert rep.krein_norm_sq == pytest.approx(rep.truncated_norm_sq, abs=1e-8)
            assert 0 <= rep.krein_norm_sq <= rep.target_norm_sq + 1e-8

    def test_off_range_target(self):
        t = bidisk_triplet(2)
        u = np.zeros(4)
        u[0] = 1.0  # the constant direction spans ker T
        with pytest.raises(NotInRangeError):
            solve_truncated(t, u, 0.5)

    def test_invalid_tuple(self):
        z = np.zeros((2, 2))
        t = SignedOperatorTuple([z, z, np.eye(2)], PPM)
        with pytest.raises(InvalidTupleError):
            solve_truncated(t, [1.0, 0.0], 0.5)

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(ValueError):
            solve_truncated(diag_tuple(), [1.0, 0.5], 0.0)


class TestSolveExact:
    def test_bidisk_first_monomial(self):
        t = bidisk_triplet(2)
        u = np.zeros(4)
        u[2] = 1.0  # e_(1,0)
        rep = solve_exact(t, u)
        assert rep.residual <= 1e-12
        assert rep.krein_norm_sq == pytest.approx(1.0, abs=1e-10)
        expected0 = np.zeros(4)
        expected0[0] = 1.0  # shifts down to the constant
        np.testing.assert_allclose(rep.z.block(0), expected0, atol=1e-12)
        np.testing.assert_allclose(rep.z.block(1), np.zeros(4), atol=1e-12)
        np.testing.assert_allclose(rep.z.block(2), np.zeros(4), atol=1e-12)

    def test_zero_target(self):
        rep = solve_exact(diag_tuple(), [0.0, 0.0])
        assert rep.residual == 0.0
        assert rep.krein_norm_sq == 0.0
        assert rep.target_norm_sq == 0.0

    def test_matches_pullback_oracle(self):
        t = random_tuple(2, 1, 6, seed=31)
        rng = np.random.default_rng(5)
        u = t.defect_sqrt @ (rng.standard_normal(6) + 1j * rng.standard_normal(6))
        rep = solve_exact(t, u)
        assert rep.residual <= 1e-8 * np.linalg.norm(u)
        oracle = dbr_norm(t.defect_sqrt, u)
        assert rep.krein_norm_sq == pytest.approx(oracle**2, abs=1e-8)

    def test_zero_defect_with_nonzero_target(self):
        z = np.zeros((2, 2))
        t = SignedOperatorTuple([z, z, z], PPM)
        with pytest.raises(ZeroDefectError):
            solve_exact(t, [1.0, 0.0])

    def test_zero_defect_with_zero_target(self):
        z = np.zeros((2, 2))
        t = SignedOperatorTuple([z, z, z], PPM)
        rep = solve_exact(t, [0.0, 0.0])
        assert rep.krein_norm_sq == 0.0 and rep.residual == 0.0

    def test_records_chosen_eps(self):
        t = diag_tuple()
        rep = solve_exact(t, [1.0, 0.5])
        assert rep.eps == pytest.approx(lambda_min_positive(t) / 2)


class TestExtendedTuple:
    def test_defect_is_complementary(self):
        t = random_tuple(2, 1, 4, seed=41, margin=0.4)
        ext = extended_tuple(t)
        np.testing.assert_allclose(ext.defect, np.eye(4) - t.defect, atol=1e-12)
        assert ext.signature.signs == (1, -1, -1, 1)
        assert ext.validation.level == "full"


class TestSolveComplement:
    def test_zero_tuple_complement_is_identity(self):
        z = np.zeros((2, 2))
        t = SignedOperatorTuple([z, z, z], PPM)
        v = np.array([0.3, -0.7])
        rep = solve_complement(t, v)
        assert rep.residual <= 1e-12
        assert rep.krein_norm_sq == pytest.approx(np.linalg.norm(v) ** 2, abs=1e-12)
        np.testing.assert_allclose(rep.z.block(0), v, atol=1e-12)
        for j in range(1, 4):
            np.testing.assert_allclose(rep.z.block(j), np.zeros(2), atol=1e-12)

    def test_bidisk_constant(self):
        # the complement defect is the rank-one projection onto the constant
        t = bidisk_triplet(2)
        v = np.zeros(4)
        v[0] = 1.0
        rep = solve_complement(t, v)
        assert rep.residual <= 1e-8
        assert rep.krein_norm_sq == pytest.approx(1.0, abs=1e-10)

    def test_off_complement_range(self):
        t = bidisk_triplet(2)
        v = np.zeros(4)
        v[1] = 1.0  # orthogonal to the constant, hence off ran(I - D)^(1/2)
        with pytest.raises(NotInRangeError):
            solve_complement(t, v)

    def test_requires_full_validity(self):
        z = np.zeros((2, 2))
        t = SignedOperatorTuple([2 * np.eye(2), z, z], PPM)
        with pytest.raises(NotFullValidityError):
            solve_complement(t, [1.0, 0.0])

    @pytest.mark.parametrize("seed", range(3))
    def test_reproduces_truncated_solve_on_extended_tuple(self, seed):
        # the complement solve is the plain solve against (I, T_1, ..., T_n)
        t = random_tuple(2, 1, 4, seed=1600 + seed, margin=0.4)
        ext = extended_tuple(t)
        rng = np.random.default_rng(seed)
        v = ext.defect_sqrt @ (rng.standard_normal(4) + 1j * rng.standard_normal(4))
        for eps in (0.5, 0.1):
            a = solve_complement(t, v, eps)
            b = solve_truncated(ext, v, eps)
            assert a.krein_norm_sq == b.krein_norm_sq
            assert a.residual == b.residual
            np.testing.assert_array_equal(a.z.blocks, b.z.blocks)

    def test_signed_norm_uses_flipped_signature(self):
        t = random_tuple(2, 1, 3, seed=51, margin=0.4)
        rng = np.random.default_rng(3)
        from krange.dbr import complement_defect

        s = complement_defect(t.defect_sqrt)
        v = s @ (rng.standard_normal(3) + 1j * rng.standard_normal(3))
        rep = solve_complement(t, v)
        w = rep.z
        by_hand = (
            np.linalg.norm(w.block(0)) ** 2
            - np.linalg.norm(w.block(1)) ** 2
            - np.linalg.norm(w.block(2)) ** 2
            + np.linalg.norm(w.block(3)) ** 2
        )
        assert rep.krein_norm_sq == pytest.approx(by_hand, abs=1e-10)
        assert rep.krein_norm_sq == pytest.approx(dbr_norm(s, v) ** 2, abs=1e-8)


class TestConvergenceSweep:
    def test_diagonal_hand_schedule(self):
        sweep = convergence_sweep(diag_tuple(), [1.0, 0.5], [0.7, 0.3, 0.1])
        kreins = [r.krein_norm_sq for r in sweep.reports]
        resids = [r.residual for r in sweep.reports]
        np.testing.assert_allclose(kreins, [1.0, 2.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(resids, [0.5, 0.0, 0.0], atol=1e-12)
        assert sweep.monotone_ok and sweep.final_equality_ok
        assert sweep.cauchy_max_dev <= 1e-8

    def test_single_entry_equals_truncated(self):
        rep = solve_truncated(diag_tuple(), [1.0, 0.5], 0.7)
        sweep = convergence_sweep(diag_tuple(), [1.0, 0.5], [0.7])
        assert sweep.reports[0].krein_norm_sq == rep.krein_norm_sq
        assert sweep.reports[0].residual == rep.residual

    @pytest.mark.parametrize("seed", range(4))
    def test_geometric_sweep_on_random_tuples(self, seed):
        t = random_tuple(2, 1, 5, seed=1100 + seed, margin=0.4)
        rng = np.random.default_rng(seed)
        u = t.defect_sqrt @ (rng.standard_normal(5) + 1j * rng.standard_normal(5))
        schedule = geometric_schedule(1.0, 0.5, 13)
        sweep = convergence_sweep(t, u, schedule)
        assert sweep.monotone_ok
        assert sweep.final_equality_ok
        assert sweep.cauchy_max_dev <= 1e-8
        # signed Cauchy increments are nonnegative
        for prev, cur in zip(sweep.reports, sweep.reports[1:]):
            dz = cur.z - prev.z
            assert krein_inner(dz, dz).real >= -1e-10

    def test_rejects_non_decreasing_schedule(self):
        with pytest.raises(ValueError):
            convergence_sweep(diag_tuple(), [1.0, 0.5], [0.3, 0.7])

    def test_rejects_nonpositive_schedule(self):
        with pytest.raises(ValueError):
            convergence_sweep(diag_tuple(), [1.0, 0.5], [0.7, 0.0])


class TestGeometricSchedule:
    def test_values(self):
        np.testing.assert_allclose(geometric_schedule(0.7, 0.5, 3), [0.7, 0.35, 0.175])

    def test_single_point(self):
        np.testing.assert_allclose(geometric_schedule(0.7, 0.5, 1), [0.7])

    def test_rejects_bad_ratio(self):
        with pytest.raises(ValueError):
            geometric_schedule(0.7, 1.5, 3)
