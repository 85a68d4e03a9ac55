"""Tests for the signed inner-product geometry."""

import numpy as np
import pytest

from krange.errors import (
    DegenerateBasisError,
    EmptySubspaceError,
    NotUniformlyPositiveError,
    ShapeMismatchError,
)
from krange.krein import (
    KreinVector,
    Signature,
    Subspace,
    j_norm_squared,
    krein_inner,
    uniform_positivity_bound,
)

PPM = Signature((1, 1, -1))


def kv(*blocks, signature=PPM):
    return KreinVector(np.array(blocks, dtype=complex), signature)


class TestSignature:
    def test_rejects_bad_entries(self):
        with pytest.raises(ShapeMismatchError):
            Signature((1, 0, -1))

    def test_rejects_empty(self):
        with pytest.raises(ShapeMismatchError):
            Signature(())

    def test_j_diagonal(self):
        np.testing.assert_allclose(PPM.j_diagonal(2), [1, 1, 1, 1, -1, -1])


class TestKreinInner:
    def test_signed_sum(self):
        x = kv([1.0], [1.0], [1.0])
        assert krein_inner(x, x) == pytest.approx(1.0)  # 1 + 1 - 1

    def test_zero_vector(self):
        x = kv([0.0], [0.0], [0.0])
        assert krein_inner(x, x) == 0

    def test_neutral_vector(self):
        sig = Signature((1, -1))
        x = KreinVector(np.array([[1.0], [1.0]]), sig)
        assert krein_inner(x, x) == pytest.approx(0.0)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(0)
        bx = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        by = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        x, y = KreinVector(bx, PPM), KreinVector(by, PPM)
        assert krein_inner(x, y) == pytest.approx(np.conj(krein_inner(y, x)))

    def test_signature_mismatch_raises(self):
        x = kv([1.0], [1.0], [1.0])
        y = KreinVector(np.ones((2, 1)), Signature((1, -1)))
        with pytest.raises(ShapeMismatchError):
            krein_inner(x, y)

    @pytest.mark.parametrize("seed", range(5))
    def test_self_inner_real_and_dominated(self, seed):
        rng = np.random.default_rng(seed)
        x = KreinVector(rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5)), PPM)
        q = krein_inner(x, x)
        assert abs(q.imag) <= 1e-12
        assert abs(q) <= j_norm_squared(x) + 1e-12


class TestJNorm:
    def test_ones(self):
        assert j_norm_squared(kv([1.0], [1.0], [1.0])) == pytest.approx(3.0)

    def test_zero(self):
        assert j_norm_squared(kv([0.0], [0.0], [0.0])) == 0.0

    def test_euclidean(self):
        x = kv([3.0, 4.0], [0.0, 0.0], [0.0, 0.0])
        assert j_norm_squared(x) == pytest.approx(25.0)


class TestStacking:
    def test_round_trip(self):
        x = kv([1.0, 2.0], [3.0, 4.0], [5.0, 6.0])
        y = KreinVector.from_stacked(x.stacked(), PPM)
        np.testing.assert_allclose(y.blocks, x.blocks)

    def test_bad_stacked_length(self):
        with pytest.raises(ShapeMismatchError):
            KreinVector.from_stacked(np.ones(4), PPM)

    def test_immutable(self):
        x = kv([1.0], [1.0], [1.0])
        with pytest.raises(ValueError):
            x.blocks[0, 0] = 2.0


class TestSubspace:
    def test_degenerate_basis_rejected(self):
        b = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
        with pytest.raises(DegenerateBasisError):
            Subspace(b, PPM)

    def test_empty_basis_rejected(self):
        with pytest.raises(EmptySubspaceError):
            Subspace(np.zeros((3, 0)), PPM)

    def test_ambient_must_split_into_blocks(self):
        with pytest.raises(ShapeMismatchError):
            Subspace(np.ones((4, 1)), PPM)


class TestUniformPositivityBound:
    def test_positive_axis(self):
        sub = Subspace(np.array([[1.0], [0.0], [0.0]]), PPM)
        assert uniform_positivity_bound(sub) == pytest.approx(1.0)

    def test_negative_axis(self):
        sub = Subspace(np.array([[0.0], [0.0], [1.0]]), PPM)
        with pytest.raises(NotUniformlyPositiveError) as err:
            uniform_positivity_bound(sub)
        assert err.value.bound == pytest.approx(-1.0)

    @pytest.mark.parametrize("t", [0.0, 0.3, 0.5, 0.9])
    def test_line_formula(self, t):
        # span{(1, 0, t)}: bound is (1 - t^2) / (1 + t^2) by hand
        sub = Subspace(np.array([[1.0], [0.0], [t]]), PPM)
        expected = (1 - t**2) / (1 + t**2)
        got = uniform_positivity_bound(sub)
        assert got == pytest.approx(expected, abs=1e-12)
        # cross-check by scanning the quotient over the (1-dim) span
        rng = np.random.default_rng(1)
        for _ in range(20):
            c = rng.standard_normal() + 1j * rng.standard_normal()
            x = sub.vector([c])
            quotient = krein_inner(x, x).real / j_norm_squared(x)
            assert quotient == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_basis_change_invariance(self, seed):
        rng = np.random.default_rng(400 + seed)
        b = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        b[0] += 10.0  # push toward a positive direction
        sig = Signature((1, -1))
        r = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        r += 3 * np.eye(3)  # keep it invertible
        sub1 = Subspace(b, sig)
        sub2 = Subspace(b @ r, sig)
        try:
            d1 = uniform_positivity_bound(sub1)
        except NotUniformlyPositiveError as err:
            d1 = err.bound
        try:
            d2 = uniform_positivity_bound(sub2)
        except NotUniformlyPositiveError as err:
            d2 = err.bound
        assert d1 == pytest.approx(d2, abs=1e-8)

    @pytest.mark.parametrize("seed", range(3))
    def test_rayleigh_scan_never_below_bound(self, seed):
        rng = np.random.default_rng(500 + seed)
        b = np.vstack([np.eye(4) + 0.1 * rng.standard_normal((4, 4)), 0.2 * rng.standard_normal((2, 4))])
        sig = Signature((1, 1, -1))
        b = b[: 6 - 0]  # ambient 6 = 3 blocks of 2
        sub = Subspace(b, sig)
        delta = uniform_positivity_bound(sub)
        samples = rng.standard_normal((4, 2000)) + 1j * rng.standard_normal((4, 2000))
        vecs = sub.basis @ samples
        jdiag = sub.j_diagonal()
        signed = np.einsum("is,i,is->s", vecs.conj(), jdiag, vecs).real
        plain = np.linalg.norm(vecs, axis=0) ** 2
        quotients = signed / plain
        assert quotients.min() >= delta - 1e-10
        assert quotients.min() <= delta + 0.05  # the scan approaches the bound
