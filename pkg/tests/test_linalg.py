import math

import numpy as np
import pytest

from diagdiscord import linalg as la
from diagdiscord.errors import (
    InvalidP,
    NotDensityMatrix,
    NotHermitian,
    OutOfRange,
    SupportViolation,
)
from helpers import random_density, random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


class TestHermitianEig:
    def test_identity_is_fully_degenerate(self):
        dec = la.hermitian_eig(np.eye(2, dtype=complex))
        assert dec.eigenvalues == pytest.approx([1.0, 1.0])
        assert dec.min_gap == 0.0
        assert dec.degenerate_blocks == ((0, 2),)

    def test_diagonal_matrix(self):
        dec = la.hermitian_eig(np.diag([0.2, 0.8]).astype(complex))
        assert dec.eigenvalues == pytest.approx([0.2, 0.8])
        assert abs(dec.eigenvectors[0, 0]) == pytest.approx(1.0)
        assert abs(dec.eigenvectors[1, 1]) == pytest.approx(1.0)
        assert dec.min_gap == pytest.approx(0.6)
        assert dec.degenerate_blocks == ()

    def test_pauli_x(self):
        dec = la.hermitian_eig(PAULI_X)
        assert dec.eigenvalues == pytest.approx([-1.0, 1.0])
        minus = np.array([1.0, -1.0]) / math.sqrt(2)
        plus = np.array([1.0, 1.0]) / math.sqrt(2)
        assert abs(minus.conj() @ dec.eigenvectors[:, 0]) == pytest.approx(1.0)
        assert abs(plus.conj() @ dec.eigenvectors[:, 1]) == pytest.approx(1.0)

    def test_phase_convention_largest_entry_real_positive(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            m = random_hermitian(rng, 4)
            dec = la.hermitian_eig(m)
            for k in range(4):
                col = dec.eigenvectors[:, k]
                pivot = col[int(np.argmax(np.abs(col)))]
                assert pivot.imag == pytest.approx(0.0, abs=1e-12)
                assert pivot.real > 0

    def test_not_hermitian_raises(self):
        with pytest.raises(NotHermitian):
            la.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_nan_raises(self):
        with pytest.raises(NotHermitian):
            la.hermitian_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    @pytest.mark.parametrize("d", [2, 3, 4, 6, 8, 9])
    def test_roundtrip_invariant(self, d):
        rng = np.random.default_rng(d)
        for _ in range(1000 // 6):
            m = random_hermitian(rng, d)
            dec = la.hermitian_eig(m)
            v = dec.eigenvectors
            assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-12
            recon = (v * dec.eigenvalues) @ v.conj().T
            assert np.max(np.abs(recon - m)) < 1e-10

    def test_deterministic_for_identical_bits(self):
        rng = np.random.default_rng(42)
        m = random_hermitian(rng, 5)
        d1 = la.hermitian_eig(m.copy())
        d2 = la.hermitian_eig(m.copy())
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)

    def test_min_gap_smallest_consecutive_difference(self):
        dec = la.hermitian_eig(np.diag([0.1, 0.4, 0.45]).astype(complex))
        assert dec.min_gap == pytest.approx(0.05)


class TestVonNeumannEntropy:
    def test_pure_state(self):
        assert la.von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0

    def test_maximally_mixed_qubit(self):
        assert la.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)

    def test_quarter_three_quarter(self):
        # independent evaluation of -sum lambda log2 lambda
        assert la.von_neumann_entropy(np.diag([0.25, 0.75])) == pytest.approx(
            0.8112781244591328, abs=1e-14
        )

    def test_additivity(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            a = random_density(rng, 3)
            b = random_density(rng, 2)
            joint = la.von_neumann_entropy(np.kron(a, b))
            assert joint == pytest.approx(
                la.von_neumann_entropy(a) + la.von_neumann_entropy(b), abs=1e-10
            )

    def test_range(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            s = la.von_neumann_entropy(random_density(rng, 4))
            assert 0.0 <= s <= 2.0 + 1e-12

    def test_rejects_bad_trace(self):
        with pytest.raises(NotDensityMatrix):
            la.von_neumann_entropy(np.diag([0.5, 0.6]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotDensityMatrix):
            la.von_neumann_entropy(np.diag([1.1, -0.1]))


class TestRelativeEntropy:
    def test_identical_arguments(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, 3)
        assert la.relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_pure_vs_maximally_mixed(self):
        assert la.relative_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_classical_pair(self):
        # 0.3 log2(0.6) + 0.7 log2(1.4), evaluated independently
        got = la.relative_entropy(np.diag([0.3, 0.7]), np.diag([0.5, 0.5]))
        assert got == pytest.approx(0.11870910076930738, abs=1e-14)

    def test_klein_inequality(self):
        rng = np.random.default_rng(4)
        for d in (2, 3, 4):
            for _ in range(1000 // 3):
                assert la.relative_entropy(random_density(rng, d), random_density(rng, d)) >= 0.0

    def test_support_violation(self):
        with pytest.raises(SupportViolation):
            la.relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0]))


class TestSchattenNorm:
    def test_identity_trace_norm(self):
        assert la.schatten_norm(np.eye(5), 1) == pytest.approx(5.0)

    def test_unitary_operator_norm(self):
        rng = np.random.default_rng(5)
        from helpers import haar

        assert la.schatten_norm(haar(rng, 4), math.inf) == pytest.approx(1.0)

    def test_frobenius(self):
        assert la.schatten_norm(np.diag([3.0, -4.0]), 2) == pytest.approx(5.0)

    def test_invalid_p(self):
        with pytest.raises(InvalidP):
            la.schatten_norm(np.eye(2), 0.5)

    def test_norm_monotone_in_p(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            values = [la.schatten_norm(m, p) for p in (1, 1.5, 2, 3, math.inf)]
            for lo, hi in zip(values[1:], values[:-1]):
                assert lo <= hi + 1e-12

    def test_zero_matrix(self):
        assert la.schatten_norm(np.zeros((3, 3)), 2) == 0.0


class TestBinaryEntropy:
    def test_endpoints(self):
        assert la.binary_entropy(0.0) == 0.0
        assert la.binary_entropy(1.0) == 0.0

    def test_symmetric_maximum(self):
        assert la.binary_entropy(0.5) == pytest.approx(1.0)

    def test_point_one(self):
        assert la.binary_entropy(0.1) == pytest.approx(0.4689955935892812, abs=1e-14)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            la.binary_entropy(1.5)
        with pytest.raises(OutOfRange):
            la.binary_entropy(-0.1)


class TestKron:
    def test_identity(self):
        assert np.array_equal(la.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_projector_times_identity(self):
        e11 = np.diag([1.0, 0.0])
        assert np.array_equal(la.kron(e11, np.eye(2)), np.diag([1.0, 1.0, 0.0, 0.0]))

    def test_x_tensor_z(self):
        z = np.diag([1.0, -1.0])
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 2], expected[1, 3] = 1.0, -1.0
        expected[2, 0], expected[3, 1] = 1.0, -1.0
        assert np.array_equal(la.kron(PAULI_X, z), expected)

    def test_mixed_product_property(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
            lhs = la.kron(a, b) @ la.kron(c, d)
            rhs = la.kron(a @ c, b @ d)
            assert np.max(np.abs(lhs - rhs)) < 1e-12
