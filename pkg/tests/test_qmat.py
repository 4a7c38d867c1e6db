import math

import numpy as np
import pytest

from naqi import qmat
from naqi.sampling import random_bloch_vector, random_mixed_state


def kron_oracle(a, b):
    """Index-formula Kronecker product: K[i*db+k, j*db+l] = A[i,j] B[k,l]."""
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for ell in range(db):
                    out[i * db + k, j * db + ell] = a[i, j] * b[k, ell]
    return out


class TestTensor:
    def test_identity(self):
        assert np.array_equal(qmat.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_computational_basis_bookkeeping(self):
        zero = np.diag([1.0, 0.0]).astype(complex)
        one = np.diag([0.0, 1.0]).astype(complex)
        assert np.array_equal(qmat.tensor(zero, one), np.diag([0, 1, 0, 0]).astype(complex))

    def test_pauli_product_against_index_oracle(self):
        got = qmat.tensor(qmat.SIGMA_X, qmat.SIGMA_Y)
        assert np.abs(got - kron_oracle(qmat.SIGMA_X, qmat.SIGMA_Y)).max() == 0.0

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="exceeds"):
            qmat.tensor(np.eye(4), np.eye(4))


def contraction_oracle(rho8, keep):
    """Direct index contraction over an 8x8 three-qubit matrix."""
    r = rho8.reshape(2, 2, 2, 2, 2, 2)
    traced = [i for i in range(3) if i not in keep]
    assert len(traced) == 1
    t = traced[0]
    out = np.zeros((4, 4), dtype=complex)
    for idx in np.ndindex(2, 2, 2, 2, 2, 2):
        row, col = idx[:3], idx[3:]
        if row[t] != col[t]:
            continue
        ri = 2 * row[keep[0]] + row[keep[1]]
        ci = 2 * col[keep[0]] + col[keep[1]]
        out[ri, ci] += r[idx]
    return out


class TestPartialTrace:
    def test_bell_marginal(self):
        phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        rho = np.outer(phi, phi.conj())
        red = qmat.partial_trace(rho, keep=[1], dims=[2, 2])
        assert np.abs(red - np.eye(2) / 2).max() < 1e-12

    def test_product_state(self):
        rng = np.random.default_rng(1)
        rho_a = random_mixed_state(2, rng)
        rho_b = random_mixed_state(2, rng)
        red = qmat.partial_trace(qmat.tensor(rho_a, rho_b), keep=[1], dims=[2, 2])
        assert np.abs(red - rho_b).max() < 1e-12

    def test_three_qubit_against_contraction_oracle(self):
        alpha, beta = 0.7, 2.1
        vec = np.zeros(8, dtype=complex)
        vec[0b000] = math.cos(alpha)
        vec[0b101] = math.sin(alpha) * math.cos(beta)
        vec[0b110] = math.sin(alpha) * math.sin(beta)
        rho = np.outer(vec, vec.conj())
        for keep in ([0, 1], [0, 2], [1, 2]):
            got = qmat.partial_trace(rho, keep=keep, dims=[2, 2, 2])
            assert np.abs(got - contraction_oracle(rho, keep)).max() < 1e-12

    def test_inconsistent_dims_rejected(self):
        with pytest.raises(ValueError, match="dims"):
            qmat.partial_trace(np.eye(4) / 4, keep=[0], dims=[2, 3])

    def test_unsorted_keep_rejected(self):
        rho = np.eye(8) / 8
        with pytest.raises(ValueError, match="increasing"):
            qmat.partial_trace(rho, keep=[2, 0], dims=[2, 2, 2])


class TestBlochConversion:
    def test_north_pole(self):
        rho = qmat.bloch_to_density(np.array([0.0, 0.0, 1.0]))
        assert np.abs(rho - np.diag([1.0, 0.0])).max() < 1e-15

    def test_origin(self):
        rho = qmat.bloch_to_density(np.zeros(3))
        assert np.abs(rho - np.eye(2) / 2).max() < 1e-15

    def test_bound_saturating_state(self):
        n = np.array([1.0, 2.0, 0.0]) / math.sqrt(5)
        rho = qmat.bloch_to_density(n)
        expected = 0.5 * np.array(
            [[1.0, n[0] - 1j * n[1]], [n[0] + 1j * n[1], 1.0]], dtype=complex
        )
        assert np.abs(rho - expected).max() < 1e-15
        assert np.abs(qmat.density_to_bloch(rho) - n).max() < 1e-15

    def test_round_trip_random(self):
        rng = np.random.default_rng(2)
        for _ in range(10_000):
            n = random_bloch_vector(rng)
            back = qmat.density_to_bloch(qmat.bloch_to_density(n))
            assert np.abs(back - n).max() < 1e-12

    def test_overlong_vector_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            qmat.bloch_to_density(np.array([1.0, 1.0, 0.0]))


class TestPauliDecompose:
    def test_bell_state(self):
        phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        form = qmat.pauli_decompose(np.outer(phi, phi.conj()))
        assert np.abs(form.r).max() < 1e-12
        assert np.abs(form.s).max() < 1e-12
        assert np.abs(form.T - np.diag([1.0, -1.0, 1.0])).max() < 1e-12

    def test_werner_by_linearity(self):
        p = 0.37
        phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        rho = p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(4) / 4
        form = qmat.pauli_decompose(rho)
        assert np.abs(form.T - p * np.diag([1.0, -1.0, 1.0])).max() < 1e-12

    def test_maximally_mixed(self):
        form = qmat.pauli_decompose(np.eye(4) / 4)
        assert np.abs(form.r).max() < 1e-14
        assert np.abs(form.s).max() < 1e-14
        assert np.abs(form.T).max() < 1e-14

    def test_reconstruction_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            rho = random_mixed_state(4, rng)
            back = qmat.pauli_reconstruct(qmat.pauli_decompose(rho))
            assert np.abs(back - rho).max() < 1e-9


def charpoly_eigenvalue_oracle(h):
    """Roots of the characteristic polynomial via the companion matrix."""
    coeffs = np.poly(h)
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


class TestHermitianEigenvalues:
    def test_maximally_mixed(self):
        assert np.allclose(qmat.hermitian_eigenvalues(np.eye(2) / 2), [0.5, 0.5])

    def test_qubit_spectrum(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            n = random_bloch_vector(rng)
            r = np.linalg.norm(n)
            eigs = qmat.hermitian_eigenvalues(qmat.bloch_to_density(n))
            assert np.abs(eigs - [(1 + r) / 2, (1 - r) / 2]).max() < 1e-12

    def test_4x4_against_charpoly_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            h = (z + z.conj().T) / 2
            got = qmat.hermitian_eigenvalues(h)
            assert np.abs(got - charpoly_eigenvalue_oracle(h)).max() < 1e-9

    def test_eigenvalue_sum_is_trace(self):
        rng = np.random.default_rng(6)
        for dim in (2, 4, 8):
            for _ in range(50):
                rho = random_mixed_state(dim, rng)
                eigs = qmat.hermitian_eigenvalues(rho)
                assert abs(eigs.sum() - np.trace(rho).real) < 1e-10

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            qmat.hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestValidateState:
    def test_maximally_mixed_clean(self):
        diag = qmat.validate_state(np.eye(2) / 2)
        assert diag.ok
        assert diag.hermiticity_defect == 0.0
        assert diag.trace_defect < 1e-15
        assert diag.min_eigenvalue >= 0.5 - 1e-12

    def test_psd_failure_flagged(self):
        diag = qmat.validate_state(np.diag([1.5, -0.5]).astype(complex))
        assert not diag.ok
        assert diag.min_eigenvalue < -0.4

    def test_bell_mixture_passes(self):
        p = 0.3
        phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        psi = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
        rho = p * np.outer(phi, phi.conj()) + (1 - p) * np.outer(psi, psi.conj())
        assert qmat.validate_state(rho).ok

    def test_constructor_symmetrizes_once(self):
        noisy = np.eye(2, dtype=complex) / 2
        noisy[0, 1] = 1e-10 * 1j
        rho = qmat.density_matrix(noisy)
        assert qmat.hermiticity_defect(rho) < 1e-15

    def test_constructor_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            qmat.density_matrix(np.eye(2, dtype=complex))


class TestComposedInvariants:
    def test_partial_trace_of_tensor(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            rho_a = random_mixed_state(2, rng)
            rho_b = random_mixed_state(2, rng)
            red = qmat.partial_trace(qmat.tensor(rho_a, rho_b), keep=[1], dims=[2, 2])
            assert np.abs(red - rho_b).max() < 1e-12

    def test_swap_parties(self):
        rng = np.random.default_rng(8)
        rho_a = random_mixed_state(2, rng)
        rho_b = random_mixed_state(2, rng)
        swapped = qmat.swap_parties(qmat.tensor(rho_a, rho_b))
        assert np.abs(swapped - qmat.tensor(rho_b, rho_a)).max() < 1e-12
