import numpy as np
import pytest

from gqrm.linalg import (
    BasisLabel,
    HermiticityError,
    OperatorMatrix,
    eig_hermitian,
    identity,
    kron,
    matrix_function,
)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2.0


class TestOperatorMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            OperatorMatrix(np.zeros((2, 3)))

    def test_basis_dimension_must_match(self):
        with pytest.raises(ValueError, match="dimension"):
            OperatorMatrix(np.eye(3), BasisLabel(tls_dim=2, fock_cutoff=2))
        op = OperatorMatrix(np.eye(6), BasisLabel(tls_dim=2, fock_cutoff=2))
        assert op.dim == 6

    def test_matrix_is_frozen(self):
        op = OperatorMatrix(np.eye(2))
        with pytest.raises(ValueError):
            op.matrix[0, 0] = 5.0

    def test_hermiticity_defect(self):
        op = OperatorMatrix(np.array([[0.0, 1.0], [1.0 + 1e-3, 0.0]]))
        assert op.hermiticity_defect() == pytest.approx(1e-3)
        assert not op.is_hermitian()

    def test_arithmetic(self):
        a = OperatorMatrix(np.array([[0, 1], [1, 0]], dtype=complex))
        b = OperatorMatrix(np.diag([1.0, -1.0]))
        assert np.allclose((a @ b).matrix, [[0, -1], [1, 0]])
        assert np.allclose((a + b - b).matrix, a.matrix)
        assert np.allclose((2.0 * a).matrix, 2 * a.matrix)
        assert np.allclose((-a).matrix, -a.matrix)
        assert np.allclose(a.dagger().matrix, a.matrix)


class TestEigHermitian:
    def test_diagonal_case(self):
        dec = eig_hermitian(OperatorMatrix(np.diag([3.0, 1.0, 2.0])))
        assert np.allclose(dec.eigenvalues, [1.0, 2.0, 3.0])

    def test_pauli_x_closed_form(self):
        dec = eig_hermitian(OperatorMatrix(np.array([[0, 1], [1, 0]], dtype=complex)))
        assert np.allclose(dec.eigenvalues, [-1.0, 1.0])
        # eigenvectors (|0> -+ |1>)/sqrt(2) up to phase
        for col, sign in ((0, -1.0), (1, 1.0)):
            v = dec.eigenvectors[:, col]
            v = v / v[0]
            assert np.allclose(v, [1.0, sign])

    def test_reconstruction_random_8x8(self, rng):
        m = random_hermitian(rng, 8)
        dec = eig_hermitian(m)
        spread = dec.eigenvalues[-1] - dec.eigenvalues[0]
        assert np.max(np.abs(dec.reconstruct() - m)) < 1e-10 * spread

    @pytest.mark.parametrize("dim", [2, 16, 128, 512])
    def test_reconstruction_up_to_512(self, rng, dim):
        m = random_hermitian(rng, dim)
        dec = eig_hermitian(m)
        spread = dec.eigenvalues[-1] - dec.eigenvalues[0]
        assert np.max(np.abs(dec.reconstruct() - m)) < 1e-10 * spread
        v = dec.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < 1e-10

    def test_ascending_order(self, rng):
        w = eig_hermitian(random_hermitian(rng, 40)).eigenvalues
        assert np.all(np.diff(w) >= 0)

    def test_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.5, 0.0]])
        with pytest.raises(HermiticityError) as err:
            eig_hermitian(m)
        assert err.value.defect > 0

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            eig_hermitian(np.zeros((2, 3)))


class TestKron:
    def test_identity(self):
        out = kron(identity(2), identity(3))
        assert np.array_equal(out.matrix, np.eye(6))

    def test_diagonal_product(self):
        sz = OperatorMatrix(np.diag([1.0, -1.0]))
        d = OperatorMatrix(np.diag([0.0, 1.0, 2.0]))
        assert np.array_equal(np.diag(kron(sz, d).matrix).real, [0, 1, 2, 0, -1, -2])

    def test_square_identity(self, rng):
        # (sigma_x (x) B)^2 == I2 (x) B^2
        sx = OperatorMatrix(np.array([[0, 1], [1, 0]], dtype=complex))
        b = OperatorMatrix(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        lhs = kron(sx, b) @ kron(sx, b)
        rhs = kron(identity(2), b @ b)
        assert np.allclose(lhs.matrix, rhs.matrix, atol=1e-14)

    def test_associative_exact_for_representable_products(self, rng):
        # fp multiplication reorders exactly only when products are exact;
        # integer entries keep kron associativity bit-for-bit
        a = OperatorMatrix(rng.integers(-9, 9, size=(2, 2)).astype(float))
        b = OperatorMatrix(rng.integers(-9, 9, size=(3, 3)).astype(float))
        c = OperatorMatrix(rng.integers(-9, 9, size=(2, 2)).astype(float))
        assert np.array_equal(kron(kron(a, b), c).matrix, kron(a, kron(b, c)).matrix)

    def test_associative_to_rounding_for_floats(self, rng):
        a = OperatorMatrix(rng.normal(size=(2, 2)))
        b = OperatorMatrix(rng.normal(size=(3, 3)))
        c = OperatorMatrix(rng.normal(size=(2, 2)))
        lhs = kron(kron(a, b), c).matrix
        rhs = kron(a, kron(b, c)).matrix
        assert np.allclose(lhs, rhs, rtol=1e-15, atol=0.0)

    def test_label_derivation(self):
        tls = OperatorMatrix(np.eye(2), BasisLabel(2, 0))
        fock = OperatorMatrix(np.eye(5), BasisLabel(1, 4))
        assert kron(tls, fock).basis == BasisLabel(tls_dim=2, fock_cutoff=4)
        assert kron(fock, fock).basis == BasisLabel(tls_dim=1, fock_cutoff=24)
        assert kron(tls, OperatorMatrix(np.eye(5))).basis is None


class TestMatrixFunction:
    def test_cos_of_zero_matrix(self):
        out = matrix_function(OperatorMatrix(np.zeros((4, 4))), np.cos)
        assert np.allclose(out.matrix, np.eye(4))

    def test_exp_diagonal(self):
        out = matrix_function(OperatorMatrix(np.diag([0.0, np.log(2.0)])), np.exp)
        assert np.allclose(np.diag(out.matrix).real, [1.0, 2.0])

    def test_pythagorean_identity(self, rng):
        m = random_hermitian(rng, 12)
        c = matrix_function(m, np.cos).matrix
        s = matrix_function(m, np.sin).matrix
        assert np.max(np.abs(c @ c + s @ s - np.eye(12))) < 1e-12

    def test_identity_map_round_trip(self, rng):
        m = random_hermitian(rng, 24)
        out = matrix_function(m, lambda w: w)
        assert np.max(np.abs(out.matrix - m)) < 1e-12 * np.max(np.abs(m))

    def test_scalar_callable_accepted(self):
        import math

        out = matrix_function(OperatorMatrix(np.diag([1.0, 4.0])), math.sqrt)
        assert np.allclose(np.diag(out.matrix).real, [1.0, 2.0])
