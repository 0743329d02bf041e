import numpy as np
import pytest
from scipy.special import roots_hermite

from gqrm.fock import (
    FockBasis,
    annihilation,
    creation,
    displacement,
    number_operator,
    quadrature,
)
from gqrm.linalg import eig_hermitian


class TestLadderOperators:
    def test_single_excitation(self):
        a = annihilation(FockBasis(1)).matrix
        assert np.array_equal(a, [[0, 1], [0, 0]])

    def test_creation_is_dagger(self):
        b = FockBasis(12)
        assert np.array_equal(creation(b).matrix, annihilation(b).matrix.conj().T)

    def test_vacuum_annihilation(self):
        a = annihilation(FockBasis(5)).matrix
        vac = np.zeros(6)
        vac[0] = 1.0
        assert np.array_equal(a @ vac, np.zeros(6))

    def test_commutator_corner_defect(self):
        # [a, a+] = 1 except the corner entry, which is -N
        n = 3
        a = annihilation(FockBasis(n)).matrix
        comm = a @ a.conj().T - a.conj().T @ a
        expected = np.eye(n + 1)
        expected[n, n] = -n
        assert np.allclose(comm, expected, atol=1e-14)

    def test_number_operator(self):
        b = FockBasis(7)
        a = annihilation(b).matrix
        assert np.allclose(a.conj().T @ a, number_operator(b).matrix)

    def test_negative_cutoff_rejected(self):
        with pytest.raises(ValueError, match="cutoff"):
            FockBasis(-1)


class TestQuadrature:
    def test_pauli_x_structure_at_cutoff_one(self):
        assert np.array_equal(quadrature(FockBasis(1)).matrix, [[0, 1], [1, 0]])

    def test_hermitian_by_construction(self):
        assert quadrature(FockBasis(60)).hermiticity_defect() == 0.0

    def test_vacuum_fluctuation(self):
        q = quadrature(FockBasis(4)).matrix
        assert (q @ q)[0, 0] == pytest.approx(1.0)

    def test_eigenvalues_are_gauss_hermite_nodes(self):
        # the truncated quadrature's spectrum is exactly sqrt(2) times the
        # zeros of the Hermite polynomial of the next order
        n = 40
        w = eig_hermitian(quadrature(FockBasis(n))).eigenvalues
        nodes = np.sqrt(2.0) * roots_hermite(n + 1)[0]
        assert np.max(np.abs(w - nodes)) < 1e-10

    def test_extreme_eigenvalue_asymptotics(self):
        # leading asymptotics 2 sqrt(N); the relative deficit shrinks like
        # N^(-2/3) and is ~8% at N=40, inside 5% from N~100 on
        for n, tol in ((40, 0.10), (100, 0.05)):
            w = eig_hermitian(quadrature(FockBasis(n))).eigenvalues
            assert abs(w[-1] - 2.0 * np.sqrt(n)) < tol * 2.0 * np.sqrt(n)


class TestDisplacement:
    def test_identity_at_zero_both_methods(self):
        for method in ("truncated_generator", "analytic"):
            d = displacement(FockBasis(9), 0.0, method=method)
            assert np.array_equal(d.matrix, np.eye(10))

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="unknown displacement method"):
            displacement(FockBasis(3), 1.0, method="pade")

    def test_unitarity_truncated_generator(self):
        d = displacement(FockBasis(30), 0.7j).matrix
        assert np.max(np.abs(d @ d.conj().T - np.eye(31))) < 1e-12

    @pytest.mark.parametrize("alpha", [0.3, 1.7j, 2.0 - 1.5j, 5.0])
    @pytest.mark.parametrize("cutoff", [8, 33, 120])
    def test_inverse_property(self, alpha, cutoff):
        d_plus = displacement(FockBasis(cutoff), alpha).matrix
        d_minus = displacement(FockBasis(cutoff), -alpha).matrix
        assert np.max(np.abs(d_plus @ d_minus - np.eye(cutoff + 1))) < 1e-12

    def test_analytic_matches_generator_on_core_block(self):
        n = 120
        dg = displacement(FockBasis(n), 1.3j).matrix
        da = displacement(FockBasis(n), 1.3j, method="analytic").matrix
        assert np.max(np.abs(dg[:20, :20] - da[:20, :20])) < 1e-8

    def test_analytic_small_entries_closed_form(self):
        alpha = 0.7 + 0.3j
        x = abs(alpha) ** 2
        d = displacement(FockBasis(6), alpha, method="analytic").matrix
        pref = np.exp(-x / 2.0)
        assert d[0, 0] == pytest.approx(pref)
        assert d[1, 0] == pytest.approx(alpha * pref)
        assert d[0, 1] == pytest.approx(-np.conj(alpha) * pref)
        assert d[1, 1] == pytest.approx((1.0 - x) * pref)

    def test_analytic_column_norms_monotone_to_one(self):
        # truncated columns of the infinite-space operator: norms only grow
        alpha = 2.5j
        col = 10
        norms = []
        for cutoff in (12, 16, 24, 40, 80):
            d = displacement(FockBasis(cutoff), alpha, method="analytic").matrix
            norms.append(np.linalg.norm(d[:, col]))
        assert all(b >= a - 1e-14 for a, b in zip(norms, norms[1:]))
        assert norms[0] < 1.0
        assert norms[-1] == pytest.approx(1.0, abs=1e-10)

    def test_analytic_underflow_flushed(self):
        # far-off-diagonal entries of a small displacement underflow to 0
        d = displacement(FockBasis(400), 0.5j, method="analytic").matrix
        assert d[399, 0] == 0.0
        assert np.all(np.isfinite(d))
