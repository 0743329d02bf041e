"""Truncated bosonic Fock-space operators.

Ladder operators, number and quadrature operators, and the displacement
operator in two constructions: the matrix exponential of the truncated
generator (exactly unitary at every cutoff) and the closed-form
infinite-space matrix elements (unitary only in the cutoff -> infinity
limit).  The zero-point amplitude of a concrete mode is *not* baked into
the quadrature; one operator serves all modes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .linalg import BasisLabel, OperatorMatrix, matrix_function

DISPLACEMENT_METHODS = ("truncated_generator", "analytic")

# Magnitudes below this are flushed to exact zero in the analytic
# displacement; they are far below double-precision resolution anyway.
_FLUSH = 1e-300


@dataclass(frozen=True)
class FockBasis:
    """Photon-number basis |0> .. |cutoff|, dimension cutoff + 1."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError(f"cutoff must be >= 0, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def label(self) -> BasisLabel:
        return BasisLabel(tls_dim=1, fock_cutoff=self.cutoff)


def annihilation(basis: FockBasis) -> OperatorMatrix:
    """Lowering operator: a[n-1, n] = sqrt(n)."""
    n = np.arange(1, basis.dim)
    return OperatorMatrix(np.diag(np.sqrt(n.astype(float)), k=1), basis.label)


def creation(basis: FockBasis) -> OperatorMatrix:
    """Raising operator, the conjugate transpose of :func:`annihilation`."""
    return annihilation(basis).dagger()


def number_operator(basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.arange(basis.dim, dtype=float)), basis.label)


def quadrature(basis: FockBasis) -> OperatorMatrix:
    """Field quadrature a + a^dagger (tridiagonal, Hermitian)."""
    a = annihilation(basis).matrix
    return OperatorMatrix(a + a.conj().T, basis.label)


def displacement(
    basis: FockBasis, alpha: complex, method: str = "truncated_generator"
) -> OperatorMatrix:
    """Displacement operator D(alpha) = exp(alpha a^dag - alpha* a).

    method="truncated_generator"
        Matrix exponential of the truncated generator, evaluated through the
        spectral decomposition of the Hermitian operator -i(alpha a^dag -
        alpha* a).  Exactly unitary in the truncated space.
    method="analytic"
        Closed-form matrix elements of the infinite-space operator
        (associated-Laguerre expression).  Columns are sub-normalized at
        finite cutoff and converge to unit norm as the cutoff grows.
    """
    if method not in DISPLACEMENT_METHODS:
        raise ValueError(
            f"unknown displacement method {method!r}; "
            f"expected one of {DISPLACEMENT_METHODS}"
        )
    alpha = complex(alpha)
    if alpha == 0:
        return OperatorMatrix(np.eye(basis.dim), basis.label)
    if method == "truncated_generator":
        a = annihilation(basis).matrix
        herm = -1j * (alpha * a.conj().T - np.conj(alpha) * a)
        d = matrix_function(herm, lambda w: np.exp(1j * w))
        return d.with_basis(basis.label)
    return OperatorMatrix(_analytic_displacement(basis.dim, alpha), basis.label)


def _analytic_displacement(dim: int, alpha: complex) -> np.ndarray:
    """<m|D(alpha)|n> from the associated-Laguerre closed form.

    For m = n + k, k >= 0:
        sqrt(n!/m!) alpha^k exp(-|alpha|^2/2) L_n^{(k)}(|alpha|^2)
    and the m < n entries follow from D(alpha)^dag = D(-alpha).  Each
    diagonal k is generated by upward recurrence in the polynomial degree,
    pre-scaled by the sqrt-factorial weight so intermediates stay at the
    magnitude of the final entries (all <= 1).
    """
    x = abs(alpha) ** 2
    log_abs = np.log(abs(alpha))
    phase = alpha / abs(alpha)
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        m_count = dim - k
        # A_n = sqrt(n!/(n+k)!) |alpha|^k e^{-x/2} L_n^{(k)}(x), built by the
        # weighted three-term recurrence
        #   A_n = [(2n-1+k-x) A_{n-1} - sqrt((n-1)(n+k-1)) A_{n-2}] / sqrt(n(n+k))
        vals = np.zeros(m_count)
        a0 = np.exp(k * log_abs - x / 2.0 - 0.5 * gammaln(k + 1))
        vals[0] = a0
        if m_count > 1:
            vals[1] = a0 * (1.0 + k - x) / np.sqrt(k + 1.0)
        for n in range(2, m_count):
            vals[n] = (
                (2 * n - 1 + k - x) * vals[n - 1]
                - np.sqrt((n - 1) * (n + k - 1.0)) * vals[n - 2]
            ) / np.sqrt(n * (n + k))
        vals[np.abs(vals) < _FLUSH] = 0.0
        lower = vals * phase**k
        rows = np.arange(m_count) + k
        cols = np.arange(m_count)
        out[rows, cols] = lower
        if k > 0:
            # <m|D|n> for m < n via D(alpha)^dag = D(-alpha)
            out[cols, rows] = np.conj(lower) * (-1.0) ** k
    return out
