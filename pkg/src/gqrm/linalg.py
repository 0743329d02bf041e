"""Dense complex linear algebra substrate: labeled operators, Hermitian
eigendecomposition, tensor products, and matrix functions.

Every operator in the package (Pauli matrices, Fock-space ladder operators,
Hamiltonians, unitaries) is carried as an :class:`OperatorMatrix`, a dense
square complex matrix with an optional tensor-product basis label.  The
factor order of labeled operators is fixed: two-level system first, then the
truncated boson mode.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np


class HermiticityError(ValueError):
    """Input matrix is too far from Hermitian for a Hermitian eigensolve."""

    def __init__(self, defect: float, tol: float):
        self.defect = defect
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: relative defect {defect:.3e} exceeds "
            f"tolerance {tol:.3e}"
        )


@dataclass(frozen=True)
class BasisLabel:
    """Tensor-product basis tag: TLS factor (dim 1 or 2) times Fock factor."""

    tls_dim: int
    fock_cutoff: int

    def __post_init__(self):
        if self.tls_dim not in (1, 2):
            raise ValueError(f"tls_dim must be 1 or 2, got {self.tls_dim}")
        if self.fock_cutoff < 0:
            raise ValueError(f"fock_cutoff must be >= 0, got {self.fock_cutoff}")

    @property
    def dim(self) -> int:
        return self.tls_dim * (self.fock_cutoff + 1)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense square complex matrix, optionally tagged with its product basis.

    The wrapped array is copied on construction and frozen; instances are
    safe to share between threads.  Arithmetic operators delegate to numpy
    and keep the basis label only when it is unambiguous.
    """

    matrix: np.ndarray
    basis: Optional[BasisLabel] = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, order="C")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
        if self.basis is not None and self.basis.dim != m.shape[0]:
            raise ValueError(
                f"basis label dimension {self.basis.dim} does not match "
                f"matrix dimension {m.shape[0]}"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, self.basis)

    def hermiticity_defect(self) -> float:
        """Max entrywise |M - M^dagger|, the Hermiticity diagnostic."""
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        scale = float(np.max(np.abs(self.matrix))) or 1.0
        return self.hermiticity_defect() <= tol * scale

    def with_basis(self, basis: Optional[BasisLabel]) -> "OperatorMatrix":
        return replace(self, basis=basis)

    def _merged_basis(self, other: "OperatorMatrix") -> Optional[BasisLabel]:
        return self.basis if self.basis == other.basis else None

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.matrix + other.matrix, self._merged_basis(other))

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.matrix - other.matrix, self._merged_basis(other))

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix * scalar, self.basis)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(-self.matrix, self.basis)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.matrix @ other.matrix, self._merged_basis(other))


MatrixLike = Union[OperatorMatrix, np.ndarray]


def _as_array(op: MatrixLike) -> np.ndarray:
    if isinstance(op, OperatorMatrix):
        return op.matrix
    m = np.asarray(op, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
    return m


def _basis_of(op: MatrixLike) -> Optional[BasisLabel]:
    return op.basis if isinstance(op, OperatorMatrix) else None


def identity(dim: int, basis: Optional[BasisLabel] = None) -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim, dtype=complex), basis)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending real eigenvalues and the matching unitary of column vectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(op: MatrixLike, rtol: float = 1e-9) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises :class:`HermiticityError` when the relative Hermiticity defect
    (max entrywise deviation over max entry magnitude) exceeds ``rtol``.
    Backed by LAPACK via ``numpy.linalg.eigh`` on the symmetrized matrix;
    degenerate eigenvalues keep LAPACK's deterministic order.
    """
    m = _as_array(op)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    defect = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if scale > 0.0 and defect > rtol * scale:
        raise HermiticityError(defect / scale, rtol)
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def kron(a: MatrixLike, b: MatrixLike) -> OperatorMatrix:
    """Tensor product with the TLS factor first.

    When both factors carry basis labels and the combined TLS dimension is
    still 1 or 2, the product label is derived; otherwise the result is
    unlabeled.
    """
    ma, mb = _as_array(a), _as_array(b)
    la, lb = _basis_of(a), _basis_of(b)
    basis = None
    if la is not None and lb is not None:
        tls = la.tls_dim * lb.tls_dim
        if tls in (1, 2):
            fock_dim = (la.fock_cutoff + 1) * (lb.fock_cutoff + 1)
            basis = BasisLabel(tls_dim=tls, fock_cutoff=fock_dim - 1)
    return OperatorMatrix(np.kron(ma, mb), basis)


def matrix_function(
    op: MatrixLike,
    f: Callable[[np.ndarray], np.ndarray],
    rtol: float = 1e-9,
) -> OperatorMatrix:
    """Apply a scalar function to a Hermitian matrix via its spectrum.

    Returns V f(w) V^dagger.  ``f`` is evaluated on the eigenvalue array
    (any numpy-vectorizable callable works; a plain scalar function is
    accepted too).  A real-valued ``f`` yields a Hermitian result; complex
    values are allowed and produce a normal matrix (used for unitaries
    exp(i w)).
    """
    dec = eig_hermitian(op, rtol=rtol)
    w = dec.eigenvalues
    try:
        fw = np.asarray(f(w), dtype=complex)
        if fw.shape != w.shape:
            raise ValueError
    except (TypeError, ValueError):
        fw = np.array([f(x) for x in w], dtype=complex)
    v = dec.eigenvectors
    return OperatorMatrix((v * fw) @ v.conj().T, _basis_of(op))
