"""Two-level operator algebra in the two bases used throughout the package.

Site basis, ordered (|L>, |R>): the localized well states.  Pauli set
rho_x, rho_y, rho_z with rho_z = |R><R| - |L><L|.

Energy basis, ordered (|S>, |A>): the symmetric/antisymmetric combinations
|S> = (|R> + |L>)/sqrt(2), |A> = (|R> - |L>)/sqrt(2).  Pauli set sigma_x,
sigma_y, sigma_z with sigma_z = |A><A| - |S><S|.

The two sets describe the same abstract operators; the dictionary is
    sigma_x = rho_z,   sigma_y = rho_y,   sigma_z = -rho_x,
implemented here as an explicit unitary change of basis rather than by
index shuffling at call sites.
"""
from __future__ import annotations

import numpy as np

from .linalg import BasisLabel, OperatorMatrix

TLS_BASES = ("site", "energy")

_TLS_LABEL = BasisLabel(tls_dim=2, fock_cutoff=0)

# Site basis, order (L, R).
RHO_X = OperatorMatrix(np.array([[0, 1], [1, 0]], dtype=complex), _TLS_LABEL)
RHO_Y = OperatorMatrix(np.array([[0, 1j], [-1j, 0]], dtype=complex), _TLS_LABEL)
RHO_Z = OperatorMatrix(np.array([[-1, 0], [0, 1]], dtype=complex), _TLS_LABEL)

# Energy basis, order (S, A).
SIGMA_X = OperatorMatrix(np.array([[0, 1], [1, 0]], dtype=complex), _TLS_LABEL)
SIGMA_Y = OperatorMatrix(np.array([[0, 1j], [-1j, 0]], dtype=complex), _TLS_LABEL)
SIGMA_Z = OperatorMatrix(np.array([[-1, 0], [0, 1]], dtype=complex), _TLS_LABEL)

IDENTITY_2 = OperatorMatrix(np.eye(2, dtype=complex), _TLS_LABEL)

# Columns are the site-basis coordinates of |S> and |A>.
SITE_FROM_ENERGY = OperatorMatrix(
    np.array([[1, -1], [1, 1]], dtype=complex) / np.sqrt(2.0), _TLS_LABEL
)


def to_site_basis(op_energy: OperatorMatrix) -> OperatorMatrix:
    """Re-express a 2x2 operator given in the energy basis in the site basis."""
    b = SITE_FROM_ENERGY.matrix
    return OperatorMatrix(b @ op_energy.matrix @ b.conj().T, _TLS_LABEL)


def to_energy_basis(op_site: OperatorMatrix) -> OperatorMatrix:
    """Re-express a 2x2 operator given in the site basis in the energy basis."""
    b = SITE_FROM_ENERGY.matrix
    return OperatorMatrix(b.conj().T @ op_site.matrix @ b, _TLS_LABEL)


def check_tls_basis(tls_basis: str) -> str:
    if tls_basis not in TLS_BASES:
        raise ValueError(
            f"unknown TLS basis {tls_basis!r}; expected one of {TLS_BASES}"
        )
    return tls_basis
