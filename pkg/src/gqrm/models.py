"""Gauge-invariant quantum Rabi Hamiltonians for two-level systems.

Builders for the Coulomb-gauge model (hopping dressed by the quantized
parallel transporter, i.e. trigonometric coupling in the field quadrature),
its dipole-gauge partner (linear coupling plus the quadratic self-energy
shift), and the multi-mode generalization that keeps the line integral of
each mode's spatial profile instead of the dipole approximation.

Conventions: the TLS factor always comes first in tensor products; the
normalized coupling is eta = q (a/2) A0; Hamiltonians can be expressed in
the site basis (|L>, |R>) or the energy basis (|S>, |A>), related by the
explicit map in :mod:`gqrm.twosite`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import twosite
from .fock import FockBasis, annihilation, displacement, number_operator, quadrature
from .gauge import UniformProfile, line_integral
from .linalg import BasisLabel, OperatorMatrix, kron, matrix_function

ETA_CONSISTENCY_TOL = 1e-12


class GaugeFrame(enum.Enum):
    COULOMB = "coulomb"
    DIPOLE = "dipole"

    @classmethod
    def parse(cls, value) -> "GaugeFrame":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown gauge frame {value!r}; expected 'coulomb' or 'dipole'"
            ) from None


@dataclass(frozen=True)
class TwoLevelParams:
    """Reduced matter model: gap delta, detuning epsilon, spacing a, charge q.

    ``a`` and ``q`` may be omitted when the normalized coupling eta is
    supplied directly to the builders.
    """

    delta: float
    epsilon: float = 0.0
    a: Optional[float] = None
    q: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.a is not None and not self.a > 0:
            raise ValueError(f"site spacing a must be positive, got {self.a}")

    @property
    def omega_q(self) -> float:
        return float(np.hypot(self.delta, self.epsilon))


def resonant_two_level(
    omega_ph: float,
    epsilon: float = 0.0,
    a: Optional[float] = None,
    q: Optional[float] = None,
) -> TwoLevelParams:
    """Parameters at zero detuning from resonance: sqrt(delta^2+eps^2) = omega_ph."""
    if abs(epsilon) >= omega_ph:
        raise ValueError(
            f"|epsilon|={abs(epsilon)} must be < omega_ph={omega_ph} at resonance"
        )
    delta = math.sqrt(omega_ph**2 - epsilon**2)
    return TwoLevelParams(delta=delta, epsilon=epsilon, a=a, q=q)


@dataclass(frozen=True)
class ModeSpec:
    """One electromagnetic mode: frequency, zero-point amplitude, profile."""

    omega_ph: float
    a0: Optional[float] = None
    profile: object = UniformProfile()

    def __post_init__(self):
        if not self.omega_ph > 0:
            raise ValueError(f"omega_ph must be positive, got {self.omega_ph}")
        if self.a0 is not None:
            if isinstance(self.a0, complex) and self.a0.imag != 0:
                raise ValueError("zero-point amplitude a0 must be real")
            object.__setattr__(self, "a0", float(self.a0))


@dataclass(frozen=True)
class CouplingParams:
    """Normalized coupling strength eta = q (a/2) A0."""

    eta: float

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError(
                f"eta must be >= 0, got {self.eta} (absorb signs into the basis phase)"
            )

    @classmethod
    def from_physical(cls, q: float, a: float, a0: float) -> "CouplingParams":
        return cls(eta=q * (a / 2.0) * a0)


def _resolve_eta(
    params: TwoLevelParams, mode: ModeSpec, coupling: Optional[CouplingParams]
) -> float:
    """Take eta from the coupling block, checking (q, a, A0) when all given."""
    physical = None
    if params.q is not None and params.a is not None and mode.a0 is not None:
        physical = params.q * (params.a / 2.0) * mode.a0
    if coupling is None:
        if physical is None:
            raise ValueError(
                "coupling eta not given and (q, a, A0) incomplete; "
                "supply CouplingParams or all three physical inputs"
            )
        return physical
    if physical is not None:
        scale = max(1.0, abs(coupling.eta))
        if abs(coupling.eta - physical) > ETA_CONSISTENCY_TOL * scale:
            raise ValueError(
                f"inconsistent coupling: eta={coupling.eta} but "
                f"q(a/2)A0={physical}"
            )
    return coupling.eta


def _bare_matter(params: TwoLevelParams, tls_basis: str) -> np.ndarray:
    """(eps/2) rho_z - (delta/2) rho_x, expressed in the requested basis."""
    m = 0.5 * params.epsilon * twosite.RHO_Z.matrix - 0.5 * params.delta * twosite.RHO_X.matrix
    if tls_basis == "energy":
        return twosite.to_energy_basis(OperatorMatrix(m)).matrix
    return m


def minimal_coupling_unitary(
    params: TwoLevelParams,
    mode: ModeSpec,
    basis: FockBasis,
    tls_basis: str = "site",
    eta: Optional[float] = None,
    coupling: Optional[CouplingParams] = None,
) -> OperatorMatrix:
    """U = exp(i eta (a + a^dag) S), S = rho_z (site) or sigma_x (energy).

    Assembled as a direct sum of displacement operators D(+-i eta) over the
    S = +-1 eigenspaces, each built in the truncated-generator mode, so the
    result is exactly unitary at every cutoff.
    """
    if eta is not None:
        coupling = CouplingParams(eta=eta)
    eta_val = _resolve_eta(params, mode, coupling)
    twosite.check_tls_basis(tls_basis)
    s_op = twosite.RHO_Z if tls_basis == "site" else twosite.SIGMA_X
    s = s_op.matrix
    eye2 = np.eye(2)
    p_plus = (eye2 + s) / 2.0
    p_minus = (eye2 - s) / 2.0
    d_plus = displacement(basis, 1j * eta_val).matrix
    d_minus = displacement(basis, -1j * eta_val).matrix
    u = np.kron(p_plus, d_plus) + np.kron(p_minus, d_minus)
    return OperatorMatrix(u, BasisLabel(tls_dim=2, fock_cutoff=basis.cutoff))


def build_hamiltonian(
    params: TwoLevelParams,
    mode: ModeSpec,
    coupling: Optional[CouplingParams],
    basis: FockBasis,
    frame: GaugeFrame | str = GaugeFrame.COULOMB,
    tls_basis: str = "site",
    trig_path: str = "unitary",
) -> OperatorMatrix:
    """Single-mode light-matter Hamiltonian in the requested gauge frame.

    Coulomb frame:
        omega n + (eps/2) rho_z
        - (delta/2)[rho_x cos(2 eta (a+a^dag)) - rho_y sin(2 eta (a+a^dag))],
    built by conjugating the bare matter Hamiltonian with the minimal
    coupling unitary (trig_path="unitary", default) or by assembling the
    trigonometric terms through spectral matrix functions of the quadrature
    (trig_path="matrix_function", the cross-check route).

    Dipole frame:
        omega n + (eps/2) rho_z - (delta/2) rho_x
        - i eta omega (a - a^dag) rho_z + eta^2 omega.

    The eta^2 self-energy shift is kept so the two frames agree in absolute
    energies, not just differences.
    """
    frame = GaugeFrame.parse(frame)
    twosite.check_tls_basis(tls_basis)
    eta = _resolve_eta(params, mode, coupling)
    omega = mode.omega_ph

    label = BasisLabel(tls_dim=2, fock_cutoff=basis.cutoff)
    eye2 = np.eye(2)
    eye_f = np.eye(basis.dim)
    n_op = number_operator(basis).matrix
    h_field = omega * np.kron(eye2, n_op)
    matter = _bare_matter(params, tls_basis)

    if frame is GaugeFrame.DIPOLE:
        a = annihilation(basis).matrix
        rho_z = (
            twosite.RHO_Z.matrix
            if tls_basis == "site"
            else twosite.to_energy_basis(twosite.RHO_Z).matrix
        )
        h = (
            h_field
            + np.kron(matter, eye_f)
            - 1j * eta * omega * np.kron(rho_z, a - a.conj().T)
            + eta**2 * omega * np.kron(eye2, eye_f)
        )
        return OperatorMatrix(h, label)

    if trig_path == "unitary":
        u = minimal_coupling_unitary(
            params, mode, basis, tls_basis=tls_basis, eta=eta
        ).matrix
        h = h_field + u @ np.kron(matter, eye_f) @ u.conj().T
        return OperatorMatrix(h, label)
    if trig_path != "matrix_function":
        raise ValueError(
            f"unknown trig_path {trig_path!r}; expected 'unitary' or 'matrix_function'"
        )

    quad = quadrature(basis)
    cos_q = matrix_function(quad, lambda w: np.cos(2.0 * eta * w)).matrix
    sin_q = matrix_function(quad, lambda w: np.sin(2.0 * eta * w)).matrix
    if tls_basis == "site":
        rx, ry, rz = twosite.RHO_X.matrix, twosite.RHO_Y.matrix, twosite.RHO_Z.matrix
        trig = -0.5 * params.delta * (np.kron(rx, cos_q) - np.kron(ry, sin_q))
        diag_term = 0.5 * params.epsilon * np.kron(rz, eye_f)
    else:
        sx, sy, sz = twosite.SIGMA_X.matrix, twosite.SIGMA_Y.matrix, twosite.SIGMA_Z.matrix
        trig = 0.5 * params.delta * (np.kron(sz, cos_q) + np.kron(sy, sin_q))
        diag_term = 0.5 * params.epsilon * np.kron(sx, eye_f)
    return OperatorMatrix(h_field + diag_term + trig, label)


def build_beyond_dipole_hamiltonian(
    params: TwoLevelParams,
    modes: Sequence[ModeSpec],
    bases: Sequence[FockBasis],
    tls_basis: str = "site",
    dim_cap: int = 16384,
) -> OperatorMatrix:
    """Multi-mode model keeping the line integral of each mode's profile.

    The coupling operator is q Phi = sum_i q A0_i I_i (a_i + a_i^dag), with
    I_i the integral of mode i's dimensionless profile over [-a/2, a/2].
    Profiles are normalized so a uniform profile reproduces the
    dipole-approximation coupling 2 eta exactly; a single uniform mode
    therefore rebuilds the single-mode Coulomb-frame Hamiltonian entrywise.
    """
    if len(modes) == 0:
        raise ValueError("need at least one mode")
    if len(modes) != len(bases):
        raise ValueError(f"{len(modes)} modes but {len(bases)} Fock bases")
    if params.a is None or params.q is None:
        raise ValueError("beyond-dipole coupling needs both a and q in TwoLevelParams")
    twosite.check_tls_basis(tls_basis)

    fock_dims = [b.dim for b in bases]
    total_dim = 2 * int(np.prod(fock_dims))
    if total_dim > dim_cap:
        raise ValueError(
            f"total dimension {total_dim} exceeds the cap {dim_cap}; "
            f"reduce cutoffs or raise dim_cap"
        )

    def embed(op: np.ndarray, which: int) -> np.ndarray:
        out = np.eye(1)
        for i, d in enumerate(fock_dims):
            out = np.kron(out, op if i == which else np.eye(d))
        return out

    x_l, x_r = -params.a / 2.0, params.a / 2.0
    phi = np.zeros((total_dim // 2, total_dim // 2), dtype=complex)
    h_field = np.zeros_like(phi)
    for i, (mode, basis) in enumerate(zip(modes, bases)):
        if mode.a0 is None:
            raise ValueError(f"mode {i} needs a zero-point amplitude a0")
        integral = line_integral(mode.profile, x_l, x_r)
        quad = quadrature(basis).matrix
        phi += mode.a0 * integral * embed(quad, i)
        h_field += mode.omega_ph * embed(number_operator(basis).matrix, i)

    q_phi = params.q * phi
    cos_p = matrix_function(q_phi, np.cos).matrix
    sin_p = matrix_function(q_phi, np.sin).matrix
    eye2 = np.eye(2)
    if tls_basis == "site":
        rx, ry, rz = twosite.RHO_X.matrix, twosite.RHO_Y.matrix, twosite.RHO_Z.matrix
        h = (
            np.kron(eye2, h_field)
            + 0.5 * params.epsilon * np.kron(rz, np.eye(total_dim // 2))
            - 0.5 * params.delta * (np.kron(rx, cos_p) - np.kron(ry, sin_p))
        )
    else:
        sx, sy, sz = twosite.SIGMA_X.matrix, twosite.SIGMA_Y.matrix, twosite.SIGMA_Z.matrix
        h = (
            np.kron(eye2, h_field)
            + 0.5 * params.epsilon * np.kron(sx, np.eye(total_dim // 2))
            + 0.5 * params.delta * (np.kron(sz, cos_p) + np.kron(sy, sin_p))
        )
    return OperatorMatrix(h, BasisLabel(tls_dim=2, fock_cutoff=total_dim // 2 - 1))


def parity_operator(basis: FockBasis, tls_basis: str = "site") -> OperatorMatrix:
    """sigma_z (-1)^n, conserved at epsilon = 0 and broken otherwise."""
    twosite.check_tls_basis(tls_basis)
    sz = (
        twosite.SIGMA_Z
        if tls_basis == "energy"
        else twosite.to_site_basis(twosite.SIGMA_Z)
    )
    signs = np.diag((-1.0) ** np.arange(basis.dim))
    return kron(sz, OperatorMatrix(signs, basis.label))


def mode_suppression_factor(ka: float, phi: float = 0.0) -> float:
    """Coupling suppression of a cosine mode: sin(ka/2)/(ka/2) * cos(phi).

    ka is the mode wavenumber times the site spacing.  Floating-point sine
    residue at the exact zeros ka = 2 pi n is snapped to 0.
    """
    half = ka / 2.0
    if half == 0.0:
        factor = 1.0
    else:
        factor = math.sin(half) / half
    if abs(factor) < 1e-14:
        factor = 0.0
    return factor * math.cos(phi)
