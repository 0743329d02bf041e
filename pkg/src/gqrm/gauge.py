"""Classical gauge-field machinery for the two-site system.

Spatial profiles of the vector potential, their line integrals, the
parallel transporter attached to the hop between the two sites, its
transformation law under a gauge shift A -> A + dtheta/dx, and the
two-site local phase unitary acting on the matter states.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from .linalg import BasisLabel, OperatorMatrix

# Node count for Simpson quadrature of smooth callables; odd so the
# composite rule runs on an even number of intervals.
SIMPSON_POINTS = 4097


@dataclass(frozen=True)
class UniformProfile:
    """Spatially constant amplitude A(x) = value."""

    value: float = 1.0

    def amplitude_at(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.value)

    def line_integral(self, x_l: float, x_r: float) -> float:
        return self.value * (x_r - x_l)


@dataclass(frozen=True)
class CosineProfile:
    """A(x) = amplitude * cos(k x + phi)."""

    k: float
    phi: float = 0.0
    amplitude: float = 1.0

    def amplitude_at(self, x):
        return self.amplitude * np.cos(self.k * np.asarray(x, dtype=float) + self.phi)

    def line_integral(self, x_l: float, x_r: float) -> float:
        if self.k == 0.0:
            return self.amplitude * np.cos(self.phi) * (x_r - x_l)
        return (self.amplitude / self.k) * (
            np.sin(self.k * x_r + self.phi) - np.sin(self.k * x_l + self.phi)
        )


@dataclass(frozen=True)
class SampledProfile:
    """Amplitude given on a grid; integrated by Simpson quadrature.

    The grid must cover any requested integration interval; values in
    between samples are linearly interpolated.
    """

    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ValueError("sampled profile needs matching 1D x and value arrays")
        if not np.all(np.diff(x) > 0):
            raise ValueError("sampled profile grid must be strictly increasing")
        x.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)

    def amplitude_at(self, xq):
        xq = np.asarray(xq, dtype=float)
        if np.any(xq < self.x[0]) or np.any(xq > self.x[-1]):
            raise ValueError(
                f"sampled profile covers [{self.x[0]}, {self.x[-1]}] but "
                f"was evaluated outside it"
            )
        return np.interp(xq, self.x, self.values)

    def line_integral(self, x_l: float, x_r: float) -> float:
        grid = np.linspace(x_l, x_r, SIMPSON_POINTS)
        return float(simpson(self.amplitude_at(grid), x=grid))


Profile = Union[UniformProfile, CosineProfile, SampledProfile]


def profile_amplitude(profile, x):
    """Evaluate a profile object or plain callable at x."""
    if isinstance(profile, (UniformProfile, CosineProfile, SampledProfile)):
        return profile.amplitude_at(x)
    return profile(x)


def simpson_line_integral(profile, x_l: float, x_r: float,
                          points: int = SIMPSON_POINTS) -> float:
    grid = np.linspace(x_l, x_r, points)
    vals = np.asarray(profile_amplitude(profile, grid), dtype=float)
    return float(simpson(vals, x=grid))


def line_integral(profile, x_l: float, x_r: float) -> float:
    """Integral of the profile amplitude over [x_l, x_r].

    Analytic for uniform and cosine profiles, Simpson quadrature for
    sampled profiles and plain callables.
    """
    if isinstance(profile, (UniformProfile, CosineProfile, SampledProfile)):
        return profile.line_integral(x_l, x_r)
    return simpson_line_integral(profile, x_l, x_r)


def parallel_transporter(profile, q: float, x_l: float, x_r: float) -> complex:
    """Unit-modulus hop phase exp(i q Int_{x_l}^{x_r} A(x) dx)."""
    if not x_l < x_r:
        raise ValueError(f"require x_l < x_r, got x_l={x_l}, x_r={x_r}")
    return complex(np.exp(1j * q * line_integral(profile, x_l, x_r)))


def transporter_gauge_law(
    profile,
    q: float,
    x_l: float,
    x_r: float,
    theta: Callable[[float], float],
    dtheta: Callable[[np.ndarray], np.ndarray],
    points: int = SIMPSON_POINTS,
) -> Tuple[complex, complex]:
    """Both sides of the transporter's transformation law under a gauge shift.

    Left: the transporter of the shifted field A + dtheta/dx, with the
    dtheta contribution integrated by quadrature.  Right: the original
    transporter dressed with the endpoint phases exp(i q theta).  The two
    must agree; returning both keeps the comparison an executable check
    rather than an identity by construction.
    """
    base = line_integral(profile, x_l, x_r)
    shift = simpson_line_integral(dtheta, x_l, x_r, points=points)
    transformed = complex(np.exp(1j * q * (base + shift)))
    dressed = complex(
        np.exp(1j * q * theta(x_r))
        * np.exp(1j * q * base)
        * np.exp(-1j * q * theta(x_l))
    )
    return transformed, dressed


def two_site_phase_unitary(theta_l: float, theta_r: float, q: float) -> OperatorMatrix:
    """Local phase change on the two matter sites.

    In the (|L>, |R>) basis this is diag(exp(i q theta_L), exp(i q theta_R)),
    i.e. a global phase exp(i q (theta_R + theta_L)/2) times a rotation
    generated by rho_z through the angle q (theta_R - theta_L)/2.
    """
    m = np.diag([np.exp(1j * q * theta_l), np.exp(1j * q * theta_r)])
    return OperatorMatrix(m, BasisLabel(tls_dim=2, fock_cutoff=0))


def hopping_hamiltonian(
    t: float, transporter_phase: complex, epsilon: float = 0.0
) -> OperatorMatrix:
    """Gauge-invariant 2x2 matter Hamiltonian with a classical field.

    -t (|R><L| U + h.c.) plus the detuning term (epsilon/2) rho_z, in the
    (|L>, |R>) basis; U is the hop's parallel-transporter phase.
    """
    u = complex(transporter_phase)
    m = np.array(
        [[-epsilon / 2.0, -t * np.conj(u)], [-t * u, epsilon / 2.0]], dtype=complex
    )
    return OperatorMatrix(m, BasisLabel(tls_dim=2, fock_cutoff=0))
