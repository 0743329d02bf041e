"""Two-state reduction of 1D double-well potentials.

Solves the single-particle Schroedinger problem on a uniform grid
(second-order central differences, Dirichlet walls, hbar = 1), builds
localized well states |L>, |R> from the two lowest eigenfunctions, and
extracts the two-level parameters: tunneling amplitude t, gap Delta = 2t,
detuning epsilon, site positions x_L, x_R and spacing a = x_R - x_L.

Localization convention: |L>, |R> are the eigenvectors of the position
operator projected onto span{psi_0, psi_1} (maximal localization in the
two-dimensional subspace); for a symmetric well they reduce to
(psi_0 -+ psi_1)/sqrt(2).  Phases are fixed so that t >= 0 and each
eigenfunction's largest-magnitude sample is positive.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal


class ReductionError(ValueError):
    """Raised when no meaningful two-well reduction exists."""


@dataclass(frozen=True)
class PotentialSpec:
    """Grid, mass and potential for the 1D solver (hbar = 1).

    ``potential`` is either a callable V(x) or an array of samples on the
    uniform grid of ``n_points`` nodes spanning [x_min, x_max].
    """

    x_min: float
    x_max: float
    n_points: int
    mass: float
    potential: Union[Callable[[np.ndarray], np.ndarray], np.ndarray, Sequence[float]]

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 3:
            raise ValueError(f"n_points must be >= 3, got {self.n_points}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not callable(self.potential):
            v = np.asarray(self.potential, dtype=float)
            if v.shape != (self.n_points,):
                raise ValueError(
                    f"sampled potential has length {v.shape}, expected ({self.n_points},)"
                )
            object.__setattr__(self, "potential", v)

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def sampled_potential(self) -> np.ndarray:
        x = self.grid()
        if callable(self.potential):
            return np.asarray(self.potential(x), dtype=float)
        return self.potential

    def refined(self, factor: int = 2) -> "PotentialSpec":
        if not callable(self.potential):
            raise ValueError("grid refinement needs a callable potential")
        n = (self.n_points - 1) * factor + 1
        return PotentialSpec(self.x_min, self.x_max, n, self.mass, self.potential)


@dataclass(frozen=True)
class ReductionResult:
    """Extracted two-level parameters plus validity diagnostics."""

    e0: float
    e1: float
    e2: float
    psi_s: np.ndarray
    psi_a: np.ndarray
    psi_l: np.ndarray
    psi_r: np.ndarray
    delta: float
    epsilon: float
    t: float
    x_l: float
    x_r: float
    a: float
    validity_ratio: float

    @property
    def omega_q(self) -> float:
        return float(np.hypot(self.delta, self.epsilon))


# ---------------------------------------------------------------------------
# built-in potential families


def quartic_double_well(beta: float, x0: float) -> Callable[[np.ndarray], np.ndarray]:
    """V(x) = beta (x^2 - x0^2)^2, minima at +-x0."""
    return lambda x: beta * (np.asarray(x) ** 2 - x0**2) ** 2


def tilted_quartic(beta: float, x0: float, lam: float) -> Callable[[np.ndarray], np.ndarray]:
    """Quartic double well with a linear tilt lam * x."""
    base = quartic_double_well(beta, x0)
    return lambda x: base(x) + lam * np.asarray(x)


def harmonic(k: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """V(x) = k x^2 / 2."""
    return lambda x: 0.5 * k * np.asarray(x) ** 2


def load_potential_file(path) -> Tuple[np.ndarray, np.ndarray]:
    """Read a two-column text file of (x, V(x)) samples."""
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"potential file {path} must have two columns (x, V)")
    return data[:, 0], data[:, 1]


# ---------------------------------------------------------------------------
# solver


def solve_schrodinger_1d(
    spec: PotentialSpec,
    n_levels: int,
    check_refinement: bool = False,
) -> List[Tuple[float, np.ndarray]]:
    """Lowest eigenpairs of -(1/2m) d^2/dx^2 + V with Dirichlet walls.

    Eigenfunctions are returned on the full grid (zero at the walls),
    normalized with trapezoidal weights, phase-fixed so the
    largest-magnitude sample is positive.  Emits a RuntimeWarning when the
    wavefunctions have not decayed at the walls, and, when
    ``check_refinement`` is set, when a 2x finer grid moves the highest
    requested level by more than 1e-6 relative.
    """
    if n_levels < 1:
        raise ValueError(f"n_levels must be >= 1, got {n_levels}")
    if n_levels > spec.n_points - 2:
        raise ValueError(
            f"n_levels={n_levels} exceeds the {spec.n_points - 2} interior grid points"
        )
    x = spec.grid()
    dx = x[1] - x[0]
    v = spec.sampled_potential()

    inv = 1.0 / (2.0 * spec.mass * dx * dx)
    diag = 2.0 * inv + v[1:-1]
    off = np.full(spec.n_points - 3, -inv)
    energies, vecs = eigh_tridiagonal(
        diag, off, select="i", select_range=(0, n_levels - 1)
    )

    pairs: List[Tuple[float, np.ndarray]] = []
    edge_amp = 0.0
    for j in range(n_levels):
        psi = np.zeros(spec.n_points)
        psi[1:-1] = vecs[:, j]
        norm = np.sqrt(np.trapezoid(psi * psi, x))
        psi /= norm
        peak = np.argmax(np.abs(psi))
        if psi[peak] < 0:
            psi = -psi
        edge_amp = max(
            edge_amp, abs(psi[1]) / np.max(np.abs(psi)), abs(psi[-2]) / np.max(np.abs(psi))
        )
        pairs.append((float(energies[j]), psi))

    if edge_amp > 1e-8:
        warnings.warn(
            f"boundary leakage: wavefunction amplitude {edge_amp:.2e} of max "
            f"at the Dirichlet walls; enlarge the domain if unintended",
            RuntimeWarning,
            stacklevel=2,
        )
    if check_refinement:
        fine = solve_schrodinger_1d(spec.refined(), n_levels, check_refinement=False)
        top = n_levels - 1
        ref = fine[top][0]
        shift = abs(pairs[top][0] - ref) / max(abs(ref), 1e-300)
        if shift > 1e-6:
            warnings.warn(
                f"grid too coarse: level {top} shifts by {shift:.2e} relative "
                f"under 2x refinement",
                RuntimeWarning,
                stacklevel=2,
            )
    return pairs


def reduce_to_two_level(
    solution: List[Tuple[float, np.ndarray]],
    spec: PotentialSpec,
    min_validity_ratio: Optional[float] = None,
) -> ReductionResult:
    """Project onto the two lowest states and extract (Delta, epsilon, t, a).

    Localized states come from diagonalizing the position operator in
    span{psi_0, psi_1}; the eigenvector with the smaller position
    expectation is |L>.  Phases are spent on t >= 0 and on nonnegative
    overlaps <R|psi_0>, <R|psi_1> (psi_1 is re-phased if needed), which
    makes the decomposition deterministic even for antisymmetric psi_1
    whose two lobes tie in magnitude.  Raises :class:`ReductionError` when
    the projected positions are closer than one grid spacing (no two-well
    structure) or, if ``min_validity_ratio`` is given, when
    (E2-E1)/(E1-E0) falls below it.
    """
    if len(solution) < 3:
        raise ValueError("need at least 3 solved levels for the validity ratio")
    x = spec.grid()
    dx = x[1] - x[0]
    (e0, psi0), (e1, psi1), (e2, _) = solution[0], solution[1], solution[2]

    def overlap(f, g):
        return float(np.trapezoid(f * g, x))

    # position operator projected onto span{psi0, psi1}
    xmat = np.array(
        [
            [overlap(psi0, x * psi0), overlap(psi0, x * psi1)],
            [overlap(psi1, x * psi0), overlap(psi1, x * psi1)],
        ]
    )
    xmat = (xmat + xmat.T) / 2.0
    positions, w = np.linalg.eigh(xmat)
    x_l, x_r = float(positions[0]), float(positions[1])
    if x_r - x_l < dx:
        raise ReductionError(
            f"no two-well structure: projected positions {x_l:.6g} and {x_r:.6g} "
            f"are closer than the grid spacing {dx:.3g}"
        )

    w_l, w_r = w[:, 0].copy(), w[:, 1].copy()
    h2 = np.diag([e0, e1])
    t = -float(w_r @ h2 @ w_l)
    if t < 0:
        w_r = -w_r
        t = -t
    epsilon = float(w_r @ h2 @ w_r - w_l @ h2 @ w_l)

    # Residual sign freedoms (joint flip of |L>,|R>; phase of psi_1) leave
    # t and epsilon alone; spend them on <R|psi_0> >= 0 and <R|psi_1> >= 0,
    # which reproduces the (psi_0 -+ psi_1)/sqrt(2) combinations with
    # positive overlaps in the symmetric case.
    if w_r[0] < 0:
        w_l, w_r = -w_l, -w_r
    if w_r[1] < 0:
        psi1 = -psi1
        w_l[1], w_r[1] = -w_l[1], -w_r[1]

    psi_l = w_l[0] * psi0 + w_l[1] * psi1
    psi_r = w_r[0] * psi0 + w_r[1] * psi1

    validity = (e2 - e1) / (e1 - e0) if e1 > e0 else np.inf
    if min_validity_ratio is not None and validity < min_validity_ratio:
        raise ReductionError(
            f"two-level reduction rejected: validity ratio "
            f"(E2-E1)/(E1-E0) = {validity:.3g} below threshold {min_validity_ratio:.3g}"
        )

    return ReductionResult(
        e0=e0,
        e1=e1,
        e2=e2,
        psi_s=psi0,
        psi_a=psi1,
        psi_l=psi_l,
        psi_r=psi_r,
        delta=2.0 * t,
        epsilon=epsilon,
        t=t,
        x_l=x_l,
        x_r=x_r,
        a=x_r - x_l,
        validity_ratio=float(validity),
    )


def dipole_moment(result: ReductionResult, q: float) -> float:
    """Transition dipole q a / 2 = q <A|x|S> of the reduced system."""
    return q * result.a / 2.0
