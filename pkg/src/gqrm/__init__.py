"""gqrm: gauge-invariant quantum Rabi models for two-level systems.

Reduces 1D double-well potentials to two-level parameters, builds the
Coulomb-gauge, dipole-gauge and multi-mode beyond-dipole Hamiltonians on
truncated Fock spaces, sweeps spectra against the normalized coupling, and
verifies gauge invariance numerically.
"""

__version__ = "0.1.0"

from .fock import FockBasis, annihilation, creation, displacement, number_operator, quadrature
from .gauge import (
    CosineProfile,
    SampledProfile,
    UniformProfile,
    hopping_hamiltonian,
    line_integral,
    parallel_transporter,
    transporter_gauge_law,
    two_site_phase_unitary,
)
from .linalg import (
    BasisLabel,
    EigenDecomposition,
    HermiticityError,
    OperatorMatrix,
    eig_hermitian,
    identity,
    kron,
    matrix_function,
)
from .models import (
    CouplingParams,
    GaugeFrame,
    ModeSpec,
    TwoLevelParams,
    build_beyond_dipole_hamiltonian,
    build_hamiltonian,
    minimal_coupling_unitary,
    mode_suppression_factor,
    parity_operator,
    resonant_two_level,
)
from .reduction import (
    PotentialSpec,
    ReductionError,
    ReductionResult,
    dipole_moment,
    harmonic,
    quartic_double_well,
    reduce_to_two_level,
    solve_schrodinger_1d,
    tilted_quartic,
)
from .spectra import (
    ConvergenceError,
    CutoffPolicy,
    SpectrumRow,
    SpectrumTable,
    SweepConfig,
    asymptotic_gap,
    converged_differences,
    gap_analysis,
    heuristic_cutoff,
    normalized_differences,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
