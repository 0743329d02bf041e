import numpy as np
import pytest

from gqrm import (
    ModeSpec,
    PotentialSpec,
    quartic_double_well,
    reduce_to_two_level,
    solve_schrodinger_1d,
    tilted_quartic,
)

QUARTIC = dict(beta=1.0, x0=1.5)
DOMAIN = dict(x_min=-4.5, x_max=4.5, mass=1.0)


@pytest.fixture(scope="session")
def mode():
    return ModeSpec(omega_ph=1.0)


@pytest.fixture(scope="session")
def quartic_spec():
    return PotentialSpec(n_points=2000, potential=quartic_double_well(**QUARTIC), **DOMAIN)


@pytest.fixture(scope="session")
def quartic_solution(quartic_spec):
    return solve_schrodinger_1d(quartic_spec, 3)


@pytest.fixture(scope="session")
def quartic_reduction(quartic_spec, quartic_solution):
    return reduce_to_two_level(quartic_solution, quartic_spec)


@pytest.fixture(scope="session")
def tilted_spec():
    return PotentialSpec(
        n_points=2000, potential=tilted_quartic(lam=0.05, **QUARTIC), **DOMAIN
    )


@pytest.fixture(scope="session")
def tilted_reduction(tilted_spec):
    solution = solve_schrodinger_1d(tilted_spec, 3)
    return reduce_to_two_level(solution, tilted_spec)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
