"""Shared fixtures: reference parameter points and pre-computed evolutions.

The expensive master-equation trajectories are session-scoped so the whole
suite (unit tests plus the acceptance gate) pays for each of them once.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kerrosc.dynamics import TimeGrid, evolve
from kerrosc.fock import (
    FockCutoff,
    OscillatorParams,
    coherent_state,
    coherent_superposition,
    density_from_pure,
    fock_state,
)
from kerrosc.steady import steady_density

settings.register_profile(
    "kerrosc",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kerrosc")

# The reference operating point used throughout: pump 5, Kerr 0.2, loss 1.
REF_PARAMS = OscillatorParams(pump=5.0 + 0.0j, kerr=0.2, loss=1.0)
UNPUMPED_PARAMS = OscillatorParams(pump=0.0 + 0.0j, kerr=0.2, loss=1.0)

# Three-component superposition on the radius-3 circle (equal weights).
KITTEN_ALPHAS = tuple(3.0 * cmath.exp(2j * math.pi * k / 3.0) for k in range(3))
KITTEN_COMPONENTS = [(1.0 + 0.0j, a) for a in KITTEN_ALPHAS]


@pytest.fixture(scope="session")
def ref_params() -> OscillatorParams:
    return REF_PARAMS


@pytest.fixture(scope="session")
def unpumped_params() -> OscillatorParams:
    return UNPUMPED_PARAMS


@pytest.fixture(scope="session")
def steady_rho():
    """Closed-form stationary state at the reference point, cutoff 40."""
    return steady_density(REF_PARAMS, FockCutoff(40))


@pytest.fixture(scope="session")
def coherent3_unpumped_traj():
    """|alpha=3> under pump 0, kerr 0.2, loss 1 on t in [0, 2], step 0.005."""
    cutoff = FockCutoff(45)
    rho0 = density_from_pure(coherent_state(3.0, cutoff))
    return evolve(rho0, UNPUMPED_PARAMS, TimeGrid.uniform(2.0, 401))


@pytest.fixture(scope="session", params=[0.0, 0.2], ids=["G0", "G0.2"])
def fock9_decay(request):
    """(kerr, trajectory) for |n=9> under loss 1 on t in [0, 1], step 0.005.

    Integrated at tightened tolerances so the diagonal can be held to the
    1e-8 budget against the closed-form binomial distribution.
    """
    kerr = request.param
    params = OscillatorParams(pump=0.0j, kerr=kerr, loss=1.0)
    cutoff = FockCutoff(14)
    rho0 = density_from_pure(fock_state(9, cutoff))
    traj = evolve(rho0, params, TimeGrid.uniform(1.0, 201), rtol=1e-10, atol=1e-12)
    return kerr, traj


def _pumped_trajectory(psi0) -> object:
    rho0 = density_from_pure(psi0)
    return evolve(rho0, REF_PARAMS, TimeGrid.uniform(20.0, 21))


@pytest.fixture(scope="session")
def pumped_trajectories():
    """The three reference initial states driven to t = 20 (integer grid).

    Keys: 'coherent' (|alpha=3>), 'fock' (|n=9>), 'kitten' (three coherent
    components on the radius-3 circle).  All share cutoff 45.
    """
    cutoff = FockCutoff(45)
    return {
        "coherent": _pumped_trajectory(coherent_state(3.0, cutoff)),
        "fock": _pumped_trajectory(fock_state(9, cutoff)),
        "kitten": _pumped_trajectory(
            coherent_superposition(KITTEN_COMPONENTS, cutoff)
        ),
    }


@pytest.fixture(scope="session")
def steady_rho_45():
    """Stationary state on the same cutoff as the pumped trajectories."""
    return steady_density(REF_PARAMS, FockCutoff(45))


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260825)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None):
    """Random full-support density matrix: mixture of random pure states."""
    from kerrosc.fock import DensityMatrix

    rank = dim if rank is None else rank
    el = np.zeros((dim, dim), dtype=complex)
    weights = rng.dirichlet(np.ones(rank))
    for w in weights:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v /= np.linalg.norm(v)
        el += w * np.outer(v, v.conj())
    el = 0.5 * (el + el.conj().T)
    el /= np.trace(el).real
    return DensityMatrix(el)
