"""Shared fixtures: the random ensemble reused across relaxation, rounding,
and acceptance tests, solved and diagonalized once per session."""

import time

import pytest

import tfimprod as tp

ENSEMBLE_SIZE = 50
SOLVE_TOL = 1e-7


def make_ensemble(count=ENSEMBLE_SIZE, seed0=1000, n_lo=4, n_hi=10, p=0.55, h_max=1.0):
    """Mixed-sign random instances with n cycling through [n_lo, n_hi]."""
    span = n_hi - n_lo + 1
    return [tp.random_instance(n_lo + (k % span), p, seed=seed0 + k, h_max=h_max) for k in range(count)]


@pytest.fixture(scope="session")
def ensemble50():
    return make_ensemble()


@pytest.fixture(scope="session")
def solved50(ensemble50):
    """(solutions, wall seconds) for the shared ensemble at tol 1e-7."""
    t0 = time.perf_counter()
    sols = [tp.solve_soc_sdp(inst, tol=SOLVE_TOL) for inst in ensemble50]
    return sols, time.perf_counter() - t0


@pytest.fixture(scope="session")
def exact50(ensemble50):
    """(lambda_max, top eigenvector) per ensemble instance."""
    return [tp.lambda_max(tp.build_hamiltonian(inst)) for inst in ensemble50]


@pytest.fixture(scope="session")
def triangle():
    return tp.triangle_instance()


@pytest.fixture(scope="session")
def triangle_sdp(triangle):
    return tp.solve_soc_sdp(triangle, tol=SOLVE_TOL)
