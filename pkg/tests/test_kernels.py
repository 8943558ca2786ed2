"""Backend equivalence: compiled extension vs NumPy fallback."""

import math

import numpy as np
import pytest

from oqwalk import _kernels_py, kernels
from oqwalk._dd import build_twisted_dd
from oqwalk.spectral import conjugation_superop
from oqwalk.walk import WalkParameters, build_kraus

_core = pytest.importorskip("oqwalk._core", reason="compiled extension not built")


@pytest.fixture(params=[(0.9, 2.2, 0.3), (math.pi / 6, math.pi / 3, 0.75)])
def kraus_and_rho(request):
    theta0, theta1, p = request.param
    kraus = build_kraus(WalkParameters(theta0=theta0, theta1=theta1, p=p))
    rho0 = np.diag([p, 1 - p]).astype(complex)
    return kraus, rho0


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "numpy")
    assert "numpy" in kernels.available_backends()


def test_step_sites_equivalent(kraus_and_rho, rng):
    kraus, _ = kraus_and_rho
    sites = rng.normal(size=(9, 2, 2)) + 1j * rng.normal(size=(9, 2, 2))
    a = _core.step_sites(kraus.P, kraus.Q, sites)
    b = _kernels_py.step_sites(kraus.P, kraus.Q, sites)
    assert np.abs(a - b).max() < 1e-14


def test_evolve_sites_equivalent(kraus_and_rho):
    kraus, rho0 = kraus_and_rho
    a = _core.evolve_sites(kraus.P, kraus.Q, rho0, 400)
    b = _kernels_py.evolve_sites(kraus.P, kraus.Q, rho0, 400)
    assert a.shape == b.shape == (401, 2, 2)
    assert np.abs(a - b).max() < 1e-12


def test_evolve_sites_matches_iterated_steps(kraus_and_rho):
    kraus, rho0 = kraus_and_rho
    sites = rho0[None, :, :]
    for _ in range(5):
        sites = _core.step_sites(kraus.P, kraus.Q, sites)
    direct = _core.evolve_sites(kraus.P, kraus.Q, rho0, 5)
    assert np.abs(sites - direct).max() < 1e-14


def test_evolve_moments_equivalent(kraus_and_rho):
    kraus, rho0 = kraus_and_rho
    e1a, e2a = _core.evolve_moments(kraus.P, kraus.Q, rho0, 400)
    e1b, e2b = _kernels_py.evolve_moments(kraus.P, kraus.Q, rho0, 400)
    assert np.abs(e1a - e1b).max() < 1e-11
    assert np.abs(e2a - e2b).max() < 1e-10


def test_propagate_dd_bitwise_equivalent(kraus_and_rho):
    kraus, _ = kraus_and_rho
    lp = conjugation_superop(kraus.P).real
    lq = conjugation_superop(kraus.Q).real
    for k in (0.0, 1e-4, -2e-4):
        ur, ui = build_twisted_dd(lp, lq, k)
        a = _core.propagate_dd(ur, ui, 0.3, 250)
        b = _kernels_py.propagate_dd(ur, ui, 0.3, 250)
        assert np.array_equal(a, b)
