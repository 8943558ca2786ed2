import cmath
import math

import numpy as np
import pytest

from conftest import conjugate_oracle, random_params_cls
from oqwalk import simulate, spectral
from oqwalk.errors import DegenerateEigenvalueError, NotReducibleError
from oqwalk.smallmat import poly_eval
from oqwalk.walk import WalkParameters, ballistic_theta1, build_kraus

GENERIC = WalkParameters(theta0=math.pi / 6, theta1=math.pi / 3, p=0.75)
PARITY = WalkParameters(theta0=math.pi / 3, theta1=math.pi / 2, p=0.75)
AXIS = WalkParameters(theta0=math.pi / 2, theta1=math.pi / 3, p=0.75)
TRACE_FORM = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex)


def ballistic_params(p=0.5):
    theta0 = 2 * math.pi / 7
    return WalkParameters(theta0=theta0, theta1=ballistic_theta1(theta0), p=p)


def m_pattern(a):
    # one-sided sparse factor of the conjugation map, valid for real a
    (aa, b), (c, d) = a
    return np.array(
        [[aa, 0, 0, b], [0, d, c, 0], [c, 0, 0, d], [0, b, aa, 0]], dtype=complex
    )


class TestVectorize:
    def test_mixture(self):
        got = spectral.vectorize(np.diag([0.3, 0.7]))
        assert np.array_equal(got, np.array([0.3, 0.7, 0, 0], dtype=complex))

    def test_upper_coherence_lands_last(self):
        got = spectral.vectorize(np.array([[0, 1], [0, 0]]))
        assert np.array_equal(got, np.array([0, 0, 0, 1], dtype=complex))

    def test_round_trip(self, rng):
        for _ in range(50):
            rho = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            assert np.array_equal(spectral.devectorize(spectral.vectorize(rho)), rho)


class TestConjugationSuperop:
    def test_identity(self):
        assert np.array_equal(spectral.conjugation_superop(np.eye(2)), np.eye(4, dtype=complex))

    def test_projects_initial_state(self):
        kraus = build_kraus(WalkParameters(theta0=math.pi / 3, theta1=math.pi / 2))
        out = spectral.conjugation_superop(kraus.P) @ np.array([1, 0, 0, 0], dtype=complex)
        assert np.abs(out - [0, 0.75, 0, 0]).max() < 1e-15

    def test_defining_property(self, rng):
        worst = 0.0
        for _ in range(1000):
            a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            rho = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            lhs = spectral.vectorize(conjugate_oracle(a, rho))
            rhs = spectral.conjugation_superop(a) @ spectral.vectorize(rho)
            worst = max(worst, np.abs(lhs - rhs).max())
        assert worst < 1e-12

    def test_real_matrices_match_sparse_factor_product(self, rng):
        for _ in range(100):
            a = rng.normal(size=(2, 2))
            assert np.array_equal(
                spectral.conjugation_superop(a), m_pattern(a) @ m_pattern(a)
            )


class TestTwistedGenerator:
    @pytest.mark.parametrize("k", [0.0, 0.7321, -2.5, math.pi / 3])
    def test_projector_point_is_diagonal(self, k):
        params = WalkParameters(theta0=math.pi / 2, theta1=0.0)
        got = spectral.twisted_generator(params, k).matrix
        want = np.diag([cmath.exp(-1j * k), cmath.exp(1j * k), 0, 0])
        assert np.abs(got - want).max() < 1e-15

    def test_parity_point_block_structure(self):
        got = spectral.twisted_generator(PARITY, 0.0).matrix
        assert np.abs(got[:2, :2] - [[0, 1], [1, 0]]).max() < 1e-12
        # rows 3-4 couple only to each other, with weight 2 c0 s0 s1 cos k
        w = 2 * PARITY.c0 * PARITY.s0 * PARITY.s1
        assert np.abs(got[2:, 2:] - [[0, w], [w, 0]]).max() < 1e-12
        assert np.abs(got[2:, :2]).max() < 1e-12
        assert np.abs(got[:2, 2:]).max() < 1e-12

    def test_trace_form_is_left_fixed_point_at_zero(self, rng):
        for params in random_params_cls(rng, 200):
            u = spectral.twisted_generator(params, 0.0).matrix
            assert np.abs(TRACE_FORM @ u - TRACE_FORM).max() < 1e-12

    def test_equals_phase_weighted_squares(self, rng):
        for params in random_params_cls(rng, 20):
            k = float(rng.uniform(-math.pi, math.pi))
            kraus = build_kraus(params)
            mp, mq = m_pattern(kraus.P), m_pattern(kraus.Q)
            want = cmath.exp(1j * k) * (mp @ mp) + cmath.exp(-1j * k) * (mq @ mq)
            got = spectral.twisted_generator(params, k).matrix
            assert np.abs(got - want).max() < 1e-15


class TestEvolveFourier:
    def test_zero_steps(self):
        st = spectral.evolve_fourier(GENERIC, 0.4, 0)
        assert np.array_equal(st.psi, np.array([0.75, 0.25, 0, 0], dtype=complex))

    def test_single_swap(self):
        st = spectral.evolve_fourier(PARITY, 0.0, 1)
        assert np.abs(st.psi - [0.25, 0.75, 0, 0]).max() < 1e-12

    def test_probability_form_preserved_at_zero(self, rng):
        for params in random_params_cls(rng, 10):
            for t in (1, 17, 1000):
                st = spectral.evolve_fourier(params, 0.0, t)
                assert abs(st.psi[0] + st.psi[1] - 1.0) < 1e-12


class TestReconstructDistribution:
    def test_zero_steps(self):
        dist = spectral.reconstruct_distribution(GENERIC, 0)
        assert dist.as_dict() == {0: 1.0}

    def test_one_step(self):
        dist = spectral.reconstruct_distribution(PARITY, 1).as_dict()
        assert dist[-1] == pytest.approx(0.625, abs=1e-13)
        assert dist[1] == pytest.approx(0.375, abs=1e-13)

    def test_matches_direct_evolution(self):
        direct = simulate.distribution(simulate.evolve(GENERIC, 100))
        fourier = spectral.reconstruct_distribution(GENERIC, 100)
        assert np.array_equal(direct.positions, fourier.positions)
        assert np.abs(direct.probabilities - fourier.probabilities).max() < 1e-10


class TestSpectrum:
    def test_generic_point_at_zero(self):
        report = spectral.spectrum(GENERIC, 0.0)
        expected = [1.0, 0.8057777493406126, -0.9307777493406129, -0.75]
        assert np.abs(np.array(report.eigenvalues) - np.array(expected)).max() < 1e-10
        assert report.cubic_factor is not None
        assert report.discriminant == pytest.approx(3.015625, abs=1e-12)

    def test_ballistic_point_at_zero(self):
        params = ballistic_params()
        report = spectral.spectrum(params, 0.0)
        lams = np.array(report.eigenvalues)
        assert np.abs(lams[:2] - 1.0).max() < 1e-12
        assert np.abs(lams[2:] - (-0.7774790660436858)).max() < 1e-12
        assert report.cubic_factor is None

    @pytest.mark.parametrize("k", [0.0, math.pi / 3, -1.1])
    def test_projector_point(self, k):
        params = WalkParameters(theta0=math.pi / 2, theta1=0.0)
        report = spectral.spectrum(params, k)
        got = sorted(report.eigenvalues, key=lambda z: (-abs(z), -z.imag))
        want = sorted(
            [cmath.exp(-1j * k), cmath.exp(1j * k), 0.0, 0.0],
            key=lambda z: (-abs(z), -z.imag),
        )
        assert np.abs(np.array(got) - np.array(want)).max() < 1e-12

    def test_eigen_residuals(self, rng):
        params_list = random_params_cls(rng, 40) + [
            GENERIC, PARITY, AXIS, ballistic_params(), ballistic_params(0.75)
        ]
        for params in params_list:
            k = float(rng.uniform(-math.pi, math.pi))
            for kk in (0.0, k):
                report = spectral.spectrum(params, kk)
                u = spectral.twisted_generator(params, kk).matrix
                for lam, vec in zip(report.eigenvalues, report.eigenvectors):
                    scale = np.abs(vec).max()
                    assert scale > 0
                    assert np.abs(u @ vec - lam * vec).max() <= 1e-9 * scale

    def test_eigenvalues_satisfy_char_poly(self, rng):
        for params in random_params_cls(rng, 50):
            k = float(rng.uniform(-math.pi, math.pi))
            report = spectral.spectrum(params, k)
            for lam in report.eigenvalues:
                assert abs(poly_eval(report.char_poly, lam)) < 1e-9

    def test_factorization_residual(self, rng):
        for params in random_params_cls(rng, 200, min_manifold_dist=1e-9):
            k = float(rng.uniform(-math.pi, math.pi))
            report = spectral.spectrum(params, k)
            linear = np.array([2 * params.c0 * params.s0 * params.s1 * math.cos(k), 1.0])
            prod = np.convolve(linear, report.cubic_factor)
            assert np.abs(report.char_poly - prod).max() < 1e-9

    def test_spectral_radius_at_zero(self, rng):
        for params in random_params_cls(rng, 200):
            mags = np.abs(np.array(spectral.spectrum(params, 0.0).eigenvalues))
            assert abs(mags.max() - 1.0) < 1e-10
            assert (mags <= 1.0 + 1e-10).all()

    def test_manifold_top_eigenvalue_identity(self, rng):
        # s0^2 (1 + s1^2) telescopes to 1 exactly on the manifold
        for theta0 in rng.uniform(math.pi / 4 + 0.01, math.pi / 2, 50):
            params = WalkParameters(theta0=float(theta0), theta1=ballistic_theta1(float(theta0)))
            lam1 = spectral.spectrum(params, 0.0).eigenvalues[0]
            assert abs(lam1 - 1.0) < 1e-12
            assert abs(params.s0 ** 2 * (1 + params.s1 ** 2) - 1.0) < 1e-12

    def test_manifold_vectors_orthogonal_to_trace_form(self, rng):
        for theta0 in rng.uniform(math.pi / 4 + 0.01, math.pi / 2, 20):
            params = WalkParameters(theta0=float(theta0), theta1=ballistic_theta1(float(theta0)))
            report = spectral.spectrum(params, float(rng.uniform(-1, 1)))
            for vec in report.eigenvectors[2:]:
                overlap = TRACE_FORM @ vec
                assert abs(overlap) < 1e-9 * np.abs(vec).max()

    def test_generic_leading_expansion_weight(self, rng):
        # <v1|psi0> / <v1|v1> = 1/2 independent of p
        for params in random_params_cls(rng, 20, min_manifold_dist=1e-6):
            report = spectral.spectrum(params, 0.0)
            v1 = report.eigenvectors[0]
            psi0 = np.array([params.p, 1 - params.p, 0, 0], dtype=complex)
            a1 = np.vdot(v1, psi0) / np.vdot(v1, v1)
            assert a1 == pytest.approx(0.5, abs=1e-10)


class TestPerronDerivatives:
    def test_generic_reference_point(self):
        prime, second = spectral.perron_derivatives(GENERIC)
        assert abs(prime) < 1e-10
        assert second == pytest.approx(-19.0 / 12.0, abs=1e-12)

    def test_axis_point(self):
        prime, second = spectral.perron_derivatives(AXIS)
        assert abs(prime) < 1e-10
        assert second == pytest.approx(-1.0 / 3.0, abs=1e-12)

    def test_degenerate_on_manifold(self):
        with pytest.raises(DegenerateEigenvalueError):
            spectral.perron_derivatives(ballistic_params())

    def test_against_tracked_root_differences_reference(self):
        # second central difference of the root of the cubic tracked from 1
        h = 1e-3
        lam = {k: spectral.spectrum(GENERIC, k).eigenvalues[0] for k in (-h, 0.0, h)}
        _, second = spectral.perron_derivatives(GENERIC)
        numeric = (lam[h] - 2 * lam[0.0] + lam[-h]) / h ** 2
        assert abs(numeric.imag) < 1e-8
        assert numeric.real == pytest.approx(second, abs=1e-5)

    def test_against_tracked_root_differences_random(self, rng):
        # away from the manifold the h^2 truncation of the difference
        # quotient stays small relative to the curvature itself
        h = 1e-3
        for params in random_params_cls(rng, 25, min_manifold_dist=0.2):
            lam = {k: spectral.spectrum(params, k).eigenvalues[0] for k in (-h, 0.0, h)}
            _, second = spectral.perron_derivatives(params)
            numeric = (lam[h] - 2 * lam[0.0] + lam[-h]) / h ** 2
            assert abs(numeric.imag) < 1e-6 * (1 + abs(second))
            assert numeric.real == pytest.approx(second, rel=2e-2, abs=1e-6)


class TestReducedGenerator:
    def test_parity_slice_at_zero(self):
        red = spectral.reduced_generator(PARITY, 0.0)
        assert np.abs(red.generator - [[0, 1], [1, 0]]).max() < 1e-12
        assert red.nu[0] == pytest.approx(1.0, abs=1e-12)
        assert red.nu[1] == pytest.approx(-1.0, abs=1e-12)

    def test_axis_slice_at_zero(self):
        red = spectral.reduced_generator(AXIS, 0.0)
        assert np.abs(red.generator - [[0.25, 0.75], [0.75, 0.25]]).max() < 1e-12
        assert red.nu[0] == pytest.approx(1.0, abs=1e-12)
        assert red.nu[1] == pytest.approx(-0.5, abs=1e-12)

    def test_not_reducible(self):
        with pytest.raises(NotReducibleError):
            spectral.reduced_generator(GENERIC, 0.0)

    @pytest.mark.parametrize("params", [PARITY, AXIS])
    def test_eigen_residual_and_decomposition(self, params, rng):
        for k in rng.uniform(-math.pi, math.pi, 20):
            red = spectral.reduced_generator(params, float(k))
            for nu, xi in zip(red.nu, red.xi):
                assert np.abs(red.generator @ xi - nu * xi).max() < 1e-10
            recon = red.b[0] * red.xi[0] + red.b[1] * red.xi[1]
            assert np.abs(recon - red.phi).max() < 1e-10
            for xi, z in zip(red.xi, red.z):
                assert z == xi[0] + xi[1]

    def test_axis_gram_denominator_identity(self, rng):
        s1, c1 = AXIS.s1, AXIS.c1
        for k in rng.uniform(-math.pi, math.pi, 20):
            red = spectral.reduced_generator(AXIS, float(k))
            g11 = np.vdot(red.xi[0], red.xi[0])
            g22 = np.vdot(red.xi[1], red.xi[1])
            g12 = np.vdot(red.xi[0], red.xi[1])
            den = g11 * g22 - g12 * np.conj(g12)
            want = 4 * s1 ** 4 * (s1 ** 4 - c1 ** 4 * math.sin(k) ** 2)
            assert den.real == pytest.approx(want, rel=1e-10, abs=1e-12)
            assert abs(den.imag) < 1e-12

    def test_axis_subleading_eigenvalue_bounded(self, rng):
        for theta1 in rng.uniform(0.05, math.pi / 2 - 0.05, 30):
            params = WalkParameters(theta0=math.pi / 2, theta1=float(theta1))
            red = spectral.reduced_generator(params, 0.0)
            assert abs(red.nu[1]) < 1.0
            assert red.nu[1].real == pytest.approx(
                params.c1 ** 2 - params.s1 ** 2, abs=1e-12
            )


class TestMomentsNumeric:
    def test_zero_time(self):
        rep = spectral.moments_numeric(GENERIC, 0)
        assert rep.e1 == 0.0
        assert rep.e2 == 0.0

    def test_single_step(self):
        rep = spectral.moments_numeric(PARITY, 1)
        assert rep.e1 == pytest.approx(-0.25, abs=1e-9)
        assert rep.e2 == pytest.approx(1.0, abs=1e-9)

    def test_matches_direct_at_t200(self):
        direct = simulate.moments(simulate.evolve(GENERIC, 200))
        numeric = spectral.moments_numeric(GENERIC, 200)
        assert abs(numeric.e1 - direct.e1) < 1e-6
        assert abs(numeric.e2 - direct.e2) < 1e-6

    def test_h_validation(self):
        with pytest.raises(ValueError):
            spectral.moments_numeric(GENERIC, 10, h=0.0)
        with pytest.raises(ValueError):
            spectral.moments_numeric(GENERIC, 10, h=0.1)
