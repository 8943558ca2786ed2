"""Fourier-space machinery for the walk.

The 2x2 internal state at wavenumber k is flattened into a 4-vector in the
order (r00, r11, r10, r01); one walk update then becomes multiplication by
the twisted generator

    U(k) = e^{ik} L(P) + e^{-ik} L(Q),

where L(a) is the 4x4 matrix implementing the conjugation rho -> a rho a^H
in that vector order.  Everything downstream lives here: k-space evolution,
inverse-transform reconstruction of the position distribution, spectra with
the cubic-factor structure of the characteristic polynomial, derivatives of
the eigenvalue branch through 1, the closed 2x2 block reductions available
on the s0*c1 = 0 and c0 = 0 parameter slices, and numeric moments from a
five-node central-difference stencil at k = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._dd import build_twisted_dd, dd_add, dd_div, dd_mul, dd_scale
from .errors import (
    DegenerateEigenvalueError,
    NotReducibleError,
    ResidueTooLargeError,
)
from .simulate import Distribution, MomentReport
from .smallmat import char_poly, poly_roots
from .walk import WalkParameters, build_kraus, initial_state_vector

#: flattening order: row-major index of (r00, r11, r10, r01)
_PERM = (0, 3, 2, 1)

_CASE_EPS = 1e-12
_RESIDUE_HARD = 1e-8
_VEC_TOL = 1e-10


@dataclass(frozen=True)
class FourierState:
    """k-space state (r00, r11, r10, r01) at one wavenumber and time."""

    k: float
    t: int
    psi: np.ndarray


@dataclass(frozen=True)
class TwistedGenerator:
    """The one-step 4x4 map at wavenumber k."""

    k: float
    matrix: np.ndarray


@dataclass(frozen=True)
class SpectrumReport:
    """Eigen-decomposition data of the twisted generator at one wavenumber.

    ``eigenvalues`` are role-ordered: index 0 is the branch through 1 at
    k = 0, indices 1 and 2 follow the two bounded cubic roots, index 3 is
    the linear-factor eigenvalue.  ``cubic_factor`` is populated (ascending
    coefficients) only off the c0 = s0*s1 manifold, where the characteristic
    polynomial splits as (lambda + 2*c0*s0*s1*cos k) * cubic.
    """

    k: float
    eigenvalues: tuple[complex, complex, complex, complex]
    eigenvectors: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    char_poly: np.ndarray
    cubic_factor: np.ndarray | None
    discriminant: float


@dataclass(frozen=True)
class ReducedSpectrum:
    """Closed 2x2 block data for the reducible parameter slices."""

    generator: np.ndarray
    nu: tuple[complex, complex]
    xi: tuple[np.ndarray, np.ndarray]
    b: tuple[complex, complex]
    z: tuple[complex, complex]
    phi: np.ndarray


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Flatten a 2x2 matrix to (r00, r11, r10, r01)."""
    r = np.asarray(rho, dtype=complex).reshape(-1)
    return r[list(_PERM)]


def devectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(4, dtype=complex)
    for pos, idx in enumerate(_PERM):
        out[idx] = v[pos]
    return out.reshape(2, 2)


def conjugation_superop(a: np.ndarray) -> np.ndarray:
    """4x4 matrix L(a) with vectorize(a rho a^H) = L(a) vectorize(rho).

    Built as the Kronecker product kron(a, conj(a)) permuted into the
    (r00, r11, r10, r01) order.  For real ``a`` this coincides entry for
    entry with the product M(a) M(a) of the sparse one-sided pattern
    [[a,0,0,b],[0,d,c,0],[c,0,0,d],[0,b,a,0]].
    """
    a = np.asarray(a, dtype=complex)
    big = np.kron(a, a.conj())
    return big[np.ix_(_PERM, _PERM)]


def twisted_generator(params: WalkParameters, k: float) -> TwistedGenerator:
    """U(k) = e^{ik} L(P) + e^{-ik} L(Q)."""
    kraus = build_kraus(params)
    phase = cmath.exp(1j * k)
    matrix = phase * conjugation_superop(kraus.P) + phase.conjugate() * conjugation_superop(
        kraus.Q
    )
    return TwistedGenerator(k=k, matrix=matrix)


def _matrix_power(m: np.ndarray, t: int) -> np.ndarray:
    """Binary powering; also works on stacked (..., 4, 4) arrays."""
    result = np.broadcast_to(np.eye(4, dtype=complex), m.shape).copy()
    base = m.copy()
    e = t
    while e:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


def evolve_fourier(params: WalkParameters, k: float, t: int) -> FourierState:
    """k-space state after t updates (binary powering of the generator)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    u = twisted_generator(params, k).matrix
    psi = _matrix_power(u, t) @ initial_state_vector(params)
    return FourierState(k=k, t=t, psi=psi)


def reconstruct_distribution(params: WalkParameters, t: int) -> Distribution:
    """Position distribution recovered from N = 2t+1 equispaced wavenumbers.

    The summed first two k-space components form a trigonometric polynomial
    of degree <= t, so the N-node quadrature over [-pi, pi) is exact.  Any
    imaginary residue above 1e-8 raises ResidueTooLargeError.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    n = 2 * t + 1
    ks = -math.pi + 2.0 * math.pi * np.arange(n) / n
    kraus = build_kraus(params)
    lp = conjugation_superop(kraus.P)
    lq = conjugation_superop(kraus.Q)
    phases = np.exp(1j * ks)
    stack = phases[:, None, None] * lp + phases.conj()[:, None, None] * lq
    psi = _matrix_power(stack, t) @ initial_state_vector(params)
    f = psi[:, 0] + psi[:, 1]
    xs = np.arange(-t, t + 1, 2)
    values = np.exp(1j * np.outer(xs, ks)) @ f / n
    worst = np.abs(values.imag).max() if values.size else 0.0
    if worst > _RESIDUE_HARD:
        raise ResidueTooLargeError(
            f"imaginary residue {worst:.3e} exceeds {_RESIDUE_HARD:.0e}"
        )
    pr = values.real.copy()
    pr[(pr < 0.0) & (pr > -1e-10)] = 0.0
    return Distribution(positions=xs, probabilities=pr)


def _cubic_factor_coeffs(params: WalkParameters, k: float) -> np.ndarray:
    """Ascending coefficients of the cubic factor of det(U(k) - lambda I)."""
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    a = s0 * (s0 * c1 * c1 + c0 * s1)
    sk2 = math.sin(k) ** 2
    return np.array(
        [
            2.0 * c0 * s0 * s1 * (1.0 - 4.0 * (c0 * s0 * s1) ** 2 * sk2) * math.cos(k),
            4.0 * c0 * s0 * s1 * a * sk2 + 2.0 * s0 * s0 * c1 * c1 - 1.0,
            -2.0 * a * math.cos(k),
            1.0,
        ],
        dtype=complex,
    )


def discriminant(params: WalkParameters) -> float:
    """J = (s0^2 c1^2 - (c0 - s0 s1)^2)^2 + 8 c0 s0 s1."""
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    s = s0 * s0 * c1 * c1 - (c0 - s0 * s1) ** 2
    return s * s + 8.0 * c0 * s0 * s1


def _bounded_pair_at_zero(params: WalkParameters) -> tuple[complex, complex]:
    """The two k=0 cubic roots besides 1 (quadratic closed form)."""
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    s = s0 * s0 * c1 * c1 - (c0 - s0 * s1) ** 2
    sq = cmath.sqrt(complex(discriminant(params)))
    return (s + sq) / 2.0, (s - sq) / 2.0


def _normalize_vec(v: np.ndarray) -> np.ndarray:
    scale = np.abs(v).max()
    if scale == 0.0:
        return v
    idx = int(np.nonzero(np.abs(v) > 1e-12 * scale)[0][0])
    v = v * (abs(v[idx]) / v[idx])
    return v / np.abs(v).max()


def _nullspace_vec(m: np.ndarray, avoid: list[np.ndarray]) -> np.ndarray:
    """Deterministic unit-max null vector of m, steered away from ``avoid``."""
    _, _, vh = np.linalg.svd(m)
    for row in (3, 2, 1):
        v = vh[row].conj().copy()
        for av in avoid:
            denom = np.vdot(av, av)
            if abs(denom) > 0:
                v = v - (np.vdot(av, v) / denom) * av
        if np.abs(v).max() > 1e-6:
            return _normalize_vec(v)
    raise np.linalg.LinAlgError("no usable null vector")  # pragma: no cover


def _residual_ok(u: np.ndarray, lam: complex, v: np.ndarray) -> bool:
    scale = np.abs(v).max()
    if scale == 0.0:
        return False
    return np.abs(u @ v - lam * v).max() <= _VEC_TOL * scale


def _case_a_eigensystem(
    params: WalkParameters, k: float, u: np.ndarray
) -> tuple[list[complex], list[np.ndarray]]:
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    root = math.sqrt(1.0 + 3.0 * s1 * s1)
    ck, sk = math.cos(k), math.sin(k)
    lam1 = s0 * s0 * complex((1.0 + s1 * s1) * ck, -c1 * root * sk)
    lam2 = s0 * s0 * complex((1.0 + s1 * s1) * ck, c1 * root * sk)
    lam34 = complex(-2.0 * s0 * s0 * s1 * s1 * ck)
    e2ik = cmath.exp(2j * k)
    eik = cmath.exp(1j * k)
    zp = 2.0 * s1 * s1 * (1.0 + e2ik) + c1 * (c1 + root)
    v1 = np.array(
        [
            zp * (c1 + root),
            4.0 * s1 * s1 * eik * complex(root * ck, -c1 * sk),
            2.0 * s1 * zp,
            2.0 * s1 * zp,
        ]
    )
    zm = 2.0 * s1 * s1 * (1.0 + e2ik) + c1 * (c1 - root)
    v2 = np.array(
        [
            zm * (c1 - root),
            -4.0 * s1 * s1 * eik * complex(root * ck, c1 * sk),
            2.0 * s1 * zm,
            2.0 * s1 * zm,
        ]
    )
    v3 = np.array([0.0, 0.0, -1.0, 1.0], dtype=complex)
    v4 = np.array([-2.0 * s1, 2.0 * s1, c1, c1], dtype=complex)
    lams = [lam1, lam2, lam34, lam34]
    vecs: list[np.ndarray] = []
    for lam, cand in zip(lams, (v1, v2, v3, v4)):
        same = [vec for lv, vec in zip(lams[: len(vecs)], vecs) if abs(lv - lam) < 1e-9]
        if _residual_ok(u, lam, cand):
            vecs.append(cand)
        else:
            vecs.append(_nullspace_vec(u - lam * np.eye(4), same))
    return lams, vecs


def _generic_eigensystem(
    params: WalkParameters, k: float, u: np.ndarray, cubic: np.ndarray
) -> tuple[list[complex], list[np.ndarray]]:
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    lam2_ref, lam3_ref = _bounded_pair_at_zero(params)
    refs = [1.0 + 0.0j, lam2_ref, lam3_ref]
    groots = poly_roots(cubic)
    # role-match the cubic roots to their k=0 continuations
    best = None
    for perm in (
        (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)
    ):
        cost = sum(abs(groots[perm[i]] - refs[i]) for i in range(3))
        if best is None or cost < best[0]:
            best = (cost, perm)
    perm = best[1]
    lam4 = complex(-2.0 * c0 * s0 * s1 * math.cos(k))
    lams = [groots[perm[0]], groots[perm[1]], groots[perm[2]], lam4]

    cands: list[np.ndarray | None] = [None] * 4
    if abs(k) < 1e-15:
        sq = cmath.sqrt(complex(discriminant(params)))
        head = -c0 * c0 - 2.0 * c0 * s0 * s1 + s0 * s0 * (c1 * c1 - s1 * s1)
        tail = 4.0 * c0 * s0 * c1
        cands[0] = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex)
        cands[1] = np.array([head + sq, -head - sq, tail, tail])
        cands[2] = np.array([head - sq, -head + sq, tail, tail])
        cands[3] = np.array([0.0, 0.0, -1.0, 1.0], dtype=complex)
    vecs: list[np.ndarray] = []
    for i, lam in enumerate(lams):
        same = [vec for lv, vec in zip(lams[: len(vecs)], vecs) if abs(lv - lam) < 1e-9]
        cand = cands[i]
        if cand is not None and not same and _residual_ok(u, lam, cand):
            vecs.append(cand)
        else:
            vecs.append(_nullspace_vec(u - lam * np.eye(4), same))
    return lams, vecs


def spectrum(params: WalkParameters, k: float, case_eps: float = _CASE_EPS) -> SpectrumReport:
    """Eigenvalues, eigenvectors, and polynomial structure of U(k).

    On the manifold c0 = s0*s1 the closed-form eigenvalue branches are used
    directly; otherwise the three bounded roots come from the cubic factor
    (Durand-Kerner) and the fourth from the linear factor.  Closed-form
    eigenvector representatives are attached where they exist and pass the
    residual check; all remaining vectors come from a null-space solve.
    """
    u = twisted_generator(params, k).matrix
    cp = char_poly(u)
    on_manifold = abs(params.c0 - params.s0 * params.s1) <= case_eps
    if on_manifold:
        lams, vecs = _case_a_eigensystem(params, k, u)
        cubic = None
    else:
        cubic = _cubic_factor_coeffs(params, k)
        lams, vecs = _generic_eigensystem(params, k, u, cubic)
    return SpectrumReport(
        k=k,
        eigenvalues=tuple(lams),
        eigenvectors=tuple(vecs),
        char_poly=cp,
        cubic_factor=cubic,
        discriminant=discriminant(params),
    )


def perron_derivatives(params: WalkParameters) -> tuple[complex, float]:
    """First and second k-derivatives at k=0 of the eigenvalue branch through 1.

    Differentiates the cubic factor implicitly.  With F(lambda, k) the cubic,
    F_k vanishes at (1, 0), so the first derivative is 0; the second is
    -F_kk / F_lambda, which reduces to the closed form

        -s0^2 (c1^2 + 4 c0^2 s1^2 + 4 c0 s0 s1 (c1^2 - 2 c0^2 s1^2)) / (c0 - s0 s1)^2.

    Raises DegenerateEigenvalueError on the manifold c0 = s0*s1 where the
    eigenvalue 1 is a double root.
    """
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    if abs(c0 - s0 * s1) <= _CASE_EPS:
        raise DegenerateEigenvalueError("eigenvalue 1 is degenerate when c0 = s0*s1")
    a = s0 * s0 * c1 * c1 + c0 * s0 * s1
    m = c0 * s0 * s1
    # cubic F(lambda, k) = lambda^3 + A(k) lambda^2 + B(k) lambda + C(k)
    f_lam = 3.0 + 2.0 * (-2.0 * a) + (2.0 * s0 * s0 * c1 * c1 - 1.0)
    if abs(f_lam) <= 1e-12:
        raise DegenerateEigenvalueError("dF/dlambda vanishes at (1, 0)")
    f_k = 0.0  # A'(0) = B'(0) = C'(0) = 0: every k-dependence is even in k
    lam_prime = complex(-f_k / f_lam + 0.0)
    f_kk = 2.0 * a + 8.0 * m * a - 2.0 * m - 16.0 * m ** 3
    f_lamlam = 6.0 - 4.0 * a
    f_klam = 0.0
    lam_second = -(
        f_kk + 2.0 * f_klam * lam_prime.real + f_lamlam * lam_prime.real ** 2
    ) / f_lam
    return lam_prime, float(lam_second)


def reduced_generator(params: WalkParameters, k: float) -> ReducedSpectrum:
    """Closed 2x2 block of U(k) with its eigendata, on the reducible slices.

    Applicable when s0*c1 = 0 (parity slice) or c0 = 0; raises
    NotReducibleError otherwise.  The reduced initial state (p, 1-p) is
    decomposed as b1 xi1 + b2 xi2 via the 2x2 Gram system, and
    z_j = xi_j[0] + xi_j[1] collects the observation weights.
    """
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    v = twisted_generator(params, k).matrix[:2, :2].copy()
    if abs(s0 * c1) <= _CASE_EPS:
        disc = math.sqrt(max(1.0 - 4.0 * (c0 * s0 * math.sin(k)) ** 2, 0.0))
        nu = (complex(disc), complex(-disc))
        off = v[1, 0]  # e^{-ik} c0^2 + e^{ik} s0^2 s1^2
        xi = (np.array([nu[0], off]), np.array([nu[1], off]))
    elif abs(c0) <= _CASE_EPS:
        sq = cmath.sqrt(complex(s1 ** 4 - c1 ** 4 * math.sin(k) ** 2))
        nu = (
            c1 * c1 * math.cos(k) + sq,
            c1 * c1 * math.cos(k) - sq,
        )
        low = cmath.exp(1j * k) * s1 * s1
        xi = (
            np.array([sq - 1j * c1 * c1 * math.sin(k), low]),
            np.array([-sq - 1j * c1 * c1 * math.sin(k), low]),
        )
    else:
        raise NotReducibleError(
            f"neither s0*c1 = 0 nor c0 = 0 holds (s0*c1 = {s0 * c1:.3e}, c0 = {c0:.3e})"
        )
    phi = np.array([params.p, 1.0 - params.p], dtype=complex)
    g11 = np.vdot(xi[0], xi[0])
    g22 = np.vdot(xi[1], xi[1])
    g12 = np.vdot(xi[0], xi[1])
    g21 = np.vdot(xi[1], xi[0])
    den = g11 * g22 - g12 * g21
    b1 = (np.vdot(xi[0], phi) * g22 - np.vdot(xi[1], phi) * g12) / den
    b2 = (np.vdot(xi[1], phi) * g11 - np.vdot(xi[0], phi) * g21) / den
    z = (complex(xi[0][0] + xi[0][1]), complex(xi[1][0] + xi[1][1]))
    return ReducedSpectrum(
        generator=v, nu=(complex(nu[0]), complex(nu[1])), xi=xi, b=(complex(b1), complex(b2)), z=z, phi=phi
    )


def _stencil_nodes_dd(params: WalkParameters, t: int, h: float) -> dict[int, tuple]:
    """f(m*h) = psi_1 + psi_2 for m in -2..2, as double-double (re, im) pairs."""
    kraus = build_kraus(params)
    lp = conjugation_superop(kraus.P).real
    lq = conjugation_superop(kraus.Q).real
    nodes = {}
    for m in (-2, -1, 0, 1, 2):
        ur, ui = build_twisted_dd(lp, lq, m * h)
        comp = kernels.propagate_dd(ur, ui, params.p, t)
        fr = dd_add(comp[0, 0, 0], comp[0, 0, 1], comp[1, 0, 0], comp[1, 0, 1])
        fi = dd_add(comp[0, 1, 0], comp[0, 1, 1], comp[1, 1, 0], comp[1, 1, 1])
        nodes[m] = (fr, fi)
    return nodes


def moments_numeric(params: WalkParameters, t: int, h: float = 1e-4) -> MomentReport:
    """Moments from central differences of the k-space amplitude at k = 0.

    The summed first two components of the k-space state are differentiated
    with the five-node stencil at k in {0, +-h, +-2h} (the Richardson
    combination of the h and 2h central differences, accurate to O(h^4)).
    Node values and the stencil sums are evaluated in compensated
    double-double arithmetic; plain float64 would lose the second derivative
    to the 1/h^2 amplification of rounding noise.

    Raises ResidueTooLargeError when the parts that should vanish by
    symmetry exceed 1e-8.
    """
    if not 0.0 < h <= 1e-2:
        raise ValueError("h must satisfy 0 < h <= 1e-2")
    if t < 0:
        raise ValueError("t must be >= 0")
    nodes = _stencil_nodes_dd(params, t, h)
    (f2r, f2i) = nodes[2]
    (f1r, f1i) = nodes[1]
    (f0r, f0i) = nodes[0]
    (g1r, g1i) = nodes[-1]
    (g2r, g2i) = nodes[-2]

    def _combo(a, b, c, d, e):
        # -a + 8b - 8d + e  (first-derivative numerator weights)
        acc = dd_scale(*a, -1.0)
        acc = dd_add(*acc, *dd_scale(*b, 8.0))
        acc = dd_add(*acc, *dd_scale(*d, -8.0))
        acc = dd_add(*acc, *dd_scale(*e, 1.0))
        return acc

    def _combo2(a, b, c, d, e):
        # -a + 16b - 30c + 16d - e  (second-derivative numerator weights)
        acc = dd_scale(*a, -1.0)
        acc = dd_add(*acc, *dd_scale(*b, 16.0))
        acc = dd_add(*acc, *dd_scale(*c, -30.0))
        acc = dd_add(*acc, *dd_scale(*d, 16.0))
        acc = dd_add(*acc, *dd_scale(*e, -1.0))
        return acc

    den1 = dd_scale(h, 0.0, 12.0)
    den2 = dd_scale(*dd_mul(h, 0.0, h, 0.0), 12.0)
    d1_re = dd_div(*_combo(f2r, f1r, f0r, g1r, g2r), *den1)
    d1_im = dd_div(*_combo(f2i, f1i, f0i, g1i, g2i), *den1)
    d2_re = dd_div(*_combo2(f2r, f1r, f0r, g1r, g2r), *den2)
    d2_im = dd_div(*_combo2(f2i, f1i, f0i, g1i, g2i), *den2)

    # E(X) = Re(i * f'(0)) = -Im f'(0); E(X^2) = -Re f''(0)
    e1 = -(d1_im[0] + d1_im[1])
    e2 = -(d2_re[0] + d2_re[1])
    residue1 = abs(d1_re[0] + d1_re[1])
    residue2 = abs(d2_im[0] + d2_im[1])
    if max(residue1, residue2) > _RESIDUE_HARD:
        raise ResidueTooLargeError(
            f"imaginary residue {max(residue1, residue2):.3e} exceeds {_RESIDUE_HARD:.0e}"
        )
    return MomentReport.from_raw(t, e1, e2)
