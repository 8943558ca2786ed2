"""Fixed-size complex matrix arithmetic and polynomial eigen-machinery.

Everything here operates on small dense numpy arrays (2x2 and 4x4 complex
matrices, length-4 vectors) and on polynomial coefficient arrays stored in
ascending degree order.  No general eigensolver is used: characteristic
polynomials come from the Faddeev-LeVerrier recurrence and roots from a
Durand-Kerner iteration with a Newton polish.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import NonConvergenceError

_CLUSTER_TOL = 1e-7  # multiple-root clustering radius


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Complex matrix product of two equal-size square matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"size mismatch: {a.shape} x {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a, dtype=complex).conj().T


def char_poly(m: np.ndarray) -> np.ndarray:
    """Coefficients of det(m - lambda*I), ascending degree.

    Computed with the Faddeev-LeVerrier recurrence.  For an n x n input the
    result has length n+1; the leading coefficient is (-1)^n, so the 4x4
    matrices used throughout this package yield a monic quartic.

    Parameters
    ----------
    m : array_like
        Square complex matrix (intended for the 2x2/4x4 sizes used here).

    Returns
    -------
    numpy.ndarray
        Length n+1 complex coefficient array, constant term first.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("char_poly expects a square matrix")
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    # descending coefficients of det(lambda*I - m): c_n = 1 down to c_0
    coeffs = [1.0 + 0.0j]
    aux = np.zeros_like(a)
    for k in range(1, n + 1):
        aux = a @ aux + coeffs[-1] * eye
        coeffs.append(-np.trace(a @ aux) / k)
    desc = np.array(coeffs)
    if n % 2 == 1:
        desc = -desc
    return desc[::-1].copy()


def poly_eval(coeffs: np.ndarray, z: complex) -> complex:
    """Horner evaluation of an ascending-order coefficient array."""
    acc = 0.0 + 0.0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _trimmed(coeffs) -> np.ndarray:
    cs = np.asarray(coeffs, dtype=complex)
    if cs.ndim != 1 or cs.size == 0:
        raise ValueError("coefficients must be a nonempty 1-d sequence")
    nz = np.nonzero(cs)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial has no roots")
    return cs[: nz[-1] + 1]


def _role_sort(roots) -> list[complex]:
    # descending |z|, then descending real part, then descending imaginary part
    return sorted(roots, key=lambda z: (-abs(z), -z.real, -z.imag))


def _cluster(roots: list[complex]) -> list[complex]:
    # average Durand-Kerner clusters so multiple roots come out identical
    out: list[complex | None] = [None] * len(roots)
    used = [False] * len(roots)
    for i in range(len(roots)):
        if used[i]:
            continue
        members = [i] + [
            j
            for j in range(i + 1, len(roots))
            if not used[j] and abs(roots[i] - roots[j]) < _CLUSTER_TOL
        ]
        avg = sum(roots[j] for j in members) / len(members)
        for j in members:
            used[j] = True
            out[j] = avg
    return out  # type: ignore[return-value]


def poly_roots(coeffs, max_iter: int = 500) -> list[complex]:
    """All roots (with multiplicity) of a degree 1..4 complex polynomial.

    Durand-Kerner iteration started on a deterministic ring of radius given
    by the Cauchy bound, followed by a short Newton polish.  Root clusters
    closer than 1e-7 are averaged and reported with multiplicity.  The output
    is sorted by descending modulus, then descending real part, then
    descending imaginary part.

    Raises
    ------
    NonConvergenceError
        If the iteration has not settled after ``max_iter`` sweeps.
    """
    cs = _trimmed(coeffs)
    n = cs.size - 1
    if not 1 <= n <= 4:
        raise ValueError(f"degree must be 1..4, got {n}")
    mon = cs / cs[-1]
    if n == 1:
        return [complex(-mon[0])]

    radius = 1.0 + max(abs(c) for c in mon[:-1])
    # phase offset breaks conjugate symmetry of the start ring
    roots = [radius * cmath.exp(1j * (2.0 * math.pi * j / n + 0.35)) for j in range(n)]
    res_scale = max(1.0, radius) ** n
    converged = False
    for _ in range(max_iter):
        shift = 0.0
        new = list(roots)
        for i in range(n):
            denom = 1.0 + 0.0j
            for j in range(n):
                if j != i:
                    denom *= roots[i] - roots[j]
            step = poly_eval(mon, roots[i]) / denom
            new[i] = roots[i] - step
            shift = max(shift, abs(step))
        roots = new
        # steps plateau at the cluster radius for multiple roots, so accept
        # on small residuals as well as on small steps
        if shift < 1e-14 * radius or max(
            abs(poly_eval(mon, z)) for z in roots
        ) < 1e-13 * res_scale:
            converged = True
            break
    if not converged:
        raise NonConvergenceError(
            f"Durand-Kerner did not converge in {max_iter} iterations"
        )

    deriv = np.array([k * mon[k] for k in range(1, n + 1)])
    for i in range(n):
        z = roots[i]
        for _ in range(3):
            dp = poly_eval(deriv, z)
            if abs(dp) < 1e-30:
                break
            cand = z - poly_eval(mon, z) / dp
            if abs(poly_eval(mon, cand)) <= abs(poly_eval(mon, z)):
                z = cand
            else:
                break
        roots[i] = z

    return _role_sort(_cluster(roots))


def is_hermitian_psd(m: np.ndarray, tol: float) -> bool:
    """True iff m is Hermitian and positive semidefinite within tol.

    Checks max|m - m^dagger| <= tol and that both eigenvalues of the
    Hermitian part are >= -tol (closed form for 2x2).
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError("is_hermitian_psd expects a 2x2 matrix")
    if np.abs(a - a.conj().T).max() > tol:
        return False
    h = (a + a.conj().T) / 2.0
    mean = (h[0, 0].real + h[1, 1].real) / 2.0
    gap = math.hypot((h[0, 0].real - h[1, 1].real) / 2.0, abs(h[0, 1]))
    return mean - gap >= -tol
