"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the code paths they check: matrix
products are written as explicit loops, characteristic polynomials come
from cofactor expansion over polynomial coefficient arrays, and 2x2
conjugations are spelled out entry by entry.
"""

from __future__ import annotations

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def matmul_oracle(a, b):
    """Entry-wise sum-of-products matrix multiplication."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = a.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for k in range(n):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def conjugate_oracle(a, rho):
    """a rho a^H via explicit loops."""
    a = np.asarray(a, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    return matmul_oracle(matmul_oracle(a, rho), a.conj().T)


def _poly_mul(p, q):
    out = np.zeros(len(p) + len(q) - 1, dtype=complex)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_det(entries):
    """Determinant of a matrix of polynomials (ascending coeff arrays)."""
    n = len(entries)
    if n == 1:
        return entries[0][0]
    acc = np.zeros(1, dtype=complex)
    for col in range(n):
        minor = [
            [entries[r][c] for c in range(n) if c != col] for r in range(1, n)
        ]
        term = _poly_mul(entries[0][col], _poly_det(minor))
        sign = -1.0 if col % 2 else 1.0
        width = max(len(acc), len(term))
        acc = np.pad(acc, (0, width - len(acc)))
        acc = acc + sign * np.pad(term, (0, width - len(term)))
    return acc


def charpoly_cofactor(m):
    """Coefficients of det(m - lambda I), ascending, by cofactor expansion."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    entries = [
        [
            np.array([m[i, j], -1.0], dtype=complex)
            if i == j
            else np.array([m[i, j]], dtype=complex)
            for j in range(n)
        ]
        for i in range(n)
    ]
    coeffs = _poly_det(entries)
    return np.pad(coeffs, (0, n + 1 - len(coeffs)))


def random_params_cls(rng, n, *, min_manifold_dist=0.0, predicate=None):
    """Seeded random WalkParameters, optionally kept off the manifold."""
    from oqwalk.walk import WalkParameters

    out = []
    while len(out) < n:
        theta0, theta1 = rng.uniform(0.0, 2.0 * np.pi, 2)
        p = float(rng.uniform(0.0, 1.0))
        params = WalkParameters(theta0=float(theta0), theta1=float(theta1), p=p)
        if abs(params.c0 - params.s0 * params.s1) < min_manifold_dist:
            continue
        if predicate is not None and not predicate(params):
            continue
        out.append(params)
    return out
