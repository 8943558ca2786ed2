"""NumPy implementations of the hot kernels.

This is the fallback backend used when the compiled extension is not
available (or is disabled via OQWALK_PURE=1).  The compiled module
``oqwalk._core`` implements the same three functions with identical
semantics; see tests/test_kernels.py for the equivalence check.

State layout: a walk state at time t is a (t+1, 2, 2) complex array whose
j-th slice is the 2x2 site matrix at position x = -t + 2*j.
"""

from __future__ import annotations

import math

import numpy as np

from ._dd import dd_add, dd_mul

BACKEND_NAME = "numpy"


def step_sites(p_op: np.ndarray, q_op: np.ndarray, sites: np.ndarray) -> np.ndarray:
    """One update of the site array: out[j] = P s[j] P^T + Q s[j-1] Q^T."""
    n = sites.shape[0]
    out = np.zeros((n + 1, 2, 2), dtype=complex)
    out[:-1] = np.matmul(np.matmul(p_op, sites), p_op.T)
    out[1:] += np.matmul(np.matmul(q_op, sites), q_op.T)
    return out


def evolve_sites(
    p_op: np.ndarray, q_op: np.ndarray, rho0: np.ndarray, steps: int
) -> np.ndarray:
    """Evolve the single-site initial matrix rho0 for ``steps`` updates."""
    sites = np.zeros((1, 2, 2), dtype=complex)
    sites[0] = rho0
    for _ in range(steps):
        sites = step_sites(p_op, q_op, sites)
    return sites


def evolve_moments(
    p_op: np.ndarray, q_op: np.ndarray, rho0: np.ndarray, steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """First and second position moments at every time 0..steps.

    Per-time sums use math.fsum so the large x^2-weighted tails do not lose
    the low-order bits the exactness tests rely on.
    """
    e1 = np.zeros(steps + 1)
    e2 = np.zeros(steps + 1)
    sites = np.zeros((1, 2, 2), dtype=complex)
    sites[0] = rho0
    for t in range(steps + 1):
        x = np.arange(-t, t + 1, 2, dtype=float)
        pr = np.real(sites[:, 0, 0] + sites[:, 1, 1])
        e1[t] = math.fsum(x * pr)
        e2[t] = math.fsum(x * x * pr)
        if t < steps:
            sites = step_sites(p_op, q_op, sites)
    return e1, e2


def propagate_dd(ur: np.ndarray, ui: np.ndarray, p: float, t: int) -> np.ndarray:
    """Apply a 4x4 complex matrix (double-double entries) t times to (p,1-p,0,0).

    ``ur``/``ui`` are (4, 4, 2) arrays of (hi, lo) pairs for the real and
    imaginary entry parts.  Returns a (4, 2, 2) array: component, re/im,
    hi/lo.  All arithmetic is compensated, so the result is accurate to
    roughly 1e-30 relative regardless of t.
    """
    vr = [(p, 0.0), (1.0 - p, 0.0), (0.0, 0.0), (0.0, 0.0)]
    vi = [(0.0, 0.0)] * 4
    for _ in range(t):
        nr = []
        ni = []
        for i in range(4):
            srh, srl = 0.0, 0.0
            sih, sil = 0.0, 0.0
            for j in range(4):
                arh, arl = ur[i, j]
                aih, ail = ui[i, j]
                xrh, xrl = vr[j]
                xih, xil = vi[j]
                ph, pl = dd_mul(arh, arl, xrh, xrl)
                srh, srl = dd_add(srh, srl, ph, pl)
                ph, pl = dd_mul(aih, ail, xih, xil)
                srh, srl = dd_add(srh, srl, -ph, -pl)
                ph, pl = dd_mul(arh, arl, xih, xil)
                sih, sil = dd_add(sih, sil, ph, pl)
                ph, pl = dd_mul(aih, ail, xrh, xrl)
                sih, sil = dd_add(sih, sil, ph, pl)
            nr.append((srh, srl))
            ni.append((sih, sil))
        vr, vi = nr, ni
    out = np.zeros((4, 2, 2))
    for c in range(4):
        out[c, 0] = vr[c]
        out[c, 1] = vi[c]
    return out
