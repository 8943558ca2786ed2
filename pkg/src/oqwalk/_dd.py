"""Double-double (compensated) float helpers.

A double-double value is an unevaluated sum ``hi + lo`` of two float64 with
``|lo| <= ulp(hi)/2``, giving roughly 32 significant digits.  Only the handful
of operations needed by the compensated Fourier propagation are provided.
The building blocks are the classic error-free transformations (TwoSum and
Dekker's TwoProd); correctness requires strict IEEE double arithmetic, i.e.
no FMA contraction of ``a*b - p``.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def fast_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_add(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    sh, sl = two_sum(xh, yh)
    sl += xl + yl
    return fast_two_sum(sh, sl)


def dd_mul(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    ph, pl = two_prod(xh, yh)
    pl += xh * yl + xl * yh
    return fast_two_sum(ph, pl)


def dd_scale(xh: float, xl: float, c: float) -> tuple[float, float]:
    ph, pl = two_prod(xh, c)
    pl += xl * c
    return fast_two_sum(ph, pl)


def dd_div(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    q1 = xh / yh
    rh, rl = dd_add(xh, xl, *dd_scale(yh, yl, -q1))
    return fast_two_sum(q1, rh / yh + rl / yh)


# Truncated Taylor series; adequate for the wavenumber offsets used by the
# five-node stencil (|x| <= 2e-2 keeps the tail below 1e-27).
_COS_FACTORS = (2.0, 12.0, 30.0, 56.0, 90.0)
_SIN_FACTORS = (6.0, 20.0, 42.0, 72.0, 110.0)


def dd_cos_sin(x: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """cos(x) and sin(x) as double-double pairs, for small |x|."""
    if abs(x) > 0.05:
        raise ValueError("dd_cos_sin is only valid for |x| <= 0.05")
    x2h, x2l = dd_mul(x, 0.0, x, 0.0)
    ch, cl = 1.0, 0.0
    th, tl = 1.0, 0.0
    sign = -1.0
    for f in _COS_FACTORS:
        th, tl = dd_mul(th, tl, x2h, x2l)
        th, tl = dd_div(th, tl, f, 0.0)
        ch, cl = dd_add(ch, cl, sign * th, sign * tl)
        sign = -sign
    sh, sl = x, 0.0
    th, tl = x, 0.0
    sign = -1.0
    for f in _SIN_FACTORS:
        th, tl = dd_mul(th, tl, x2h, x2l)
        th, tl = dd_div(th, tl, f, 0.0)
        sh, sl = dd_add(sh, sl, sign * th, sign * tl)
        sign = -sign
    return (ch, cl), (sh, sl)


def build_twisted_dd(lp: np.ndarray, lq: np.ndarray, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Entries of e^{ik}*lp + e^{-ik}*lq as double-double real/imag parts.

    ``lp`` and ``lq`` are real float64 4x4 matrices (exact inputs).  Returns
    two (4, 4, 2) arrays holding (hi, lo) pairs of the real and imaginary
    parts respectively.
    """
    (ch, cl), (sh, sl) = dd_cos_sin(abs(k))
    if k < 0.0:
        sh, sl = -sh, -sl
    ur = np.zeros((4, 4, 2))
    ui = np.zeros((4, 4, 2))
    for i in range(4):
        for j in range(4):
            p = float(lp[i, j])
            q = float(lq[i, j])
            # real part: cos(k) * (p + q)
            ur[i, j] = dd_add(*dd_scale(ch, cl, p), *dd_scale(ch, cl, q))
            # imaginary part: sin(k) * (p - q)
            ui[i, j] = dd_add(*dd_scale(sh, sl, p), *dd_scale(sh, sl, -q))
    return ur, ui
