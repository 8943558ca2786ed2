# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: position-space evolution and compensated propagation.

Mirrors oqwalk._kernels_py; see that module for the contracts.  The
double-double routines follow the exact operation order of oqwalk._dd so the
two backends agree bit for bit (the extension is compiled with FMA
contraction disabled for that reason).
"""

import numpy as np

BACKEND_NAME = "compiled"

cdef double _SPLITTER = 134217729.0


cdef struct dd:
    double hi
    double lo


cdef inline dd two_sum(double a, double b) nogil:
    cdef dd r
    cdef double s = a + b
    cdef double bb = s - a
    r.hi = s
    r.lo = (a - (s - bb)) + (b - bb)
    return r


cdef inline dd fast_two_sum(double a, double b) nogil:
    cdef dd r
    cdef double s = a + b
    r.hi = s
    r.lo = b - (s - a)
    return r


cdef inline dd two_prod(double a, double b) nogil:
    cdef dd r
    cdef double p = a * b
    cdef double c = _SPLITTER * a
    cdef double ah = c - (c - a)
    cdef double al = a - ah
    cdef double bh, bl
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    r.hi = p
    r.lo = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return r


cdef inline dd dd_add(dd x, dd y) nogil:
    cdef dd s = two_sum(x.hi, y.hi)
    return fast_two_sum(s.hi, s.lo + (x.lo + y.lo))


cdef inline dd dd_mul(dd x, dd y) nogil:
    cdef dd p = two_prod(x.hi, y.hi)
    return fast_two_sum(p.hi, p.lo + (x.hi * y.lo + x.lo * y.hi))


cdef inline dd dd_neg(dd x) nogil:
    cdef dd r
    r.hi = -x.hi
    r.lo = -x.lo
    return r


def step_sites(p_op, q_op, sites):
    """One update of the site array (thin wrapper over the evolve loop)."""
    cdef double[:, ::1] P = np.array(p_op, dtype=float)
    cdef double[:, ::1] Q = np.array(q_op, dtype=float)
    cdef double complex[:, :, ::1] cur = np.array(sites, dtype=complex)
    out = np.zeros((cur.shape[0] + 1, 2, 2), dtype=complex)
    cdef double complex[:, :, ::1] nxt = out
    _one_step(P, Q, cur, nxt, cur.shape[0])
    return out


cdef void _one_step(double[:, ::1] P, double[:, ::1] Q,
                    double complex[:, :, ::1] cur,
                    double complex[:, :, ::1] nxt,
                    Py_ssize_t n) nogil:
    # nxt[j] = P cur[j] P^T + Q cur[j-1] Q^T for j = 0..n (missing terms zero)
    cdef Py_ssize_t j
    cdef double complex m00, m01, m10, m11
    cdef double complex t00, t01, t10, t11
    cdef double p00 = P[0, 0], p01 = P[0, 1], p10 = P[1, 0], p11 = P[1, 1]
    cdef double q00 = Q[0, 0], q01 = Q[0, 1], q10 = Q[1, 0], q11 = Q[1, 1]
    for j in range(n + 1):
        nxt[j, 0, 0] = 0
        nxt[j, 0, 1] = 0
        nxt[j, 1, 0] = 0
        nxt[j, 1, 1] = 0
    for j in range(n):
        m00 = cur[j, 0, 0]; m01 = cur[j, 0, 1]
        m10 = cur[j, 1, 0]; m11 = cur[j, 1, 1]
        # t = m @ P^T ; then P @ t, accumulated at site index j
        t00 = m00 * p00 + m01 * p01
        t01 = m00 * p10 + m01 * p11
        t10 = m10 * p00 + m11 * p01
        t11 = m10 * p10 + m11 * p11
        nxt[j, 0, 0] += p00 * t00 + p01 * t10
        nxt[j, 0, 1] += p00 * t01 + p01 * t11
        nxt[j, 1, 0] += p10 * t00 + p11 * t10
        nxt[j, 1, 1] += p10 * t01 + p11 * t11
        # t = m @ Q^T ; then Q @ t, accumulated at site index j+1
        t00 = m00 * q00 + m01 * q01
        t01 = m00 * q10 + m01 * q11
        t10 = m10 * q00 + m11 * q01
        t11 = m10 * q10 + m11 * q11
        nxt[j + 1, 0, 0] += q00 * t00 + q01 * t10
        nxt[j + 1, 0, 1] += q00 * t01 + q01 * t11
        nxt[j + 1, 1, 0] += q10 * t00 + q11 * t10
        nxt[j + 1, 1, 1] += q10 * t01 + q11 * t11


def evolve_sites(p_op, q_op, rho0, Py_ssize_t steps):
    """Evolve the single-site initial matrix rho0 for ``steps`` updates."""
    cdef double[:, ::1] P = np.array(p_op, dtype=float)
    cdef double[:, ::1] Q = np.array(q_op, dtype=float)
    cdef Py_ssize_t cap = steps + 1
    buf_a = np.zeros((cap, 2, 2), dtype=complex)
    buf_b = np.zeros((cap, 2, 2), dtype=complex)
    buf_a[0] = np.asarray(rho0, dtype=complex)
    cdef double complex[:, :, ::1] a = buf_a
    cdef double complex[:, :, ::1] b = buf_b
    cdef Py_ssize_t t, n = 1
    cdef bint a_is_cur = True
    with nogil:
        for t in range(steps):
            if a_is_cur:
                _one_step(P, Q, a, b, n)
            else:
                _one_step(P, Q, b, a, n)
            a_is_cur = not a_is_cur
            n += 1
    return (buf_a if a_is_cur else buf_b)[:n].copy()


def evolve_moments(p_op, q_op, rho0, Py_ssize_t steps):
    """First and second position moments at every time 0..steps (Kahan sums)."""
    cdef double[:, ::1] P = np.array(p_op, dtype=float)
    cdef double[:, ::1] Q = np.array(q_op, dtype=float)
    cdef Py_ssize_t cap = steps + 1
    buf_a = np.zeros((cap, 2, 2), dtype=complex)
    buf_b = np.zeros((cap, 2, 2), dtype=complex)
    buf_a[0] = np.asarray(rho0, dtype=complex)
    e1_arr = np.zeros(steps + 1)
    e2_arr = np.zeros(steps + 1)
    cdef double complex[:, :, ::1] a = buf_a
    cdef double complex[:, :, ::1] b = buf_b
    cdef double[::1] e1 = e1_arr
    cdef double[::1] e2 = e2_arr
    cdef Py_ssize_t t, j, n = 1
    cdef bint a_is_cur = True
    cdef double s1, c1, s2, c2, x, pr, term, y, tt
    with nogil:
        for t in range(steps + 1):
            s1 = 0.0; c1 = 0.0; s2 = 0.0; c2 = 0.0
            for j in range(n):
                if a_is_cur:
                    pr = (a[j, 0, 0] + a[j, 1, 1]).real
                else:
                    pr = (b[j, 0, 0] + b[j, 1, 1]).real
                x = <double>(-t + 2 * j)
                term = x * pr
                y = term - c1
                tt = s1 + y
                c1 = (tt - s1) - y
                s1 = tt
                term = x * x * pr
                y = term - c2
                tt = s2 + y
                c2 = (tt - s2) - y
                s2 = tt
            e1[t] = s1
            e2[t] = s2
            if t < steps:
                if a_is_cur:
                    _one_step(P, Q, a, b, n)
                else:
                    _one_step(P, Q, b, a, n)
                a_is_cur = not a_is_cur
                n += 1
    return e1_arr, e2_arr


def propagate_dd(double[:, :, ::1] ur, double[:, :, ::1] ui, double p, Py_ssize_t t):
    """Double-double power iteration; mirrors _kernels_py.propagate_dd."""
    cdef dd vr[4]
    cdef dd vi[4]
    cdef dd nr[4]
    cdef dd ni[4]
    cdef dd ar, ai, xr, xi, acc_r, acc_i, prod
    cdef Py_ssize_t step, i, j
    for i in range(4):
        vr[i].hi = 0.0; vr[i].lo = 0.0
        vi[i].hi = 0.0; vi[i].lo = 0.0
    vr[0].hi = p
    vr[1].hi = 1.0 - p
    with nogil:
        for step in range(t):
            for i in range(4):
                acc_r.hi = 0.0; acc_r.lo = 0.0
                acc_i.hi = 0.0; acc_i.lo = 0.0
                for j in range(4):
                    ar.hi = ur[i, j, 0]; ar.lo = ur[i, j, 1]
                    ai.hi = ui[i, j, 0]; ai.lo = ui[i, j, 1]
                    xr = vr[j]; xi = vi[j]
                    prod = dd_mul(ar, xr)
                    acc_r = dd_add(acc_r, prod)
                    prod = dd_mul(ai, xi)
                    acc_r = dd_add(acc_r, dd_neg(prod))
                    prod = dd_mul(ar, xi)
                    acc_i = dd_add(acc_i, prod)
                    prod = dd_mul(ai, xr)
                    acc_i = dd_add(acc_i, prod)
                nr[i] = acc_r
                ni[i] = acc_i
            for i in range(4):
                vr[i] = nr[i]
                vi[i] = ni[i]
    out = np.zeros((4, 2, 2))
    for i in range(4):
        out[i, 0, 0] = vr[i].hi
        out[i, 0, 1] = vr[i].lo
        out[i, 1, 0] = vi[i].hi
        out[i, 1, 1] = vi[i].lo
    return out
