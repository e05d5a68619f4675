# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled steady-state kernels (same algorithms as ``_kernels_py``)."""

from libc.math cimport sqrt, fabs, isfinite, NAN, INFINITY

import numpy as np

cdef enum:
    MAXEM = 2
    M_ITERATION = 1
    M_BISECTION = 2
    M_FAILED = -1

METHOD_CLOSED = 0
METHOD_ITERATION = 1
METHOD_BISECTION = 2
METHOD_FAILED = -1

cdef long STALL_AFTER = 20
cdef double STALL_RATIO = 0.99

cdef inline void _residual(double n, double kappa, double nbar, double f, double* G,
                           double* g1, double* pth, int m, double* r, double* scale) noexcept nogil:
    cdef double nt = f * n
    cdef double den
    cdef int j
    r[0] = kappa * (nbar - n)
    scale[0] = kappa * (nbar + n)
    for j in range(m):
        den = G[j] * (2.0 * nt + 1.0) + g1[j]
        if den > 0.0:
            r[0] += G[j] * g1[j] * (pth[j] - nt * (1.0 - 2.0 * pth[j])) / den
            scale[0] += G[j] * (nt + pth[j])


cdef int _reduced_root(double kappa, double nbar, double f, double* G, double* g1,
                       double* pth, int m, double damping, double tol, long maxiter,
                       double* n_out, long* it_out) noexcept nogil:
    cdef double gsum = 0.0, pump = 0.0, hi_e = nbar, hi, n, n_new, num, den, p, dd
    cdef double step, prev_step = INFINITY, r, scale, lo, mid
    cdef bint emitter_bound = True, ok = False
    cdef long it = 0, bis = 0
    cdef int j
    for j in range(m):
        gsum += g1[j]
        pump += G[j] * pth[j]
        if g1[j] > 0.0 and G[j] > 0.0:
            if pth[j] >= 0.5 or f <= 0.0:
                emitter_bound = False
            else:
                hi_e = max(hi_e, pth[j] / (f * (1.0 - 2.0 * pth[j])))
    if kappa > 0.0:
        hi = nbar + pump / kappa
        if emitter_bound:
            hi = min(hi, hi_e)
    elif emitter_bound and gsum > 0.0:
        hi = hi_e
    else:
        n_out[0] = NAN
        it_out[0] = 0
        return M_FAILED

    n = nbar
    while it < maxiter:
        it += 1
        num = kappa * nbar
        den = kappa
        for j in range(m):
            dd = G[j] * (2.0 * f * n + 1.0) + g1[j]
            p = (G[j] * f * n + g1[j] * pth[j]) / dd if dd > 0.0 else pth[j]
            num += G[j] * p
            den += G[j] * f * (1.0 - 2.0 * p)
        if not den > 0.0:
            break
        n_new = (1.0 - damping) * n + damping * num / den
        if not isfinite(n_new) or n_new < 0.0:
            break
        step = fabs(n_new - n)
        n = n_new
        if step <= tol:
            _residual(n, kappa, nbar, f, G, g1, pth, m, &r, &scale)
            ok = fabs(r) <= 1e-10 * scale or scale == 0.0
            break
        # slow contraction: bisection is cheaper
        if it >= STALL_AFTER and step >= STALL_RATIO * prev_step:
            break
        prev_step = step
    if ok:
        n_out[0] = n
        it_out[0] = it
        return M_ITERATION

    lo = 0.0
    hi = hi * (1.0 + 1e-12) + 1e-300
    while hi - lo > tol * max(1.0, lo) and bis < 400:
        mid = 0.5 * (lo + hi)
        _residual(mid, kappa, nbar, f, G, g1, pth, m, &r, &scale)
        if r > 0.0:
            lo = mid
        else:
            hi = mid
        bis += 1
    n_out[0] = 0.5 * (lo + hi)
    it_out[0] = it + bis
    return M_BISECTION


def reduced_root(double kappa, double nbar, double f, G, g1, pth, int m,
                 double damping, double tol, long maxiter):
    """Steady cavity occupation with emitters eliminated; see ``_kernels_py``."""
    cdef double Ga[MAXEM]
    cdef double ga[MAXEM]
    cdef double pa[MAXEM]
    cdef double n
    cdef long it
    cdef int j, meth
    if m < 1 or m > MAXEM:
        raise ValueError("m must be 1 or 2")
    for j in range(m):
        Ga[j] = G[j]
        ga[j] = g1[j]
        pa[j] = pth[j]
    meth = _reduced_root(kappa, nbar, f, Ga, ga, pa, m, damping, tol, maxiter, &n, &it)
    return n, it, meth


cdef inline double _persistent(double G, double kappa, double g1, double pth, double nbar,
                               double* a, double* b, double* c) noexcept nogil:
    cdef double disc, den
    a[0] = -2.0 * G * kappa
    b[0] = G * g1 * (2.0 * pth - 1.0) + G * kappa * (2.0 * nbar - 1.0) - kappa * g1
    c[0] = G * g1 * pth + G * kappa * nbar + kappa * g1 * nbar
    disc = b[0] * b[0] - 4.0 * a[0] * c[0]
    if disc < 0.0:
        disc = 0.0
    # pick the cancellation-free form of the non-negative root
    if b[0] > 0.0 and a[0] < 0.0:
        return (b[0] + sqrt(disc)) / (-2.0 * a[0])
    den = -b[0] + sqrt(disc)
    if den == 0.0:
        return NAN
    return 2.0 * c[0] / den


def persistent_root(double G, double kappa, double g1, double pth, double nbar):
    """Non-negative quadratic root; returns ``(n, a, b, c)``."""
    cdef double a, b, c, n
    n = _persistent(G, kappa, g1, pth, nbar, &a, &b, &c)
    return n, a, b, c


def clamped_batch(kappa, nbar, G, r1, r2):
    arrs = np.broadcast_arrays(*(np.asarray(x, float) for x in (kappa, nbar, G, r1, r2)))
    shape = arrs[0].shape
    cdef double[::1] k = np.ascontiguousarray(arrs[0]).reshape(-1)
    cdef double[::1] nb = np.ascontiguousarray(arrs[1]).reshape(-1)
    cdef double[::1] g = np.ascontiguousarray(arrs[2]).reshape(-1)
    cdef double[::1] a = np.ascontiguousarray(arrs[3]).reshape(-1)
    cdef double[::1] b = np.ascontiguousarray(arrs[4]).reshape(-1)
    out = np.empty(k.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef double den
    with nogil:
        for i in range(k.shape[0]):
            den = k[i] + g[i] * (b[i] - a[i])
            o[i] = (k[i] * nb[i] + g[i] * a[i]) / den if den > 0.0 else NAN
    return out.reshape(shape)


def persistent_batch(G, kappa, g1, pth, nbar):
    arrs = np.broadcast_arrays(*(np.asarray(x, float) for x in (G, kappa, g1, pth, nbar)))
    shape = arrs[0].shape
    cdef double[::1] Gv = np.ascontiguousarray(arrs[0]).reshape(-1)
    cdef double[::1] kv = np.ascontiguousarray(arrs[1]).reshape(-1)
    cdef double[::1] gv = np.ascontiguousarray(arrs[2]).reshape(-1)
    cdef double[::1] pv = np.ascontiguousarray(arrs[3]).reshape(-1)
    cdef double[::1] nv = np.ascontiguousarray(arrs[4]).reshape(-1)
    out = np.empty(Gv.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef double a, b, c
    with nogil:
        for i in range(Gv.shape[0]):
            o[i] = _persistent(Gv[i], kv[i], gv[i], pv[i], nv[i], &a, &b, &c)
    return out.reshape(shape)


def filtered_batch(G, kappa, g1, pth, nbar, f, double damping=0.5, double tol=1e-12,
                   long maxiter=100000):
    arrs = np.broadcast_arrays(*(np.asarray(x, float) for x in (G, kappa, g1, pth, nbar, f)))
    shape = arrs[0].shape
    cdef double[::1] Gv = np.ascontiguousarray(arrs[0]).reshape(-1)
    cdef double[::1] kv = np.ascontiguousarray(arrs[1]).reshape(-1)
    cdef double[::1] gv = np.ascontiguousarray(arrs[2]).reshape(-1)
    cdef double[::1] pv = np.ascontiguousarray(arrs[3]).reshape(-1)
    cdef double[::1] nv = np.ascontiguousarray(arrs[4]).reshape(-1)
    cdef double[::1] fv = np.ascontiguousarray(arrs[5]).reshape(-1)
    n_arr = np.empty(Gv.shape[0])
    m_arr = np.empty(Gv.shape[0], dtype=np.int64)
    cdef double[::1] no = n_arr
    cdef long long[::1] mo = m_arr
    cdef Py_ssize_t i
    cdef long it
    with nogil:
        for i in range(Gv.shape[0]):
            mo[i] = _reduced_root(kv[i], nv[i], fv[i], &Gv[i], &gv[i], &pv[i], 1,
                                  damping, tol, maxiter, &no[i], &it)
    return n_arr.reshape(shape), m_arr.reshape(shape)


def two_emitter_batch(G1, G2, g1a, g1b, ptha, pthb, kappa, nbar, double damping=0.5,
                      double tol=1e-12, long maxiter=100000):
    arrs = np.broadcast_arrays(*(np.asarray(x, float) for x in
                                 (G1, G2, g1a, g1b, ptha, pthb, kappa, nbar)))
    shape = arrs[0].shape
    cdef double[:, ::1] Gm = np.ascontiguousarray(np.stack([arrs[0].reshape(-1), arrs[1].reshape(-1)], 1))
    cdef double[:, ::1] gm = np.ascontiguousarray(np.stack([arrs[2].reshape(-1), arrs[3].reshape(-1)], 1))
    cdef double[:, ::1] pm = np.ascontiguousarray(np.stack([arrs[4].reshape(-1), arrs[5].reshape(-1)], 1))
    cdef double[::1] kv = np.ascontiguousarray(arrs[6]).reshape(-1)
    cdef double[::1] nv = np.ascontiguousarray(arrs[7]).reshape(-1)
    n_arr = np.empty(kv.shape[0])
    m_arr = np.empty(kv.shape[0], dtype=np.int64)
    cdef double[::1] no = n_arr
    cdef long long[::1] mo = m_arr
    cdef Py_ssize_t i
    cdef long it
    with nogil:
        for i in range(kv.shape[0]):
            mo[i] = _reduced_root(kv[i], nv[i], 1.0, &Gm[i, 0], &gm[i, 0], &pm[i, 0], 2,
                                  damping, tol, maxiter, &no[i], &it)
    return n_arr.reshape(shape), m_arr.reshape(shape)
