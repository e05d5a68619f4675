"""Pure-Python reference implementation of the steady-state kernels.

Mirrors ``_kernels.pyx`` line for line; used when the compiled module is
unavailable and as the benchmark baseline.
"""

import math

import numpy as np

METHOD_CLOSED = 0
METHOD_ITERATION = 1
METHOD_BISECTION = 2
METHOD_FAILED = -1

# iteration hands over to bisection when it contracts slower than this
STALL_AFTER = 20
STALL_RATIO = 0.99


def _residual(n, kappa, nbar, f, G, g1, pth, m):
    nt = f * n
    r = kappa * (nbar - n)
    scale = kappa * (nbar + n)
    for j in range(m):
        den = G[j] * (2.0 * nt + 1.0) + g1[j]
        if den > 0.0:
            r += G[j] * g1[j] * (pth[j] - nt * (1.0 - 2.0 * pth[j])) / den
            scale += G[j] * (nt + pth[j])
    return r, scale


def _populations(n, f, G, g1, pth, m):
    nt = f * n
    out = []
    for j in range(m):
        den = G[j] * (2.0 * nt + 1.0) + g1[j]
        out.append((G[j] * nt + g1[j] * pth[j]) / den if den > 0.0 else pth[j])
    return out


def reduced_root(kappa, nbar, f, G, g1, pth, m, damping, tol, maxiter):
    """Steady cavity occupation with emitters eliminated.

    Solves ``kappa (nbar - n) + sum_j G_j S_j(n) = 0`` where each emitter
    sits at its own balance ``G_j S_j = -g1_j (p_j - pth_j)`` and
    ``S_j = (2 f n + 1) p_j - f n``. Damped self-consistent iteration first,
    bisection on the residual as fallback (also taken early once the
    iteration contracts slower than ``STALL_RATIO`` per step).

    Returns
    -------
    n, iterations, method
    """
    # upper bracket: beyond either bound the residual is non-positive
    gsum = 0.0
    pump = 0.0
    hi_e = nbar
    emitter_bound = True
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
        return math.nan, 0, METHOD_FAILED

    n = nbar
    it = 0
    ok = False
    prev_step = math.inf
    while it < maxiter:
        it += 1
        p = _populations(n, f, G, g1, pth, m)
        num = kappa * nbar
        den = kappa
        for j in range(m):
            num += G[j] * p[j]
            den += G[j] * f * (1.0 - 2.0 * p[j])
        if not den > 0.0:
            break
        n_new = (1.0 - damping) * n + damping * num / den
        if not math.isfinite(n_new) or n_new < 0.0:
            break
        step = abs(n_new - n)
        n = n_new
        if step <= tol:
            r, scale = _residual(n, kappa, nbar, f, G, g1, pth, m)
            ok = abs(r) <= 1e-10 * scale or scale == 0.0
            break
        # slow contraction: bisection is cheaper
        if it >= STALL_AFTER and step >= STALL_RATIO * prev_step:
            break
        prev_step = step
    if ok:
        return n, it, METHOD_ITERATION

    lo = 0.0
    hi = hi * (1.0 + 1e-12) + 1e-300
    bis = 0
    while hi - lo > tol * max(1.0, lo) and bis < 400:
        mid = 0.5 * (lo + hi)
        r, _ = _residual(mid, kappa, nbar, f, G, g1, pth, m)
        if r > 0.0:
            lo = mid
        else:
            hi = mid
        bis += 1
    return 0.5 * (lo + hi), it + bis, METHOD_BISECTION


def persistent_root(G, kappa, g1, pth, nbar):
    """Non-negative root of ``a n^2 + b n + c = 0`` for one persistent emitter.

    Returns ``(n, a, b, c)``. For ``a < 0`` the roots have opposite signs;
    the positive one is evaluated as ``2c/(-b + sqrt(disc))`` when ``b <= 0``
    (accurate as ``a -> 0``) and as ``(b + sqrt(disc))/(-2a)`` when ``b > 0``,
    so neither form suffers cancellation.
    """
    a = -2.0 * G * kappa
    b = G * g1 * (2.0 * pth - 1.0) + G * kappa * (2.0 * nbar - 1.0) - kappa * g1
    c = G * g1 * pth + G * kappa * nbar + kappa * g1 * nbar
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        disc = 0.0
    # pick the cancellation-free form of the non-negative root
    if b > 0.0 and a < 0.0:
        return (b + math.sqrt(disc)) / (-2.0 * a), a, b, c
    den = -b + math.sqrt(disc)
    if den == 0.0:
        return math.nan, a, b, c
    return 2.0 * c / den, a, b, c


def clamped_batch(kappa, nbar, G, r1, r2):
    kappa, nbar, G, r1, r2 = np.broadcast_arrays(*(np.asarray(x, float) for x in
                                                   (kappa, nbar, G, r1, r2)))
    out = np.empty(kappa.shape)
    flat = out.reshape(-1)
    k, nb, g, a, b = (x.reshape(-1) for x in (kappa, nbar, G, r1, r2))
    for i in range(flat.size):
        den = k[i] + g[i] * (b[i] - a[i])
        flat[i] = (k[i] * nb[i] + g[i] * a[i]) / den if den > 0.0 else math.nan
    return out


def persistent_batch(G, kappa, g1, pth, nbar):
    G, kappa, g1, pth, nbar = np.broadcast_arrays(*(np.asarray(x, float) for x in
                                                    (G, kappa, g1, pth, nbar)))
    out = np.empty(G.size)
    args = [x.reshape(-1) for x in (G, kappa, g1, pth, nbar)]
    for i in range(out.size):
        out[i] = persistent_root(*(x[i] for x in args))[0]
    return out.reshape(G.shape)


def filtered_batch(G, kappa, g1, pth, nbar, f, damping=0.5, tol=1e-12, maxiter=100000):
    arrs = np.broadcast_arrays(*(np.asarray(x, float) for x in (G, kappa, g1, pth, nbar, f)))
    shape = arrs[0].shape
    G, kappa, g1, pth, nbar, f = (x.reshape(-1) for x in arrs)
    n = np.empty(G.size)
    meth = np.empty(G.size, dtype=np.int64)
    for i in range(G.size):
        n[i], _, meth[i] = reduced_root(kappa[i], nbar[i], f[i], [G[i]], [g1[i]], [pth[i]],
                                        1, damping, tol, maxiter)
    return n.reshape(shape), meth.reshape(shape)


def two_emitter_batch(G1, G2, g1a, g1b, ptha, pthb, kappa, nbar,
                      damping=0.5, tol=1e-12, maxiter=100000):
    arrs = np.broadcast_arrays(*(np.asarray(x, float) for x in
                                 (G1, G2, g1a, g1b, ptha, pthb, kappa, nbar)))
    shape = arrs[0].shape
    G1, G2, g1a, g1b, ptha, pthb, kappa, nbar = (x.reshape(-1) for x in arrs)
    n = np.empty(G1.size)
    meth = np.empty(G1.size, dtype=np.int64)
    for i in range(G1.size):
        n[i], _, meth[i] = reduced_root(kappa[i], nbar[i], 1.0, [G1[i], G2[i]],
                                        [g1a[i], g1b[i]], [ptha[i], pthb[i]], 2,
                                        damping, tol, maxiter)
    return n.reshape(shape), meth.reshape(shape)
