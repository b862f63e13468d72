"""Compiled inner loops.

Every kernel is generic over ``float64``/``complex128``: called with real
coefficients and real points it runs entirely in real arithmetic.  All
kernels release the GIL so callers may split work across threads.
"""
import math

import numpy as np
from numba import njit

OK = 0
ESCAPED = 1
UNDECIDED = 2
DEPTH = 3
NOCONV = 4
NOT_IN_PETAL = 5

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def horner(c, z):
    acc = c[-1] * (z - z + 1)
    for k in range(len(c) - 2, -1, -1):
        acc = acc * z + c[k]
    return acc


@njit(**_JIT)
def tail(A, t):
    """sum_k A_k t^k for k = 1..len(A)."""
    acc = t - t
    for k in range(len(A) - 1, -1, -1):
        acc = (acc + A[k]) * t
    return acc


@njit(**_JIT)
def dtail_dW(A, W):
    """d/dW of sum_k A_k W^-k."""
    t = 1.0 / W
    acc = t - t
    for k in range(len(A) - 1, -1, -1):
        acc = acc * t - (k + 1) * A[k]
    return acc * t * t


@njit(**_JIT)
def _bad(z, escape):
    return not np.isfinite(abs(z)) or abs(z) > escape


@njit(**_JIT)
def basin_point(c, a2, z, R, escape, nmax):
    """Return (status, index): OK once the orbit enters Re(-1/(a2 z)) > R."""
    for m in range(nmax + 1):
        if z == 0 or _bad(z, escape):
            return ESCAPED, m
        W = -1.0 / (a2 * z)
        if W.real > R:
            return OK, m
        z = horner(c, z)
    return UNDECIDED, nmax


@njit(**_JIT)
def phi_point(c, dc, a2, b, A, z, R, R_deep, escape, nmax):
    """Attracting Fatou coordinate by depth-then-asymptotic evaluation.

    Returns (status, value, derivative, entry index, depth index).
    """
    dz = z - z + 1.0
    zero = z - z
    entry = -1
    for m in range(nmax + 1):
        if z == 0 or _bad(z, escape):
            return ESCAPED, zero, zero, entry, m
        W = -1.0 / (a2 * z)
        if entry < 0 and W.real > R:
            entry = m
        if W.real > R_deep:
            val = W - b * np.log(W) + tail(A, 1.0 / W) - m
            dphi = 1.0 - b / W + dtail_dW(A, W)
            der = dphi * dz / (a2 * z * z)
            return OK, val, der, entry, m
        dz = dz * horner(dc, z)
        z = horner(c, z)
    if entry >= 0:
        return DEPTH, zero, zero, entry, nmax
    return UNDECIDED, zero, zero, entry, nmax


@njit(**_JIT)
def rep_coordinate_inverse(b, A, Z, tol):
    """Solve W - b log(-W) + tail(1/W) = Z for W deep in the left half-plane."""
    W = Z + b * np.log(-Z)
    for _ in range(60):
        Wn = Z + b * np.log(-W) - tail(A, 1.0 / W)
        d = abs(Wn - W)
        W = Wn
        if d <= tol * abs(W):
            return OK, W
    return NOCONV, W


@njit(**_JIT)
def psi_point(c, a2, b, A, Z, R_deep, escape, tol):
    """Repelling Fatou parameterization; returns (status, value, iterations)."""
    m = int(math.ceil(Z.real + R_deep))
    if m < 0:
        m = 0
    Zp = Z - m
    st, W = rep_coordinate_inverse(b, A, Zp, tol)
    z = -1.0 / (a2 * W)
    if st != OK:
        return st, z, m
    for k in range(m):
        z = horner(c, z)
        if _bad(z, escape):
            return ESCAPED, z, k + 1
    return OK, z, m


@njit(**_JIT)
def newton_preimage(c, dc, target, seed, maxit):
    """Solve f(y) = target from seed; returns (ok, y)."""
    y = seed
    for _ in range(maxit):
        d = horner(dc, y)
        if d == 0:
            return False, y
        step = (horner(c, y) - target) / d
        y = y - step
        if abs(step) <= 4e-16 * abs(y) or step == 0:
            return True, y
    r = abs(horner(c, y) - target)
    return r <= 1e-13 * abs(target), y


@njit(**_JIT)
def psi_inverse_point(c, dc, a2, b, A, x, R, R_deep, nmax):
    """Inverse branch of psi on the repelling petal; returns (status, Z, pullbacks)."""
    zero = x - x
    if x == 0:
        return NOT_IN_PETAL, zero, 0
    W = -1.0 / (a2 * x)
    if not W.real < -R:
        return NOT_IN_PETAL, zero, 0
    y = x
    k = 0
    while W.real > -R_deep:
        ok, y = newton_preimage(c, dc, y, y, 40)
        if not ok:
            return NOCONV, zero, k
        k += 1
        if k > nmax:
            return DEPTH, zero, k
        W = -1.0 / (a2 * y)
        if not W.real < -R:
            return NOT_IN_PETAL, zero, k
    Z = W - b * np.log(-W) + tail(A, 1.0 / W) + k
    return OK, Z, k


@njit(**_JIT)
def lavaurs_point(c, dc, a2, b, A, z, sigma, R, R_deep, escape, nmax, tol):
    """psi(phi(z) + sigma); returns (status, value). ESCAPED covers both legs."""
    st, v, _, _, _ = phi_point(c, dc, a2, b, A, z, R, R_deep, escape, nmax)
    if st != OK:
        return st, z - z
    st2, w, _ = psi_point(c, a2, b, A, v + sigma, R_deep, escape, tol)
    if st2 == ESCAPED:
        return 10 + ESCAPED, w
    return st2, w


# --- array drivers ----------------------------------------------------------

@njit(**_JIT)
def basin_array(c, a2, zs, R, escape, nmax, status, index):
    for i in range(zs.shape[0]):
        st, m = basin_point(c, a2, zs[i], R, escape, nmax)
        status[i] = st
        index[i] = m


@njit(**_JIT)
def phi_array(c, dc, a2, b, A, zs, R, R_deep, escape, nmax, status, out, dout):
    for i in range(zs.shape[0]):
        st, v, d, _, _ = phi_point(c, dc, a2, b, A, zs[i], R, R_deep, escape, nmax)
        status[i] = st
        out[i] = v
        dout[i] = d


@njit(**_JIT)
def psi_array(c, a2, b, A, Zs, R_deep, escape, tol, status, out):
    for i in range(Zs.shape[0]):
        st, v, _ = psi_point(c, a2, b, A, Zs[i], R_deep, escape, tol)
        status[i] = st
        out[i] = v


@njit(**_JIT)
def psi_inverse_array(c, dc, a2, b, A, xs, R, R_deep, nmax, status, out):
    for i in range(xs.shape[0]):
        st, v, _ = psi_inverse_point(c, dc, a2, b, A, xs[i], R, R_deep, nmax)
        status[i] = st
        out[i] = v


@njit(**_JIT)
def lavaurs_array(c, dc, a2, b, A, zs, sigma, R, R_deep, escape, nmax, tol, status, out):
    for i in range(zs.shape[0]):
        st, v = lavaurs_point(c, dc, a2, b, A, zs[i], sigma, R, R_deep, escape, nmax, tol)
        status[i] = st
        out[i] = v


@njit(**_JIT)
def perturbed_orbit_end(c, eps2, z, m, escape):
    """(f + eps2)^m (z); returns (ok, value)."""
    for _ in range(m):
        z = horner(c, z) + eps2
        if _bad(z, escape):
            return False, z
    return True, z


@njit(**_JIT)
def fiber_run(c, g, coupling, z, w, steps, escape):
    """Iterate P(z, w) = (f(z) + coupling*w, g(w)) ``steps`` times."""
    for k in range(steps):
        z = horner(c, z) + coupling * w
        w = horner(g, w)
        if _bad(z, escape):
            return False, z, w, k + 1
    return True, z, w, steps


@njit(**_JIT)
def fiber_trace(c, g, coupling, z, w, steps, zs, ws):
    zs[0] = z
    ws[0] = w
    for k in range(steps):
        z = horner(c, z) + coupling * w
        w = horner(g, w)
        zs[k + 1] = z
        ws[k + 1] = w


@njit(**_JIT)
def bounded_orbit_grid(c, g, coupling, xs, ys, budget, escape, out, index):
    """Real skew-product: out[j, i] = 1 if orbit of (xs[i], ys[j]) stays bounded."""
    for j in range(ys.shape[0]):
        for i in range(xs.shape[0]):
            z = xs[i]
            w = ys[j]
            bounded = 1
            n = budget
            for k in range(budget):
                z = horner(c, z) + coupling * w
                w = horner(g, w)
                if not (abs(z) <= escape and abs(w) <= escape):
                    bounded = 0
                    n = k + 1
                    break
            out[j, i] = bounded
            index[j, i] = n
