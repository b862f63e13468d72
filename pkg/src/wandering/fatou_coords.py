"""Attracting Fatou coordinate, repelling Fatou parameterization and petals.

With ``W = -1/(a2 z)`` the map becomes ``F(W) = W + 1 + b/W + O(W^-2)``.
The attracting coordinate is evaluated by iterating ``z`` until ``Re W``
exceeds ``deep_radius`` and then applying the asymptotic expansion

    Phi(W) = W - b Log W + A_1/W + ... + A_K/W^K,

which has the same limit as ``-1/(a2 f^m(z)) - m - b log m`` but converges
far faster.  The repelling parameterization inverts the mirror expansion
``W - b Log(-W) + ...`` deep in the left half-plane and pushes forward.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import mpmath
import numpy as np

from . import _kernels as K
from .errors import (DepthExceeded, NonConvergence, NonFinite, NotInBasin,
                     NotInRepellingPetal)
from .poly_core import ParabolicMap, evaluate

__all__ = [
    "FatouEvaluator",
    "BasinVerdict",
    "classify_basin",
    "phi_attracting",
    "psi_repelling",
    "psi_inverse",
    "calibrate_petal_radius",
]

PSI_ESCAPE = 1e150


def calibrate_petal_radius(fmap: ParabolicMap, start: float = 10.0, samples: int = 1000,
                           bound: float = 0.1) -> float:
    """Smallest ``R = start * 2^k`` with ``|F(Z)-Z-1| < bound`` and ``|F'(Z)-1| < bound`` on ``|Z| = R``.

    ``F(Z) - Z - 1`` and ``F'(Z) - 1`` are holomorphic outside the disk and
    vanish at infinity, so sampling the circle bounds the whole exterior.
    """
    c = fmap.poly.carray
    dc = fmap.dpoly.carray
    a2 = fmap.a2
    theta = 2 * np.pi * (np.arange(samples) + 0.5) / samples
    R = start
    for _ in range(60):
        Z = R * np.exp(1j * theta)
        z = -1.0 / (a2 * Z)
        fz = np.polyval(c[::-1], z)
        with np.errstate(all="ignore"):
            F = -1.0 / (a2 * fz)
            dF = np.polyval(dc[::-1], z) / (a2 * fz * fz) / (a2 * Z * Z)
            ok = (np.all(np.abs(F - Z - 1) < bound) and np.all(np.abs(dF - 1) < bound))
        if ok:
            return float(R)
        R *= 2
    raise NonConvergence("could not calibrate the petal radius")


@dataclass(frozen=True)
class BasinVerdict:
    status: str                   # "in_basin" | "escaped" | "undecided"
    index: int

    @property
    def in_basin(self) -> bool:
        return self.status == "in_basin"


_STATUS_NAMES = {K.OK: "in_basin", K.ESCAPED: "escaped", K.UNDECIDED: "undecided"}


@dataclass(frozen=True)
class FatouEvaluator:
    """Numerical evaluator for the Fatou coordinates of one parabolic map."""

    map: ParabolicMap
    petal_radius: Optional[float] = None
    deep_radius: float = 1e4
    max_orbit: Optional[int] = None
    escape_radius: float = 1e4
    tol: float = 1e-15
    series_order: int = 6
    precision: str = "double"
    R: float = field(init=False, repr=False)
    N_max: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.deep_radius < 1e4:
            raise ValueError("deep_radius must be at least 1e4")
        R = self.petal_radius if self.petal_radius is not None else calibrate_petal_radius(self.map)
        if R <= 0 or R >= self.deep_radius:
            raise ValueError("need 0 < petal_radius < deep_radius")
        nmax = self.max_orbit if self.max_orbit is not None else int(10 * self.deep_radius) + 1000
        if nmax < 10 * self.deep_radius:
            raise ValueError("max_orbit must be at least 10 * deep_radius")
        if self.precision not in ("double", "dd"):
            raise ValueError("precision must be 'double' or 'dd'")
        object.__setattr__(self, "R", float(R))
        object.__setattr__(self, "N_max", int(nmax))

    @classmethod
    def for_coeffs(cls, coeffs, **kw) -> "FatouEvaluator":
        return cls(ParabolicMap.from_coeffs(coeffs), **kw)

    def with_map(self, fmap: ParabolicMap) -> "FatouEvaluator":
        return FatouEvaluator(fmap, None, self.deep_radius, self.max_orbit,
                              self.escape_radius, self.tol, self.series_order, self.precision)

    # typed parameter bundles for the compiled kernels
    @cached_property
    def _complex(self):
        m = self.map
        A = np.array(m.series(self.series_order) or [0j], dtype=np.complex128)
        if not self.series_order:
            A[:] = 0
        return (m.poly.carray, m.dpoly.carray, complex(m.a2), complex(m.b), A)

    @cached_property
    def _real(self):
        m = self.map
        if not m.is_real:
            return None
        c, dc, a2, b, A = self._complex
        return (c.real.copy(), dc.real.copy(), a2.real, b.real, A.real.copy())

    def params(self, real: bool):
        return self._real if (real and self._real is not None) else self._complex

    @property
    def is_real(self) -> bool:
        return self.map.is_real

    # ---- vectorized entry points (arrays of points; no exceptions) ----

    def basin_many(self, zs):
        zs = np.ascontiguousarray(zs, dtype=np.complex128).ravel()
        c, _, a2, _, _ = self._complex
        st = np.empty(zs.shape, np.int64)
        idx = np.empty(zs.shape, np.int64)
        K.basin_array(c, a2, zs, self.R, self.escape_radius, self.N_max, st, idx)
        return st, idx

    def phi_many(self, zs, real: bool = False):
        real = real and self._real is not None
        dtype = np.float64 if real else np.complex128
        zs = np.ascontiguousarray(zs, dtype=dtype).ravel()
        c, dc, a2, b, A = self.params(real)
        st = np.empty(zs.shape, np.int64)
        out = np.empty(zs.shape, dtype)
        dout = np.empty(zs.shape, dtype)
        K.phi_array(c, dc, a2, b, A, zs, self.R, self.deep_radius, self.escape_radius,
                    self.N_max, st, out, dout)
        return st, out, dout

    def psi_many(self, Zs, real: bool = False):
        real = real and self._real is not None
        dtype = np.float64 if real else np.complex128
        Zs = np.ascontiguousarray(Zs, dtype=dtype).ravel()
        c, _, a2, b, A = self.params(real)
        st = np.empty(Zs.shape, np.int64)
        out = np.empty(Zs.shape, dtype)
        K.psi_array(c, a2, b, A, Zs, self.deep_radius, PSI_ESCAPE, self.tol, st, out)
        return st, out

    def psi_inverse_many(self, xs, real: bool = False):
        real = real and self._real is not None
        dtype = np.float64 if real else np.complex128
        xs = np.ascontiguousarray(xs, dtype=dtype).ravel()
        c, dc, a2, b, A = self.params(real)
        st = np.empty(xs.shape, np.int64)
        out = np.empty(xs.shape, dtype)
        K.psi_inverse_array(c, dc, a2, b, A, xs, self.R, self.deep_radius, self.N_max, st, out)
        return st, out


def _is_real_input(ev: FatouEvaluator, z) -> bool:
    return ev.is_real and isinstance(z, (float, int, np.floating, np.integer))


def classify_basin(ev: FatouEvaluator, z) -> BasinVerdict:
    c, _, a2, _, _ = ev.params(_is_real_input(ev, z))
    st, m = K.basin_point(c, a2, z if _is_real_input(ev, z) else complex(z),
                          ev.R, ev.escape_radius, ev.N_max)
    return BasinVerdict(_STATUS_NAMES[st], int(m))


def phi_attracting(ev: FatouEvaluator, z, *, with_derivative: bool = False):
    """Attracting Fatou coordinate ``phi_f(z)``, normalized by
    ``phi_f(z) = W - b Log W + o(1)`` with ``W = -1/(a2 z)``."""
    if ev.precision == "dd":
        val, der = _phi_mp(ev, z)
        return (val, der) if with_derivative else val
    real = _is_real_input(ev, z)
    c, dc, a2, b, A = ev.params(real)
    zz = float(z) if real else complex(z)
    st, val, der, _, _ = K.phi_point(c, dc, a2, b, A, zz, ev.R, ev.deep_radius,
                                     ev.escape_radius, ev.N_max)
    if st == K.DEPTH:
        raise DepthExceeded(f"orbit of {z!r} did not reach depth {ev.deep_radius}")
    if st != K.OK:
        raise NotInBasin(f"{z!r} is not in the parabolic basin ({_STATUS_NAMES[st]})")
    if not (cmath.isfinite(val) and cmath.isfinite(der)):
        raise NonFinite(z)
    return (val, der) if with_derivative else val


def psi_repelling(ev: FatouEvaluator, Z):
    """Repelling Fatou parameterization ``psi_f(Z)``, normalized by
    ``-1/(a2 psi_f(Z)) = Z + b Log(-Z) + o(1)`` as ``Re Z -> -inf``."""
    if ev.precision == "dd":
        return _psi_mp(ev, Z)
    real = _is_real_input(ev, Z)
    c, _, a2, b, A = ev.params(real)
    st, val, _ = K.psi_point(c, a2, b, A, float(Z) if real else complex(Z),
                             ev.deep_radius, PSI_ESCAPE, ev.tol)
    if st == K.NOCONV:
        raise NonConvergence(f"asymptotic inversion failed at Z={Z!r}")
    if st != K.OK or not cmath.isfinite(val):
        raise NonFinite(Z, "psi overflow")
    return val


def psi_inverse(ev: FatouEvaluator, x):
    """Inverse branch of ``psi_f`` on the repelling petal, valued in ``Re Z < -R``."""
    if ev.precision == "dd":
        return _psi_inverse_mp(ev, x)
    real = _is_real_input(ev, x)
    c, dc, a2, b, A = ev.params(real)
    st, Z, _ = K.psi_inverse_point(c, dc, a2, b, A, float(x) if real else complex(x),
                                   ev.R, ev.deep_radius, ev.N_max)
    if st == K.NOT_IN_PETAL:
        raise NotInRepellingPetal(f"{x!r} is not in the repelling petal")
    if st == K.NOCONV:
        raise NonConvergence(f"inverse branch pullback failed from {x!r}")
    if st != K.OK:
        raise DepthExceeded(f"pullback of {x!r} did not reach depth")
    return Z


# ---- extended precision path (mpmath, ~32 significant digits) ----------------

_MP_DPS = 32


def _mp_setup(ev: FatouEvaluator):
    from .poly_core import fatou_series
    cs = [mpmath.mpc(c) for c in ev.map.poly.coeffs]
    dcs = [k * cs[k] for k in range(1, len(cs))]
    A = fatou_series(cs, ev.series_order) if ev.series_order else []
    return cs, dcs, cs[2], 1 - (cs[3] if len(cs) > 3 else 0) / cs[2] ** 2, A


def _mp_horner(cs, z):
    acc = cs[-1]
    for c in cs[-2::-1]:
        acc = acc * z + c
    return acc


def _mp_tail(A, t):
    acc = 0
    for a in reversed(A):
        acc = (acc + a) * t
    return acc


def _phi_mp(ev, z):
    with mpmath.workdps(_MP_DPS):
        cs, dcs, a2, b, A = _mp_setup(ev)
        z = mpmath.mpc(z)
        dz = mpmath.mpc(1)
        for m in range(ev.N_max + 1):
            if z == 0 or abs(z) > ev.escape_radius:
                raise NotInBasin(f"orbit escaped at step {m}")
            W = -1 / (a2 * z)
            if W.real > ev.deep_radius:
                val = W - b * mpmath.log(W) + _mp_tail(A, 1 / W) - m
                dtail = sum(-(k + 1) * a * W ** (-(k + 2)) for k, a in enumerate(A))
                der = (1 - b / W + dtail) * dz / (a2 * z * z)
                return complex(val), complex(der)
            dz *= _mp_horner(dcs, z)
            z = _mp_horner(cs, z)
        raise DepthExceeded("orbit did not reach depth")


def _psi_mp(ev, Z):
    with mpmath.workdps(_MP_DPS):
        cs, _, a2, b, A = _mp_setup(ev)
        Z = mpmath.mpc(Z)
        m = max(0, int(mpmath.ceil(Z.real + ev.deep_radius)))
        Zp = Z - m
        W = Zp + b * mpmath.log(-Zp)
        for _ in range(80):
            Wn = Zp + b * mpmath.log(-W) - _mp_tail(A, 1 / W)
            if abs(Wn - W) <= mpmath.mpf(10) ** (-_MP_DPS + 2) * abs(Wn):
                W = Wn
                break
            W = Wn
        else:
            raise NonConvergence("asymptotic inversion failed")
        z = -1 / (a2 * W)
        for _ in range(m):
            z = _mp_horner(cs, z)
            if abs(z) > PSI_ESCAPE:
                raise NonFinite(complex(Z), "psi overflow")
        return complex(z)


def _psi_inverse_mp(ev, x):
    with mpmath.workdps(_MP_DPS):
        cs, dcs, a2, b, A = _mp_setup(ev)
        y = mpmath.mpc(x)
        W = -1 / (a2 * y)
        if not W.real < -ev.R:
            raise NotInRepellingPetal(f"{x!r} is not in the repelling petal")
        k = 0
        while W.real > -ev.deep_radius:
            target = y
            for _ in range(60):
                step = (_mp_horner(cs, y) - target) / _mp_horner(dcs, y)
                y -= step
                if abs(step) <= mpmath.mpf(10) ** (-_MP_DPS + 1) * abs(y):
                    break
            k += 1
            W = -1 / (a2 * y)
            if k > ev.N_max:
                raise DepthExceeded("pullback did not reach depth")
        return complex(W - b * mpmath.log(-W) + _mp_tail(A, 1 / W) + k)
