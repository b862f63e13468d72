"""Approximate Fatou coordinates for the fibre maps ``f_w(z) = f(z) + (pi^2/4) w``.

For small ``w`` the two fixed points of ``f_w`` sit near
``zeta(+/-) = +/- c1 sqrt(w) + c2 w`` and the gate between them is uniformized
by ``psi_w(Z) = i c1 sqrt(w) cot(pi Z) + c2 w`` on the strip ``0 < Re Z < 1``.
The correction ``chi_w`` absorbs the logarithmic drift coming from the cubic
coefficient, and ``phi_w = chi_w o psi_w^-1`` conjugates ``f_w`` to a
translation by ``sqrt(w)/2`` up to ``o(w)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as K
from .errors import (BranchCutHit, DerivativeVanished, NonConvergence, NotInBasin,
                     OutsideStrip, PoleAtInteger)
from .fatou_coords import FatouEvaluator, phi_attracting, psi_inverse
from .poly_core import ParabolicMap

__all__ = [
    "COUPLING",
    "FiberedMap",
    "ApproxCoordinate",
    "zeta",
    "psi_w",
    "psi_w_inverse",
    "chi_w",
    "chi_w_inverse",
    "phi_w",
    "phi_w_inverse",
    "phi_f_inverse",
    "property_check_attracting",
    "property_check_repelling",
    "property_check_translation",
    "TransitionLength",
    "transition_length_check",
]

COUPLING = math.pi ** 2 / 4
PI = math.pi


@dataclass(frozen=True)
class FiberedMap:
    """Pair ``f(z) = z + z^2 + a z^3 + ...`` and ``g(w) = w - w^2 + ...``."""

    f: ParabolicMap
    g: ParabolicMap
    coupling: float = COUPLING

    def __post_init__(self):
        if self.f.a2 != 1:
            raise ValueError("f must have the form z + z^2 + O(z^3)")
        if self.g.a2 != -1:
            raise ValueError("g must have the form w - w^2 + O(w^3)")

    @classmethod
    def from_coeffs(cls, fc, gc=(0, 1, -1)) -> "FiberedMap":
        return cls(ParabolicMap.from_coeffs(fc), ParabolicMap.from_coeffs(gc))

    @property
    def a(self) -> complex:
        return self.f.a3

    def fiber(self, z, w):
        return self.f(z) + self.coupling * w


@dataclass(frozen=True)
class ApproxCoordinate:
    """Constants of the approximate coordinate at one value of ``w``."""

    fibered: FiberedMap
    w: complex
    alpha: float = 0.6
    sqrt_w: complex = field(init=False)
    c1: complex = field(init=False)
    c2: complex = field(init=False)
    r_w: float = field(init=False)
    R_w: float = field(init=False)

    def __post_init__(self):
        if not 0.5 < self.alpha < 2 / 3:
            raise ValueError("alpha must lie in (1/2, 2/3)")
        w = complex(self.w)
        s = cmath.sqrt(w)
        if w != 0 and s.real <= 0:
            raise ValueError("w must have a square root with positive real part")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "sqrt_w", s)
        object.__setattr__(self, "c1", 0.5j * PI)
        object.__setattr__(self, "c2", complex(self.fibered.a) * PI ** 2 / 8 - 0.25)
        # w = 0 is the degenerate coordinate: zeta+- = 0 and the disks are empty
        object.__setattr__(self, "r_w", abs(w) ** ((1 - self.alpha) / 2))
        object.__setattr__(self, "R_w", abs(w) ** (-self.alpha / 2) if w else math.inf)

    @property
    def a(self) -> complex:
        return complex(self.fibered.a)

    def at(self, w) -> "ApproxCoordinate":
        return ApproxCoordinate(self.fibered, w, self.alpha)

    def next(self) -> "ApproxCoordinate":
        """Coordinate at ``g(w)``."""
        return self.at(self.fibered.g(self.w))

    @property
    def strip_margin(self) -> float:
        """``|w|^(1/4)``: the strip ``S_w`` is ``margin < Re Z < 1 - margin``."""
        return abs(self.w) ** 0.25


def zeta(ac: ApproxCoordinate, sign: int) -> complex:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * ac.c1 * ac.sqrt_w + ac.c2 * ac.w


def _near_integer(Z: complex) -> bool:
    return Z.imag == 0 and abs(Z.real - round(Z.real)) < 1e-15


def psi_w(ac: ApproxCoordinate, Z) -> complex:
    """``i c1 sqrt(w) cot(pi Z) + c2 w``."""
    Z = complex(Z)
    if _near_integer(Z):
        raise PoleAtInteger(f"psi_w has a pole at Z = {Z}")
    if abs(Z.imag) > 20:
        # cot(pi Z) -> -/+ i; avoids overflow in tan
        q = cmath.exp(2j * PI * Z) if Z.imag > 0 else cmath.exp(-2j * PI * Z)
        cot = -1j * (1 + q) / (1 - q) if Z.imag > 0 else 1j * (1 + q) / (1 - q)
    else:
        cot = 1 / cmath.tan(PI * Z)
    return 1j * ac.c1 * ac.sqrt_w * cot + ac.c2 * ac.w


def _log_plus_cut(x: complex) -> complex:
    """Logarithm cut along the positive reals with ``log(-1) = pi i``."""
    arg = cmath.phase(x)
    if arg < 0:
        arg += 2 * PI
    return complex(math.log(abs(x)), arg)


def psi_w_inverse(ac: ApproxCoordinate, z) -> complex:
    """``(1/(2 pi i)) log((z - zeta+)/(z - zeta-))``, valued in ``0 < Re < 1``."""
    z = complex(z)
    zp, zm = zeta(ac, 1), zeta(ac, -1)
    if z == zm:
        raise BranchCutHit("z coincides with zeta-")
    x = (z - zp) / (z - zm)
    if x == 0 or (x.imag == 0 and x.real > 0):
        raise BranchCutHit(f"ratio {x} lies on the cut of the logarithm")
    return _log_plus_cut(x) / (2j * PI)


def _chi_log(ac: ApproxCoordinate, Z: complex) -> complex:
    # branch of log on (1/sqrt w)(C \ R^-) vanishing at 1, applied to
    # 2 sin(pi Z)/(pi sqrt w): Log(2 sin(pi Z)/pi) - Log(sqrt w)
    y = 2 * cmath.sin(PI * Z) / PI
    if y.imag == 0 and y.real <= 0:
        raise BranchCutHit(f"2 sin(pi Z)/pi = {y} lies on the cut")
    return cmath.log(y) - cmath.log(ac.sqrt_w)


def chi_w(ac: ApproxCoordinate, Z, *, check_strip: bool = True) -> complex:
    """``Z - (sqrt(w)(1 - a)/2) log(2 sin(pi Z)/(pi sqrt w))``.

    By default ``Z`` must lie in ``|w|^(1/4) < Re Z < 1 - |w|^(1/4)``; the
    formula itself is holomorphic on the whole strip ``0 < Re Z < 1``.
    """
    Z = complex(Z)
    lo = ac.strip_margin if check_strip else 0.0
    if not lo < Z.real < 1 - lo:
        raise OutsideStrip(f"Re Z = {Z.real} outside ({lo}, {1 - lo})")
    k = ac.sqrt_w * (1 - ac.a) / 2
    if k == 0:
        return Z
    return Z - k * _chi_log(ac, Z)


def _dchi(ac: ApproxCoordinate, Z: complex) -> complex:
    return 1 - ac.sqrt_w * (1 - ac.a) * PI / 2 / cmath.tan(PI * Z)


def chi_w_inverse(ac: ApproxCoordinate, Y, *, maxit: int = 20, check_strip: bool = True) -> complex:
    """Newton inversion of ``chi_w`` seeded at ``Y`` (``chi_w`` is close to the identity)."""
    Y = complex(Y)
    if ac.a == 1:
        return Y
    Z = Y
    for _ in range(maxit):
        Zc = complex(min(max(Z.real, 1e-300), 1 - 1e-16), Z.imag)
        d = _dchi(ac, Zc)
        if d == 0:
            raise DerivativeVanished("chi_w' vanished")
        step = (chi_w(ac, Zc, check_strip=False) - Y) / d
        Z = Zc - step
        if abs(step) <= 1e-16 * max(1.0, abs(Z)):
            break
    lo = ac.strip_margin if check_strip else 0.0
    if not lo < Z.real < 1 - lo:
        raise OutsideStrip(f"chi_w^-1({Y}) = {Z} outside the strip")
    if abs(chi_w(ac, Z, check_strip=False) - Y) > 1e-12 * max(1.0, abs(Y)):
        raise NonConvergence(f"chi_w inverse did not converge at {Y}")
    return Z


def phi_w(ac: ApproxCoordinate, z, *, check_strip: bool = True) -> complex:
    return chi_w(ac, psi_w_inverse(ac, z), check_strip=check_strip)


def phi_w_inverse(ac: ApproxCoordinate, Y, *, check_strip: bool = True) -> complex:
    return psi_w(ac, chi_w_inverse(ac, Y, check_strip=check_strip))


def phi_f_inverse(ev: FatouEvaluator, Z, *, seed=None, maxit: int = 40, tol: float = 1e-11):
    """Solve ``phi_f(z) = Z`` by Newton from ``seed`` (default ``-1/(a2 Z)``).

    Stops once the residual ``|phi_f(z) - Z|`` drops below ``tol * max(1, |Z|)``.
    """
    Z = complex(Z)
    z = complex(seed) if seed is not None else -1.0 / (complex(ev.map.a2) * Z)
    scale = tol * max(1.0, abs(Z))
    for _ in range(maxit):
        v, d = phi_attracting(ev, z, with_derivative=True)
        if d == 0:
            raise DerivativeVanished("phi_f' vanished")
        z -= (v - Z) / d
        if abs(v - Z) < scale:
            return z
    raise NonConvergence(f"phi_f^-1({Z}) did not converge")


# ---- sampled property checks -----------------------------------------------

def _disk_samples(center: complex, radius: float, grid: int) -> np.ndarray:
    t = -1 + (2 * np.arange(grid) + 1) / grid
    x, y = np.meshgrid(t, t)
    keep = x ** 2 + y ** 2 < 1
    return center + radius * (x[keep] + 1j * y[keep])


def _sup(values) -> float:
    # deterministic: max by value, ties resolved by sample order
    vals = np.asarray(values, dtype=float)
    return float(vals[int(np.argmax(vals))])


def property_check_attracting(ac: ApproxCoordinate, grid: int = 32,
                              ev: Optional[FatouEvaluator] = None) -> float:
    """Sampled ``sup |(2/sqrt w) phi_w(phi_f^-1(Z)) - Z|`` over ``D(R_w, R_w/10)``.

    ``phi_w`` is evaluated on the whole strip ``0 < Re < 1``.
    """
    ev = ev or FatouEvaluator(ac.fibered.f)
    out = []
    for Z in _disk_samples(complex(ac.R_w), ac.R_w / 10, grid):
        z = phi_f_inverse(ev, Z)
        out.append(abs(2 / ac.sqrt_w * phi_w(ac, z, check_strip=False) - Z))
    return _sup(out)


def property_check_repelling(ac: ApproxCoordinate, grid: int = 32,
                             ev: Optional[FatouEvaluator] = None) -> float:
    """Sampled ``sup |psi_f^-1(phi_w^-1(1 + (sqrt w/2) Z)) - Z|`` over ``D(-R_w, R_w/10)``."""
    ev = ev or FatouEvaluator(ac.fibered.f)
    out = []
    for Z in _disk_samples(complex(-ac.R_w), ac.R_w / 10, grid):
        x = phi_w_inverse(ac, 1 + ac.sqrt_w / 2 * Z, check_strip=False)
        out.append(abs(psi_inverse(ev, x) - Z))
    return _sup(out)


def property_check_translation(ac: ApproxCoordinate, grid: int = 32) -> tuple[float, float, complex]:
    """Sampled ``sup |phi_{g(w)}(f_w(phi_w^-1(Y))) - Y - sqrt(w)/2|`` over the
    rectangle ``r_w/10 < Re Y < 1 - r_w/10``, ``|Im Y| < 1/2``.

    Returns ``(sup, sup/|w|, mean displacement)``.
    """
    nxt = ac.next()
    fib = ac.fibered
    lo = ac.r_w / 10
    t = (np.arange(grid) + 0.5) / grid
    xs = lo + (1 - 2 * lo) * t
    ys = -0.5 + t
    out, disp = [], []
    for y in ys:
        for x in xs:
            Y = complex(x, y)
            z = phi_w_inverse(ac, Y, check_strip=False)
            Y1 = phi_w(nxt, fib.fiber(z, ac.w), check_strip=False)
            disp.append(Y1 - Y)
            out.append(abs(Y1 - Y - ac.sqrt_w / 2))
    s = _sup(out)
    return s, s / abs(ac.w), complex(np.mean(disp))


@dataclass(frozen=True)
class TransitionLength:
    n: int
    k: int
    lhs: complex
    rhs: float

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)


def transition_length_check(g: ParabolicMap, w, n: int, alpha: float = 0.6) -> TransitionLength:
    """``2n * sum_{m = n^2 + k}^{n^2 + 2n - k} sqrt(w_m)/2`` against ``2n - 2k``
    with ``k = floor(n^alpha)`` and ``w_m = g^m(w)``."""
    if not 0.5 < alpha < 2 / 3:
        raise ValueError("alpha must lie in (1/2, 2/3)")
    k = int(math.floor(n ** alpha))
    lo, hi = n * n + k, n * n + 2 * n - k
    real = g.is_real and complex(w).imag == 0
    c = g.poly.array if real else g.poly.carray
    w0 = complex(w).real if real else complex(w)
    ok, wm = K.perturbed_orbit_end(c, 0.0 * w0, w0, lo, 1e300)
    if not ok:
        raise NotInBasin(f"{w!r} escapes under g")
    ws = np.empty(hi - lo + 1, dtype=np.complex128)
    for j in range(hi - lo + 1):
        ws[j] = wm
        wm = K.horner(c, wm)
    lhs = 2 * n * np.sum(np.sqrt(ws)) / 2
    if real:
        lhs = float(lhs.real)
    return TransitionLength(n, k, complex(lhs) if not real else lhs, float(2 * n - 2 * k))
