"""Lavaurs maps, the horn map and fixed points of the Lavaurs map.

``L_sigma = psi_f(phi_f(z) + sigma)`` is the limit of ``(f + eps^2)^n`` when
``pi/eps - n -> sigma``.  The transition map ``E = phi_f o psi_f`` commutes
with ``Z -> Z + 1`` and descends through ``u = exp(2 pi i Z)`` to the horn
map near ``u = 0``; its nontrivial fixed points correspond to fixed points of
``L_f``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import (DegenerateDenominator, HeightTooLow, NoSeedFound, NonConvergence,
                     NonFinite, NumericalError)
from .fatou_coords import FatouEvaluator, phi_attracting, psi_repelling
from .poly_core import ParabolicMap

__all__ = [
    "LavaursMap",
    "lavaurs_apply",
    "lavaurs_convergence_check",
    "HornSample",
    "horn_sample",
    "ResidueEstimate",
    "horn_residue",
    "horn_multiplier_residue",
    "horn_fixed_point",
    "FixedPointReport",
    "lavaurs_fixed_point",
    "multiplier_fd",
]

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class LavaursMap:
    """``L_{f,sigma} = psi_f o T_sigma o phi_f`` on the parabolic basin."""

    evaluator: FatouEvaluator
    sigma: complex = 0j

    def __post_init__(self):
        if not cmath.isfinite(self.sigma):
            raise ValueError("phase must be finite")

    @classmethod
    def for_map(cls, fmap: ParabolicMap, sigma=0j, **kw) -> "LavaursMap":
        return cls(FatouEvaluator(fmap, **kw), sigma)

    @property
    def map(self) -> ParabolicMap:
        return self.evaluator.map

    def __call__(self, z):
        return lavaurs_apply(self, z)

    def many(self, zs):
        """Vectorized evaluation; returns (status, values) with kernel status codes."""
        ev = self.evaluator
        zs = np.ascontiguousarray(zs, dtype=np.complex128).ravel()
        c, dc, a2, b, A = ev._complex
        st = np.empty(zs.shape, np.int64)
        out = np.empty(zs.shape, np.complex128)
        K.lavaurs_array(c, dc, a2, b, A, zs, complex(self.sigma), ev.R, ev.deep_radius,
                        ev.escape_radius, ev.N_max, ev.tol, st, out)
        return st, out


def lavaurs_apply(L: LavaursMap, z):
    """``psi_f(phi_f(z) + sigma)``.  Real maps with real ``z`` and real phase
    stay in real arithmetic."""
    sigma = L.sigma
    real_phase = isinstance(sigma, (int, float)) or complex(sigma).imag == 0
    Z = phi_attracting(L.evaluator, z)
    shift = complex(sigma).real if real_phase and not isinstance(Z, complex) else complex(sigma)
    return psi_repelling(L.evaluator, Z + shift)


def lavaurs_convergence_check(f: ParabolicMap, sigma, z, n_list: Sequence[int],
                              ev: Optional[FatouEvaluator] = None,
                              escape: float = 1e8) -> list[float]:
    """Distances ``|(f + eps_n^2)^n (z) - L_{f,sigma}(z)|`` with ``eps_n = pi/(n + sigma)``.

    An orbit that escapes gives ``inf`` for that ``n``.
    """
    if f.a2 != 1:
        raise ValueError("the perturbation check needs f(z) = z + z^2 + O(z^3)")
    ev = ev or FatouEvaluator(f)
    target = lavaurs_apply(LavaursMap(ev, sigma), z)
    real = f.is_real and complex(sigma).imag == 0 and complex(z).imag == 0
    c = f.poly.array if real else f.poly.carray
    errors = []
    for n in n_list:
        eps2 = (math.pi / (n + complex(sigma))) ** 2
        z0 = complex(z).real if real else complex(z)
        ok, zn = K.perturbed_orbit_end(c, eps2.real if real else eps2, z0, int(n), escape)
        errors.append(abs(zn - target) if ok else math.inf)
    return errors


# ---- horn map ---------------------------------------------------------------

@dataclass(frozen=True)
class HornSample:
    """``E = phi_f o psi_f`` tabulated on ``t + i h``, ``t = j/N``."""

    height: float
    nodes: int
    Z: np.ndarray
    EZ: np.ndarray
    periodicity_error: float

    @property
    def drift(self) -> np.ndarray:
        return self.EZ - self.Z

    @property
    def mean_drift(self) -> complex:
        return complex(np.mean(self.drift))


def _transition_masked(ev: FatouEvaluator, Zs: np.ndarray) -> np.ndarray:
    """``E(Z)`` with NaN where ``psi_f(Z)`` overflows or leaves the basin."""
    st, xs = ev.psi_many(Zs)
    st2, vals, _ = ev.phi_many(np.where(st == K.OK, xs, 0.1))
    return np.where((st == K.OK) & (st2 == K.OK), vals, np.nan)


def _transition(ev: FatouEvaluator, Zs: np.ndarray, h: float) -> np.ndarray:
    vals = _transition_masked(ev, Zs)
    if np.any(np.isnan(vals)):
        raise HeightTooLow(f"psi_f(Z) leaves the parabolic basin on Im Z = {h}")
    return vals


def horn_sample(f: ParabolicMap, h: float, N: int,
                ev: Optional[FatouEvaluator] = None, period_tol: float = 1e-8) -> HornSample:
    if h <= 0 or N < 1:
        raise ValueError("need h > 0 and N >= 1")
    ev = ev or FatouEvaluator(f)
    Z = np.arange(N + 1) / N + 1j * h
    EZ = _transition(ev, Z, h)
    err = abs(EZ[N] - EZ[0] - 1.0)
    if not err < period_tol:
        raise NonConvergence(f"transition map fails E(Z+1) = E(Z)+1 by {err:.3g}")
    return HornSample(float(h), int(N), Z[:N], EZ[:N], float(err))


@dataclass(frozen=True)
class ResidueEstimate:
    """Outcome of the contour integral around ``u = 0`` of ``du/(u - e(u))``."""

    rho: complex
    integral: complex
    multiplier_at_zero: complex
    enclosed: int
    height: float
    nodes: int


def _winding(values: np.ndarray) -> int:
    """Winding number about 0 of the closed curve sampled by ``values``."""
    ang = np.unwrap(np.angle(np.append(values, values[0])))
    return int(round((ang[-1] - ang[0]) / (2 * math.pi)))


AUTO_HEIGHTS = tuple(np.round(np.arange(3.0, 1.45, -0.1), 10))


def _enclosed(ev: FatouEvaluator, h: float, N: int):
    Z = np.arange(N) / N + 1j * h
    one_minus_q = 1.0 - np.exp(TWO_PI_I * (_transition(ev, Z, h) - Z))
    return 1 + _winding(one_minus_q), one_minus_q


def horn_residue(f: ParabolicMap, h: Optional[float] = None, N: int = 256,
                 ev: Optional[FatouEvaluator] = None) -> ResidueEstimate:
    """Residue estimate of the multiplier of the nontrivial fixed point of the horn map.

    On ``|u| = exp(-2 pi h)`` the integral of ``du/(u - e(u))`` becomes the mean
    over one period of ``1/(1 - exp(2 pi i (E(Z) - Z)))``.  It equals the sum of
    ``1/(1 - multiplier)`` over enclosed fixed points; the one at ``u = 0``
    has multiplier ``exp(2 pi^2 (1 - a))``.  The loop must enclose exactly
    two fixed points, which is checked with the argument principle.  With
    ``h=None`` the highest height in ``AUTO_HEIGHTS`` passing that check is used.
    """
    if f.a2 != 1:
        raise ValueError("expected the cubic family z + z^2 + a z^3")
    a = complex(f.a3)
    if a == 1:
        raise DegenerateDenominator("a = 1: the horn map has a multiple fixed point at 0")
    lam = cmath.exp(2 * math.pi ** 2 * (1 - a))
    ev = ev or FatouEvaluator(f)
    if h is None:
        for cand in AUTO_HEIGHTS:
            try:
                count, _ = _enclosed(ev, cand, 64)
            except HeightTooLow:
                break
            if count == 2:
                h = float(cand)
                break
        else:
            cand = AUTO_HEIGHTS[-1]
        if h is None:
            raise HeightTooLow(f"no admissible loop height down to {cand}")
    enclosed, one_minus_q = _enclosed(ev, h, N)
    if np.any(np.abs(one_minus_q) < 1e-300):
        raise DegenerateDenominator("a fixed point lies on the integration loop")
    if enclosed != 2:
        raise DegenerateDenominator(
            f"loop at height {h} encloses {enclosed} fixed point(s) of the horn map, expected 2")
    integral = complex(np.mean(1.0 / one_minus_q))
    inv = integral - 1.0 / (1.0 - lam)
    if abs(inv) < 1e-14:
        raise DegenerateDenominator("1/(1 - rho) vanishes")
    return ResidueEstimate(1.0 - 1.0 / inv, integral, lam, enclosed, float(h), int(N))


def horn_multiplier_residue(f: ParabolicMap, h: Optional[float] = None, N: int = 256,
                            ev: Optional[FatouEvaluator] = None) -> complex:
    return horn_residue(f, h, N, ev).rho


def horn_fixed_point(f: ParabolicMap, ev: Optional[FatouEvaluator] = None,
                     heights=(1.5, 3.0), grid: int = 24, tol: float = 1e-12):
    """Nontrivial fixed point ``Z`` of ``E`` in the strip ``0 <= Re Z < 1``.

    Returns ``(Z, multiplier)``.  The seed minimizes ``|1 - exp(2 pi i (E - Z))|``
    over a grid of the strip; damped Newton with a central-difference
    derivative then solves ``E(Z) = Z + k`` for the integer ``k`` of the seed.
    """
    ev = ev or FatouEvaluator(f)

    def E(Z):
        v = _transition_masked(ev, np.array([Z]))[0]
        if np.isnan(v):
            raise HeightTooLow(f"E undefined at {Z}")
        return v

    ys = np.linspace(heights[0], heights[1], grid)
    Zg = (np.arange(grid)[None, :] / grid + 1j * ys[:, None]).ravel()
    vals = _transition_masked(ev, Zg)
    r = np.abs(1 - np.exp(TWO_PI_I * (vals - Zg)))
    r = np.where(np.isnan(r), np.inf, r)
    order = np.argsort(r, kind="stable")
    for idx in order[:6]:
        if not np.isfinite(r[idx]):
            break
        Z = complex(Zg[idx])
        k = round((vals[idx] - Z).real)
        try:
            for _ in range(60):
                g = E(Z) - Z - k
                d = (E(Z + 1e-6) - E(Z - 1e-6)) / 2e-6 - 1.0
                step = g / d
                if abs(step) > 0.25:
                    step *= 0.25 / abs(step)
                Z -= step
                if abs(step) < tol:
                    break
            else:
                continue
            rho = (E(Z + 1e-5) - E(Z - 1e-5)) / 2e-5
        except HeightTooLow:
            continue
        return complex(Z - math.floor(Z.real)), complex(rho)
    raise NonConvergence("Newton on the horn map did not converge from any seed")


# ---- fixed points of L_f ----------------------------------------------------

@dataclass(frozen=True)
class FixedPointReport:
    """Refined fixed point ``xi`` of ``L_f`` with multiplier ``rho = L_f'(xi)``."""

    location: complex
    multiplier: complex
    residual: float
    multiplier_error: float
    tol: float
    candidates: tuple = field(default=(), repr=False)

    @property
    def attracting(self) -> bool:
        return abs(self.multiplier) < 1


def multiplier_fd(L, z, step: float = 1e-4):
    """Central-difference derivative of ``L`` at ``z`` with one Richardson step.

    Returns ``(derivative, error estimate)``.
    """
    d1 = (L(z + step) - L(z - step)) / (2 * step)
    d2 = (L(z + step / 2) - L(z - step / 2)) / step
    return (4 * d2 - d1) / 3, abs(d2 - d1)


def _refine(L, z, tol, step=1e-6, maxit=40):
    for _ in range(maxit):
        g = L(z) - z
        d = (L(z + step) - L(z - step)) / (2 * step) - 1.0
        if d == 0:
            return None
        dz = g / d
        z = z - dz
        if abs(dz) < 1e-14 * max(1.0, abs(z)):
            break
    r = abs(L(z) - z)
    return (z, r) if r < tol else None


def _safe(L):
    def call(z):
        v = L(z)
        if not cmath.isfinite(v):
            raise NonFinite(z)
        return v
    return call


def lavaurs_fixed_point(L: LavaursMap, window=(-1.0, 1.0, 0.0, 1.5), grid: int = 40,
                        tol: float = 1e-10, seeds: Sequence = (), max_seeds: int = 8,
                        step: float = 1e-6) -> FixedPointReport:
    """Grid scan of ``|L_f(z) - z|`` followed by Newton refinement.

    ``window`` is ``(x0, x1, y0, y1)``; with ``y0 == y1`` and a real map the
    scan and refinement run on the real line.  Local minima of the residual
    are refined in order (residual, then grid index); attracting fixed
    points are preferred, then smaller residual.
    """
    x0, x1, y0, y1 = map(float, window)
    ev = L.evaluator
    real = y0 == y1 and ev.is_real and complex(L.sigma).imag == 0
    Lf = _safe(lambda z: lavaurs_apply(L, z))
    if real:
        xs = np.linspace(x0, x1, grid)
        res = np.full(grid, np.inf)
        vals = {}
        for i, x in enumerate(xs):
            try:
                v = lavaurs_apply(L, float(x))
            except NumericalError:
                continue
            if math.isfinite(v) and x0 <= v <= x1:
                res[i] = abs(v - x)
        order = [i for i in range(grid) if np.isfinite(res[i])
                 and res[i] <= res[max(i - 1, 0)] and res[i] <= res[min(i + 1, grid - 1)]]
        cand = sorted(order, key=lambda i: (res[i], i))
        starts = [float(s) for s in seeds] + [float(xs[i]) for i in cand]
    else:
        xs = np.linspace(x0, x1, grid)
        ys = np.linspace(y0, y1, grid)
        Zg = (xs[None, :] + 1j * ys[:, None]).ravel()
        st, out = L.many(Zg)
        inside = ((st == K.OK) & (out.real >= x0) & (out.real <= x1)
                  & (out.imag >= y0) & (out.imag <= y1))
        res = np.where(inside, np.abs(out - Zg), np.inf).reshape(grid, grid)
        cand = []
        for j in range(grid):
            for i in range(grid):
                v = res[j, i]
                if np.isfinite(v) and v <= res[max(j - 1, 0):j + 2, max(i - 1, 0):i + 2].min():
                    cand.append((v, j * grid + i))
        cand.sort()
        starts = [complex(s) for s in seeds] + [complex(Zg[k]) for _, k in cand]
    if not starts:
        raise NoSeedFound("no point of the window maps back into the window")
    found = []
    for s in starts[:max_seeds + len(seeds)]:
        try:
            hit = _refine(Lf, s, tol, step)
        except NumericalError:
            continue
        if hit is None:
            continue
        z, r = hit
        if any(abs(z - p[0]) < 1e-8 for p in found):
            continue
        try:
            rho, err = multiplier_fd(Lf, z)
        except NumericalError:
            continue
        if real:
            rho = complex(rho).real
        found.append((z, rho, r, err))
    if not found:
        raise NonConvergence("no seed refined to a fixed point within tolerance")
    found.sort(key=lambda p: (not abs(p[1]) < 1, p[2]))
    z, rho, r, err = found[0]
    return FixedPointReport(z, rho, float(r), float(err), tol, tuple(found[1:]))
