"""The skew-product ``P(z, w) = (f(z) + (pi^2/4) w, g(w))`` and its orbit schedules.

Between the checkpoints ``n^2`` and ``(n+1)^2`` the orbit makes one transit of
length ``2n + 1`` through the gate of ``f_w``; for large ``n`` that transit
acts like the Lavaurs map of ``f`` on the first coordinate.
"""
from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .approx_fatou import FiberedMap
from .errors import BudgetExceeded, NonConvergence, NonFinite, NotInBasin
from .fatou_coords import FatouEvaluator
from .lavaurs_engine import LavaursMap, lavaurs_apply
from .poly_core import ParabolicMap

__all__ = [
    "SkewSystem",
    "step",
    "fiber_composition",
    "PropKeyResult",
    "prop_key_check",
    "OrbitTrace",
    "wandering_orbit",
    "find_wandering_seed",
    "write_trace_csv",
]

ESCAPE = 1e10


@dataclass(frozen=True)
class SkewSystem:
    fibered: FiberedMap

    @classmethod
    def from_coeffs(cls, fc, gc=(0, 1, -1)) -> "SkewSystem":
        return cls(FiberedMap.from_coeffs(fc, gc))

    @property
    def f(self) -> ParabolicMap:
        return self.fibered.f

    @property
    def g(self) -> ParabolicMap:
        return self.fibered.g

    @property
    def is_real(self) -> bool:
        return self.f.is_real and self.g.is_real

    def arrays(self, real: bool):
        if real:
            return self.f.poly.array, self.g.poly.array, float(self.fibered.coupling)
        return self.f.poly.carray, self.g.poly.carray, complex(self.fibered.coupling)

    def _real_inputs(self, z, w) -> bool:
        return self.is_real and complex(z).imag == 0 and complex(w).imag == 0

    def _cast(self, z, w):
        real = self._real_inputs(z, w)
        if real:
            return real, complex(z).real, complex(w).real
        return real, complex(z), complex(w)


def step(S: SkewSystem, z, w):
    """One application of ``P``."""
    z1 = S.f(z) + S.fibered.coupling * w
    w1 = S.g(w)
    if not (cmath.isfinite(z1) and cmath.isfinite(w1)):
        raise NonFinite((z, w))
    return z1, w1


def _g_power(S: SkewSystem, w, m: int, real: bool):
    _, gc, _ = S.arrays(real)
    ok, wm = K.perturbed_orbit_end(gc, 0.0 * w, w, int(m), 1e300)
    if not ok:
        raise NotInBasin(f"{w!r} escapes under g")
    return wm


def fiber_composition(S: SkewSystem, z, w, m1: int, m2: int):
    """``f_{w_{m2-1}} o ... o f_{w_{m1}} (z)`` along the ``g``-orbit of ``w``."""
    if not 0 <= m1 <= m2:
        raise ValueError("need 0 <= m1 <= m2")
    real, z, w = S._cast(z, w)
    if m1 == m2:
        return z
    wm = _g_power(S, w, m1, real)
    fc, gc, k = S.arrays(real)
    ok, zz, _, _ = K.fiber_run(fc, gc, k, z, wm, m2 - m1, math.inf)
    if not (ok and cmath.isfinite(zz)):
        raise NonFinite(z, "fibre composition overflowed")
    return zz


@dataclass(frozen=True)
class PropKeyResult:
    n: int
    z_end: complex
    w_end: complex
    error: float

    @property
    def second(self) -> float:
        return abs(self.w_end)


def prop_key_check(S: SkewSystem, z, w, n_list: Sequence[int],
                   ev: Optional[FatouEvaluator] = None) -> tuple[complex, list[PropKeyResult]]:
    """``|pi_1 P^(2n+1)(z, g^(n^2)(w)) - L_f(z)|`` for each ``n``.

    Returns ``(L_f(z), results)``; an escaping transit has infinite error.
    """
    ev = ev or FatouEvaluator(S.f)
    real, z, w = S._cast(z, w)
    Lz = lavaurs_apply(LavaursMap(ev, 0.0 if real else 0j), z)
    fc, gc, k = S.arrays(real)
    out = []
    for n in n_list:
        wn = _g_power(S, w, n * n, real)
        ok, zz, ww, _ = K.fiber_run(fc, gc, k, z, wn, 2 * n + 1, ESCAPE)
        out.append(PropKeyResult(int(n), zz, ww, abs(zz - Lz) if ok else math.inf))
    return Lz, out


@dataclass
class OrbitTrace:
    """Orbit of ``P`` from a state taken to sit at checkpoint ``n0``.

    Trace index ``k`` corresponds to time ``n0^2 + k``; checkpoint ``n`` sits at
    index ``n^2 - n0^2``.  ``states`` holds every state when ``complete`` is
    true, otherwise only the checkpoint states.
    """

    n0: int
    states: np.ndarray
    complete: bool
    checkpoints: list = field(default_factory=list)  # (n, index, z, w)
    budget: int = 0
    xi: complex = 0j
    seed: dict = field(default_factory=dict)

    @property
    def distances(self) -> np.ndarray:
        return np.array([abs(z - self.xi) for _, _, z, _ in self.checkpoints])

    @property
    def w_moduli(self) -> np.ndarray:
        return np.array([abs(w) for _, _, _, w in self.checkpoints])

    def longest_decrease(self) -> tuple[int, int]:
        """Longest run of strictly decreasing checkpoint distances: (length, first n)."""
        d = self.distances
        best, start, run, run_start = 0, self.n0, 0, self.n0
        for i in range(1, len(d)):
            if d[i] < d[i - 1]:
                if run == 0:
                    run_start = self.checkpoints[i - 1][0]
                run += 1
                if run > best:
                    best, start = run, run_start
            else:
                run = 0
        return best, start


def wandering_orbit(S: SkewSystem, z0, w0, n_max: int, xi, n0: Optional[int] = None,
                    budget: int = 50_000_000, store_limit: int = 2_000_000) -> OrbitTrace:
    """Iterate ``P`` through the checkpoints ``n = n0 .. n_max``.

    ``n0`` defaults to ``round(|w0|^(-1/2))`` since ``g^m(w) ~ 1/m``.
    """
    real, z, w = S._cast(z0, w0)
    if n0 is None:
        n0 = max(0, int(round(abs(w) ** -0.5)))
    if n_max < n0:
        raise ValueError("n_max must be at least n0")
    total = n_max * n_max - n0 * n0
    if total > budget:
        raise BudgetExceeded(f"{total} iterations exceed the budget {budget}")
    fc, gc, k = S.arrays(real)
    dtype = np.float64 if real else np.complex128
    complete = total + 1 <= store_limit
    trace = OrbitTrace(n0, np.empty((0, 2), dtype), complete, budget=budget,
                       xi=complex(xi).real if real else complex(xi))
    trace.checkpoints.append((n0, 0, z, w))
    if complete:
        states = np.empty((total + 1, 2), dtype)
        zs = np.empty(total + 1, dtype)
        ws = np.empty(total + 1, dtype)
        K.fiber_trace(fc, gc, k, z, w, total, zs, ws)
        if not (np.all(np.isfinite(zs)) and np.all(np.isfinite(ws))):
            raise NonFinite((z0, w0), "orbit overflowed")
        states[:, 0], states[:, 1] = zs, ws
        for n in range(n0 + 1, n_max + 1):
            idx = n * n - n0 * n0
            trace.checkpoints.append((n, idx, zs[idx], ws[idx]))
        trace.states = states
        return trace
    rows = [(z, w)]
    for n in range(n0, n_max):
        ok, z, w, _ = K.fiber_run(fc, gc, k, z, w, 2 * n + 1, math.inf)
        if not (ok and cmath.isfinite(z) and cmath.isfinite(w)):
            raise NonFinite((z0, w0), f"orbit overflowed before checkpoint {n + 1}")
        trace.checkpoints.append((n + 1, (n + 1) ** 2 - n0 * n0, z, w))
        rows.append((z, w))
    trace.states = np.array(rows, dtype)
    return trace


def find_wandering_seed(S: SkewSystem, xi, n0: int = 1000, s_bracket=(-50.0, 50.0),
                        tol: float = 1e-12):
    """Seed ``(xi, 1/(n0^2 + s))`` whose first transit returns exactly to ``xi``.

    ``w0 = 1/(n0^2 + s)`` is close to ``1/n0^2``; the offset ``s`` fixes the
    phase of the first transit.  Solved by secant iteration on ``s`` started
    from the scan point with smallest miss.  Returns ``(z0, w0, s)``.
    """
    real = S.is_real and complex(xi).imag == 0
    xi = complex(xi).real if real else complex(xi)
    fc, gc, k = S.arrays(real)

    def miss(s):
        ok, zz, _, _ = K.fiber_run(fc, gc, k, xi, 1.0 / (n0 * n0 + s), 2 * n0 + 1, ESCAPE)
        return zz - xi if ok else math.inf

    grid = np.linspace(s_bracket[0], s_bracket[1], 41)
    vals = [miss(s) for s in grid]
    i = int(np.argmin([abs(v) for v in vals]))
    if not math.isfinite(abs(vals[i])):
        raise NonConvergence("every trial transit escaped")
    # bracket a real sign change next to the best scan point when possible
    if real:
        for j in (i - 1, i):
            if 0 <= j < len(grid) - 1 and vals[j] * vals[j + 1] <= 0:
                lo, hi, flo = grid[j], grid[j + 1], vals[j]
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    fm = miss(mid)
                    if (fm <= 0) == (flo <= 0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                    if hi - lo < tol:
                        break
                s = 0.5 * (lo + hi)
                return xi, 1.0 / (n0 * n0 + s), s
    s0, s1 = grid[i], grid[i] + 0.5
    f0, f1 = vals[i], miss(s1)
    for _ in range(100):
        if f1 == f0:
            break
        s0, s1, f0 = s1, s1 - f1 * (s1 - s0) / (f1 - f0), f1
        f1 = miss(s1)
        if abs(s1 - s0) < tol:
            break
    if not abs(f1) < 1e-9:
        raise NonConvergence("could not match the first transit to xi")
    s = s1.real if real else s1
    return xi, 1.0 / (n0 * n0 + s), s


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trace_csv(trace: OrbitTrace, path) -> None:
    """Columns: index, re(z), im(z), re(w), im(w), checkpoint (0/1)."""
    marks = {idx for _, idx, _, _ in trace.checkpoints}
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["index", "re_z", "im_z", "re_w", "im_w", "checkpoint"])
        if trace.complete:
            rows = ((i, trace.states[i, 0], trace.states[i, 1]) for i in range(len(trace.states)))
        else:
            rows = ((idx, z, w) for _, idx, z, w in trace.checkpoints)
        for i, z, w in rows:
            z, w = complex(z), complex(w)
            out.writerow([i, _fmt(z.real), _fmt(z.imag), _fmt(w.real), _fmt(w.imag),
                          int(i in marks)])
