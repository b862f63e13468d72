"""Parameter hunts for attracting Lavaurs fixed points.

Real quartic family ``f_c(z) = z + z^2 + b z^4`` with ``b = -(1+2c)/(4c^3)``,
so that ``c`` is a critical point: a zero of ``L(c) - c`` makes ``c`` a
super-attracting fixed point of the Lavaurs map.  Complex cubic family
``z + z^2 + a z^3`` with ``a`` near 1: the fixed point found through the horn
map is attracting.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NoSignChange, NotInBasin, NumericalError
from .fatou_coords import FatouEvaluator, classify_basin, psi_repelling, phi_attracting
from .lavaurs_engine import (LavaursMap, horn_fixed_point, horn_multiplier_residue,
                             lavaurs_fixed_point, multiplier_fd)
from .poly_core import ParabolicMap, quartic_b

__all__ = [
    "X_UPPER",
    "RealFamilyPoint",
    "real_defect",
    "real_root_search",
    "ComplexScanPoint",
    "complex_scan",
    "claim4_probe",
    "write_real_csv",
    "write_complex_csv",
    "summary_report",
]

X_UPPER = 27 / 16 + 9 * math.sqrt(3) / 8


@dataclass(frozen=True)
class RealFamilyPoint:
    c: float
    b: float
    Lc: float
    status: str = "ok"

    @property
    def defect(self) -> float:
        return self.Lc - self.c


def real_defect(c: float, ev_kw: Optional[dict] = None) -> RealFamilyPoint:
    """``L(c) = L_{f_c}(c)`` in real arithmetic.

    A forward orbit of ``phi(c)`` under ``psi`` that overflows means
    ``L(c) = -inf`` (the value sits beyond the repelling fixed point).
    """
    c = float(c)
    if not -1.5 < c <= -0.5:
        raise ValueError("c must lie in (-3/2, -1/2]")
    fmap = ParabolicMap.real_quartic(c)
    ev = FatouEvaluator(fmap, **(ev_kw or {}))
    verdict = classify_basin(ev, c)
    if not verdict.in_basin:
        raise NotInBasin(f"critical point {c} not in the basin ({verdict.status})")
    Z = phi_attracting(ev, c)
    try:
        Lc = psi_repelling(ev, Z)
    except NumericalError:
        return RealFamilyPoint(c, quartic_b(c), -math.inf, "escaped")
    if isinstance(Lc, complex):
        if abs(Lc.imag) > 1e-12:
            raise ValueError(f"non-real Lavaurs value {Lc}")
        Lc = Lc.real
    return RealFamilyPoint(c, quartic_b(c), float(Lc))


def real_root_search(interval=(-0.7, -0.5), samples: int = 64, tol: float = 1e-12,
                     target: float = -0.586, ev_kw: Optional[dict] = None):
    """Root of ``L(c) - c`` nearest ``target`` by scan plus bisection.

    Returns ``(root point, scan table, derivative of L_{f_c} at c with error)``.
    """
    lo, hi = map(float, interval)
    if not -1.5 < lo < hi < -0.5 + 1e-15:
        raise ValueError("interval must lie inside (-3/2, -1/2)")
    cs = np.linspace(lo, hi, samples)
    table = [real_defect(c, ev_kw) for c in cs]
    d = [p.defect for p in table]
    brackets = [i for i in range(samples - 1)
                if math.isfinite(d[i]) and math.isfinite(d[i + 1]) and d[i] * d[i + 1] <= 0]
    if not brackets:
        raise NoSignChange("L(c) - c keeps one sign on the scan", table)
    i = min(brackets, key=lambda j: (abs(0.5 * (cs[j] + cs[j + 1]) - target), j))
    a, b = cs[i], cs[i + 1]
    fa = d[i]
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = real_defect(m, ev_kw).defect
        if (fm <= 0) == (fa <= 0):
            a, fa = m, fm
        else:
            b = m
    root = real_defect(0.5 * (a + b), ev_kw)
    L = LavaursMap(FatouEvaluator(ParabolicMap.real_quartic(root.c), **(ev_kw or {})), 0.0)
    deriv = multiplier_fd(L, root.c, 1e-4)
    return root, table, deriv


@dataclass(frozen=True)
class ComplexScanPoint:
    a: complex
    rho: Optional[complex]
    xi: Optional[complex]
    residual: Optional[float] = None
    rho_residue: Optional[complex] = None
    status: str = "ok"

    @property
    def attracting(self) -> bool:
        return self.rho is not None and abs(self.rho) < 1


def _scan_one(a: complex, ev_kw: dict, tol: float) -> ComplexScanPoint:
    fmap = ParabolicMap.cubic(a)
    try:
        ev = FatouEvaluator(fmap, **ev_kw)
        Z, _ = horn_fixed_point(fmap, ev)
        seed = psi_repelling(ev, Z)
        rep = lavaurs_fixed_point(LavaursMap(ev), window=(seed.real - 0.2, seed.real + 0.2,
                                                          seed.imag - 0.2, seed.imag + 0.2),
                                  grid=5, tol=tol, seeds=[seed], max_seeds=1)
    except NumericalError as exc:
        return ComplexScanPoint(a, None, None, status=type(exc).__name__)
    try:
        rr = horn_multiplier_residue(fmap, ev=ev)
    except NumericalError:
        rr = None
    return ComplexScanPoint(a, complex(rep.multiplier), complex(rep.location), rep.residual, rr)


def complex_scan(r: float = 0.05, grid: int = 4, tol: float = 1e-10,
                 ev_kw: Optional[dict] = None, include: Sequence[complex] = (0.95,),
                 map_fn=map) -> list[ComplexScanPoint]:
    """Lavaurs fixed points for ``a`` on a ``grid x grid`` lattice clipped to ``D(1 - r, r)``.

    ``include`` adds explicit parameters; ``map_fn`` may be an executor's map.
    Failures are recorded per point and the scan continues.
    """
    if not 0 < r <= 0.5 or grid < 4:
        raise ValueError("need 0 < r <= 1/2 and grid >= 4")
    t = -1 + (2 * np.arange(grid) + 1) / grid
    pts = [complex(1 - r + r * x, r * y) for y in t for x in t if x * x + y * y < 1]
    pts += [complex(a) for a in include if abs(complex(a) - (1 - r)) < r
            and complex(a) not in pts]
    kw = dict(ev_kw or {})
    return list(map_fn(lambda a: _scan_one(a, kw, tol), pts))


def claim4_probe(n_list: Sequence[int], ev_kw: Optional[dict] = None) -> list[tuple]:
    """``(n, c_n, L(c_n), L(c_n) - c_n)`` for ``c_n = -3/2 + 4/(3n)``."""
    rows = []
    for n in n_list:
        if n < 20:
            raise ValueError("n must be at least 20")
        c = -1.5 + 4 / (3 * n)
        p = real_defect(c, ev_kw)
        rows.append((int(n), c, p.Lc, p.defect))
    return rows


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_real_csv(points: Sequence[RealFamilyPoint], path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["c", "b", "L_c", "defect", "status"])
        for p in points:
            out.writerow([_fmt(p.c), _fmt(p.b), _fmt(p.Lc), _fmt(p.defect), p.status])


def write_complex_csv(points: Sequence[ComplexScanPoint], path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["re_a", "im_a", "re_xi", "im_xi", "re_rho", "im_rho", "abs_rho",
                      "re_rho_residue", "im_rho_residue", "residual", "status"])
        nan = float("nan")
        for p in points:
            xi = p.xi if p.xi is not None else complex(nan, nan)
            rho = p.rho if p.rho is not None else complex(nan, nan)
            rr = p.rho_residue if p.rho_residue is not None else complex(nan, nan)
            out.writerow([_fmt(p.a.real), _fmt(p.a.imag), _fmt(xi.real), _fmt(xi.imag),
                          _fmt(rho.real), _fmt(rho.imag), _fmt(abs(rho)), _fmt(rr.real),
                          _fmt(rr.imag), _fmt(p.residual if p.residual is not None else nan),
                          p.status])


def summary_report(points: Sequence[ComplexScanPoint], r: float) -> str:
    ok = [p for p in points if p.rho is not None]
    att = [p for p in ok if p.attracting]
    lines = [f"scan disk D({1 - r:g}, {r:g}): {len(points)} parameters, "
             f"{len(ok)} resolved, {len(att)} attracting"]
    if ok:
        best = min(ok, key=lambda p: abs(p.rho))
        lines.append(f"smallest |rho| = {abs(best.rho):.6g} at a = {best.a:.6g}, "
                     f"xi = {best.xi:.10g}")
    for p in points:
        if p.rho is None:
            lines.append(f"a = {p.a:.6g}: failed ({p.status})")
    return "\n".join(lines)
