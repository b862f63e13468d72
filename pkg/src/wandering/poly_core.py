"""Polynomials in one complex variable and parabolic normal-form data.

Coefficients are stored in ascending degree order.  A :class:`ParabolicMap`
is a polynomial ``z + a2 z^2 + a3 z^3 + ...`` together with the constants
used by the Fatou-coordinate code: ``b = 1 - a3/a2^2`` and the coefficients
of the asymptotic tail of the Fatou coordinate in ``W = -1/(a2 z)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DerivativeVanished, NonConvergence, NonFinite

__all__ = [
    "Polynomial",
    "ParabolicMap",
    "evaluate",
    "derivative",
    "critical_points",
    "local_inverse",
    "parse_coeffs",
    "fatou_series",
]


def _finite(z) -> bool:
    return cmath.isfinite(complex(z))


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        cs = [complex(c) for c in coeffs] or [0j]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coeffs)

    @cached_property
    def array(self) -> np.ndarray:
        """Coefficients as ``float64`` when real, else ``complex128``."""
        if self.is_real:
            return np.array([c.real for c in self.coeffs], dtype=np.float64)
        return np.array(self.coeffs, dtype=np.complex128)

    @cached_property
    def carray(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.complex128)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def shifted(self, c) -> "Polynomial":
        """Return ``p + c``."""
        cs = list(self.coeffs)
        cs[0] += complex(c)
        return Polynomial(cs)

    def __repr__(self):
        return f"Polynomial({format_coeffs(self.coeffs)})"


def format_coeffs(coeffs) -> str:
    out = []
    for c in coeffs:
        c = complex(c)
        if c.imag == 0:
            out.append(repr(c.real))
        else:
            out.append(f"{c.real!r}{c.imag:+}i")
    return ",".join(out)


def parse_coeffs(text: str) -> Polynomial:
    """Parse ``"0,1,1,0.95"`` or ``"0,1,1,0.9+0.1i"`` (ascending degree)."""
    return Polynomial([parse_complex(tok) for tok in text.split(",")])


def parse_complex(tok: str) -> complex:
    tok = tok.strip().replace(" ", "")
    if not tok:
        raise ValueError("empty coefficient")
    return complex(tok.replace("i", "j"))


def evaluate(p: Polynomial, z):
    """Horner evaluation of ``p`` at ``z``; raises :class:`NonFinite` on overflow."""
    cs = p.coeffs
    acc = cs[-1]
    for c in cs[-2::-1]:
        acc = acc * z + c
    if not _finite(acc):
        raise NonFinite(z)
    if p.is_real and isinstance(z, (float, int)):
        return acc.real
    return acc


def derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0])
    return Polynomial([k * c for k, c in enumerate(p.coeffs) if k > 0])


def _aberth(cs: Sequence[complex], tol: float, max_iter: int, seed: int) -> np.ndarray:
    cs = np.asarray(cs, dtype=np.complex128)
    n = len(cs) - 1
    lead = cs[-1]
    # roots lie inside the Cauchy bound; start on a circle of that scale
    radius = 1.0 + max(abs(c / lead) for c in cs[:-1]) if n > 0 else 1.0
    radius = min(radius, 2.0 * max(abs(cs[0] / lead) ** (1.0 / n), 1e-3) + 1.0)
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * (np.arange(n) + 0.25) / n + 0.1 * rng.standard_normal(n)
    z = radius * np.exp(1j * angles)
    dcs = cs[1:] * np.arange(1, n + 1)
    for _ in range(max_iter):
        pz = np.polyval(cs[::-1], z)
        dpz = np.polyval(dcs[::-1], z)
        with np.errstate(all="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = inv.sum(axis=1)
            step = ratio / (1.0 - ratio * corr)
        step[~np.isfinite(step)] = 0.0
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            return z
    raise NonConvergence("Aberth iteration did not converge")


def critical_points(p: Polynomial, tol: float = 1e-12, *, with_multiplicity: bool = False,
                    max_iter: int = 500):
    """Roots of ``p'`` by Aberth simultaneous iteration followed by Newton polish.

    Roots closer than ``sqrt(tol)`` are merged into one cluster; with
    ``with_multiplicity`` the result is a list of ``(root, multiplicity)``.
    """
    if p.degree < 2:
        raise ValueError("critical points need degree >= 2")
    dp = derivative(p)
    ddp = derivative(dp)
    raw = _aberth(dp.coeffs, min(tol, 1e-14), max_iter, seed=dp.degree)
    polished = []
    for r in raw:
        r = complex(r)
        for _ in range(8):
            d2 = evaluate(ddp, r)
            if d2 == 0:
                break
            step = evaluate(dp, r) / d2
            r -= step
            if abs(step) < 1e-16 * (1 + abs(r)):
                break
        polished.append(r)
    clusters: list[list[complex]] = []
    for r in polished:
        for cl in clusters:
            if abs(cl[0] - r) < math.sqrt(tol):
                cl.append(r)
                break
        else:
            clusters.append([r])
    out = []
    for cl in clusters:
        r = sum(cl) / len(cl)
        if p.is_real and abs(r.imag) < math.sqrt(tol) * (1 + abs(r)):
            r = complex(r.real, 0.0)
        if len(cl) == 1 and abs(evaluate(dp, r)) >= tol * max(1.0, abs(r)) ** dp.degree:
            raise NonConvergence(f"critical point residual too large at {r}")
        out.append((r, len(cl)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out if with_multiplicity else [r for r, _ in out]


def local_inverse(p: Polynomial, target, seed, tol: float = 1e-12, max_iter: int = 60):
    """Solve ``p(z) = target`` by Newton iteration started at ``seed``."""
    dp = derivative(p)
    z = seed
    for _ in range(max_iter):
        d = evaluate(dp, z)
        if d == 0:
            raise DerivativeVanished(f"p'(z) = 0 at {z!r}")
        r = evaluate(p, z) - target
        z = z - r / d
        if abs(evaluate(p, z) - target) < tol:
            return z
    raise NonConvergence(f"Newton inverse from seed {seed!r} did not converge")


# --- asymptotic series of the Fatou coordinate -----------------------------
#
# In W = -1/(a2 z) the map reads F(W) = W (1 + s(t)), t = 1/W, and
#   Phi(W) = W - b log W + sum_k A_k t^k
# solves Phi(F(W)) = Phi(W) + 1 to order t^(K+1).  The same A_k serve the
# repelling side with log(-W).  Coefficient lists below are plain Python
# numbers so that mpmath scalars pass through unchanged.

def _s_mul(x, y, n):
    out = [0 * x[0]] * n
    for i, xi in enumerate(x[:n]):
        if xi == 0:
            continue
        for j, yj in enumerate(y[: n - i]):
            out[i + j] += xi * yj
    return out


def _s_inv1p(u, n):
    # 1/(1+u) with u[0] == 0
    out = [0 * u[0]] * n
    out[0] = 1 + 0 * u[0]
    for k in range(1, n):
        out[k] = -sum(u[j] * out[k - j] for j in range(1, k + 1))
    return out


def _s_log1p(u, n):
    # log(1+u) with u[0] == 0, via d/dt log(1+u) = u'/(1+u)
    du = [k * u[k] for k in range(1, n)] + [0 * u[0]]
    q = _s_mul(du, _s_inv1p(u, n), n)
    return [0 * u[0]] + [q[k - 1] / k for k in range(1, n)]


def fatou_series(coeffs: Sequence, order: int = 6) -> list:
    """Coefficients ``[A_1, ..., A_order]`` of the asymptotic Fatou tail.

    ``coeffs`` are those of ``z + a2 z^2 + ...`` (ascending, a2 != 0).
    """
    if order <= 0:
        return []
    a = list(coeffs)
    a2 = a[2]
    n = order + 3
    zero = 0 * a2
    # u(t) = (f(z) - z)/z with z = -t/a2
    u = [zero] * n
    for k in range(2, len(a)):
        if k - 1 < n:
            u[k - 1] = a[k] * (-1 / a2) ** (k - 1)
    q = _s_inv1p(u, n)                          # F/W = 1 + s
    s = [zero] + q[1:]
    b = q[2]
    log1ps = _s_log1p(s, n)
    inv1ps = _s_inv1p(s, n)
    pows = [None, inv1ps]                       # (1+s)^-k
    for k in range(2, order + 1):
        pows.append(_s_mul(pows[-1], inv1ps, n))
    A = []
    for k in range(1, order + 1):
        # residual coefficients of  s/t - 1 - b log(1+s) + sum_j A_j ((1+s)^-j - 1) t^j
        res = [s[i + 1] if i + 1 < n else zero for i in range(n)]
        res[0] -= 1
        res = [r - b * l for r, l in zip(res, log1ps)]
        for j, Aj in enumerate(A, start=1):
            term = list(pows[j])
            term[0] -= 1
            for i in range(n - j):
                res[i + j] += Aj * term[i]
        A.append(res[k + 1] / k)
    return A


@dataclass(frozen=True)
class ParabolicMap:
    """A polynomial ``z + a2 z^2 + a3 z^3 + O(z^4)`` with ``a2 != 0``."""

    poly: Polynomial
    a2: complex = field(init=False)
    a3: complex = field(init=False)
    b: complex = field(init=False)

    def __post_init__(self):
        cs = self.poly.coeffs + (0j,) * max(0, 4 - len(self.poly.coeffs))
        if cs[0] != 0 or cs[1] != 1:
            raise ValueError("a parabolic map needs p(0) = 0 and p'(0) = 1")
        if cs[2] == 0:
            raise ValueError("a2 must be nonzero")
        object.__setattr__(self, "a2", cs[2])
        object.__setattr__(self, "a3", cs[3])
        object.__setattr__(self, "b", 1 - cs[3] / cs[2] ** 2)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "ParabolicMap":
        return cls(Polynomial(coeffs))

    @classmethod
    def cubic(cls, a) -> "ParabolicMap":
        """``z + z^2 + a z^3``."""
        return cls(Polynomial([0, 1, 1, a]))

    @classmethod
    def real_quartic(cls, c: float) -> "ParabolicMap":
        """``f_c(z) = z + z^2 - (1+2c)/(4c^3) z^4``, with ``c`` a critical point."""
        return cls(Polynomial([0, 1, 1, 0, quartic_b(c)]))

    @property
    def is_real(self) -> bool:
        return self.poly.is_real

    @cached_property
    def dpoly(self) -> Polynomial:
        return derivative(self.poly)

    def series(self, order: int = 6) -> list:
        return _cached_series(self.poly.coeffs, order)

    def __call__(self, z):
        return evaluate(self.poly, z)


def quartic_b(c: float) -> float:
    return -(1 + 2 * c) / (4 * c ** 3)


_SERIES_CACHE: dict = {}


def _cached_series(coeffs, order):
    key = (coeffs, order)
    if key not in _SERIES_CACHE:
        _SERIES_CACHE[key] = [complex(x) for x in fatou_series(coeffs, order)]
    return _SERIES_CACHE[key]
