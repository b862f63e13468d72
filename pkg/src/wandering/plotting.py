"""Static matplotlib figures written next to CLI outputs.

Everything renders through the Agg backend into files; nothing opens a window.
"""
from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "raster_png",
    "defect_figure",
    "scan_figure",
    "convergence_figure",
    "orbit_figure",
    "transit_figure",
]

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 110,
    "savefig.bbox": "tight",
}


def _new(figsize=(5.0, 3.6)):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize)
    return fig, ax


def _save(fig, path) -> None:
    with plt.rc_context(STYLE):
        fig.savefig(path)
    plt.close(fig)


def raster_png(rgb: np.ndarray, window, path, title: Optional[str] = None,
               xlabel: str = "Re z", ylabel: str = "Im z") -> None:
    """Raster with axis ticks in plane coordinates."""
    x0, x1, y0, y1 = window
    h, w, _ = rgb.shape
    fig, ax = _new((5.0, 5.0 * h / w + 0.4))
    ax.imshow(rgb, extent=(x0, x1, y0, y1), origin="upper", interpolation="nearest",
              aspect="auto")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    _save(fig, path)


def defect_figure(cs: Sequence[float], Ls: Sequence[float], path,
                  root: Optional[float] = None) -> None:
    """Graph of the real Lavaurs value at the critical point against the diagonal."""
    cs = np.asarray(cs, float)
    Ls = np.asarray(Ls, float)
    fig, ax = _new()
    finite = np.isfinite(Ls)
    ax.plot(cs[finite], Ls[finite], ".-", lw=1, ms=3, label="L(c)")
    ax.plot(cs, cs, "k--", lw=0.8, label="y = c")
    if (~finite).any():
        lo = np.nanmin(np.where(finite, Ls, np.nan)) if finite.any() else cs.min()
        ax.plot(cs[~finite], np.full((~finite).sum(), lo), "v", color="0.5", ms=3,
                label="escaped")
    if root is not None:
        ax.axvline(root, color="tab:red", lw=0.8)
    ax.set_xlabel("c")
    ax.set_ylabel("value")
    ax.legend(loc="best")
    _save(fig, path)


def scan_figure(a_values: Sequence[complex], rho: Sequence[complex], center: complex,
                radius: float, path) -> None:
    """Multiplier modulus over the scanned parameter disk."""
    a = np.asarray(a_values, complex)
    m = np.abs(np.asarray(rho, complex))
    fig, ax = _new((4.6, 4.0))
    t = np.linspace(0, 2 * np.pi, 200)
    ax.plot(center.real + radius * np.cos(t), center.imag + radius * np.sin(t), "k-", lw=0.6)
    ok = np.isfinite(m)
    sc = ax.scatter(a.real[ok], a.imag[ok], c=m[ok], cmap="viridis", s=30, vmin=0,
                    vmax=max(1.0, float(m[ok].max()) if ok.any() else 1.0))
    if (~ok).any():
        ax.scatter(a.real[~ok], a.imag[~ok], marker="x", color="tab:red", s=20)
    fig.colorbar(sc, ax=ax, label="|rho|")
    ax.set_aspect("equal")
    ax.set_xlabel("Re a")
    ax.set_ylabel("Im a")
    _save(fig, path)


def convergence_figure(ns: Sequence[float], errors: Sequence[float], path,
                       ylabel: str = "error", extra: Optional[dict] = None) -> None:
    """Log-log error against n, with optional reference series."""
    ns = np.asarray(ns, float)
    fig, ax = _new()
    err = np.asarray(errors, float)
    ok = np.isfinite(err) & (err > 0)
    ax.loglog(ns[ok], err[ok], "o-", ms=4, label=ylabel)
    for label, vals in (extra or {}).items():
        v = np.asarray(vals, float)
        k = np.isfinite(v) & (v > 0)
        ax.loglog(ns[k], v[k], "s--", ms=3, lw=0.8, label=label)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.legend(loc="best")
    _save(fig, path)


def orbit_figure(ns: Sequence[int], distances: Sequence[float], points: Sequence[complex],
                 path, xi: Optional[float] = None) -> None:
    """Checkpoint distances to the target, and the checkpoint states in the real plane."""
    with plt.rc_context(STYLE):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(8.0, 3.4))
    d = np.asarray(distances, float)
    ok = d > 0
    a1.semilogy(np.asarray(ns)[ok], d[ok], lw=0.8)
    a1.set_xlabel("checkpoint n")
    a1.set_ylabel("|z - xi|")
    pts = np.asarray(points, complex)
    a2.plot(pts.real, pts.imag, ".", ms=1.5, color="k")
    if len(pts):
        a2.plot(pts.real[:1], pts.imag[:1], "o", ms=4, color="tab:red")
    if xi is not None:
        a2.axvline(xi, color="tab:red", lw=0.6)
    a2.set_xlabel("z")
    a2.set_ylabel("w")
    _save(fig, path)


def transit_figure(rgb: Optional[np.ndarray], window, transits: dict, target: complex,
                   path) -> None:
    """First-coordinate transit points per ``n`` over an optional basin image."""
    fig, ax = _new((4.8, 4.8))
    if rgb is not None:
        x0, x1, y0, y1 = window
        ax.imshow(rgb, extent=(x0, x1, y0, y1), origin="upper", interpolation="nearest")
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, (n, zs) in enumerate(sorted(transits.items())):
        zs = np.asarray(zs, complex)
        zs = zs[np.isfinite(zs)]
        ax.plot(zs.real, zs.imag, ".", ms=3, color=colors[i % len(colors)], label=f"n = {n}")
    ax.plot([target.real], [target.imag], "k*", ms=7, label="L(z)")
    if rgb is not None:
        ax.set_xlim(window[0], window[1])
        ax.set_ylim(window[2], window[3])
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.legend(loc="best")
    _save(fig, path)

