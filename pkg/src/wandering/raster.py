"""Pixel-grid classification and binary PPM output.

Every pixel is classified at its center independently of the others, so rows
can be split across threads without changing a single output byte.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .approx_fatou import COUPLING
from .errors import NumericalError
from .fatou_coords import FatouEvaluator, phi_attracting
from .lavaurs_engine import LavaursMap
from .poly_core import ParabolicMap, critical_points

__all__ = [
    "CLASSIFIERS",
    "UNDECIDED",
    "PALETTES",
    "RasterJob",
    "RenderResult",
    "render",
    "write_ppm",
    "read_ppm",
    "write_metadata",
    "render_from_metadata",
    "overlay_orbit",
    "pixel_centers",
]

CLASSIFIERS = ("basin_f", "lavaurs_return", "fatou_tiles", "real_bounded", "real_wandering")
UNDECIDED = 255
MAX_PIXELS = 50_000_000

# class id -> RGB; UNDECIDED is reserved in every palette
PALETTES = {
    "classic": {
        0: (255, 255, 255),
        1: (160, 160, 160),
        2: (40, 40, 40),
        3: (200, 40, 40),
        UNDECIDED: (255, 0, 255),
    },
    "tiles": {
        0: (255, 255, 255),
        1: (60, 90, 220),
        2: (60, 170, 80),
        3: (220, 60, 50),
        UNDECIDED: (255, 0, 255),
    },
    "mono": {
        0: (255, 255, 255),
        1: (0, 0, 0),
        2: (0, 0, 0),
        3: (0, 0, 0),
        UNDECIDED: (128, 128, 128),
    },
}
DEFAULT_PALETTE = {"fatou_tiles": "tiles"}


@dataclass(frozen=True)
class RasterJob:
    """Window ``(x0, x1, y0, y1)`` sampled at ``width x height`` pixel centers.

    ``f`` and ``g`` are coefficient lists in ascending degree; ``xi`` is only
    used by ``real_wandering``.
    """

    window: tuple
    width: int
    height: int
    classifier: str
    f: tuple
    g: tuple = (0.0, 1.0, -1.0)
    palette: Optional[str] = None
    budget: int = 2000
    escape_radius: float = 1e4
    deep_radius: float = 1e4
    sigma: complex = 0j
    xi: Optional[float] = None
    xi_tol: float = 0.1

    def __post_init__(self):
        x0, x1, y0, y1 = map(float, self.window)
        if not (x1 > x0 and y1 > y0):
            raise ValueError("window must be non-degenerate")
        if self.width < 1 or self.height < 1 or self.width * self.height > MAX_PIXELS:
            raise ValueError(f"size must be positive with at most {MAX_PIXELS} pixels")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"classifier must be one of {CLASSIFIERS}")
        if self.classifier == "real_wandering" and self.xi is None:
            raise ValueError("real_wandering needs xi")
        object.__setattr__(self, "window", (x0, x1, y0, y1))
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "g", tuple(self.g))
        if self.palette is None:
            object.__setattr__(self, "palette", DEFAULT_PALETTE.get(self.classifier, "classic"))
        if self.palette not in PALETTES:
            raise ValueError(f"unknown palette {self.palette!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["f"] = [_jsonable(c) for c in self.f]
        d["g"] = [_jsonable(c) for c in self.g]
        d["sigma"] = _jsonable(self.sigma)
        d["window"] = list(self.window)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RasterJob":
        d = dict(d)
        d["f"] = tuple(_unjson(c) for c in d["f"])
        d["g"] = tuple(_unjson(c) for c in d["g"])
        d["sigma"] = _unjson(d.get("sigma", 0))
        d["window"] = tuple(d["window"])
        return cls(**d)


def _jsonable(c):
    c = complex(c)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _unjson(c):
    return complex(c[0], c[1]) if isinstance(c, list) else c


@dataclass
class RenderResult:
    job: RasterJob
    classes: np.ndarray  # uint8 (height, width)
    scalar: np.ndarray   # float64 (height, width)
    extra: dict = field(default_factory=dict)

    def rgb(self) -> np.ndarray:
        pal = PALETTES[self.job.palette]
        lut = np.zeros((256, 3), np.uint8)
        for k, v in pal.items():
            lut[k] = v
        return lut[self.classes]

    def counts(self) -> dict:
        ids, n = np.unique(self.classes, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, n)}


def pixel_centers(job: RasterJob):
    """Real coordinates of column centers and row centers (top row first)."""
    x0, x1, y0, y1 = job.window
    xs = x0 + (np.arange(job.width) + 0.5) * (x1 - x0) / job.width
    ys = y1 - (np.arange(job.height) + 0.5) * (y1 - y0) / job.height
    return xs, ys


def _row_chunks(n: int, threads: int):
    threads = max(1, int(threads))
    bounds = np.linspace(0, n, min(threads * 4, n) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _basin_rows(job, ev, xs, ys, classes, scalar, lo, hi):
    zs = (xs[None, :] + 1j * ys[lo:hi, None]).ravel()
    st, idx = ev.basin_many(zs)
    cl = np.where(st == K.OK, 1, np.where(st == K.ESCAPED, 0, UNDECIDED))
    classes[lo:hi] = cl.reshape(hi - lo, -1)
    scalar[lo:hi] = idx.reshape(hi - lo, -1)


def _lavaurs_rows(job, ev, xs, ys, classes, scalar, lo, hi):
    zs = (xs[None, :] + 1j * ys[lo:hi, None]).ravel()
    st0, _ = ev.basin_many(zs)
    L = LavaursMap(ev, job.sigma)
    st, vals = L.many(zs)
    # cheap pre-test: image far outside the escape disk cannot be in the basin
    ok = st == K.OK
    near = ok & (np.abs(vals) < job.escape_radius)
    st2 = np.full(zs.shape, K.ESCAPED)
    if np.any(near):
        st2[near], _ = ev.basin_many(vals[near])
    cl = np.where(st0 == K.ESCAPED, 0, UNDECIDED)
    inb = st0 == K.OK
    cl = np.where(inb & (st == K.ESCAPED + 10), 1, cl)
    cl = np.where(inb & ok & (st2 == K.ESCAPED), 1, cl)
    cl = np.where(inb & ok & (st2 == K.OK), 2, cl)
    classes[lo:hi] = cl.reshape(hi - lo, -1)
    scalar[lo:hi] = np.where(ok, np.abs(vals), np.nan).reshape(hi - lo, -1)


def _tile_rows(job, ev, xs, ys, classes, scalar, lo, hi, bounds):
    zs = (xs[None, :] + 1j * ys[lo:hi, None]).ravel()
    st, vals, _ = ev.phi_many(zs)
    im = vals.imag
    lo_b, hi_b = bounds
    cl = np.where(im > hi_b, 1, np.where(im < lo_b, 3, 2))
    cl = np.where(st == K.OK, cl, np.where(st == K.ESCAPED, 0, UNDECIDED))
    classes[lo:hi] = cl.reshape(hi - lo, -1)
    scalar[lo:hi] = np.where(st == K.OK, im, np.nan).reshape(hi - lo, -1)


def _real_rows(job, fc, gc, xs, ys, classes, scalar, lo, hi):
    out = np.empty((hi - lo, xs.size), np.int64)
    idx = np.empty((hi - lo, xs.size), np.int64)
    K.bounded_orbit_grid(fc, gc, COUPLING, xs, np.ascontiguousarray(ys[lo:hi]), job.budget,
                         job.escape_radius, out, idx)
    classes[lo:hi] = out
    scalar[lo:hi] = idx


def _wander_rows(job, fc, gc, xs, ys, classes, scalar, lo, hi):
    # each pixel (z, w) is read as the state at checkpoint n0 = round(w^-1/2);
    # transits of length 2n+1 follow while they fit in the budget (at least one)
    for j in range(lo, hi):
        w0 = ys[j]
        if not w0 > 0:
            classes[j] = 0
            scalar[j] = 0
            continue
        n0 = max(1, int(round(w0 ** -0.5)))
        for i, x in enumerate(xs):
            z, w, n, used, ok = x, w0, n0, 0, True
            while ok and (used == 0 or used + 2 * n + 1 <= job.budget):
                ok, z, w, k = K.fiber_run(fc, gc, COUPLING, z, w, 2 * n + 1, job.escape_radius)
                used += 2 * n + 1
                n += 1
            if not ok:
                classes[j, i], scalar[j, i] = 0, used
            else:
                d = abs(z - job.xi)
                classes[j, i] = 2 if d < job.xi_tol else 1
                scalar[j, i] = d


def render(job: RasterJob, threads: int = 1) -> RenderResult:
    """Classify every pixel of ``job``; output is independent of ``threads``.

    Class ids: ``basin_f`` 0 escaped / 1 basin; ``lavaurs_return`` 0 outside
    the basin / 1 basin with image outside / 2 basin with image inside;
    ``fatou_tiles`` 0 outside / 1 above the tile of ``c+`` / 2 between /
    3 below; ``real_bounded`` 0 escaping / 1 bounded; ``real_wandering`` 0
    escaping / 1 bounded / 2 last checkpoint within ``xi_tol`` of ``xi``, where
    the pixel ``(z, w)`` is taken as the state at checkpoint ``round(w^-1/2)``.
    ``UNDECIDED`` marks exhausted budgets and failures.
    """
    xs, ys = pixel_centers(job)
    classes = np.empty((job.height, job.width), np.uint8)
    scalar = np.empty((job.height, job.width), np.float64)
    extra = {}
    kind = job.classifier
    if kind in ("basin_f", "lavaurs_return", "fatou_tiles"):
        fmap = ParabolicMap.from_coeffs(job.f)
        ev = FatouEvaluator(fmap, deep_radius=job.deep_radius, escape_radius=job.escape_radius,
                            max_orbit=max(job.budget, int(10 * job.deep_radius) + 1000))
        extra["petal_radius"] = ev.R
        extra["max_orbit"] = ev.N_max
        if kind == "basin_f":
            work = lambda lo, hi: _basin_rows(job, ev, xs, ys, classes, scalar, lo, hi)
        elif kind == "lavaurs_return":
            work = lambda lo, hi: _lavaurs_rows(job, ev, xs, ys, classes, scalar, lo, hi)
        else:
            crit = critical_points(fmap.poly)
            vals = []
            for c in crit:
                try:
                    vals.append(phi_attracting(ev, complex(c)).imag)
                except NumericalError:
                    pass
            if len(vals) < 2:
                raise ValueError("fatou_tiles needs two critical points in the basin")
            bounds = (min(vals), max(vals))
            extra["critical_points"] = [[complex(c).real, complex(c).imag] for c in crit]
            extra["tile_bounds"] = list(bounds)
            work = lambda lo, hi: _tile_rows(job, ev, xs, ys, classes, scalar, lo, hi, bounds)
    else:
        fc = np.array([complex(c).real for c in job.f])
        gc = np.array([complex(c).real for c in job.g])
        if kind == "real_bounded":
            work = lambda lo, hi: _real_rows(job, fc, gc, xs, ys, classes, scalar, lo, hi)
        else:
            work = lambda lo, hi: _wander_rows(job, fc, gc, xs, ys, classes, scalar, lo, hi)
    chunks = _row_chunks(job.height, threads)
    if threads <= 1:
        for lo, hi in chunks:
            work(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda c: work(*c), chunks))
    res = RenderResult(job, classes, scalar, extra)
    extra["counts"] = res.counts()
    extra["undecided"] = res.counts().get(UNDECIDED, 0)
    return res


def write_ppm(rgb: np.ndarray, path) -> None:
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6" or parts[3] != b"255":
        raise ValueError("not a maxval-255 P6 file")
    w, h = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4][: w * h * 3], np.uint8).reshape(h, w, 3)


def write_metadata(result: RenderResult, path, **more) -> None:
    meta = {
        "job": result.job.to_dict(),
        "palette_rgb": {str(k): list(v) for k, v in PALETTES[result.job.palette].items()},
        "coupling": COUPLING,
    }
    meta.update({k: v for k, v in result.extra.items()})
    meta["counts"] = {str(k): v for k, v in result.extra.get("counts", {}).items()}
    meta.update(more)
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True))


def render_from_metadata(path, threads: int = 1) -> RenderResult:
    meta = json.loads(Path(path).read_text())
    return render(RasterJob.from_dict(meta["job"]), threads)


def overlay_orbit(rgb: np.ndarray, window, points: Sequence, highlight: Sequence[int] = (),
                  color=(0, 0, 0), accent=(230, 0, 0)) -> np.ndarray:
    """Draw points as 3x3 squares (clipped), with ``highlight`` indices in ``accent``."""
    out = rgb.copy()
    if len(points) == 0:
        return out
    h, w, _ = out.shape
    x0, x1, y0, y1 = window
    marks = set(int(i) for i in highlight)
    order = [i for i in range(len(points)) if i not in marks] + sorted(marks)
    for i in order:
        if i >= len(points):
            continue
        p = complex(points[i])
        col = int(math.floor((p.real - x0) / (x1 - x0) * w))
        row = int(math.floor((y1 - p.imag) / (y1 - y0) * h))
        r0, r1 = max(row - 1, 0), min(row + 2, h)
        c0, c1 = max(col - 1, 0), min(col + 2, w)
        if r0 < r1 and c0 < c1:
            out[r0:r1, c0:c1] = accent if i in marks else color
    return out
