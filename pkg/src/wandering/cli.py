"""Command-line entry point: ``python -m wandering <command> ...``.

Exit status is 0 on success, 2 when a numerical routine fails and 1 on a
usage error.  Commands that write a CSV or PPM also write a JSON sidecar
and a PNG figure with the same stem.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import _kernels as K
from .approx_fatou import (ApproxCoordinate, FiberedMap, property_check_attracting,
                           property_check_repelling, property_check_translation,
                           transition_length_check)
from .errors import NoSignChange, NumericalError
from .fatou_coords import FatouEvaluator
from .lavaurs_engine import (LavaursMap, horn_residue, horn_sample, lavaurs_apply,
                             lavaurs_convergence_check, lavaurs_fixed_point)
from .param_search import (claim4_probe, complex_scan, real_root_search, summary_report,
                           write_complex_csv, write_real_csv)
from .poly_core import ParabolicMap, format_coeffs, parse_coeffs, parse_complex
from .raster import (CLASSIFIERS, PALETTES, RasterJob, overlay_orbit, render,
                     render_from_metadata, write_metadata, write_ppm)
from .skew_dynamics import (SkewSystem, find_wandering_seed, prop_key_check,
                            wandering_orbit, write_trace_csv)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---- argument types ----------------------------------------------------------

def _floats(text: str, n: int | None = None) -> tuple:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} numbers, got {len(vals)}")
    return vals


def window_arg(text):
    return _floats(text, 4)


def size_arg(text):
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"size must look like 200x200, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def point_arg(text):
    """``re,im`` or a single complex literal such as ``-0.05+0.9i``."""
    parts = text.split(",")
    try:
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
        if len(parts) == 1:
            return parse_complex(parts[0])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im or a complex literal, got {text!r}")


def coeffs_arg(text):
    try:
        return parse_coeffs(text).coeffs
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def ints_arg(text):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def floats_arg(text):
    return list(_floats(text))


# ---- helpers -----------------------------------------------------------------

def _fmt(x) -> str:
    return format(float(x), ".17g")


def _cfmt(z) -> str:
    z = complex(z)
    return f"{_fmt(z.real)}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{_fmt(abs(z.imag))}i"


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.complexfloating):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _sidecar(path: Path, payload: dict) -> Path:
    side = path.with_suffix(".json")
    side.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True))
    return side


def _evaluator(fc, args) -> FatouEvaluator:
    return FatouEvaluator(ParabolicMap.from_coeffs(fc), precision=args.precision)


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(header)
        for r in rows:
            out.writerow([x if isinstance(x, (str, int)) else _fmt(x) for x in r])


def _plotting():
    # deferred so commands without figures never import matplotlib
    from . import plotting
    return plotting


# ---- raster commands ---------------------------------------------------------

def _render_and_write(job: RasterJob, out: Path, args, title: str, png: bool = True):
    t0 = time.perf_counter()
    res = render(job, threads=args.threads)
    rgb = res.rgb()
    write_ppm(rgb, out)
    write_metadata(res, out.with_suffix(".json"), threads=args.threads,
                   precision_note="raster kernels run in double precision",
                   seconds=round(time.perf_counter() - t0, 3))
    if png and not args.no_png:
        _plotting().raster_png(rgb, job.window, out.with_suffix(".png"), title)
    print(f"wrote {out} ({job.width}x{job.height}, classes {res.counts()})")
    return res


def _job_from_args(args, classifier) -> RasterJob:
    w, h = args.size
    return RasterJob(args.window, w, h, classifier, args.f, g=args.g, palette=args.palette,
                     budget=args.budget, sigma=args.sigma, xi=args.xi, xi_tol=args.xi_tol)


def cmd_basin(args):
    _render_and_write(_job_from_args(args, "basin_f"), Path(args.out), args,
                      f"parabolic basin of {format_coeffs(args.f)}")


def cmd_fatou_tiles(args):
    _render_and_write(_job_from_args(args, "fatou_tiles"), Path(args.out), args,
                      f"Fatou tiles of {format_coeffs(args.f)}")


def cmd_render(args):
    out = Path(args.out)
    if args.from_metadata:
        t0 = time.perf_counter()
        res = render_from_metadata(args.from_metadata, threads=args.threads)
        rgb = res.rgb()
        write_ppm(rgb, out)
        write_metadata(res, out.with_suffix(".json"), threads=args.threads,
                       seconds=round(time.perf_counter() - t0, 3))
        if not args.no_png:
            _plotting().raster_png(rgb, res.job.window, out.with_suffix(".png"), res.job.classifier)
        print(f"wrote {out} ({res.counts()})")
        return
    if args.classifier is None or args.f is None or args.window is None:
        raise UsageError("render needs --classifier, --f and --window (or --from-metadata)")
    labels = ("Re z", "w") if args.classifier.startswith("real_") else ("Re z", "Im z")
    job = _job_from_args(args, args.classifier)
    res = render(job, threads=args.threads)
    rgb = res.rgb()
    write_ppm(rgb, out)
    write_metadata(res, out.with_suffix(".json"), threads=args.threads)
    if not args.no_png:
        _plotting().raster_png(rgb, job.window, out.with_suffix(".png"), job.classifier,
                               *labels)
    print(f"wrote {out} ({job.width}x{job.height}, classes {res.counts()})")


# ---- Lavaurs and horn commands -----------------------------------------------

def cmd_lavaurs_eval(args):
    ev = _evaluator(args.f, args)
    L = LavaursMap(ev, args.sigma)
    z = args.z
    if ev.is_real and z.imag == 0 and args.sigma.imag == 0:
        L = LavaursMap(ev, args.sigma.real)
        z = z.real
    val = lavaurs_apply(L, z)
    print(f"L({_cfmt(args.z)}) = {_cfmt(val)}")


def cmd_lavaurs_fixed_point(args):
    ev = _evaluator(args.f, args)
    rep = lavaurs_fixed_point(LavaursMap(ev, args.sigma), window=args.window, grid=args.grid,
                              tol=args.tol)
    kind = "attracting" if rep.attracting else "not attracting"
    print(f"xi = {_cfmt(rep.location)}")
    print(f"rho = {_cfmt(rep.multiplier)} (|rho| = {abs(rep.multiplier):.6g}, {kind})")
    print(f"residual = {rep.residual:.3g}, multiplier error ~ {rep.multiplier_error:.2g}")


def cmd_lavaurs_converge(args):
    fmap = ParabolicMap.from_coeffs(args.f)
    ev = FatouEvaluator(fmap, precision=args.precision)
    errs = lavaurs_convergence_check(fmap, args.sigma, args.z, args.n, ev)
    for n, e in zip(args.n, errs):
        print(f"n = {n:6d}  error = {e:.6g}")
    if args.csv:
        out = Path(args.csv)
        _write_rows(out, ["n", "error"], list(zip(args.n, errs)))
        _sidecar(out, {"f": format_coeffs(args.f), "sigma": args.sigma, "z": args.z, "n": args.n})
        if not args.no_png:
            _plotting().convergence_figure(args.n, errs, out.with_suffix(".png"))


def cmd_horn_multiplier(args):
    fmap = ParabolicMap.cubic(args.a)
    ev = FatouEvaluator(fmap, precision=args.precision)
    est = horn_residue(fmap, args.height, args.nodes, ev)
    drift = horn_sample(fmap, est.height, args.nodes, ev).mean_drift
    print(f"a = {_cfmt(args.a)}  height = {est.height:g}  nodes = {est.nodes}")
    print(f"rho = {_cfmt(est.rho)} (|rho| = {abs(est.rho):.6g})")
    print(f"enclosed fixed points = {est.enclosed}, multiplier at 0 = {_cfmt(est.multiplier_at_zero)}")
    print(f"mean drift = {_cfmt(drift)}")


# ---- skew-product commands ---------------------------------------------------

def cmd_prop_key(args):
    S = SkewSystem.from_coeffs(args.f, args.g)
    ev = _evaluator(args.f, args)
    Lz, results = prop_key_check(S, args.z, args.w, args.n, ev)
    print(f"L_f(z) = {_cfmt(Lz)}")
    rows = []
    for r in results:
        bound = 2.0 / r.n ** 2
        print(f"n = {r.n:4d}  error = {r.error:.6g}  |w_end| = {r.second:.3g} "
              f"(bound {bound:.3g})")
        zc, wc = complex(r.z_end), complex(r.w_end)
        rows.append([r.n, zc.real, zc.imag, wc.real, wc.imag, r.error, r.second, bound])
    if args.csv:
        out = Path(args.csv)
        _write_rows(out, ["n", "re_z_end", "im_z_end", "re_w_end", "im_w_end", "error",
                          "abs_w_end", "bound"], rows)
        _sidecar(out, {"f": format_coeffs(args.f), "g": format_coeffs(args.g), "z": args.z, "w": args.w,
                       "n": args.n, "L_f_z": Lz, "coupling": S.fibered.coupling})
        if not args.no_png:
            _plotting().transit_figure(None, None, _transit_points(S, args.z, args.w, args.n),
                                       complex(Lz), out.with_suffix(".png"))


def _transit_points(S, z, w, n_list):
    fc, gc, k = S.arrays(False)
    out = {}
    for n in n_list:
        ok, wn = K.perturbed_orbit_end(gc, 0j, complex(w), n * n, 1e300)
        zs = np.empty(2 * n + 2, np.complex128)
        ws = np.empty(2 * n + 2, np.complex128)
        K.fiber_trace(fc, gc, k, complex(z), wn, 2 * n + 1, zs, ws)
        out[n] = zs[1:]
    return out


def cmd_wander(args):
    S = SkewSystem.from_coeffs(args.f, args.g)
    z0, w0 = args.z0, args.w0
    seed = {"z0": z0, "w0": w0, "searched": False}
    if args.find_seed:
        if args.xi is None:
            raise UsageError("--find-seed needs --xi")
        n0 = args.n0 or int(round(abs(w0) ** -0.5))
        z0, w0, s = find_wandering_seed(S, args.xi, n0=n0)
        seed = {"z0": z0, "w0": w0, "s": s, "n0": n0, "searched": True}
        print(f"seed: z0 = {_cfmt(z0)}, w0 = {_fmt(complex(w0).real)} (s = {_fmt(complex(s).real)})")
    xi = args.xi if args.xi is not None else z0
    trace = wandering_orbit(S, z0, w0, args.nmax, xi, n0=args.n0)
    length, start = trace.longest_decrease()
    d = trace.distances
    print(f"checkpoints n = {trace.n0}..{args.nmax}: final |z - xi| = {d[-1]:.3g}, "
          f"longest decreasing run {length} from n = {start}")
    if args.csv:
        out = Path(args.csv)
        write_trace_csv(trace, out)
        _sidecar(out, {"f": format_coeffs(args.f), "g": format_coeffs(args.g), "seed": seed, "xi": xi,
                       "n0": trace.n0, "nmax": args.nmax, "complete": trace.complete,
                       "longest_decrease": [length, start], "final_distance": float(d[-1])})
        if not args.no_png:
            ns = [c[0] for c in trace.checkpoints]
            pts = [complex(complex(c[2]).real, complex(c[3]).real) for c in trace.checkpoints]
            _plotting().orbit_figure(ns, d, pts, out.with_suffix(".png"),
                                     complex(xi).real)
    if args.overlay:
        _wander_overlay(args, S, trace, complex(xi).real)


def _wander_overlay(args, S, trace, xi):
    """Bounded-orbit raster with the stored states drawn on top."""
    w, h = args.size
    window = args.window or (-3.0, 3.0, 0.0, 1.0)
    job = RasterJob(window, w, h, "real_bounded", args.f, g=args.g, budget=args.budget)
    res = render(job, threads=args.threads)
    if trace.complete:
        pts = [complex(complex(z).real, complex(ww).real) for z, ww in trace.states]
        marks = [i for i in (0, 2 * trace.n0 + 1, 4 * trace.n0 + 4) if i < len(pts)]
    else:
        pts = [complex(complex(c[2]).real, complex(c[3]).real) for c in trace.checkpoints]
        marks = [0]
    rgb = overlay_orbit(res.rgb(), window, pts, marks)
    out = Path(args.overlay)
    write_ppm(rgb, out)
    write_metadata(res, out.with_suffix(".json"), overlay_highlight=marks, xi=xi)
    if not args.no_png:
        _plotting().raster_png(rgb, window, out.with_suffix(".png"), "bounded orbits", "z", "w")
    print(f"wrote {out}")


# ---- parameter searches ------------------------------------------------------

def cmd_search_real(args):
    ev_kw = {"precision": args.precision}
    try:
        root, table, (deriv, derr) = real_root_search(tuple(args.interval), args.samples,
                                                      args.tol, ev_kw=ev_kw)
    except NoSignChange as exc:
        if args.csv and exc.table:
            write_real_csv(exc.table, Path(args.csv))
        raise
    print(f"c* = {_fmt(root.c)}  b* = {_fmt(root.b)}")
    print(f"L(c*) - c* = {root.defect:.3g}  L'(c*) = {deriv.real:.3g} (+- {derr:.1g})")
    probe = claim4_probe(args.claim4, ev_kw) if args.claim4 else []
    for n, c, L, dfc in probe:
        print(f"n = {n:4d}  c_n = {_fmt(c)}  L(c_n) - c_n = {dfc:.6g}")
    if args.csv:
        out = Path(args.csv)
        write_real_csv(table + [root], out)
        _sidecar(out, {"interval": list(args.interval), "samples": args.samples, "tol": args.tol,
                       "root": root.c, "b": root.b, "defect": root.defect,
                       "derivative": [deriv, derr], "precision": args.precision,
                       "claim4": [list(r) for r in probe]})
        if not args.no_png:
            _plotting().defect_figure([p.c for p in table], [p.Lc for p in table],
                                      out.with_suffix(".png"), root=root.c)


def cmd_search_complex(args):
    ev_kw = {"precision": args.precision}
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            pts = complex_scan(args.radius, args.grid, args.tol, ev_kw, map_fn=pool.map)
    else:
        pts = complex_scan(args.radius, args.grid, args.tol, ev_kw)
    print(summary_report(pts, args.radius))
    if args.csv:
        out = Path(args.csv)
        write_complex_csv(pts, out)
        _sidecar(out, {"radius": args.radius, "grid": args.grid, "tol": args.tol,
                       "center": 1 - args.radius, "precision": args.precision})
        if not args.no_png:
            nan = complex(math.nan, math.nan)
            _plotting().scan_figure([p.a for p in pts],
                                    [p.rho if p.rho is not None else nan for p in pts],
                                    complex(1 - args.radius), args.radius, out.with_suffix(".png"))


# ---- approximate coordinates -------------------------------------------------

def cmd_approx_check(args):
    fib = FiberedMap.from_coeffs(args.f, args.g)
    ev = FatouEvaluator(fib.f, precision=args.precision)
    rows, header = [], None
    if args.which == "length":
        header = ["n", "k", "lhs", "rhs", "difference"]
        ns = args.n_list or [50, 200]
        for n in ns:
            r = transition_length_check(fib.g, args.w_start, n, args.alpha)
            rows.append([r.n, r.k, complex(r.lhs).real, r.rhs, r.difference])
            print(f"n = {n:5d}  k = {r.k:3d}  difference = {r.difference:.6g}")
    else:
        for w in args.w_list:
            ac = ApproxCoordinate(fib, w, args.alpha)
            if args.which == "att":
                header = ["w", "sup"]
                s = property_check_attracting(ac, args.grid, ev)
                rows.append([w, s])
                print(f"w = {w:.3g}  sup = {s:.6g}")
            elif args.which == "rep":
                header = ["w", "sup"]
                s = property_check_repelling(ac, args.grid, ev)
                rows.append([w, s])
                print(f"w = {w:.3g}  sup = {s:.6g}")
            else:
                header = ["w", "sup", "sup_over_w", "re_mean_step", "im_mean_step"]
                s, ratio, mean = property_check_translation(ac, args.grid)
                rows.append([w, s, ratio, mean.real, mean.imag])
                print(f"w = {w:.3g}  sup = {s:.6g}  sup/|w| = {ratio:.6g}")
    if args.csv:
        out = Path(args.csv)
        _write_rows(out, header, rows)
        _sidecar(out, {"which": args.which, "alpha": args.alpha, "grid": args.grid,
                       "f": format_coeffs(args.f), "g": format_coeffs(args.g), "w_list": args.w_list})
        if not args.no_png:
            xs = [r[0] for r in rows]
            if args.which == "length":
                _plotting().convergence_figure(xs, [r[4] for r in rows], out.with_suffix(".png"),
                                               "difference")
            else:
                extra = {"sup/|w|": [r[2] for r in rows]} if args.which == "trans" else None
                _plotting().convergence_figure(xs, [r[1] for r in rows], out.with_suffix(".png"),
                                               "sup", extra)


# ---- parser ------------------------------------------------------------------

def _common(top: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--threads", type=int, default=d(1), help="worker threads")
    p.add_argument("--precision", choices=("double", "dd"), default=d("double"),
                   help="'dd' evaluates Fatou coordinates with mpmath")
    p.add_argument("--no-png", action="store_true", default=d(False),
                   help="skip matplotlib figures")
    return p


def _geometry(p, window=None, size=(200, 200)):
    p.add_argument("--f", type=coeffs_arg, required=window is not None,
                   help="coefficients of f, ascending degree")
    p.add_argument("--g", type=coeffs_arg, default=(0.0, 1.0, -1.0))
    p.add_argument("--window", type=window_arg, default=window, help="x0,x1,y0,y1")
    p.add_argument("--size", type=size_arg, default=size, help="WxH")
    p.add_argument("--out", default="image.ppm")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--palette", choices=sorted(PALETTES), default=None)
    p.add_argument("--sigma", type=point_arg, default=0j)
    p.add_argument("--xi", type=float, default=None)
    p.add_argument("--xi-tol", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    parser = _Parser(prog="wandering", parents=[_common(True)],
                     description="Parabolic implosion and wandering domains toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basin", parents=[common], help="render the parabolic basin")
    _geometry(p, window=(-1.5, 0.5, -1.0, 1.0))
    p.set_defaults(func=cmd_basin)

    p = sub.add_parser("fatou-tiles", parents=[common], help="render Fatou tiles")
    _geometry(p, window=(-1.5, 0.5, -1.0, 1.0))
    p.set_defaults(func=cmd_fatou_tiles)

    p = sub.add_parser("render", parents=[common], help="render any classifier")
    _geometry(p)
    p.add_argument("--classifier", choices=CLASSIFIERS)
    p.add_argument("--from-metadata", help="re-render from a JSON sidecar")
    p.set_defaults(func=cmd_render)

    lav = sub.add_parser("lavaurs", help="Lavaurs maps").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = lav.add_parser("eval", parents=[common])
    p.add_argument("--f", type=coeffs_arg, required=True)
    p.add_argument("--sigma", type=point_arg, default=0j)
    p.add_argument("--z", type=point_arg, required=True)
    p.set_defaults(func=cmd_lavaurs_eval)
    p = lav.add_parser("fixed-point", parents=[common])
    p.add_argument("--f", type=coeffs_arg, required=True)
    p.add_argument("--sigma", type=point_arg, default=0j)
    p.add_argument("--window", type=window_arg, default=(-1.0, 1.0, 0.0, 1.5))
    p.add_argument("--grid", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_lavaurs_fixed_point)
    p = lav.add_parser("converge", parents=[common])
    p.add_argument("--f", type=coeffs_arg, default=(0.0, 1.0, 1.0))
    p.add_argument("--sigma", type=point_arg, default=0j)
    p.add_argument("--z", type=point_arg, default=-0.5 + 0j)
    p.add_argument("--n", type=ints_arg, default=[100, 400, 1600])
    p.add_argument("--csv")
    p.set_defaults(func=cmd_lavaurs_converge)

    horn = sub.add_parser("horn", help="horn map").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = horn.add_parser("multiplier", parents=[common])
    p.add_argument("--a", type=point_arg, required=True)
    p.add_argument("--height", type=float, default=None, help="loop height (auto if omitted)")
    p.add_argument("--nodes", type=int, default=256)
    p.set_defaults(func=cmd_horn_multiplier)

    p = sub.add_parser("prop-key", parents=[common], help="transit versus Lavaurs map")
    p.add_argument("--f", type=coeffs_arg, required=True)
    p.add_argument("--g", type=coeffs_arg, default=(0.0, 1.0, -1.0))
    p.add_argument("--z", type=point_arg, required=True)
    p.add_argument("--w", type=point_arg, required=True)
    p.add_argument("--n", type=ints_arg, default=[5, 10, 20, 40])
    p.add_argument("--csv")
    p.set_defaults(func=cmd_prop_key)

    p = sub.add_parser("wander", parents=[common], help="orbit of the skew-product")
    p.add_argument("--f", type=coeffs_arg, required=True)
    p.add_argument("--g", type=coeffs_arg, default=(0.0, 1.0, -1.0))
    p.add_argument("--z0", type=point_arg, required=True)
    p.add_argument("--w0", type=point_arg, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--xi", type=point_arg, default=None)
    p.add_argument("--n0", type=int, default=None)
    p.add_argument("--find-seed", action="store_true",
                   help="adjust w0 so that the first transit returns to xi")
    p.add_argument("--csv")
    p.add_argument("--overlay", help="PPM with the orbit drawn over the bounded set")
    p.add_argument("--window", type=window_arg, default=None)
    p.add_argument("--size", type=size_arg, default=(600, 100))
    p.add_argument("--budget", type=int, default=500)
    p.set_defaults(func=cmd_wander)

    srch = sub.add_parser("search", help="parameter searches").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = srch.add_parser("real", parents=[common])
    p.add_argument("--interval", type=lambda t: _floats(t, 2), default=(-0.7, -0.5))
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--claim4", type=ints_arg, default=None, help="n values for the c_n probe")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_search_real)
    p = srch.add_parser("complex", parents=[common])
    p.add_argument("--radius", type=float, default=0.05)
    p.add_argument("--grid", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_search_complex)

    apx = sub.add_parser("approx", help="approximate Fatou coordinates").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = apx.add_parser("check", parents=[common])
    p.add_argument("--which", choices=("att", "rep", "trans", "length"), required=True)
    p.add_argument("--w-list", type=floats_arg, default=[1e-4, 1e-6, 1e-8])
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--f", type=coeffs_arg, default=(0.0, 1.0, 1.0, 0.95))
    p.add_argument("--g", type=coeffs_arg, default=(0.0, 1.0, -1.0))
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--n-list", type=ints_arg, default=None, help="n values for 'length'")
    p.add_argument("--w-start", type=float, default=0.5, help="w for 'length'")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_approx_check)
    return parser


_NEG_VALUE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    """Turn ``--z -0.5,0`` into ``--z=-0.5,0`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
