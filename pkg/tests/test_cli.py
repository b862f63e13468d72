import csv
import json
import subprocess
import sys

import pytest

from conftest import B_STAR, C_STAR
from wandering.cli import _glue_negative_values, build_parser, main


def run(*argv):
    try:
        return main(list(argv))
    except SystemExit as exc:
        return exc.code


def test_glue_negative_values():
    assert _glue_negative_values(["--z", "-0.5,0", "--n", "5"]) == ["--z=-0.5,0", "--n", "5"]


def test_basin_outputs(tmp_path, capsys):
    out = tmp_path / "b.ppm"
    assert run("basin", "--f", "0,1,1,0.95", "--window", "-1.5,0.5,-1,1", "--size", "40x30",
               "--out", str(out), "--threads", "2") == 0
    assert out.read_bytes().startswith(b"P6\n40 30\n255\n")
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["job"]["width"] == 40 and meta["threads"] == 2
    assert out.with_suffix(".png").stat().st_size > 0


def test_basin_threads_bit_identical(tmp_path):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    common = ["basin", "--f", "0,1,1,0.95", "--window", "-1.5,0.5,-1,1", "--size", "60x60",
              "--no-png"]
    assert run(*common, "--out", str(a), "--threads", "1") == 0
    assert run("--threads", "8", *common, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_render_from_metadata(tmp_path):
    a = tmp_path / "t.ppm"
    assert run("fatou-tiles", "--f", "0,1,1,1", "--size", "30x30", "--out", str(a),
               "--no-png") == 0
    b = tmp_path / "t2.ppm"
    assert run("render", "--from-metadata", str(a.with_suffix(".json")), "--out", str(b),
               "--no-png") == 0
    assert a.read_bytes() == b.read_bytes()


def test_lavaurs_eval(capsys):
    assert run("lavaurs", "eval", "--f", "0,1,1", "--z", "-0.5,0") == 0
    line = capsys.readouterr().out
    assert line.startswith("L(") and "54.68" in line


def test_lavaurs_eval_dd(capsys):
    assert run("lavaurs", "eval", "--f", "0,1,1,0.95", "--z", "-0.05+0.9i",
               "--precision", "dd") == 0
    assert "0.539808366" in capsys.readouterr().out


def test_lavaurs_fixed_point(capsys):
    assert run("lavaurs", "fixed-point", "--f", "0,1,1,0.95", "--tol", "1e-10") == 0
    out = capsys.readouterr().out
    assert "attracting" in out and "0.0608488" in out


def test_horn_multiplier(capsys):
    assert run("horn", "multiplier", "--a", "0.95,0", "--nodes", "256") == 0
    assert "enclosed fixed points = 2" in capsys.readouterr().out


def test_prop_key_csv(tmp_path):
    out = tmp_path / "pk.csv"
    assert run("prop-key", "--f", "0,1,1,0.95", "--g", "0,1,-1", "--z", "-0.05,0.9",
               "--w", "0.5,0", "--n", "5,10", "--csv", str(out)) == 0
    rows = list(csv.reader(open(out)))
    assert rows[0][0] == "n" and [r[0] for r in rows[1:]] == ["5", "10"]
    assert len(rows[1][5].split("e")[0].replace(".", "").lstrip("0")) >= 15
    assert out.with_suffix(".png").exists() and out.with_suffix(".json").exists()


def test_wander_csv(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert run("wander", "--f", f"0,1,1,0,{B_STAR!r}", "--z0", f"{C_STAR!r},0",
               "--w0", "1e-4,0", "--nmax", "130", "--xi", f"{C_STAR!r},0", "--find-seed",
               "--csv", str(out), "--no-png") == 0
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["seed"]["searched"] and meta["n0"] == 100
    assert open(out).readline().strip() == "index,re_z,im_z,re_w,im_w,checkpoint"


def test_search_real(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run("search", "real", "--interval", "-0.7,-0.5", "--samples", "16",
               "--tol", "1e-10", "--csv", str(out)) == 0
    assert "c* = -0.5859" in capsys.readouterr().out
    assert out.with_suffix(".png").exists()


def test_search_real_no_sign_change_is_numerical_failure(capsys):
    assert run("search", "real", "--interval", "-0.7,-0.6", "--samples", "4") == 2
    assert "NoSignChange" in capsys.readouterr().err


def test_approx_check(tmp_path, capsys):
    out = tmp_path / "a.csv"
    assert run("approx", "check", "--which", "att", "--w-list", "1e-4,1e-6", "--grid", "4",
               "--csv", str(out), "--no-png") == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["w", "sup"] and len(rows) == 3
    assert run("approx", "check", "--which", "length", "--n-list", "50") == 0


def test_exit_codes(capsys):
    assert run("lavaurs", "eval", "--f", "0,1,1", "--z", "5,0") == 2
    assert run("lavaurs", "eval", "--f", "0,2,1", "--z", "0,0") == 1
    assert run("nonsense") == 1
    assert run("basin", "--size", "10by10", "--f", "0,1,1") == 1
    assert run("approx", "check", "--which", "xyz") == 1
    assert run("--threads", "0", "lavaurs", "eval", "--f", "0,1,1", "--z", "-0.5,0") == 1


def test_parser_has_normative_commands():
    p = build_parser()
    text = p.format_help()
    for cmd in ("basin", "fatou-tiles", "lavaurs", "horn", "prop-key", "wander", "search",
                "approx"):
        assert cmd in text


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "wandering", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and "prop-key" in r.stdout
