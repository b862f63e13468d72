import csv
import math

import numpy as np
import pytest

from conftest import C_STAR
from wandering import FatouEvaluator, ParabolicMap
from wandering.errors import NoSignChange
from wandering.fatou_coords import classify_basin
from wandering.lavaurs_engine import LavaursMap, lavaurs_fixed_point
from wandering.param_search import (X_UPPER, ComplexScanPoint, claim4_probe, complex_scan,
                                    real_defect, real_root_search, summary_report,
                                    write_complex_csv, write_real_csv)
from wandering.poly_core import quartic_b


def test_defect_at_minus_half():
    p = real_defect(-0.5)
    assert p.Lc > 0 and p.defect > 0.5 and p.b == 0


def test_real_defect_domain():
    with pytest.raises(ValueError):
        real_defect(-1.6)
    with pytest.raises(ValueError):
        real_defect(-0.4)


def test_b_values():
    assert quartic_b(-0.75) == pytest.approx(-8 / 27, abs=1e-15)
    assert quartic_b(-0.5) == 0
    assert quartic_b(-1.5) == pytest.approx(-4 / 27, abs=1e-15)


def test_fixed_points_of_limit_map():
    f = ParabolicMap.real_quartic(-1.5)
    for x in (0.0, 1.5 * math.sqrt(3), -1.5 * math.sqrt(3)):
        assert abs(f(x) - x) < 1e-12


def test_critical_point_in_basin():
    rng = np.random.default_rng(11)
    for c in rng.uniform(-1.49, -0.51, 50):
        ev = FatouEvaluator(ParabolicMap.real_quartic(c))
        assert classify_basin(ev, c).in_basin


def test_root_search():
    root, table, (deriv, err) = real_root_search((-0.7, -0.5), 64, 1e-12)
    assert abs(root.c + 0.586) < 0.01
    assert abs(root.b + 0.2136) < 5e-3
    assert abs(root.defect) < 1e-6
    assert abs(deriv) < 1e-2
    cs = np.array([p.c for p in table])
    i = int(np.searchsorted(cs, root.c)) - 1
    assert table[i].defect * table[i + 1].defect < 0


def test_root_search_without_sign_change():
    with pytest.raises(NoSignChange) as info:
        real_root_search((-0.7, -0.6), 8)
    assert len(info.value.table) == 8


def test_claim4_probe():
    rows = claim4_probe([20, 30, 40, 50, 80, 110, 200])
    assert any(d < 0 for *_, d in rows)
    finite = [L for _, _, L, _ in rows if math.isfinite(L)]
    assert all(L <= X_UPPER for L in finite)
    with pytest.raises(ValueError):
        claim4_probe([10])


def test_claim4_sign_near_limit():
    # values beyond the repelling side overflow to -inf, which lies below c
    cs = np.linspace(-1.4999, -1.49, 6)
    assert any(real_defect(c).defect < 0 for c in cs)


@pytest.fixture(scope="module")
def scan():
    return complex_scan(0.05, 4)


def test_complex_scan_attracting(scan):
    resolved = [p for p in scan if p.rho is not None]
    assert len(resolved) == len(scan) >= 12
    assert all(p.attracting for p in resolved)
    a95 = [p for p in scan if p.a == 0.95]
    assert a95 and a95[0].attracting
    for p in resolved:
        if p.rho_residue is not None:
            assert abs(p.rho - p.rho_residue) < 1e-3


def test_complex_scan_validation():
    with pytest.raises(ValueError):
        complex_scan(0.6, 4)
    with pytest.raises(ValueError):
        complex_scan(0.05, 3)


def test_multiplier_continuity():
    # neighbours at spacing 0.0025 around a = 0.95
    rhos = []
    for a in (0.95, 0.9525, 0.95 + 0.0025j):
        ev = FatouEvaluator(ParabolicMap.cubic(a))
        rhos.append(lavaurs_fixed_point(LavaursMap(ev)).multiplier)
    assert max(abs(r - rhos[0]) for r in rhos[1:]) < 0.2


def test_writers(tmp_path, scan):
    p = tmp_path / "c.csv"
    write_complex_csv(scan + [ComplexScanPoint(0.97 + 0j, None, None, status="Fail")], p)
    rows = list(csv.reader(open(p)))
    assert rows[0][0] == "re_a" and rows[-1][-1] == "Fail"
    assert len(rows[1][4].replace("-", "").replace(".", "").lstrip("0")) >= 15
    q = tmp_path / "r.csv"
    write_real_csv([real_defect(-0.6)], q)
    assert list(csv.reader(open(q)))[0] == ["c", "b", "L_c", "defect", "status"]
    text = summary_report(scan, 0.05)
    assert "attracting" in text and "failed" not in text
