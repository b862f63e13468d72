import csv
import math

import numpy as np
import pytest

from conftest import B_STAR, C_STAR
from oracles import skew_iterate
from wandering.approx_fatou import COUPLING
from wandering.errors import BudgetExceeded
from wandering.skew_dynamics import (SkewSystem, fiber_composition, find_wandering_seed,
                                     prop_key_check, step, wandering_orbit, write_trace_csv)

COMPLEX = SkewSystem.from_coeffs([0, 1, 1, 0.95])
REAL = SkewSystem.from_coeffs([0, 1, 1, 0, B_STAR])
Z0 = complex(-0.05, 0.9)


@pytest.fixture(scope="module")
def seed100():
    z0, w0, _ = find_wandering_seed(REAL, C_STAR, n0=100)
    return z0, w0


def test_step_examples():
    assert step(COMPLEX, 0, 0) == (0, 0)
    z = 0.3 - 0.2j
    assert step(COMPLEX, z, 0) == (COMPLEX.f(z), 0)
    z1, w1 = step(COMPLEX, z, 1)
    assert z1 == pytest.approx(COMPLEX.f(z) + math.pi ** 2 / 4) and w1 == 0
    assert COMPLEX.fibered.coupling == COUPLING


def test_fiber_composition_examples():
    z, w = 0.1 + 0.2j, 0.3
    assert fiber_composition(COMPLEX, z, w, 7, 7) == z
    assert fiber_composition(COMPLEX, z, w, 0, 1) == pytest.approx(COMPLEX.f(z) + COUPLING * w)
    with pytest.raises(ValueError):
        fiber_composition(COMPLEX, z, w, 3, 2)


def test_fiber_composition_against_direct_iteration():
    fc = COMPLEX.f.poly.coeffs
    gc = COMPLEX.g.poly.coeffs
    z, w = Z0, 0.5
    m1, m2 = 25, 36
    wm = w
    for _ in range(m1):
        wm = wm - wm * wm
    ref, _ = skew_iterate(fc, gc, z, wm, m2 - m1)
    assert abs(fiber_composition(COMPLEX, z, w, m1, m2) - ref) < 1e-12


def test_prop_key_second_coordinate_and_decay():
    L, res = prop_key_check(COMPLEX, Z0, 0.5, [5, 10, 20, 40, 80])
    assert abs(L - (0.53980836625 + 0.23336238538j)) < 1e-9
    seconds = [r.second for r in res]
    assert all(s < 2 / r.n ** 2 for s, r in zip(seconds, res))
    assert all(a > b for a, b in zip(seconds, seconds[1:]))
    err = {r.n: r.error for r in res}
    assert err[40] / err[10] < 1
    assert err[80] < err[40]


def test_prop_key_real_reference_system_decreases():
    _, res = prop_key_check(REAL, C_STAR, 0.5, [5, 10, 20, 40])
    errs = [r.error for r in res]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert all(isinstance(r.z_end, float) for r in res)


def test_prop_key_matches_direct_iteration():
    n = 5
    L, res = prop_key_check(COMPLEX, Z0, 0.5, [n])
    w = 0.5
    for _ in range(n * n):
        w = w - w * w
    z, _ = skew_iterate(COMPLEX.f.poly.coeffs, COMPLEX.g.poly.coeffs, Z0, w, 2 * n + 1)
    assert abs(res[0].z_end - z) < 1e-12


def test_orbit_invariant_line():
    tr = wandering_orbit(COMPLEX, -0.3 + 0.1j, 0.0, 12, 0, n0=0)
    assert np.all(tr.states[:, 1] == 0)
    z = -0.3 + 0.1j
    for k in range(1, 50):
        z = complex(COMPLEX.f(z))
        assert tr.states[k, 0] == z


def test_orbit_checkpoints_and_determinism(seed100):
    a = wandering_orbit(REAL, *seed100, 130, C_STAR)
    b = wandering_orbit(REAL, *seed100, 130, C_STAR)
    assert a.n0 == 100
    assert np.array_equal(a.states, b.states)
    idx = [c[1] for c in a.checkpoints]
    ns = [c[0] for c in a.checkpoints]
    assert all(i == n * n - 100 * 100 for n, i in zip(ns, idx))
    assert all(j - i == 2 * n + 1 for (n, i), j in zip(zip(ns, idx), idx[1:]))
    assert a.states.dtype == np.float64


def test_orbit_stored_or_checkpoint_only_agree(seed100):
    full = wandering_orbit(REAL, *seed100, 130, C_STAR)
    sparse = wandering_orbit(REAL, *seed100, 130, C_STAR, store_limit=10)
    assert full.complete and not sparse.complete
    assert np.array_equal(full.distances, sparse.distances)


def test_orbit_budget():
    with pytest.raises(BudgetExceeded):
        wandering_orbit(REAL, C_STAR, 1e-6, 5000, C_STAR, budget=1000)


def test_wandering_seed_and_bounded_orbit():
    z0, w0, s = find_wandering_seed(REAL, C_STAR, n0=300)
    assert z0 == C_STAR and 0 < w0 < 1 / 290 ** 2
    tr = wandering_orbit(REAL, z0, w0, 1200, C_STAR)
    z, w = tr.states[:, 0], tr.states[:, 1]
    assert np.all((-3 < z) & (z < 3) & (0 < w) & (w < 1))
    length, _ = tr.longest_decrease()
    assert length >= 5


def test_trace_csv(tmp_path, seed100):
    tr = wandering_orbit(REAL, *seed100, 103, C_STAR)
    p = tmp_path / "t.csv"
    write_trace_csv(tr, p)
    rows = list(csv.reader(open(p)))
    assert rows[0] == ["index", "re_z", "im_z", "re_w", "im_w", "checkpoint"]
    assert len(rows) == 1 + len(tr.states)
    assert float(rows[1][1]) == tr.states[0, 0]
    assert sum(int(r[5]) for r in rows[1:]) == len(tr.checkpoints)
