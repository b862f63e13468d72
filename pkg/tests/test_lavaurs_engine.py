import cmath
import math

import numpy as np
import pytest

from conftest import C_STAR
from wandering import FatouEvaluator, ParabolicMap
from wandering.errors import DegenerateDenominator, HeightTooLow, NumericalError
from wandering.fatou_coords import classify_basin
from wandering.lavaurs_engine import (LavaursMap, horn_fixed_point, horn_multiplier_residue,
                                      horn_residue, horn_sample, lavaurs_apply,
                                      lavaurs_convergence_check, lavaurs_fixed_point,
                                      multiplier_fd)

Z0 = complex(-0.05, 0.9)
RNG = np.random.default_rng(7)


def cubic(a):
    return ParabolicMap.cubic(a)


def sample_basin(ev, n):
    pts = []
    while len(pts) < n:
        z = complex(RNG.uniform(-1.0, 0.0), RNG.uniform(-0.7, 0.7))
        if classify_basin(ev, z).in_basin:
            pts.append(z)
    return pts


def test_lavaurs_of_minus_half_is_positive(ev_quad):
    v = lavaurs_apply(LavaursMap(ev_quad, 0.0), -0.5)
    assert isinstance(v, float) and v > 0


def test_lavaurs_value_at_figure_point(ev_095):
    v = lavaurs_apply(LavaursMap(ev_095), Z0)
    assert abs(v - (0.53980836625 + 0.23336238538j)) < 1e-9


@pytest.mark.parametrize("coeffs", [(0, 1, 1), (0, 1, 1, 0.95)])
def test_commutes_with_f(coeffs):
    ev = FatouEvaluator(ParabolicMap.from_coeffs(coeffs))
    L, f = LavaursMap(ev), ev.map
    checked = 0
    for z in sample_basin(ev, 50):
        try:
            lhs = L(f(z))
            rhs = f(L(z))
        except NumericalError:
            continue
        if abs(rhs) > 1e6:
            continue
        assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))
        checked += 1
    assert checked >= 40


def test_phase_additivity(ev_095):
    f = ev_095.map
    for z in sample_basin(ev_095, 20):
        for sigma in (0.0, 0.3 + 0.1j):
            try:
                lhs = LavaursMap(ev_095, sigma + 1)(z)
                rhs = f(LavaursMap(ev_095, sigma)(z))
            except NumericalError:
                continue
            if abs(rhs) < 1e6:
                assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_vectorized_matches_scalar(ev_095):
    L = LavaursMap(ev_095)
    zs = np.array(sample_basin(ev_095, 10))
    st, vals = L.many(zs)
    for z, s, v in zip(zs, st, vals):
        if s == 0:
            assert abs(v - L(z)) < 1e-12 * max(1, abs(v))


def test_convergence_errors_decrease(ev_quad):
    f = ev_quad.map
    errs = lavaurs_convergence_check(f, 0, -0.5, [100, 400, 1600], ev_quad)
    assert errs[0] > errs[1] > errs[2]


def test_convergence_target_is_lavaurs_value(ev_quad):
    # error at n and the distance of the orbit end to L(z) are the same number
    f = ev_quad.map
    n = 100
    eps2 = (math.pi / n) ** 2
    z = -0.5
    for _ in range(n):
        z = z + z * z + eps2
    err = lavaurs_convergence_check(f, 0, -0.5, [n], ev_quad)[0]
    assert err == pytest.approx(abs(z - lavaurs_apply(LavaursMap(ev_quad, 0.0), -0.5)), rel=1e-9)


def test_convergence_needs_unit_a2():
    with pytest.raises(ValueError):
        lavaurs_convergence_check(ParabolicMap.from_coeffs([0, 1, 2]), 0, -0.1, [10])


@pytest.mark.parametrize("a,expected", [(1.0, 0j), (0.95, -0.05j * math.pi)])
def test_horn_mean_drift(a, expected):
    s = horn_sample(cubic(a), 3.0, 128)
    assert abs(s.mean_drift - expected) < 1e-2
    assert s.periodicity_error < 1e-8


def test_horn_sample_too_low():
    with pytest.raises(HeightTooLow):
        horn_sample(cubic(0.95), 0.05, 64)


def test_residue_rejects_a_equal_one():
    with pytest.raises(DegenerateDenominator):
        horn_multiplier_residue(cubic(1.0))


def test_residue_height_three_encloses_one_fixed_point():
    # at a = 0.95 the nontrivial fixed point sits below Im Z = 3
    with pytest.raises(DegenerateDenominator):
        horn_residue(cubic(0.95), 3.0, 128)


def test_residue_trapezoid_converges():
    f = cubic(0.95)
    r1 = horn_residue(f, None, 256)
    r2 = horn_residue(f, r1.height, 512)
    assert r1.enclosed == 2
    assert abs(r1.rho - r2.rho) < 1e-6


@pytest.mark.parametrize("a", [0.96, 0.95])
def test_residue_multiplier_attracting(a):
    rho = horn_multiplier_residue(cubic(a))
    assert abs(rho) < 1
    assert (1 / (1 - rho)).real > 0.9


@pytest.mark.parametrize("a", [0.94, 0.95, 0.96])
def test_residue_matches_finite_difference(a):
    f = cubic(a)
    ev = FatouEvaluator(f)
    rho = horn_multiplier_residue(f, ev=ev)
    rep = lavaurs_fixed_point(LavaursMap(ev))
    assert abs(rep.multiplier - rho) < 1e-3


def test_horn_fixed_point_maps_to_lavaurs_fixed_point(ev_095):
    from wandering.fatou_coords import psi_repelling
    Z, q = horn_fixed_point(ev_095.map, ev_095)
    xi = psi_repelling(ev_095, Z)
    L = LavaursMap(ev_095)
    assert abs(L(xi) - xi) < 1e-8


def test_fixed_point_complex_example(ev_095):
    rep = lavaurs_fixed_point(LavaursMap(ev_095), window=(-1, 1, 0, 1.5), tol=1e-10)
    assert rep.attracting and rep.residual < 1e-10
    assert abs(rep.location - (0.0608488 + 0.5962895j)) < 1e-6


def test_fixed_point_real_superattracting():
    ev = FatouEvaluator(ParabolicMap.real_quartic(C_STAR))
    rep = lavaurs_fixed_point(LavaursMap(ev, 0.0), window=(-0.7, -0.5, 0, 0), grid=41, tol=1e-10)
    assert abs(complex(rep.location).imag) == 0
    assert abs(rep.location - C_STAR) < 1e-6
    assert abs(rep.multiplier) < 1e-2


def test_multiplier_fd_on_polynomial():
    d, err = multiplier_fd(lambda z: z ** 3, 0.7 + 0.2j)
    assert abs(d - 3 * (0.7 + 0.2j) ** 2) < 1e-9 and err < 1e-6
