import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonmix.aperture import (
    Detector, Point, ScanCurve, Window, hom_metrics, misalignment_scan, symmetric_displacements,
    w2_integrated, window_integral,
)
from photonmix.errors import InvalidParameterError, NumericalDomainError, UndefinedVisibilityError
from photonmix.modes import TransverseMode, eval_mode
from photonmix.quadrature import Rect, quad2d, quad2d_with_error
from photonmix.quantum import CorrelationResult, LOState
from oracles import brute_force_w2

G00 = TransverseMode()
G10 = TransverseMode(1, 0)
FULL = Detector(Window(0.0, 0.0, 6.0, 6.0))


def test_quad2d_constant():
    for order in (2, 5, 64):
        assert quad2d(lambda x, y: np.ones_like(x * y), Rect(0, 1, 0, 1), order) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.xfail(strict=True, reason="40-point Gauss-Legendre on +/-6 w0 is only good to 2.8e-9")
def test_quad2d_normalisation_order_40():
    window = Rect(-6, 6, -6, 6)
    assert abs(quad2d(lambda x, y: eval_mode(G00, x, y) ** 2, window, 40) - 1) < 1e-9


@pytest.mark.parametrize("order", [44, 48, 64, 128])
def test_quad2d_normalisation(order):
    window = Rect(-6, 6, -6, 6)
    assert abs(quad2d(lambda x, y: eval_mode(G00, x, y) ** 2, window, order) - 1) < 1e-9


def test_quad2d_parity():
    window = Rect(-6, 6, -6, 6)
    assert abs(quad2d(lambda x, y: eval_mode(G00, x, y) * eval_mode(G10, x, y), window, 64)) < 1e-12


def test_quad2d_error_estimate():
    value, err = quad2d_with_error(lambda x, y: np.exp(-(x**2) - y**2), Rect(-6, 6, -6, 6), 32)
    assert value == pytest.approx(math.pi, rel=1e-12)
    assert err < 1e-8


def test_quad2d_rejects_non_finite():
    with pytest.raises(NumericalDomainError):
        quad2d(lambda x, y: np.where(x > 0.5, np.nan, 1.0) + 0 * y, Rect(0, 1, 0, 1), 4)
    with pytest.raises(InvalidParameterError):
        quad2d(lambda x, y: x, Rect(0, 1, 0, 1), 1)


def test_window_integral_matches_2d_rule():
    a, b = TransverseMode(1, 2, 0.9, 0.3, -0.1), TransverseMode(0, 1, 1.1, -0.2, 0.4)
    rect = Rect(-1.5, 2.0, -2.0, 1.0)
    tensor = quad2d(lambda x, y: eval_mode(a, x, y) * eval_mode(b, x, y), rect, 64)
    assert window_integral(a, b, rect) == pytest.approx(tensor, rel=1e-13)


def test_zero_dip_for_identical_aligned_modes():
    res = w2_integrated(LOState.fock(1), G00, G00, FULL, FULL)
    assert abs(res.total_reduced) <= 1e-9


def test_orthogonal_modes_fill_the_dip():
    res = w2_integrated(LOState.fock(1), G00, G10, FULL, FULL)
    assert res.het_term == pytest.approx(2.0, abs=1e-9)
    assert res.lo_term == 0.0


def test_coherent_identical_modes():
    res = w2_integrated(LOState.coherent(2.0), G00, G00, FULL, FULL)
    assert res.total_reduced == pytest.approx(16.0, abs=1e-9)
    assert abs(res.het_term) < 1e-9


def test_vacuum_integrated_is_zero():
    res = w2_integrated(LOState.vacuum(), G00, G10, FULL, FULL)
    assert res.total_reduced == 0.0


def test_integrated_needs_windows():
    with pytest.raises(InvalidParameterError):
        w2_integrated(LOState.fock(1), G00, G00, Detector(Point(0, 0)), FULL)


def test_integrated_prefactor():
    d1 = Detector(Window(0, 0, 6, 6), eta=0.5)
    d2 = Detector(Window(0, 0, 6, 6), eta=0.8)
    res = w2_integrated(LOState.fock(1), G00, G10, d1, d2, eps=2.0)
    assert res.prefactor == pytest.approx(0.25 * 0.4 * 16)


def _scenario(rng):
    def mode():
        return TransverseMode(int(rng.integers(0, 3)), int(rng.integers(0, 3)), float(rng.uniform(0.7, 1.3)),
                              float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
    lo = LOState.coherent(rng.uniform(0.3, 2.5)) if rng.random() < 0.7 else LOState.fock(int(rng.integers(1, 4)))

    def window():
        return Window(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)),
                      float(rng.uniform(0.8, 3.5)), float(rng.uniform(0.8, 3.5)))
    return lo, mode(), mode(), window(), window()


def _as_tuple(m):
    return (m.order_x, m.order_y, m.waist, m.center_x, m.center_y)


def _bounds(w):
    r = w.rect
    return (r.x_min, r.x_max, r.y_min, r.y_max)


@pytest.mark.parametrize("seed", range(5))
def test_factorisation_against_brute_force(seed):
    lo, u_lo, u_ph, w1, w2 = _scenario(np.random.default_rng(100 + seed))
    res = w2_integrated(lo, u_lo, u_ph, Detector(w1), Detector(w2))
    n, n2 = lo.moments()
    lo_ref, het_ref = brute_force_w2(n, n2, _as_tuple(u_lo), _as_tuple(u_ph), _bounds(w1), _bounds(w2))
    assert res.lo_term == pytest.approx(lo_ref, rel=1e-6, abs=1e-14)
    assert res.het_term == pytest.approx(het_ref, rel=1e-6, abs=1e-14)


@pytest.mark.parametrize("seed", range(8))
def test_quadrature_convergence(seed):
    rng = np.random.default_rng(seed)
    for _ in range(5):
        a = TransverseMode(int(rng.integers(0, 3)), int(rng.integers(0, 3)), 1.0,
                           float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        b = TransverseMode(int(rng.integers(0, 3)), int(rng.integers(0, 3)), 1.0,
                           float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        rect = Rect.centered(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)),
                             float(rng.uniform(1, 6)), float(rng.uniform(1, 6)))
        base = window_integral(a, b, rect, 64)
        fine = window_integral(a, b, rect, 128)
        assert abs(fine - base) <= 1e-9 * max(abs(fine), 1e-3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_integrated_het_is_non_negative(seed):
    lo, u_lo, u_ph, w1, w2 = _scenario(np.random.default_rng(seed))
    res = w2_integrated(lo, u_lo, u_ph, Detector(w1), Detector(w2), order=48)
    assert res.het_term >= -1e-12
    assert res.lo_term >= 0


def test_misalignment_examples():
    xs = symmetric_displacements(20.0, 0.5)
    curve = misalignment_scan(LOState.fock(1), G00, G00, 5.0, xs)
    totals = curve.totals
    assert curve.parameter == "x_d"
    assert totals[xs == 0][0] <= 1e-9
    assert totals.min() == pytest.approx(0.0, abs=1e-9)
    far = np.abs(xs) >= 5 + 6 + 4
    assert np.all(totals[far] < 1e-12)

    fill = misalignment_scan(LOState.fock(1), G00, G10, 5.0, xs).totals
    ll = window_integral(G00, G00, Rect(-5, 5, -6, 6))
    assert fill[xs == 0][0] == pytest.approx(2 * ll * ll, rel=1e-12)
    assert fill[xs == 0][0] == pytest.approx(2.0, abs=1e-9)
    side = (np.abs(xs) > 0) & (np.abs(xs) < 3)
    assert fill[side].min() < fill[xs == 0][0] - 0.5


def test_misalignment_rejects_empty():
    with pytest.raises(InvalidParameterError):
        misalignment_scan(LOState.fock(1), G00, G00, 5.0, [])


def test_symmetric_displacements_contains_zero():
    xs = symmetric_displacements(3.0, 0.1)
    assert 0.0 in xs and xs[0] == -xs[-1]


def _visibility(lo, d=12.0):
    curve = misalignment_scan(lo, G00, G00, d, symmetric_displacements(d - 6, 0.25))
    return hom_metrics(curve)


def test_hom_metrics_fock():
    vis, depth = _visibility(LOState.fock(1))
    assert vis == pytest.approx(1.0, abs=1e-9)
    assert depth == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("alpha2", [0.5, 1, 2, 4, 5])
def test_hom_visibility_law(alpha2):
    n, n2 = alpha2, alpha2**2
    vis, depth = _visibility(LOState.coherent(math.sqrt(alpha2)))
    assert vis == pytest.approx(2 * n / (n2 + 2 * n), abs=1e-6)
    assert depth == pytest.approx(2 * n, rel=1e-9)


def test_visibility_one_third_at_alpha2_4():
    vis, _ = _visibility(LOState.coherent(2.0))
    assert vis == pytest.approx(1 / 3, abs=1e-4)


def test_hom_monotonicity():
    grid = np.linspace(0.25, 5, 20)
    pairs = [_visibility(LOState.coherent(math.sqrt(a2))) for a2 in grid]
    vis = np.array([p[0] for p in pairs])
    depth = np.array([p[1] for p in pairs])
    assert np.all(np.diff(vis) < 0)
    assert np.all(np.diff(depth) > 0)


def test_hom_metrics_errors():
    small = misalignment_scan(LOState.fock(1), G00, G00, 5.0, symmetric_displacements(10, 0.5))
    with pytest.raises(InvalidParameterError):
        hom_metrics(small)
    no_zero = misalignment_scan(LOState.fock(1), G00, G00, 12.0, [-5.0, 5.0])
    with pytest.raises(InvalidParameterError):
        hom_metrics(no_zero)
    zero_curve = ScanCurve("x_d", [0.0, 5.0], [CorrelationResult(0, 0), CorrelationResult(0, 0)],
                           {"window_half_width": 12.0, "photon_waist": 1.0})
    with pytest.raises(UndefinedVisibilityError):
        hom_metrics(zero_curve)
