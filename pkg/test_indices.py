#!/usr/bin/env python3
"""
Тестирование индексов неустойчивости ind₁ и ind₂ и спектрального пузыря
"""

import math
from functools import lru_cache

import numpy as np
import pytest

from dispersion import make_wave_params
from indices import (alpha_residuals, bf_coefficients, bubble_expansion_residual, bubble_spectrum,
                     dispersion_slopes, f2_identity, find_kappa1, find_kappa2, find_variant_window, ind1,
                     ind1_scale, ind2, ind2_mu0_variant, nu_bridges_mielke, quartic_residual,
                     resonance3_stability_check, resonance_series)
from monodromy import build_series, evans_expansion

KAPPA1 = 1.362782756726421
KAPPA2 = 1.849404083750


@lru_cache(maxsize=8)
def bf_at(kappa: float):
    wp = make_wave_params(kappa)
    series = build_series(wp, 0.0, max_order=2)
    return bf_coefficients(wp, series), series


@lru_cache(maxsize=8)
def bubble_at(kappa: float):
    wp = make_wave_params(kappa)
    series = resonance_series(wp, 2)
    return ind2(wp, series), series


# --- Бенджамин–Фейр ---

def test_ind1_sign_change():
    assert ind1(make_wave_params(1.0)) < 0
    assert ind1(make_wave_params(1.5)) > 0
    wp = make_wave_params(KAPPA1)
    assert abs(ind1(wp)) < 1e-12 * ind1_scale(wp)


def test_find_kappa1():
    result = find_kappa1()
    assert result["kappa1"] == pytest.approx(KAPPA1, abs=1e-9)
    assert result["mu0"] == pytest.approx(1.553848798953821, abs=1e-8)
    assert result["froude"] == pytest.approx(0.802223946850146, abs=1e-8)
    assert result["residual"] < 1e-12


def test_nu_changes_sign_with_ind1():
    below, above = make_wave_params(KAPPA1 - 0.05), make_wave_params(KAPPA1 + 0.05)
    nu_below, nu_above = nu_bridges_mielke(below), nu_bridges_mielke(above)
    assert math.isfinite(nu_below) and math.isfinite(nu_above)
    assert nu_below * nu_above < 0
    wp = make_wave_params(KAPPA1)
    assert abs(nu_bridges_mielke(wp)) < 1e-10 * max(1.0, abs(nu_below))


def test_dispersion_slopes_at_zero():
    wp = make_wave_params(1.0)
    slopes = dispersion_slopes(wp)
    assert slopes[3][0] == pytest.approx(1j * (1 + math.sqrt(wp.mu0)))
    assert slopes[4][0] == pytest.approx(1j * (1 - math.sqrt(wp.mu0)))
    # σ₊ в −κ и σ₋ в κ зеркальны: наклоны совпадают, выпуклости противоположны
    assert slopes[1][0] == pytest.approx(slopes[2][0], rel=1e-12)
    assert slopes[1][1] == pytest.approx(-slopes[2][1], rel=1e-6)


def test_bf_coefficients_at_one():
    bf, series = bf_at(1.0)
    assert not bf.unstable
    for alpha in bf.alpha10.values():
        assert abs(alpha.real) < 1e-10 * abs(alpha.imag)
    for j, value in alpha_residuals(bf).items():
        assert value < 1e-8, j
    assert bf.f2 == pytest.approx(bf.f2_identity, rel=1e-8)
    assert bf.provenance["a02_11"] == "closed"
    # ind₁ < 0: α₁₁² < 0, α₁₁ чисто мнимое
    assert bf.alpha11_sq.real < 0
    assert bf.provenance["a20_13"] == "quadrature"


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [0.8, 1.2, 1.362783, 1.5, 2.0])
def test_bf_coefficients_grid(kappa):
    bf, series = bf_at(kappa)
    slopes = dispersion_slopes(make_wave_params(kappa))
    for alpha in bf.alpha10.values():
        assert abs(alpha.real) < 1e-10 * abs(alpha.imag)
    for j, alpha in bf.alpha20.items():
        assert abs(alpha.real) < 1e-7 * abs(alpha.imag)
        assert alpha == pytest.approx(slopes[j][1], rel=1e-5)
    assert max(alpha_residuals(bf).values()) < 1e-8
    if abs(kappa - KAPPA1) > 1e-3:
        # у κ₁ сам f₂ почти ноль; согласование проверяет bf_coefficients
        assert bf.f2 == pytest.approx(bf.f2_identity, rel=1e-8)
        assert (bf.alpha11_sq.real > 0) == (bf.ind1 > 0)
    assert bf.unstable == (kappa > KAPPA1)


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [1.0, 1.5])
def test_bf_quartic_is_annihilated(kappa):
    bf, series = bf_at(kappa)
    residuals = quartic_residual(bf, evans_expansion(series))
    assert max(residuals.values()) < 1e-8


def test_f2_identity_vanishes_with_ind1():
    wp = make_wave_params(KAPPA1)
    scale = abs(f2_identity(make_wave_params(1.0)))
    assert abs(f2_identity(wp)) < 1e-10 * scale
    assert f2_identity(make_wave_params(1.5)).real == 0.0
    # при ind₁ < 0 множитель −i даёт Im f₂ > 0
    assert f2_identity(make_wave_params(1.0)).imag > 0


# --- высокочастотная неустойчивость ---

def test_ind2_positive_at_1_5():
    coeffs, _ = bubble_at(1.5)
    assert coeffs.ind2 > 0
    assert coeffs.q_max == pytest.approx(coeffs.ind2, rel=1e-7)
    assert coeffs.gamma_star == pytest.approx(coeffs.gamma_star_alt.real, rel=1e-6)
    assert abs(coeffs.gamma_star_alt.imag) <= 1e-6 * abs(coeffs.gamma_star_alt)
    assert coeffs.alpha20 < 0
    assert abs(coeffs.alpha10.real) < 1e-10 * abs(coeffs.alpha10)


def test_bubble_d_coefficients_match_expansion():
    coeffs, series = bubble_at(1.5)
    assert bubble_expansion_residual(coeffs, evans_expansion(series)) < 1e-8


def test_bubble_curve_at_1_5():
    coeffs, _ = bubble_at(1.5)
    eps = 0.001
    curve = bubble_spectrum(make_wave_params(1.5), eps, coeffs=coeffs)
    assert not curve.empty
    assert curve.max_re == pytest.approx(math.sqrt(coeffs.ind2) * eps ** 2, rel=1e-8)
    best = int(np.argmax(curve.delta_plus.real))
    assert curve.gamma[best] == pytest.approx(coeffs.gamma_star * eps ** 2, rel=1e-8)
    for edge in (0, -1):
        assert abs(curve.delta_plus[edge].real) < 1e-6 * curve.max_re
    np.testing.assert_allclose(curve.delta_plus.real, -curve.delta_minus.real, atol=1e-8 * curve.max_re)
    assert curve.gamma_star in curve.gamma


def test_bubble_empty_without_amplitude():
    coeffs, _ = bubble_at(1.5)
    curve = bubble_spectrum(make_wave_params(1.5), 0.0, coeffs=coeffs)
    assert curve.empty and curve.max_re == 0.0


def test_bubble_warns_outside_validity(capsys):
    coeffs, _ = bubble_at(1.5)
    bubble_spectrum(make_wave_params(1.5), 0.05, coeffs=coeffs, points=11)
    assert "ε" in capsys.readouterr().err


@pytest.mark.slow
def test_ind2_positive_at_2_2():
    coeffs, _ = bubble_at(2.2)
    assert coeffs.ind2 > 0
    low, _ = bubble_at(1.5)
    # оба признака знака меняются между 1.5 и 2.2
    assert low.witnesses[0] * coeffs.witnesses[0] < 0
    assert low.witnesses[1] * coeffs.witnesses[1] < 0


@pytest.mark.slow
def test_bubble_degenerates_at_kappa2():
    coeffs, _ = bubble_at(KAPPA2)
    high, _ = bubble_at(1.5)
    assert abs(coeffs.ind2) < 1e-5 * abs(high.ind2)


@pytest.mark.slow
def test_find_kappa2():
    result = find_kappa2()
    assert result["kappa2"] == pytest.approx(KAPPA2, abs=1e-5)
    assert result["width"] <= 1e-6
    assert result["both_witnesses_flip"]


@pytest.mark.slow
def test_variant_window():
    assert ind2_mu0_variant(make_wave_params(0.95)) > 0
    lo, hi = find_variant_window()
    assert lo == pytest.approx(0.86430, abs=5e-4)
    assert hi == pytest.approx(1.00804, abs=5e-4)


@pytest.mark.slow
def test_third_resonance_off_diagonal():
    report = resonance3_stability_check(make_wave_params(1.0))
    assert report["order"] == 3
    assert report["max_off_diagonal"] < 1e-9 * max(1.0, report["max_diagonal"])
    assert report["ind2_equivalent"] < 1e-12


if __name__ == "__main__":
    print("🚀 Тестирование индексов неустойчивости...")
    raise SystemExit(pytest.main([__file__, "-v"]))
