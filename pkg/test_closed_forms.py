#!/usr/bin/env python3
"""
Тестирование реестра замкнутых формул a^(m,n)(T)
"""

import cmath

import pytest

from closed_forms import (a10_high_at, a10_high_diag, absent_entries, form_key, get_entry, get_matrix,
                          list_available_forms)
from dispersion import dsigma_dk, make_wave_params, resonance_sigma
from errors import AbsentEntryError, DomainError


def test_registry_keys():
    forms = list_available_forms()
    for key in ("a00_zero", "a10_zero", "a01_zero", "a20_zero", "a11_zero", "a02_zero", "a00_high", "a10_high"):
        assert key in forms
    assert form_key((1, 0), "zero") == "a10_zero"
    with pytest.raises(AbsentEntryError):
        form_key((0, 1), "high")


def test_get_entry_errors():
    wp = make_wave_params(1.0)
    with pytest.raises(DomainError):
        get_entry("a99_zero", 1, 1, wp)
    with pytest.raises(DomainError):
        get_entry("a10_zero", 5, 1, wp)
    with pytest.raises(DomainError):
        get_entry("a10_high", 3, 1, wp)
    with pytest.raises(DomainError):
        get_entry("a00_high", 1, 1, wp)
    with pytest.raises(AbsentEntryError) as info:
        get_entry("a20_zero", 1, 3, wp)
    assert "квадратур" in str(info.value)


def test_unlisted_entries_are_zero():
    wp = make_wave_params(1.0)
    assert get_entry("a10_zero", 1, 2, wp) == 0
    assert get_entry("a01_zero", 1, 4, wp) == 0


def test_matrix_skips_absent_entries():
    wp = make_wave_params(1.3)
    matrix = get_matrix("a02_zero", wp)
    assert (1, 1) in matrix
    assert not set(matrix) & set(absent_entries("a02_zero"))
    assert (4, 4) in matrix and matrix[(4, 4)] == 0


def test_a00_zero_jordan_entry():
    wp = make_wave_params(1.7)
    assert get_entry("a00_zero", 4, 3, wp) == pytest.approx(wp.period)
    assert get_entry("a00_zero", 3, 4, wp) == 0


@pytest.mark.parametrize("kappa", [0.6, 1.0, 1.5, 2.4])
def test_a10_zero_matches_group_velocity(kappa):
    """T/a₁₁^(1,0)(T) = σ₊′(−κ) = σ₋′(κ)"""
    wp = make_wave_params(kappa)
    a11 = get_entry("a10_zero", 1, 1, wp)
    assert (wp.period / a11).real == pytest.approx(dsigma_dk(wp, -kappa, +1), rel=1e-12)
    assert get_entry("a10_zero", 2, 2, wp) == a11
    assert dsigma_dk(wp, kappa, -1) == pytest.approx(dsigma_dk(wp, -kappa, +1), rel=1e-12)


@pytest.mark.parametrize("kappa", [0.8, 1.3, 2.0])
def test_a20_entries_are_conjugate(kappa):
    wp = make_wave_params(kappa)
    assert get_entry("a20_zero", 2, 2, wp) == pytest.approx(get_entry("a20_zero", 1, 1, wp).conjugate())


@pytest.mark.parametrize("kappa", [0.8, 1.3, 2.0])
def test_a02_diagonal_is_imaginary(kappa):
    value = get_entry("a02_zero", 1, 1, make_wave_params(kappa))
    assert value.real == 0.0
    assert value.imag != 0.0


@pytest.mark.parametrize("kappa,order", [(1.0, 2), (1.5, 2), (1.0, 3)])
def test_a10_high_diagonal_is_inverse_slope(kappa, order):
    """Множитель при x e^{ikx} равен 1/σ′(k) на обеих ветвях"""
    wp = make_wave_params(kappa)
    point = resonance_sigma(wp, order).point
    assert a10_high_diag(point.k4, point.sigma) * dsigma_dk(wp, point.k4, +1) == pytest.approx(1.0, rel=1e-10)
    assert a10_high_diag(point.k2, point.sigma) * dsigma_dk(wp, point.k2, -1) == pytest.approx(1.0, rel=1e-10)


def test_a10_high_profile():
    wp = make_wave_params(1.5)
    point = resonance_sigma(wp, 2).point
    assert abs(a10_high_at(wp, point, 0.0)).max() == 0.0
    T = wp.period
    at_T = a10_high_at(wp, point, T)
    assert at_T[0, 0] == pytest.approx(a10_high_diag(point.k2, point.sigma) * T * cmath.exp(1j * point.k2 * T))
    assert get_entry("a10_high", 1, 2, wp, point) == pytest.approx(at_T[0, 1])
    assert get_entry("a00_high", 2, 2, wp, point) == pytest.approx(cmath.exp(1j * point.k4 * T))


if __name__ == "__main__":
    print("🚀 Тестирование замкнутых формул...")
    raise SystemExit(pytest.main([__file__, "-v"]))
