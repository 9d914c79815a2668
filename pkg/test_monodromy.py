#!/usr/bin/env python3
"""
Тестирование матрицы монодромии: замкнутые формулы против квадратуры, резонансы, функция Эванса
"""

import cmath
from functools import lru_cache

import numpy as np
import pytest

from dispersion import make_wave_params, resonance_sigma
from errors import AbsentEntryError, DomainError
from monodromy import (TruncatedPoly, a_closed, a_closed_entry, a_quadrature, build_series, cofactor_det,
                       evans_expansion, evans_value, monodromy_matrix, quadrature_oracle)
from reduction import ReductionCache


@lru_cache(maxsize=4)
def zero_cache(kappa: float) -> ReductionCache:
    return ReductionCache(make_wave_params(kappa), 0.0)


@lru_cache(maxsize=4)
def zero_series(kappa: float):
    return build_series(make_wave_params(kappa), 0.0, max_order=2, cache=zero_cache(kappa))


def resonant_cache(kappa: float, order: int) -> ReductionCache:
    wp = make_wave_params(kappa)
    res = resonance_sigma(wp, order)
    return ReductionCache(wp, res.sigma_N, resonance=order, point=res.point)


def assert_close(found: complex, expected: complex, scale: float, rel: float):
    assert abs(found - expected) <= rel * max(abs(expected), scale), (found, expected)


@pytest.mark.parametrize("kappa", [1.0, 1.5])
@pytest.mark.parametrize("order", [(1, 0), (0, 1)])
def test_first_order_closed_forms_match_quadrature(kappa, order):
    wp = make_wave_params(kappa)
    cache = zero_cache(kappa)
    closed = a_closed("zero", *order, wp)
    scale = max(1.0, max(abs(v) for v in closed.values()))
    for k in range(1, 5):
        column = a_quadrature(cache, k, *order)
        for j in range(1, 5):
            if (j, k) in closed:
                assert_close(column[j], closed[(j, k)], scale, 1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [1.0, 1.5])
@pytest.mark.parametrize("order", [(2, 0), (1, 1), (0, 2)])
def test_second_order_closed_forms_match_quadrature(kappa, order):
    wp = make_wave_params(kappa)
    cache = zero_cache(kappa)
    closed = a_closed("zero", *order, wp)
    scale = max(1.0, max(abs(v) for v in closed.values()))
    for (j, k), value in closed.items():
        assert_close(a_quadrature(cache, k, *order)[j], value, scale, 1e-8)


@pytest.mark.parametrize("j,k", [(1, 1), (3, 3), (4, 3), (4, 1)])
def test_gauss_legendre_oracle_zero(j, k):
    cache = zero_cache(1.0)
    exact = a_quadrature(cache, k, 1, 0)[j]
    oracle = quadrature_oracle(cache, j, k, 1, 0)
    assert_close(oracle, exact, 1.0, 1e-8)


def test_gauss_legendre_oracle_resonant():
    cache = resonant_cache(1.5, 2)
    for j in (1, 2):
        for k in (1, 2):
            exact = a_quadrature(cache, k, 1, 0)[j]
            assert_close(quadrature_oracle(cache, j, k, 1, 0), exact, 1.0, 1e-8)
    with pytest.raises(DomainError):
        quadrature_oracle(cache, 1, 1, 0, 0)


@pytest.mark.parametrize("kappa,order", [(1.5, 2), (1.0, 2), (1.0, 3)])
def test_a10_high_closed_form_matches_quadrature(kappa, order):
    wp = make_wave_params(kappa)
    ms = build_series(wp, 0.0, resonance=order, orders=[(1, 0)], prefer_closed=False)
    closed = a_closed("high", 1, 0, wp, ms.point, order)
    scale = max(abs(v) for v in closed.values())
    for (j, k), value in closed.items():
        assert_close(ms.entry(1, 0, j, k), value, scale, 1e-9)
    assert set(ms.provenance.values()) == {"closed", "quadrature"}


def test_a01_vanishes_at_resonance():
    wp = make_wave_params(1.5)
    ms = build_series(wp, 0.0, resonance=2, orders=[(1, 0), (0, 1)], prefer_closed=False)
    scale = max(1.0, float(np.abs(ms.coeffs[(1, 0)]).max()))
    assert float(np.abs(ms.coeffs[(0, 1)]).max()) < 1e-10 * scale


def test_a01_off_resonance_is_nonzero():
    wp = make_wave_params(1.0)
    sigma = 0.5 * (resonance_sigma(wp, 2).sigma_N + resonance_sigma(wp, 3).sigma_N)
    ms = build_series(wp, sigma, orders=[(0, 1)])
    assert abs(ms.entry(0, 1, 1, 2)) > 1e-6
    assert abs(ms.entry(0, 1, 2, 1)) > 1e-6
    with pytest.raises(AbsentEntryError):
        a_closed("high", 0, 1, wp, ms.point)


@pytest.mark.slow
def test_a02_off_diagonal_vanishes_for_third_resonance():
    wp = make_wave_params(1.0)
    ms = build_series(wp, 0.0, resonance=3, orders=[(0, 2)], prefer_closed=False)
    a02 = ms.coeffs[(0, 2)]
    scale = max(1.0, abs(a02[0, 0]), abs(a02[1, 1]))
    assert abs(a02[0, 1]) < 1e-9 * scale
    assert abs(a02[1, 0]) < 1e-9 * scale


@pytest.mark.parametrize("order", [(0, 1), (0, 2)])
def test_fourth_column_vanishes_in_eps(order):
    column = a_quadrature(zero_cache(1.0), 4, *order)
    assert max(abs(v) for v in column.values()) < 1e-10


def test_series_structure():
    ms = build_series(make_wave_params(1.0), 0.0, max_order=1)
    assert ms.dim == 4 and ms.labels == (1, 2, 3, 4)
    assert ms.regime == "zero"
    assert ms.base_phase() == 1
    assert ms.entry(0, 0, 4, 3) == pytest.approx(ms.period)
    np.testing.assert_allclose(monodromy_matrix(ms, 0.0, 0.0), ms.coeffs[(0, 0)])
    assert set(ms.provenance.values()) <= {"closed", "quadrature"}
    with pytest.raises(DomainError):
        build_series(make_wave_params(1.0), 0.0, max_order=3)


def test_high_series_phase():
    wp = make_wave_params(1.5)
    ms = build_series(wp, 0.0, resonance=2, orders=[(1, 0)])
    assert ms.regime == "high"
    assert ms.dim == 2
    assert ms.base_phase() == pytest.approx(cmath.exp(1j * ms.point.k4 * wp.period))
    assert ms.sigma == pytest.approx(resonance_sigma(wp, 2).sigma_N)


def test_closed_entry_lookup():
    wp = make_wave_params(1.0)
    assert a_closed_entry("zero", 1, 0, 1, 1, wp) == a_closed("zero", 1, 0, wp)[(1, 1)]
    with pytest.raises(AbsentEntryError):
        a_closed_entry("zero", 2, 0, 1, 3, wp)


def test_cofactor_det_matches_numpy():
    rng = np.random.default_rng(7)
    matrix = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert cofactor_det(matrix.tolist()) == pytest.approx(np.linalg.det(matrix), rel=1e-12)
    assert cofactor_det([[2.0]]) == 2.0


def test_truncated_poly_drops_heavy_monomials():
    a = TruncatedPoly({(1, 0, 0): 1.0, (0, 0, 1): 2.0}, (2, 2, 1), 4)
    square = a * a
    assert square.coeffs == {(2, 0, 0): 1.0, (1, 0, 1): 4.0, (0, 0, 2): 4.0}
    cube = square * a
    assert (3, 0, 0) not in cube.coeffs and cube.coeffs[(1, 0, 2)] == 12.0
    assert (a - a).coeffs == {}
    assert a.evaluate(0.5, 0.0, 0.25) == pytest.approx(1.0)


@pytest.mark.slow
def test_evans_expansion_at_zero_starts_at_fourth_degree():
    expansion = evans_expansion(zero_series(1.0))
    assert expansion.lower_order_residual() < 1e-9
    # λ = 0 при k = Kκ лежит в спектре при любом ε
    for n in range(1, 5):
        assert abs(expansion.coefficient(0, 0, n)) < 1e-9 * expansion.scale()
    assert abs(expansion.coefficient(0, 4, 0)) > 0


@pytest.mark.slow
def test_evans_value_vanishes_at_origin():
    ms = zero_series(1.0)
    scale = abs(evans_value(ms, 0.01j, 0.0, 0.0))
    # κ = 1: k = Kκ = K
    for K in (0, 1, -2):
        assert abs(evans_value(ms, 0.0, float(K), 0.001)) < 1e-6 * scale


def test_evans_value_warns_outside_validity(capsys):
    ms = build_series(make_wave_params(1.0), 0.0, max_order=1)
    evans_value(ms, 0.2j, 0.0, 0.0)
    assert "|δ|" in capsys.readouterr().err


if __name__ == "__main__":
    print("🚀 Тестирование матрицы монодромии...")
    raise SystemExit(pytest.main([__file__, "-v"]))
