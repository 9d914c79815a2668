#!/usr/bin/env python3
"""
Тестирование алгебры термов: замкнутость операций и точные интегралы
"""

import math

import numpy as np
import pytest

from errors import ConsistencyError, DomainError, UnsupportedDegreeError
from funcspace import (COSH, CONST, SINH, ZERO, FrequencyLattice, StateVec, TermFunction, freq, gauss_legendre_01,
                       inner, integrate_y01, quad_oracle_inner, y_moment)

KAPPA = 1.3
LAT = FrequencyLattice(KAPPA)
K = freq(kappa=1)
K2 = freq(kappa=2)

X = np.linspace(0.0, 2 * math.pi / KAPPA, 7)
Y = np.linspace(0.0, 1.0, 5)
XX, YY = np.meshgrid(X, Y)


def sample() -> TermFunction:
    """Функция с x-частотами, степенями y и обоими профилями"""
    return (TermFunction.cosh_y(LAT, K, 0.7) * TermFunction.exp_x(LAT, K)
            + TermFunction.sinh_y(LAT, K2, -0.3 + 0.2j, p=1)
            + TermFunction.constant(LAT, 0.25))


@pytest.mark.parametrize("p", [0, 1, 3])
@pytest.mark.parametrize("kind", [CONST, COSH, SINH])
@pytest.mark.parametrize("a", [0.4, 3.7])
def test_y_moment_matches_quadrature(p, kind, a):
    """∫₀¹ yᵖ·профиль совпадает с квадратурой Гаусса–Лежандра"""
    y, w = gauss_legendre_01(40)
    profile = {CONST: np.ones_like(y), COSH: np.cosh(a * y), SINH: np.sinh(a * y)}[kind]
    expected = float(np.sum(w * y ** p * profile))
    assert y_moment(p, kind, a) == pytest.approx(expected, rel=1e-13, abs=1e-15)


def test_multiply_is_pointwise():
    f = sample()
    g = TermFunction.sinh_y(LAT, K, 1.1) * TermFunction.cos_x(LAT, K) + TermFunction.cosh_y(LAT, K2, p=2)
    product = f * g
    np.testing.assert_allclose(product.evaluate(XX, YY), f.evaluate(XX, YY) * g.evaluate(XX, YY),
                               rtol=1e-12, atol=1e-12)


def test_derivatives_match_analytic():
    f = TermFunction.cosh_y(LAT, K) * TermFunction.exp_x(LAT, K)
    np.testing.assert_allclose(f.dx().evaluate(XX, YY), 1j * KAPPA * f.evaluate(XX, YY), rtol=1e-13)
    expected = KAPPA * np.sinh(KAPPA * YY) * np.exp(1j * KAPPA * XX)
    np.testing.assert_allclose(f.dy().evaluate(XX, YY), expected, rtol=1e-13)


def test_antiderivative_y_inverts_dy():
    f = sample()
    F = f.antiderivative_y()
    np.testing.assert_allclose(F.dy().evaluate(XX, YY), f.evaluate(XX, YY), rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(F.evaluate(X, 0.0), 0.0, atol=1e-13)


def test_integrate_x_oscillatory_and_secular():
    f = TermFunction.exp_x(LAT, K)
    F = f.integrate_x()
    np.testing.assert_allclose(F.evaluate(X), (np.exp(1j * KAPPA * X) - 1) / (1j * KAPPA), rtol=1e-13, atol=1e-14)
    secular = TermFunction.constant(LAT, 2.0).integrate_x()
    assert secular.coefficient(q=1) == pytest.approx(2.0)
    with pytest.raises(ConsistencyError):
        secular.drop_secular()


def test_drop_secular_uses_given_scale():
    noise = TermFunction.constant(LAT, 1e-20).integrate_x() + TermFunction.constant(LAT, 1e-20)
    assert noise.drop_secular(scale=1.0).coefficient(q=1) == 0


def test_at_period_is_exact_on_lattice():
    f = TermFunction.exp_x(LAT, K, 3.0) + TermFunction.exp_x(LAT, freq(kappa=-2), 1j)
    assert f.at_period().scalar() == 3.0 + 1j


def test_resonant_lattice_canonicalizes_k2():
    lattice = FrequencyLattice(1.0, k2=2.4, k4=0.4, resonance=2)
    a = TermFunction.exp_x(lattice, freq(k2=1))
    b = TermFunction.exp_x(lattice, freq(kappa=2, k4=1))
    assert (a - b).is_zero()
    assert lattice.realize(freq(k2=1)) == pytest.approx(2.4)


def test_degenerate_profiles():
    assert TermFunction.sinh_y(LAT, ZERO).is_zero()
    assert TermFunction.cosh_y(LAT, ZERO, 2.0).scalar() == 2.0
    # sinh нечётен: показатель приводится к положительному
    f = TermFunction.sinh_y(LAT, freq(kappa=-1))
    np.testing.assert_allclose(f.evaluate(0.0, Y), -np.sinh(KAPPA * Y), rtol=1e-14)


def test_y_power_cap():
    with pytest.raises(UnsupportedDegreeError):
        TermFunction.constant(LAT, 1.0).times_y(7)


def test_integrate_y01_requires_x_free():
    assert integrate_y01(TermFunction.cosh_y(LAT, K)) == pytest.approx(math.sinh(KAPPA) / KAPPA)
    with pytest.raises(DomainError):
        integrate_y01(TermFunction.exp_x(LAT, K))


def test_conj():
    f = sample()
    np.testing.assert_allclose(f.conj().evaluate(XX, YY), np.conj(f.evaluate(XX, YY)), rtol=1e-14)


def test_inner_matches_quadrature_oracle():
    u1 = StateVec(TermFunction.cosh_y(LAT, K, 0.5j) + TermFunction.constant(LAT, 1.0),
                  TermFunction.sinh_y(LAT, K2, p=1), TermFunction.constant(LAT, 0.3))
    u2 = StateVec(TermFunction.cosh_y(LAT, K2, 1 - 1j), TermFunction.cosh_y(LAT, K),
                  TermFunction.constant(LAT, -2.0j))
    assert inner(u1, u2) == pytest.approx(quad_oracle_inner(u1, u2, nodes=48), rel=1e-12)
    assert inner(u1, u1).imag == pytest.approx(0.0, abs=1e-14)


def test_inner_rejects_x_dependence():
    u = StateVec(TermFunction.exp_x(LAT, K), TermFunction.zero(LAT), TermFunction.zero(LAT))
    v = StateVec(TermFunction.constant(LAT, 1.0), TermFunction.zero(LAT), TermFunction.zero(LAT))
    with pytest.raises(DomainError):
        inner(u, v)


def test_quad_oracle_node_floor():
    u = StateVec.zero(LAT)
    with pytest.raises(DomainError):
        quad_oracle_inner(u, u, nodes=8)


if __name__ == "__main__":
    print("🚀 Тестирование алгебры термов...")
    raise SystemExit(pytest.main([__file__, "-v"]))
