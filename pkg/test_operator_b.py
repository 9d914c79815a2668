#!/usr/bin/env python3
"""
Тестирование операторов B^(m,n): явные формы, связь с L(λ), вторая запись формул
"""

import numpy as np
import pytest

from dispersion import make_wave_params
from eigensystem import UNIT, apply_L
from errors import DomainError
from funcspace import FrequencyLattice, StateVec, TermFunction, freq
from operator_b import BOrder, apply_B, frequency_shifts, traces_for

KAPPA = 1.25
WP = make_wave_params(KAPPA)
LAT = FrequencyLattice(KAPPA)
K = freq(kappa=1)
T = TermFunction


def sample_u() -> StateVec:
    """Вектор с одной x-частотой κ; dom(L) не требуется"""
    e = T.exp_x(LAT, K)
    phi = (T.cosh_y(LAT, K, 0.8 - 0.1j) + T.sinh_y(LAT, UNIT, 0.3, p=1) + T.constant(LAT, 0.2)) * e
    ups = (T.sinh_y(LAT, K, 1j) + T.cosh_y(LAT, freq(kappa=2), -0.4)) * e
    return StateVec(phi, ups, e * (0.5 + 0.25j))


def close(a: StateVec, b: StateVec, rel: float = 1e-10) -> bool:
    return (a - b).max_coeff() <= rel * max(1.0, a.max_coeff(), b.max_coeff())


# --- вторая запись формул, сгруппированная по степеням σ ---

def b01_by_sigma_powers(wp, s: float, u: StateVec) -> StateVec:
    m = wp.mu0
    t = traces_for(wp, u.lattice)
    phi_y, ups = u.phi.dy(), u.upsilon
    phi_yy, ups_y = phi_y.dy(), ups.dy()
    phi_1, phi_y1, ups_1, eta = u.phi.at_y(1.0), phi_y.at_y(1.0), ups.at_y(1.0), u.eta
    yf1y, yf1xy = t.phi1_y.times_y(), t.phi1_xy.times_y()
    ye1x = t.eta1_x.times_y()

    first = (phi_y * (ye1x + t.p1y) - yf1y * phi_y1 + ups * (m * t.p1x)
             + (u.phi * t.p1x - ups * t.p1y + yf1y * eta) * (1j * s))
    second = (u.phi * (t.p1xx * (-1j * m * s) + t.p1x * (m * s ** 2) + t.p1y * (1j * s ** 3)) / m ** 2
              + phi_y * (-t.p1xy - t.p1y * (2j * s)) / m
              + phi_yy * (t.p1x * m + t.eta1 * (2 * m) - t.p1y * (1j * s)) / m ** 2
              + phi_y1 * (-yf1xy + yf1y * (1j * s)) / m
              + ups * (t.p1xx * (-m) + (t.p1xy - t.p1x * m) * (1j * s)) / m
              + ups_y * (ye1x - t.p1y)
              + eta * (t.phi1_yy * 2 + yf1xy * (1j * s) + yf1y * s ** 2) / m)
    third = (phi_1 * t.eta1_x * (1j * s) + phi_y1 * (t.eta1 - t.p1x) + ups_1 * t.eta1_x * m
             + eta * (t.p1y + t.p1x * (1j * s)))
    return StateVec(first, second, third)


def b02_by_sigma_powers(wp, s: float, u: StateVec) -> StateVec:
    m, i = wp.mu0, 1j
    t = traces_for(wp, u.lattice)
    phi_y, ups = u.phi.dy(), u.upsilon
    phi_yy, ups_y = phi_y.dy(), ups.dy()
    phi_1, phi_y1, ups_1, eta = u.phi.at_y(1.0), phi_y.at_y(1.0), ups.at_y(1.0), u.eta
    a, b = t.p1x, t.p1y  # φ₁_x(1), φ₁_y(1)
    axx, axy = t.p1xx, t.p1xy
    c, d = t.p2x, t.p2y  # φ₂_x(1), φ₂_y(1)
    cxx, dx = t.p2xx, t.p2xy
    e, ex, exx = t.eta1, t.eta1_x, t.eta1_xx
    g, gx = t.eta2, t.eta2_x
    bar, mu2 = t.phibar2, t.mu2
    f1y, f1xy, f1yy = t.phi1_y, t.phi1_xy, t.phi1_yy
    f2y, f2xy, f2yy = t.phi2_y, t.phi2_xy, t.phi2_yy

    def y(f: TermFunction) -> TermFunction:
        return f.times_y()

    shear = d + a * b - b * e * 2 + y(gx) - y(e * ex)

    first = (phi_y * shear
             + phi_y1 * (y(e * f1y) * 2 - y(a * f1y) - y(f2y))
             + ups * (a * a * m + b * b * (-1) + c * m - b * ex * m + mu2 + bar * m)
             + ups_1 * y(f1y * ex) * m
             + eta * (y(b * f1y) - y(f1y * ex))
             + (u.phi * (a * a + c - b * ex + bar) * i
                + phi_1 * y(f1y * ex) * i
                + ups * (b * e - d - a * b) * i
                + eta * (y(f2y) + y(a * f1y) - y(e * f1y)) * i) * s)

    phi_c = ((cxx * (-1) + axy * ex - a * axx + b * exx) * (i * m * m * s)
             + (a * a * m * m + b * b * m + c * m * m + b * axx * m - b * ex * m * m - mu2 * m + bar * m * m) * s ** 2
             + (d + a * b - b * e) * (i * m * s ** 3)
             - b * b * s ** 4)
    phi_y_c = ((b * ex + e * axy * 2 - dx - b * axx) * m
               + (b * e * 4 * m - d * 2 * m - a * b * 2 * m - b * axy) * (i * s)
               + b * b * (2 * s ** 2))
    phi_1_c = y(ex * f1xy) * (i * s) + y(f1y * ex) * s ** 2
    phi_yy_c = ((c + g * 2 - b * b - e * e * 3 - b * ex - a * e * 2 + bar) * m * m + (mu2 - b * b) * m
                + (a * b + b * e * 3 - d) * (i * m * s)
                + b * b * s ** 2)
    phi_y1_c = ((b * f1y + y(f1y * ex) + y(e * f1xy) * 2 + y(b * f1yy) - y(f2xy) + y(y(ex * f1yy))) * m
                + (y(f2y) * m + y(a * f1y) * m - y(e * f1y) * (2 * m) - y(b * f1xy)) * (i * s)
                - y(b * f1y) * s ** 2)
    ups_c = ((b * exx - cxx + axy * ex - a * axx) * m * m + b * axy * (2 * m)
             + ((b * ex - c - a * a - bar) * m * m + (dx - b * ex - e * axy) * m) * (i * s)
             - b * axy * s ** 2)
    ups_1_c = y(ex * f1xy) - y(f1y * ex) * (i * s)
    eta_c = ((f2yy * 2 - a * f1yy * 2 - e * f1yy * 6 + y(b * f1xy) - y(ex * f1xy)) * m
             + (b * f1yy * 2 + (y(f2xy) - b * f1y - y(e * f1xy) - y(b * f1yy) - y(y(ex * f1yy)) - y(b * f1y)) * m)
             * (i * s)
             + ((y(f2y) + y(a * f1y) - y(e * f1y)) * m - y(b * f1xy)) * s ** 2
             + y(b * f1y) * (i * s ** 3))
    second = (u.phi * phi_c / m ** 3 + phi_y * phi_y_c / m ** 2 + phi_1 * phi_1_c / m
              + phi_yy * phi_yy_c / m ** 3 + phi_y1 * phi_y1_c / m ** 2 + ups * ups_c / m ** 2
              + ups_y * (b * e * 2 - a * b - d + y(gx) - y(e * ex)) + ups_1 * ups_1_c + eta * eta_c / m ** 2)

    third = (phi_y1 * (g - c - bar + a * e - a * a - e * e + b * ex * 2)
             + ups_1 * (gx + a * ex * 2) * m
             + eta * (d + a * b - b * e * 2)
             + (phi_1 * (gx + a * ex * 2) - ups_1 * b * ex + eta * (a * a + bar + c - b * ex)) * (i * s))
    return StateVec(first, second, third)


@pytest.mark.parametrize("order", [(3, 0), (0, 3), (2, 1), (0, 0)])
def test_unsupported_orders(order):
    with pytest.raises(DomainError):
        BOrder(*order)
    with pytest.raises(DomainError):
        apply_B(order, WP, 0.0, sample_u())


@pytest.mark.parametrize("sigma", [0.0, 0.6])
def test_b10_b20_explicit(sigma):
    u = sample_u()
    b10 = apply_B((1, 0), WP, sigma, u)
    assert close(b10, StateVec(u.phi, -u.upsilon - u.phi * (2j * sigma / WP.mu0), u.eta))
    b20 = apply_B(BOrder(2, 0), WP, sigma, u)
    assert b20.phi.is_zero() and b20.eta.is_zero()
    assert close(b20, StateVec(b20.phi, -u.phi / WP.mu0, b20.eta))


@pytest.mark.parametrize("sigma", [0.0, 0.45])
@pytest.mark.parametrize("delta", [1e-2, 0.3 - 0.2j])
def test_delta_part_matches_L(sigma, delta):
    """L(iσ + δ) − L(iσ) = δB^(1,0) + δ²B^(2,0) без остатка"""
    u = sample_u()
    lam = 1j * sigma
    diff = apply_L(WP, lam + delta, u, check_domain=False) - apply_L(WP, lam, u, check_domain=False)
    expected = apply_B((1, 0), WP, sigma, u) * delta + apply_B((2, 0), WP, sigma, u) * delta ** 2
    assert close(diff, expected, rel=1e-12)


@pytest.mark.parametrize("sigma", [0.0, 0.35, 1.1])
def test_b11_is_sigma_derivative_of_b01(sigma):
    """B^(1,1) = −i ∂σ B^(0,1); B^(0,1) кубичен по σ, экстраполяция Ричардсона точна"""
    u = sample_u()
    h = 0.05

    def central(step: float) -> StateVec:
        up = apply_B((0, 1), WP, sigma + step, u)
        down = apply_B((0, 1), WP, sigma - step, u)
        return (up - down) * (1.0 / (2 * step))

    derivative = central(h) * (4.0 / 3.0) - central(2 * h) * (1.0 / 3.0)
    assert close(apply_B((1, 1), WP, sigma, u), derivative * (-1j), rel=1e-9)


@pytest.mark.parametrize("sigma", [0.0, 0.7, 1.3])
def test_b01_second_transcription(sigma):
    u = sample_u()
    assert close(apply_B((0, 1), WP, sigma, u), b01_by_sigma_powers(WP, sigma, u))


@pytest.mark.parametrize("kappa", [0.9, 1.25, 2.0])
@pytest.mark.parametrize("sigma", [0.0, 0.5, 1.7])
def test_b02_second_transcription(kappa, sigma):
    wp = make_wave_params(kappa)
    lattice = FrequencyLattice(kappa)
    e = T.exp_x(lattice, freq(kappa=-1))
    u = StateVec((T.cosh_y(lattice, freq(kappa=1), 1.0 + 0.5j) + T.term(lattice, 0.3, p=1)) * e,
                 (T.sinh_y(lattice, UNIT, -0.7) + T.constant(lattice, 0.1j)) * e,
                 e * 0.9)
    image = apply_B((0, 2), wp, sigma, u)
    reference = b02_by_sigma_powers(wp, sigma, u)
    for got, want in zip(image.components(), reference.components()):
        assert (got - want).max_coeff() <= 1e-10 * max(1.0, want.max_coeff())


@pytest.mark.parametrize("order,allowed", [((1, 0), {0}), ((2, 0), {0}), ((0, 1), {-1, 1}),
                                           ((1, 1), {-1, 1}), ((0, 2), {-2, 0, 2})])
def test_frequency_shifts(order, allowed):
    u = sample_u()
    shifts = frequency_shifts(u, apply_B(order, WP, 0.4, u))
    assert shifts and shifts <= allowed


def test_frequency_shifts_need_single_frequency():
    u = sample_u()
    mixed = StateVec(u.phi + T.cosh_y(LAT, K), u.upsilon, u.eta)
    with pytest.raises(DomainError):
        frequency_shifts(mixed, apply_B((0, 1), WP, 0.0, mixed))


def test_explicit_traces_match_cached():
    u = sample_u()
    traces = traces_for(WP, LAT)
    assert close(apply_B((0, 2), WP, 0.2, u, traces=traces), apply_B((0, 2), WP, 0.2, u))
    assert np.isclose(apply_B((2, 0), WP, 0.2, u).upsilon.max_coeff(), u.phi.max_coeff() / WP.mu0)


if __name__ == "__main__":
    print("🚀 Тестирование операторов B...")
    raise SystemExit(pytest.main([__file__, "-v"]))
