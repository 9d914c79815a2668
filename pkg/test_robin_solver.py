#!/usr/bin/env python3
"""
Тестирование решателя задачи Пуассона–Робена по блокам x-частот
"""

import pytest

from dispersion import make_wave_params
from errors import ConsistencyError
from funcspace import COSH, FrequencyLattice, TermFunction, freq
from robin_solver import is_singular, solve_block, solve_poisson_robin

KAPPA = 1.3
WP = make_wave_params(KAPPA)
LAT = FrequencyLattice(KAPPA)
K = freq(kappa=1)
T = TermFunction


def boundary(phi: TermFunction, omega: float, sigma: float) -> complex:
    return (-(omega - sigma) ** 2 * phi.at_y(1.0) + WP.mu0 * phi.dy().at_y(1.0)).scalar()


def operator(phi: TermFunction, omega: float) -> TermFunction:
    return phi.dy().dy() - phi * omega ** 2


def test_regular_block_recovers_profile():
    sigma = 0.2
    exact = T.cosh_y(LAT, freq(kappa=2), 0.3) + T.sinh_y(LAT, K, 1.0, p=1)
    profile, extra = solve_block(LAT, K, sigma, WP.mu0, operator(exact, KAPPA), boundary(exact, KAPPA, sigma))
    assert extra is None
    assert (profile - exact).max_coeff() < 1e-10


def test_singular_block_drops_kernel():
    assert is_singular(KAPPA, False, 0.0, WP.mu0)
    exact = T.sinh_y(LAT, K, 1.0, p=1)
    profile, _ = solve_block(LAT, K, 0.0, WP.mu0, operator(exact, KAPPA), boundary(exact, KAPPA, 0.0))
    assert (profile - exact).max_coeff() < 1e-10
    assert profile.coefficient(kind=COSH, rate=K) == 0


def test_singular_block_inconsistent_source():
    with pytest.raises(ConsistencyError):
        solve_block(LAT, K, 0.0, WP.mu0, T.cosh_y(LAT, K), 0j)


def test_zero_frequency_block():
    # Φ = y² − 2y³/3, Φ′(0) = 0; при σ ≠ 0 блок ω = 0 невырожден
    sigma = 0.4
    exact = T.term(LAT, 1.0, p=2) + T.term(LAT, -2.0 / 3.0, p=3)
    profile, _ = solve_block(LAT, freq(), sigma, WP.mu0, operator(exact, 0.0), boundary(exact, 0.0, sigma))
    assert (profile - exact).max_coeff() < 1e-10


def test_poisson_robin_all_blocks():
    sigma = 0.15
    R = (T.exp_x(LAT, K) * T.cosh_y(LAT, freq(kappa=2), 2.0)
         + T.exp_x(LAT, freq(kappa=-2)) * T.sinh_y(LAT, K, 1j, p=1))
    S = T.exp_x(LAT, K, 0.5) + T.exp_x(LAT, freq(kappa=3), -1.0)
    phi, _ = solve_poisson_robin(LAT, sigma, WP.mu0, R, S)
    interior = phi.dx().dx() + phi.dy().dy() - R
    shifted = phi.dx() - phi * (1j * sigma)
    robin = (shifted.dx() - shifted * (1j * sigma)).at_y(1.0) + WP.mu0 * phi.dy().at_y(1.0) - S
    assert interior.max_coeff() < 1e-10
    assert robin.max_coeff() < 1e-10
    assert phi.dy().at_y(0.0).max_coeff() < 1e-10


def test_secular_input_rejected():
    R = T.exp_x(LAT, K).times_x()
    with pytest.raises(ConsistencyError):
        solve_poisson_robin(LAT, 0.1, WP.mu0, R, T.zero(LAT))


if __name__ == "__main__":
    print("🚀 Тестирование решателя Пуассона–Робена...")
    raise SystemExit(pytest.main([__file__, "-v"]))
