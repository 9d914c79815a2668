import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

from scipy.optimize import brentq

from errors import BracketError, DomainError
from funcspace import FrequencyLattice
from settings import BRENT_RTOL, CRITICAL_TOL, NEWTON_MAX_ITER, ROOT_TOL


@dataclass(frozen=True)
class WaveParams:
    """Волновое число κ и производные постоянные"""
    kappa: float
    mu0: float  # κ coth κ
    s: float  # sinh κ
    c: float  # cosh κ
    period: float  # T = 2π/κ


class Regime(Enum):
    AT_ZERO = "AtZero"
    BELOW_CRITICAL = "BelowCritical"
    AT_CRITICAL = "AtCritical"
    ABOVE_CRITICAL = "AboveCritical"


@dataclass(frozen=True)
class DispersionPoint:
    """Корни k_j(σ) дисперсионного соотношения при данном σ"""
    sigma: float
    regime: Regime
    k1: Optional[float]
    k2: float
    k3: Optional[float]
    k4: float
    sigma_c: float
    k_c: float

    def lattice(self, kappa: float, resonance: Optional[int] = None) -> FrequencyLattice:
        """Решётка частот для этой точки"""
        if self.regime == Regime.AT_ZERO:
            # при σ = 0 моды выражаются через κ напрямую
            return FrequencyLattice(kappa)
        if self.regime == Regime.ABOVE_CRITICAL:
            return FrequencyLattice(kappa, k2=self.k2, k4=self.k4, resonance=resonance)
        if resonance is not None:
            raise DomainError("резонанс возможен только при σ > σ_c")
        return FrequencyLattice(kappa, k1=self.k1, k2=self.k2, k3=self.k3, k4=self.k4)


@dataclass(frozen=True)
class Resonance:
    order: int
    sigma_N: float
    point: DispersionPoint


def make_wave_params(kappa: float) -> WaveParams:
    """Постоянные волны при данном κ"""
    if not kappa > 0:
        raise DomainError(f"κ должно быть положительным, получено {kappa}")
    if kappa < 1e-8:
        mu0 = 1.0 + kappa * kappa / 3.0
    else:
        mu0 = kappa / math.tanh(kappa)
    return WaveParams(kappa=kappa, mu0=mu0, s=math.sinh(kappa), c=math.cosh(kappa),
                      period=2.0 * math.pi / kappa)


def _radicand(wp: WaveParams, k: float) -> float:
    # k·tanh k ≥ 0 при любом вещественном k
    return wp.mu0 * k * math.tanh(k)


def sigma_branches(wp: WaveParams, k: float) -> Tuple[float, float]:
    """(σ₊(k), σ₋(k)) = k ± √(μ₀ k tanh k)"""
    root = math.sqrt(max(_radicand(wp, k), 0.0))
    return k + root, k - root


def sigma_plus(wp: WaveParams, k: float) -> float:
    return sigma_branches(wp, k)[0]


def sigma_minus(wp: WaveParams, k: float) -> float:
    return sigma_branches(wp, k)[1]


def dsigma_dk(wp: WaveParams, k: float, branch: int = 1) -> float:
    """Аналитическая производная dσ±/dk; branch = +1 или −1"""
    if k == 0.0:
        return 1.0 + branch * math.sqrt(wp.mu0)
    root = math.sqrt(_radicand(wp, k))
    dg = wp.mu0 * (math.tanh(k) + k / math.cosh(k) ** 2)
    return 1.0 + branch * dg / (2.0 * root)


def _solve(func, lo: float, hi: float, what: str) -> float:
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"{what}: нет смены знака на [{lo}, {hi}]")
    return brentq(func, lo, hi, xtol=1e-15, rtol=BRENT_RTOL, maxiter=200)


def _polish(func, deriv, k: float) -> float:
    # несколько шагов Ньютона после деления отрезка
    for _ in range(NEWTON_MAX_ITER):
        d = deriv(k)
        if d == 0.0:
            break
        step = func(k) / d
        k_new = k - step
        if abs(func(k_new)) >= abs(func(k)):
            break
        k = k_new
        if abs(step) < 1e-16 * max(1.0, abs(k)):
            break
    return k


def critical_point(wp: WaveParams) -> Tuple[float, float]:
    """(k_c, σ_c): максимум σ₊ на отрицательной полуоси"""
    def func(k):
        return dsigma_dk(wp, k, +1)

    hi = -1e-12
    lo = -wp.kappa
    while func(lo) < 0:
        lo *= 2.0
        if lo < -1e6:
            raise BracketError("не найден отрезок для k_c")
    k_c = _solve(func, lo, hi, "k_c")
    return k_c, sigma_plus(wp, k_c)


def roots_k(wp: WaveParams, sigma: float) -> DispersionPoint:
    """Корни k_j(σ) по переписи ветвей"""
    if sigma < 0:
        raise DomainError(f"σ должно быть неотрицательным, получено {sigma}")
    k_c, sigma_c = critical_point(wp)
    kappa = wp.kappa
    if sigma == 0.0:
        return DispersionPoint(0.0, Regime.AT_ZERO, -kappa, kappa, 0.0, 0.0, sigma_c, k_c)

    def minus(k):
        return sigma_minus(wp, k) - sigma

    def plus(k):
        return sigma_plus(wp, k) - sigma

    hi = sigma + wp.mu0 * (1.0 + sigma)
    while minus(hi) < 0:
        hi *= 2.0
    k2 = _polish(minus, lambda k: dsigma_dk(wp, k, -1), _solve(minus, kappa, hi, "k₂"))
    k4 = _polish(plus, lambda k: dsigma_dk(wp, k, +1), _solve(plus, 0.0, sigma, "k₄"))

    if abs(sigma - sigma_c) < CRITICAL_TOL:
        return DispersionPoint(sigma, Regime.AT_CRITICAL, k_c, k2, k_c, k4, sigma_c, k_c)
    if sigma > sigma_c:
        return DispersionPoint(sigma, Regime.ABOVE_CRITICAL, None, k2, None, k4, sigma_c, k_c)

    k1 = _polish(plus, lambda k: dsigma_dk(wp, k, +1), _solve(plus, -kappa, k_c, "k₁"))
    k3 = _polish(plus, lambda k: dsigma_dk(wp, k, +1), _solve(plus, k_c, 0.0, "k₃"))
    return DispersionPoint(sigma, Regime.BELOW_CRITICAL, k1, k2, k3, k4, sigma_c, k_c)


def gap(wp: WaveParams, sigma: float) -> float:
    """k₂(σ) − k₄(σ)"""
    point = roots_k(wp, sigma)
    return point.k2 - point.k4


def resonance_sigma(wp: WaveParams, order: int) -> Resonance:
    """σ_N > σ_c с k₂(σ_N) − k₄(σ_N) = Nκ"""
    if order < 2:
        raise DomainError(f"порядок резонанса должен быть не меньше 2, получено {order}")
    _, sigma_c = critical_point(wp)
    target = order * wp.kappa

    def func(s):
        return gap(wp, s) - target

    lo = sigma_c * (1.0 + 1e-9) + 1e-12
    if func(lo) > 0:
        raise BracketError(f"зазор k₂ − k₄ при σ_c уже больше {order}κ")
    hi = max(2.0 * sigma_c, sigma_c + wp.kappa)
    while func(hi) < 0:
        hi = sigma_c + 2.0 * (hi - sigma_c)
    sigma_N = brentq(func, lo, hi, xtol=1e-15, rtol=BRENT_RTOL, maxiter=300)
    point = roots_k(wp, sigma_N)
    # шаг Ньютона: d(k₂ − k₄)/dσ = 1/σ₋′(k₂) − 1/σ₊′(k₄)
    slope = 1.0 / dsigma_dk(wp, point.k2, -1) - 1.0 / dsigma_dk(wp, point.k4, +1)
    residual = point.k2 - point.k4 - target
    if abs(residual) > ROOT_TOL * target and slope != 0.0:
        candidate = roots_k(wp, sigma_N - residual / slope)
        if abs(candidate.k2 - candidate.k4 - target) < abs(residual):
            sigma_N, point = candidate.sigma, candidate
    # k₂ согласуется с решёткой: k₂ = k₄ + Nκ
    point = replace(point, k2=point.k4 + target)
    return Resonance(order=order, sigma_N=sigma_N, point=point)
