"""
Индексы неустойчивости: Бенджамина–Фейра (ind₁) и высокочастотный (ind₂)
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import brentq, newton

import reporting
from dispersion import WaveParams, dsigma_dk, make_wave_params
from errors import BracketError, ConsistencyError, PoleError
from monodromy import EvansExpansion, MonodromySeries, build_series
from settings import (BRENT_RTOL, BUBBLE_EPS_MAX, DELTA_GUARD, F2_CONSISTENCY_TOL, IND2_EXTENDED_THRESHOLD,
                      KAPPA1_BRACKET, KAPPA2_BRACKET, KAPPA2_WIDTH, MP_DPS, ROOT_TOL, VARIANT_BRACKETS)


# --- Бенджамин–Фейр ---

def _ind1_terms(kappa: float) -> List[float]:
    C, S = math.cosh(2 * kappa), math.sinh(2 * kappa)
    return [8 * C, 24 * kappa * S, 2 * kappa * math.sinh(4 * kappa), 19 * C ** 2, -8 * C ** 3,
            -10 * C ** 4, -8 * kappa ** 2 * C ** 2, -28 * kappa ** 2, 8 * kappa * C ** 3 * S, -9.0]


def ind1(wp: WaveParams) -> float:
    """ind₁(κ) как многочлен от cosh 2κ, sinh 2κ и κ"""
    return math.fsum(_ind1_terms(wp.kappa))


def ind1_scale(wp: WaveParams) -> float:
    """Сумма модулей слагаемых ind₁ (масштаб для относительных допусков)"""
    return math.fsum(abs(t) for t in _ind1_terms(wp.kappa))


def f2_identity(wp: WaveParams) -> complex:
    """f₂ через ind₁

    Множитель берётся со знаком −i: с ним f₂ совпадает с суммой произведений элементов
    a^(m,n)(T) в bf_coefficients. С множителем +i получилось бы −f₂.
    """
    s, m = wp.s, wp.mu0
    return -1j * math.pi ** 3 * (s * s + 1) ** 2 / (4 * s ** 4 * (m - 1) * (s * s - m + 1) ** 3) * ind1(wp)


def nu_bridges_mielke(wp: WaveParams) -> float:
    """ν(F) = −μ₀ ind₁/(32 s⁴(2s² − 6μ₀s² − 4μ₀s⁴ − 2μ₀ + s⁴ + μ₀² + 1))"""
    s, m = wp.s, wp.mu0
    parts = [2 * s * s, -6 * m * s * s, -4 * m * s ** 4, -2 * m, s ** 4, m * m, 1.0]
    bracket = math.fsum(parts)
    if abs(bracket) < 1e-12 * math.fsum(abs(p) for p in parts):
        raise PoleError(f"κ = {wp.kappa}: знаменатель ν(F) обращается в ноль")
    return -m * ind1(wp) / (32 * s ** 4 * bracket)


@dataclass(frozen=True)
class BFCoeffs:
    """Коэффициенты разложения λ_j(k_j(0) + γ, ε) около нуля"""
    kappa: float
    alpha10: Dict[int, complex]
    alpha20: Dict[int, complex]
    alpha11: complex
    alpha11_sq: complex
    f1: complex
    f2: complex
    f2_identity: complex
    ind1: float
    nu: float
    provenance: Dict[str, str] = field(default_factory=dict)

    @property
    def unstable(self) -> bool:
        return self.ind1 > 0


def dispersion_slopes(wp: WaveParams) -> Dict[int, Tuple[complex, complex]]:
    """(iσ′(k_j), iσ″(k_j)/2) для мод σ = 0: j = 1 на σ₊ в −κ, j = 2 на σ₋ в κ, j = 3, 4 в нуле"""
    h = 1e-4 * max(1.0, wp.kappa)

    def second(branch: int, k: float) -> float:
        return (dsigma_dk(wp, k + h, branch) - dsigma_dk(wp, k - h, branch)) / (2 * h)

    kappa = wp.kappa
    return {
        1: (1j * dsigma_dk(wp, -kappa, +1), 0.5j * second(+1, -kappa)),
        2: (1j * dsigma_dk(wp, kappa, -1), 0.5j * second(-1, kappa)),
        3: (1j * dsigma_dk(wp, 0.0, +1), 0j),
        4: (1j * dsigma_dk(wp, 0.0, -1), 0j),
    }


def _closest(candidates: Sequence[complex], target: complex) -> complex:
    return min(candidates, key=lambda c: abs(c - target))


def bf_coefficients(wp: WaveParams, series: Optional[MonodromySeries] = None) -> BFCoeffs:
    """α^(1,0), α^(2,0), α^(1,1), f₁, f₂ и ind₁ из элементов a^(m,n)(T) при σ = 0

    Знаки ± в α^(1,0) (j = 3, 4) и α^(2,0) (j = 1, 2) выбираются по наклону и
    выпуклости дисперсионных кривых.
    """
    series = series or build_series(wp, 0.0, max_order=2)
    T = wp.period
    e = series.entry
    a11, a33, a44 = e(1, 0, 1, 1), e(1, 0, 3, 3), e(1, 0, 4, 4)
    b11, b34 = e(2, 0, 1, 1), e(2, 0, 3, 4)
    c13, c41 = e(0, 1, 1, 3), e(0, 1, 4, 1)
    d14, d31 = e(1, 1, 1, 4), e(1, 1, 3, 1)
    q11 = e(0, 2, 1, 1)
    slopes = dispersion_slopes(wp)

    alpha10 = {1: 1j * T / a11, 2: 1j * T / a11}
    root = T * cmath.sqrt(-a33 ** 2 + 2 * a33 * a44 - a44 ** 2 - 4 * T * b34)
    bottom = 2 * (T * b34 - a33 * a44)
    pair = [(-1j * T * (a33 + a44) + root) / bottom, (-1j * T * (a33 + a44) - root) / bottom]
    for j in (3, 4):
        alpha10[j] = _closest(pair, slopes[j][0])

    magnitude = T ** 2 * (-a11 ** 2 + 2 * b11) / (2 * a11 ** 3)
    alpha20 = {j: _closest([magnitude, -magnitude], slopes[j][1]) for j in (1, 2)}

    f1 = T ** 2 * (T * b34 + a11 * a33 + a11 * a44 - a33 * a44 - a11 ** 2)
    products = [q11 * a11 ** 2, -T * q11 * b34, T * d14 * d31, -q11 * a11 * a33, a11 * c13 * d31,
                -q11 * a11 * a44, a11 * d14 * c41, q11 * a33 * a44, -c13 * d31 * a44, c13 * b34 * c41,
                -d14 * a33 * c41]
    f2 = sum(products)
    identity = f2_identity(wp)
    scale = max(max(abs(p) for p in products), abs(identity))
    if abs(f2 - identity) > F2_CONSISTENCY_TOL * scale:
        raise ConsistencyError(
            f"κ = {wp.kappa}: f₂ по элементам a ({f2:.12g}) и по ind₁ ({identity:.12g}) расходятся")
    alpha11_sq = T ** 4 * (2 * b11 - a11 ** 2) / a11 ** 4 * f2 / f1
    return BFCoeffs(kappa=wp.kappa, alpha10=alpha10, alpha20=alpha20, alpha11=cmath.sqrt(alpha11_sq),
                    alpha11_sq=alpha11_sq, f1=f1, f2=f2, f2_identity=identity, ind1=ind1(wp),
                    nu=nu_bridges_mielke(wp),
                    provenance={f"a{m}{n}_{j}{k}": path for (m, n, j, k), path in series.provenance.items()})


def find_kappa1() -> Dict[str, float]:
    """κ₁: единственный ноль ind₁ на KAPPA1_BRACKET, уточнённый методом Ньютона"""
    def func(k):
        return ind1(make_wave_params(k))

    lo, hi = KAPPA1_BRACKET
    if func(lo) * func(hi) > 0:
        raise BracketError(f"ind₁ не меняет знак на [{lo}, {hi}]")
    kappa = brentq(func, lo, hi, xtol=1e-15, rtol=BRENT_RTOL, maxiter=200)
    try:
        polished = newton(func, kappa, tol=1e-15, maxiter=20)
        if abs(func(polished)) < abs(func(kappa)):
            kappa = polished
    except RuntimeError:
        pass
    wp = make_wave_params(kappa)
    residual = abs(ind1(wp)) / ind1_scale(wp)
    if residual > ROOT_TOL:
        reporting.warning(f"невязка ind₁ в корне {residual:.3e}")
    return {"kappa1": kappa, "mu0": wp.mu0, "froude": 1.0 / math.sqrt(wp.mu0), "residual": residual}


# --- высокочастотная неустойчивость ---

@dataclass(frozen=True)
class BubbleCoeffs:
    """Коэффициенты многочлена Вейерштрасса около iσ₂"""
    kappa: float
    sigma: float
    k4: float
    d200: complex
    d020: complex
    d004: complex
    d110: complex
    d102: complex
    d012: complex
    alpha10: complex
    alpha02: complex
    alpha20: float
    alpha12: float
    alpha04: float
    gamma_star: float
    gamma_star_alt: complex
    ind2: float
    witnesses: Tuple[float, float]
    extended_precision: bool = False

    @property
    def q_max(self) -> float:
        """max_γ Q(γ; ε)/ε⁴"""
        return self.alpha04 - self.alpha12 ** 2 / (4 * self.alpha20)


def _real(value: complex, what: str, tol: float = 1e-6) -> float:
    if abs(value.imag) > tol * max(abs(value), 1e-300):
        reporting.warning(f"{what}: мнимая часть {value.imag:.3e} не мала")
    return float(value.real)


def _extended_ratio(a12: complex, a21: complex, a11: complex, a22: complex) -> complex:
    with mpmath.workdps(MP_DPS):
        value = (mpmath.mpc(a12) * mpmath.mpc(a21)) / (mpmath.mpc(a11) * mpmath.mpc(a22))
        return complex(value)


def bubble_coefficients(series: MonodromySeries) -> BubbleCoeffs:
    """d- и α-коэффициенты по a^(1,0)(T) и a^(0,2)(T) при резонансе"""
    T = series.period
    e = series.entry
    k4 = series.point.k4
    phase = cmath.exp(1j * k4 * T)
    a11, a22 = e(1, 0, 1, 1), e(1, 0, 2, 2)
    q11, q12, q21, q22 = e(0, 2, 1, 1), e(0, 2, 1, 2), e(0, 2, 2, 1), e(0, 2, 2, 2)

    d200 = a11 * a22
    d020 = -T ** 2 * phase ** 2
    d004 = q11 * q22 - q12 * q21
    d110 = -1j * T * phase * (a11 + a22)
    d102 = q11 * a22 + q22 * a11
    d012 = -1j * T * phase * (q11 + q22)

    alpha20 = _real((d110 ** 2 - 4 * d200 * d020) / (4 * d200 ** 2), "α^(2,0)")
    alpha12 = _real((d110 * d102 - 2 * d200 * d012) / (2 * d200 ** 2), "α^(1,2)")
    alpha04 = _real((d102 ** 2 - 4 * d200 * d004) / (4 * d200 ** 2), "α^(0,4)")
    ratio = q12 * q21 / (a11 * a22)
    extended = False
    if abs(ratio) < IND2_EXTENDED_THRESHOLD:
        ratio = _extended_ratio(q12, q21, a11, a22)
        extended = True
    gamma_alt = (1j * cmath.exp(-1j * k4 * T) / T) * (q11 * a22 - a11 * q22) / (a11 - a22)
    return BubbleCoeffs(
        kappa=2 * math.pi / T, sigma=series.sigma, k4=k4,
        d200=d200, d020=d020, d004=d004, d110=d110, d102=d102, d012=d012,
        alpha10=-d110 / (2 * d200), alpha02=-d102 / (2 * d200),
        alpha20=alpha20, alpha12=alpha12, alpha04=alpha04,
        gamma_star=-alpha12 / (2 * alpha20), gamma_star_alt=gamma_alt,
        ind2=_real(ratio, "ind₂"),
        witnesses=(float((q12 / a11).imag), float((q21 / a22).imag)),
        extended_precision=extended,
    )


def resonance_series(wp: WaveParams, order: int = 2) -> MonodromySeries:
    """Ряд при σ_N с порядками, нужными для ind₂"""
    return build_series(wp, 0.0, resonance=order, orders=[(0, 0), (1, 0), (0, 1), (0, 2)])


def ind2(wp: WaveParams, series: Optional[MonodromySeries] = None) -> BubbleCoeffs:
    """ind₂(κ) = a₁₂^(0,2)a₂₁^(0,2)/(a₁₁^(1,0)a₂₂^(1,0)) при σ = σ₂"""
    return bubble_coefficients(series or resonance_series(wp, 2))


def find_kappa2(bracket: Tuple[float, float] = KAPPA2_BRACKET, width: float = KAPPA2_WIDTH) -> Dict[str, float]:
    """κ₂ делением отрезка по смене знака Im(a₁₂^(0,2)/a₁₁^(1,0))"""
    lo, hi = bracket
    w_lo = ind2(make_wave_params(lo)).witnesses
    w_hi = ind2(make_wave_params(hi)).witnesses
    if w_lo[0] * w_hi[0] > 0:
        raise BracketError(f"признак знака ind₂ не меняется на [{lo}, {hi}]")
    steps = 0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        w_mid = ind2(make_wave_params(mid)).witnesses
        if w_mid[0] * w_lo[0] > 0:
            lo, w_lo = mid, w_mid
        else:
            hi = mid
        steps += 1
        reporting.info(f"κ₂ ∈ [{lo:.9f}, {hi:.9f}]")
    kappa2 = 0.5 * (lo + hi)
    both = w_lo[1] * ind2(make_wave_params(hi)).witnesses[1] <= 0
    return {"kappa2": kappa2, "width": hi - lo, "steps": steps, "both_witnesses_flip": both}


@dataclass(frozen=True)
class BubbleCurve:
    """Ветви δ±(γ, ε) на отрезке, где Q ≥ 0"""
    kappa: float
    eps: float
    gamma: np.ndarray
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    gamma_star: float
    max_re: float
    coeffs: BubbleCoeffs

    @property
    def empty(self) -> bool:
        return self.gamma.size == 0


def bubble_spectrum(wp: WaveParams, eps: float, gamma_grid: Optional[np.ndarray] = None, points: int = 201,
                    coeffs: Optional[BubbleCoeffs] = None) -> BubbleCurve:
    """δ(γ, ε) = α^(1,0)γ + α^(0,2)ε² ± √Q(γ; ε) между корнями Q"""
    if eps > BUBBLE_EPS_MAX:
        reporting.validity_warning("ε", eps, BUBBLE_EPS_MAX)
    coeffs = coeffs or ind2(wp)
    a20, a12, a04 = coeffs.alpha20, coeffs.alpha12, coeffs.alpha04
    e2 = eps * eps
    gamma_star = coeffs.gamma_star * e2
    discriminant = a12 ** 2 - 4 * a20 * a04
    if discriminant <= 0 or eps == 0:
        empty = np.zeros(0)
        return BubbleCurve(kappa=wp.kappa, eps=eps, gamma=empty, delta_plus=empty.astype(complex),
                           delta_minus=empty.astype(complex), gamma_star=gamma_star, max_re=0.0, coeffs=coeffs)
    roots = sorted([(-a12 + s * math.sqrt(discriminant)) / (2 * a20) * e2 for s in (1, -1)])
    if gamma_grid is None:
        gamma_grid = np.linspace(roots[0], roots[1], points)
    gamma = np.unique(np.concatenate([np.asarray(gamma_grid, dtype=float), [gamma_star]]))
    gamma = gamma[(gamma >= roots[0]) & (gamma <= roots[1])]
    if np.max(np.abs(gamma)) > DELTA_GUARD:
        reporting.validity_warning("|γ|", float(np.max(np.abs(gamma))), DELTA_GUARD)
    Q = np.clip(a20 * gamma ** 2 + a12 * gamma * e2 + a04 * e2 * e2, 0.0, None)
    centre = coeffs.alpha10 * gamma + coeffs.alpha02 * e2
    root = np.sqrt(Q)
    plus, minus = centre + root, centre - root
    return BubbleCurve(kappa=wp.kappa, eps=eps, gamma=gamma, delta_plus=plus, delta_minus=minus,
                       gamma_star=gamma_star, max_re=float(np.max(plus.real)), coeffs=coeffs)


def ind2_mu0_variant(wp: WaveParams, series: Optional[MonodromySeries] = None) -> float:
    """((a₁₁^(0,2)a₂₂ − a₁₁a₂₂^(0,2))² + 4a₁₂^(0,2)a₂₁^(0,2)a₁₁a₂₂)/(a₁₁a₂₂)², a = a^(1,0)"""
    series = series or resonance_series(wp, 2)
    e = series.entry
    a11, a22 = e(1, 0, 1, 1), e(1, 0, 2, 2)
    q11, q12, q21, q22 = e(0, 2, 1, 1), e(0, 2, 1, 2), e(0, 2, 2, 1), e(0, 2, 2, 2)
    value = ((q11 * a22 - a11 * q22) ** 2 + 4 * q12 * q21 * a11 * a22) / (a11 * a22) ** 2
    return _real(value, "вариант ind₂")


def find_variant_window(brackets=VARIANT_BRACKETS, width: float = 1e-5) -> Tuple[float, float]:
    """(κ_ℓ, κ_u): смены знака варианта ind₂ на двух отрезках"""
    def func(k):
        return ind2_mu0_variant(make_wave_params(k))

    found = []
    for lo, hi in brackets:
        f_lo, f_hi = func(lo), func(hi)
        if f_lo * f_hi > 0:
            raise BracketError(f"вариант ind₂ не меняет знак на [{lo}, {hi}]")
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            f_mid = func(mid)
            if f_mid * f_lo > 0:
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        found.append(0.5 * (lo + hi))
    return found[0], found[1]


def resonance3_stability_check(wp: WaveParams, order: int = 3) -> Dict[str, float]:
    """При N ≥ 3 внедиагональные элементы a^(0,2)(T) обращаются в ноль"""
    series = resonance_series(wp, order)
    q = series.coeffs[(0, 2)]
    off = max(abs(q[0, 1]), abs(q[1, 0]))
    diag = max(abs(q[0, 0]), abs(q[1, 1]))
    a10 = series.coeffs[(1, 0)]
    return {"order": order, "sigma": series.sigma, "max_off_diagonal": float(off), "max_diagonal": float(diag),
            "ind2_equivalent": float(abs(q[0, 1] * q[1, 0] / (a10[0, 0] * a10[1, 1])))}


def alpha_residuals(bf: BFCoeffs) -> Dict[int, float]:
    """|α_j^(1,0) − iσ′(k_j)| относительно |α_j|"""
    slopes = dispersion_slopes(make_wave_params(bf.kappa))
    return {j: abs(bf.alpha10[j] - slopes[j][0]) / max(abs(slopes[j][0]), 1e-300) for j in bf.alpha10}


def quartic_residual(bf: BFCoeffs, expansion: EvansExpansion) -> Dict[int, float]:
    """Коэффициент при γ⁴ после подстановки δ = α_j^(1,0)γ в Δ при ε = 0"""
    out = {}
    for j, alpha in bf.alpha10.items():
        value = sum(expansion.coefficient(l, 4 - l, 0) * alpha ** l for l in range(5))
        scale_j = max(abs(expansion.coefficient(l, 4 - l, 0) * alpha ** l) for l in range(5))
        out[j] = abs(value) / max(scale_j, 1e-300)
    return out


def bubble_expansion_residual(coeffs: BubbleCoeffs, expansion: EvansExpansion) -> float:
    """Наибольшее расхождение d-коэффициентов с разложением определителя"""
    pairs = [((2, 0, 0), coeffs.d200), ((0, 2, 0), coeffs.d020), ((0, 0, 4), coeffs.d004),
             ((1, 1, 0), coeffs.d110), ((1, 0, 2), coeffs.d102), ((0, 1, 2), coeffs.d012)]
    scale = max(max(abs(v) for _, v in pairs), 1e-300)
    return max(abs(expansion.coefficient(*key) - value) for key, value in pairs) / scale
