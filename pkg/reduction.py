"""
Поправки центрального многообразия w_k^(m,n)(x; σ)

Для каждого столбца k и порядка (m, n) строится правая часть f_k^(m,n) из
младших порядков, затем решается система w_x = L(iσ)w + (1 − Π)f в классе
термов. Коэффициенты a_jk^(m,n)(x) находятся по формуле вариации постоянных.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from closed_forms import w01_high_constants, w01_zero_constants, w01_zero_mode3, w10_zero_constants, w10_zero_mode3
from dispersion import DispersionPoint, Regime, WaveParams, resonance_sigma
from eigensystem import Projector, apply_L, complement, modes_at
from errors import DomainError, SequencingError
from funcspace import COSH, SINH, ZERO, StateVec, TermFunction, freq, pair, vadd
from operator_b import SUPPORTED_ORDERS, apply_B, traces_for
from robin_solver import solve_poisson_robin
from stokes import collocation_grid

Order = Tuple[int, int]
Column = Dict[int, TermFunction]


@dataclass(frozen=True)
class WCorrection:
    """Поправка w_k^(m,n) и правая часть, из которой она получена"""
    k: int
    m: int
    n: int
    w: StateVec
    forcing: StateVec


def initial_column(pr: Projector, k: int) -> Column:
    """Столбец k матрицы a^(0,0)(x)"""
    lattice = pr.lattice
    T = TermFunction
    mode = pr.mode(k)
    column = {j: T.zero(lattice) for j in pr.labels}
    if pr.point.regime == Regime.AT_ZERO and k == 3:
        # жорданова клетка: L φ₃ = φ₄
        column[3] = T.constant(lattice, 1.0)
        column[4] = T.term(lattice, 1.0, q=1)
    else:
        column[k] = T.exp_x(lattice, mode.kvec)
    return column


def _superpose(pr: Projector, column: Column) -> StateVec:
    total = StateVec.zero(pr.lattice)
    for j, coeff in column.items():
        if not coeff.is_zero():
            total = total + pr.mode(j).phi.scale(coeff)
    return total


def build_forcing(wp: WaveParams, pr: Projector, k: int, m: int, n: int,
                  w_data: Dict[Order, StateVec], a_data: Dict[Order, Column]) -> StateVec:
    """f_k^(m,n) = Σ B^(m′,n′)(w_k^(m−m′,n−n′) + Σ_j a_jk^(m−m′,n−n′)φ_j)

    w_data и a_data содержат данные столбца k для младших порядков.
    """
    if m + n < 1 or m + n > 2:
        raise DomainError(f"правая часть порядка ({m},{n}) не поддерживается")
    traces = traces_for(wp, pr.lattice)
    total = StateVec.zero(pr.lattice)
    for order in SUPPORTED_ORDERS:
        rest = (m - order[0], n - order[1])
        if rest[0] < 0 or rest[1] < 0:
            continue
        if rest not in a_data:
            raise SequencingError(f"f_{k}^({m},{n}): нет a^{rest}")
        u = _superpose(pr, a_data[rest])
        if rest != (0, 0):
            if rest not in w_data:
                raise SequencingError(f"f_{k}^({m},{n}): нет w^{rest}")
            u = u + w_data[rest]
        if u.is_zero():
            continue
        total = total + apply_B(order, wp, pr.sigma, u, traces)
    return total


def propagate(pr: Projector, pairings: Column) -> Column:
    """a_j(x) из ⟨f, ψ_j⟩ при a_j(0) = 0

    Простая мода: a_j = e^{ik_j x}∫₀^x e^{−ik_j x′}F_j; при σ = 0 для
    жордановой пары a₃ = ∫F₃, a₄ = ∫(a₃ + F₄).
    """
    lattice = pr.lattice
    T = TermFunction
    result = {}
    for mode in pr.modes:
        if pr.point.regime == Regime.AT_ZERO and mode.j in (3, 4):
            continue
        F = pairings[mode.j]
        if mode.kvec == ZERO:
            result[mode.j] = F.integrate_x()
            continue
        shifted = (T.exp_x(lattice, tuple(-v for v in mode.kvec)) * F).integrate_x()
        result[mode.j] = T.exp_x(lattice, mode.kvec) * shifted
    if pr.point.regime == Regime.AT_ZERO:
        result[3] = pairings[3].integrate_x()
        result[4] = (result[3] + pairings[4]).integrate_x()
    return result


def _secular_free(g: StateVec, scale: float) -> StateVec:
    return StateVec(*(part.drop_secular(scale=scale) for part in g.components()))


def solve_w(wp: WaveParams, pr: Projector, forcing: StateVec, k: int = 0, m: int = 0, n: int = 0) -> WCorrection:
    """Ограниченное решение w_x = L(iσ)w + (1 − Π)f с Πw = 0

    φ удовлетворяет φ_xx + φ_yy = g1_x + iσg1 + μ₀g2, φ_y(0) = 0 и
    φ_xx(1) − 2iσφ_x(1) − σ²φ(1) + μ₀φ_y(1) = g1_x(1) − iσg1(1) + μ₀g3;
    затем υ = (φ_x − iσφ − g1)/μ₀ и η = υ(1).
    """
    sigma, mu0 = pr.sigma, wp.mu0
    g = _secular_free(complement(pr, forcing), max(forcing.max_coeff(), 1e-300))
    g1, g2, g3 = g.components()
    g1_x = g1.dx()
    R = g1_x + g1 * (1j * sigma) + g2 * mu0
    S = (g1_x - g1 * (1j * sigma)).at_y(1.0) + g3 * mu0
    phi, _ = solve_poisson_robin(pr.lattice, sigma, mu0, R, S)
    upsilon = (phi.dx() - phi * (1j * sigma) - g1) / mu0
    w = StateVec(phi, upsilon, upsilon.at_y(1.0))
    # однородные решения в ядровых блоках убираются проектором
    w = complement(pr, w)
    return WCorrection(k=k, m=m, n=n, w=w, forcing=forcing)


def pde_residual(wp: WaveParams, pr: Projector, wc: WCorrection) -> float:
    """Невязка w_x − L(iσ)w − (1 − Π)f на сетке коллокации, относительно масштаба f"""
    w = wc.w
    g = complement(pr, wc.forcing)
    image = apply_L(wp, 1j * pr.sigma, w, check_domain=False)
    residual = StateVec(w.phi.dx(), w.upsilon.dx(), w.eta.dx()) - image - g
    x, y = collocation_grid(wp)
    xx, yy = np.meshgrid(x, y)
    worst = max(np.max(np.abs(residual.phi.evaluate(xx, yy))),
                np.max(np.abs(residual.upsilon.evaluate(xx, yy))),
                np.max(np.abs(residual.eta.evaluate(x))))
    return float(worst) / max(wc.forcing.max_coeff(), 1e-300)


class ReductionCache:
    """Поправки w_k^(m,n) и функции a_k^(m,n)(x) для одного σ

    Порядки заполняются лениво, младшие раньше старших.
    """

    def __init__(self, wp: WaveParams, sigma: float, resonance: Optional[int] = None,
                 pr: Optional[Projector] = None, point: Optional[DispersionPoint] = None):
        if pr is None:
            if point is None and resonance is not None:
                point = resonance_sigma(wp, resonance).point
            pr = modes_at(wp, sigma if point is None else point.sigma, resonance, point)
        self.wp = wp
        self.sigma = pr.sigma
        self.resonance = resonance
        self.pr = pr
        if self.pr.point.regime not in (Regime.AT_ZERO, Regime.ABOVE_CRITICAL):
            raise DomainError("редукция строится только при σ = 0 и σ > σ_c")
        self._a: Dict[Tuple[int, int, int], Column] = {}
        self._w: Dict[Tuple[int, int, int], WCorrection] = {}
        self._f: Dict[Tuple[int, int, int], StateVec] = {}

    @property
    def lattice(self):
        return self.pr.lattice

    @property
    def labels(self) -> List[int]:
        return self.pr.labels

    def a_column(self, k: int, m: int, n: int) -> Column:
        key = (k, m, n)
        if key not in self._a:
            if (m, n) == (0, 0):
                self._a[key] = initial_column(self.pr, k)
            else:
                f = self.forcing(k, m, n)
                pairings = {mode.j: pair(f, mode.psi) for mode in self.pr.modes}
                self._a[key] = propagate(self.pr, pairings)
        return self._a[key]

    def a_function(self, j: int, k: int, m: int, n: int) -> TermFunction:
        return self.a_column(k, m, n)[j]

    def forcing(self, k: int, m: int, n: int) -> StateVec:
        key = (k, m, n)
        if key not in self._f:
            a_data, w_data = {}, {}
            for mm in range(m + 1):
                for nn in range(n + 1):
                    if (mm, nn) == (m, n):
                        continue
                    a_data[(mm, nn)] = self.a_column(k, mm, nn)
                    if (mm, nn) != (0, 0) and mm + nn < m + n:
                        w_data[(mm, nn)] = self.correction(k, mm, nn).w
            self._f[key] = build_forcing(self.wp, self.pr, k, m, n, w_data, a_data)
        return self._f[key]

    def correction(self, k: int, m: int, n: int) -> WCorrection:
        key = (k, m, n)
        if key not in self._w:
            if m + n > 1:
                raise DomainError("поправки w нужны только для m + n ≤ 1")
            self._w[key] = solve_w(self.wp, self.pr, self.forcing(k, m, n), k, m, n)
        return self._w[key]

    def a_at_period(self, j: int, k: int, m: int, n: int) -> complex:
        value = self.a_function(j, k, m, n).at_period()
        return value.scalar() if not value.is_zero() else 0j


# --- регрессия с замкнутыми формулами ---

def _relative(found: complex, expected: complex) -> float:
    return abs(found - expected) / max(abs(expected), 1e-300)


def regression_w_zero(wp: WaveParams, cache: Optional[ReductionCache] = None) -> Dict[str, float]:
    """Относительные расхождения поправок при σ = 0 с замкнутыми формулами

    Для нулевых поправок (w₄) записывается наибольший коэффициент.
    """
    cache = cache or ReductionCache(wp, 0.0)
    lattice = cache.lattice
    report: Dict[str, float] = {}
    K, K2 = freq(kappa=1), freq(kappa=2)
    minus, minus2 = freq(kappa=-1), freq(kappa=-2)

    w1 = cache.correction(1, 1, 0).w
    b = w10_zero_constants(wp)
    report["w1_10.b11"] = _relative(w1.phi.coefficient(minus, p=1, kind=SINH, rate=K), b["b11"])
    report["w1_10.b12"] = _relative(w1.phi.coefficient(minus), b["b12"])
    report["w1_10.b13"] = _relative(w1.phi.coefficient(minus, kind=COSH, rate=K), b["b13"])
    w2 = cache.correction(2, 1, 0).w
    report["w2_10.b11"] = _relative(w2.phi.coefficient(K, p=1, kind=SINH, rate=K), -b["b11"])
    w3 = cache.correction(3, 1, 0).w
    q = w10_zero_mode3(wp)
    report["w3_10.y2"] = _relative(w3.phi.coefficient(ZERO, p=2), q["y2"])
    report["w3_10.cosh"] = _relative(w3.phi.coefficient(ZERO, kind=COSH, rate=K), q["cosh"])
    report["w4_10.max"] = cache.correction(4, 1, 0).w.max_coeff()

    w1 = cache.correction(1, 0, 1).w
    c = w01_zero_constants(wp)
    report["w1_01.b11"] = _relative(w1.phi.coefficient(minus2, p=1, kind=SINH, rate=K), c["b11"])
    report["w1_01.b12"] = _relative(w1.phi.coefficient(minus2), c["b12"])
    report["w1_01.b13"] = _relative(w1.phi.coefficient(minus2, kind=COSH, rate=K), c["b13"])
    report["w1_01.b14"] = _relative(w1.phi.coefficient(minus2, kind=COSH, rate=K2), c["b14"])
    report["w1_01.b21"] = _relative(w1.upsilon.coefficient(minus2, p=1, kind=SINH, rate=K), c["b21"])
    report["w1_01.b24"] = _relative(w1.upsilon.coefficient(minus2, kind=COSH, rate=K2), c["b24"])
    w3 = cache.correction(3, 0, 1).w
    d = w01_zero_mode3(wp)
    # sin κx·Q: коэффициент при e^{iκx} равен Q/(2i)
    report["w3_01.b31"] = _relative(2j * w3.phi.coefficient(K, p=1, kind=SINH, rate=K), d["b31"])
    report["w3_01.b33"] = _relative(2j * w3.phi.coefficient(K, kind=COSH, rate=K), d["b33"])
    report["w4_01.max"] = cache.correction(4, 0, 1).w.max_coeff()
    return report


def regression_w01_high(wp: WaveParams, order: int = 2, cache: Optional[ReductionCache] = None) -> Dict[str, float]:
    """Поправка w^(0,1) моды k₂ при σ = σ_N против замкнутой формулы, коэффициент за коэффициентом

    sin κx·e^{ik₂x} и cos κx·e^{ik₂x} разделяются по частотам k₂ ± κ:
    b_cos = C₊ + C₋, b_sin = i(C₊ − C₋). В отчёте "max" - наибольшее расхождение.
    """
    if cache is None:
        res = resonance_sigma(wp, order)
        cache = ReductionCache(wp, res.sigma_N, resonance=order, point=res.point)
    point = cache.pr.point
    wc = cache.correction(2, 0, 1)
    w = wc.w
    K, K2, K4 = freq(kappa=1), freq(k2=1), freq(k4=1)
    plus, minus = vadd(K2, K), vadd(K2, freq(kappa=-1))
    b = w01_high_constants(wp, point)

    def split(f: TermFunction, **key):
        c_plus, c_minus = f.coefficient(plus, **key), f.coefficient(minus, **key)
        return c_plus + c_minus, 1j * (c_plus - c_minus)

    # b112 берётся из связи υ = μ₀⁻¹(φ_x − iσφ − f₁) для слагаемого y sinh κy
    _, f_sin = split(complement(cache.pr, wc.forcing).phi, p=1, kind=SINH, rate=K)
    b112 = (1j * (point.k2 - point.sigma) * b["b13"] - f_sin) / wp.mu0

    checks = (
        ("phi.cosh_k2", w.phi, dict(kind=COSH, rate=K2), b["b11"], b["b12"]),
        ("phi.ysinh_kappa", w.phi, dict(p=1, kind=SINH, rate=K), b["b13"], 0j),
        ("phi.ysinh_k2", w.phi, dict(p=1, kind=SINH, rate=K2), 0j, b["phi_cos_ysinh_k2"]),
        ("phi.cosh_k4", w.phi, dict(kind=COSH, rate=K4), b["b14"], b["b15"]),
        ("ups.cosh_k2", w.upsilon, dict(kind=COSH, rate=K2), b["b18"], b["b19"]),
        ("ups.cosh_k4", w.upsilon, dict(kind=COSH, rate=K4), b["b110"], b["b111"]),
        ("ups.ysinh_kappa", w.upsilon, dict(p=1, kind=SINH, rate=K), b112, b["ups_cos_ysinh_kappa"]),
        ("ups.sinh_k2", w.upsilon, dict(kind=SINH, rate=K2), b["ups_sin_sinh_k2"], 0j),
        ("ups.ysinh_k2", w.upsilon, dict(p=1, kind=SINH, rate=K2), 0j, b["ups_cos_ysinh_k2"]),
    )
    report: Dict[str, float] = {}
    for name, f, key, sin_expected, cos_expected in checks:
        cos_part, sin_part = split(f, **key)
        scale = max(abs(sin_expected), abs(cos_expected))
        report[f"{name}.sin"] = abs(sin_part - sin_expected) / scale
        report[f"{name}.cos"] = abs(cos_part - cos_expected) / scale

    # e^{±iκx}cosh((k₂ ± κ)y): амплитуда в φ и отношение υ/φ = i(k₂ ± κ − σ)/μ₀
    for name, xf, amp, ratio in (("plus", plus, "b16", "ups_ratio_plus"), ("minus", minus, "b17", "ups_ratio_minus")):
        phi_c = w.phi.coefficient(xf, kind=COSH, rate=xf)
        ups_c = w.upsilon.coefficient(xf, kind=COSH, rate=xf)
        report[f"phi.cosh_{name}"] = _relative(phi_c, b[amp])
        report[f"ups.cosh_{name}"] = _relative(ups_c, b[amp] * b[ratio])
    report["eta.trace"] = (w.eta - w.upsilon.at_y(1.0)).max_coeff() / max(w.max_coeff(), 1e-300)
    report["max"] = max(report.values())
    return report
