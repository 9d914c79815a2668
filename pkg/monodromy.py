"""
Коэффициенты a^(m,n)(T) матрицы монодромии и периодическая функция Эванса
"""

import cmath
import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

import reporting
from closed_forms import form_key, get_matrix
from dispersion import DispersionPoint, Regime, Resonance, WaveParams, resonance_sigma
from errors import AbsentEntryError, DomainError
from funcspace import gauss_legendre_01
from reduction import ReductionCache
from settings import DELTA_GUARD

Order = Tuple[int, int]
# (ℓ, m, n): степени δ, γ, ε
Monomial = Tuple[int, int, int]


@dataclass(frozen=True)
class MonodromySeries:
    """Матрицы a^(m,n)(T) в порядке мод labels"""
    sigma: float
    dim: int
    labels: Tuple[int, ...]
    period: float
    point: DispersionPoint
    coeffs: Dict[Order, np.ndarray]
    provenance: Dict[Tuple[int, int, int, int], str] = field(default_factory=dict)
    resonance: Optional[Resonance] = None

    @property
    def regime(self) -> str:
        return "zero" if self.point.regime == Regime.AT_ZERO else "high"

    def entry(self, m: int, n: int, j: int, k: int) -> complex:
        """a_jk^(m,n)(T), j и k - номера строки и столбца с единицы"""
        return complex(self.coeffs[(m, n)][j - 1, k - 1])

    def base_phase(self) -> complex:
        """e^{ik₀T}: 1 при σ = 0 и e^{ik₄T} при σ > σ_c"""
        if self.regime == "zero":
            return 1.0 + 0j
        return cmath.exp(1j * self.point.k4 * self.period)


def _regime(point: DispersionPoint) -> str:
    if point.regime == Regime.AT_ZERO:
        return "zero"
    if point.regime == Regime.ABOVE_CRITICAL:
        return "high"
    raise DomainError("матрица монодромии строится только при σ = 0 и σ > σ_c")


def _size(regime: str) -> int:
    return 4 if regime == "zero" else 2


def a_closed(regime: str, m: int, n: int, wp: WaveParams, point: Optional[DispersionPoint] = None,
             resonance: Optional[int] = None) -> Dict[Tuple[int, int], complex]:
    """Известные замкнутые элементы a^(m,n)(T); элементы "*" в словарь не входят"""
    size = _size(regime)
    if regime == "high" and (m, n) == (0, 1):
        if resonance is None:
            raise AbsentEntryError("вне резонанса a^(0,1)(T) считается только квадратурой")
        return {(j, k): 0j for j in range(1, size + 1) for k in range(1, size + 1)}
    return get_matrix(form_key((m, n), regime), wp, point)


def a_closed_entry(regime: str, m: int, n: int, j: int, k: int, wp: WaveParams,
                   point: Optional[DispersionPoint] = None, resonance: Optional[int] = None) -> complex:
    """Один замкнутый элемент; "*" даёт AbsentEntryError"""
    entries = a_closed(regime, m, n, wp, point, resonance)
    if (j, k) not in entries:
        raise AbsentEntryError(f"a_{j}{k}^({m},{n})(T): замкнутой формулы нет, нужна квадратура")
    return entries[(j, k)]


def a_quadrature(cache: ReductionCache, k: int, m: int, n: int) -> Dict[int, complex]:
    """Столбец k матрицы a^(m,n)(T) через точный x-интеграл в классе термов

    Ключи результата - позиции строк с единицы.
    """
    labels = cache.labels
    column = cache.a_column(labels[k - 1], m, n)
    result = {}
    for row, label in enumerate(labels, start=1):
        value = column[label].at_period()
        result[row] = value.scalar() if not value.is_zero() else 0j
    return result


def quadrature_oracle(cache: ReductionCache, j: int, k: int, m: int, n: int,
                      x_nodes: int = 128, y_nodes: int = 64) -> complex:
    """a_jk^(m,n)(T) двойной квадратурой Гаусса–Лежандра (независимая проверка)

    Для жордановой пары при σ = 0: a₃(T) = ∫F₃, a₄(T) = ∫((T − x)F₃ + F₄).
    """
    if (m, n) == (0, 0):
        raise DomainError("квадратура нужна только для m + n ≥ 1")
    labels = cache.labels
    pr = cache.pr
    label_k = labels[k - 1]
    forcing = cache.forcing(label_k, m, n)
    period = cache.wp.period
    t, w = gauss_legendre_01(x_nodes)
    xs, weights = period * t, period * w
    y, wy = gauss_legendre_01(y_nodes)
    X, Y = np.meshgrid(xs, y, indexing="ij")
    f_phi = forcing.phi.evaluate(X, Y)
    f_dphi = forcing.phi.dy().evaluate(X, Y)
    f_ups = forcing.upsilon.evaluate(X, Y)
    f_eta = forcing.eta.evaluate(xs)

    def F(label: int) -> np.ndarray:
        psi = pr.mode(label).psi
        p_phi = np.conj(psi.phi.evaluate(0.0, y))
        p_dphi = np.conj(psi.phi.dy().evaluate(0.0, y))
        p_ups = np.conj(psi.upsilon.evaluate(0.0, y))
        p_eta = complex(np.conj(psi.eta.evaluate(0.0)))
        inside = f_phi * p_phi + f_dphi * p_dphi + f_ups * p_ups
        return inside @ wy + f_eta * p_eta

    label_j = labels[j - 1]
    if pr.point.regime == Regime.AT_ZERO and label_j in (3, 4):
        F3 = F(3)
        if label_j == 3:
            return complex(np.sum(weights * F3))
        return complex(np.sum(weights * ((period - xs) * F3 + F(4))))
    kj = pr.mode(label_j).k
    integrand = np.exp(-1j * kj * xs) * F(label_j)
    return complex(cmath.exp(1j * kj * period) * np.sum(weights * integrand))


def _orders(max_order: int) -> List[Order]:
    return [(m, total - m) for total in range(max_order + 1) for m in range(total, -1, -1)]


def build_series(wp: WaveParams, sigma: float, max_order: int = 2, resonance: Optional[int] = None,
                 orders: Optional[Iterable[Order]] = None, prefer_closed: bool = True,
                 cache: Optional[ReductionCache] = None) -> MonodromySeries:
    """Ряд a^(m,n)(T) для m + n ≤ max_order; пробелы в замкнутых формулах заполняются квадратурой"""
    if max_order > 2:
        raise DomainError("порядки m + n ≥ 3 не поддерживаются")
    res = resonance_sigma(wp, resonance) if resonance is not None else None
    if res is not None:
        # σ берётся из резонанса, переданное значение игнорируется
        sigma = res.sigma_N
    cache = cache or ReductionCache(wp, sigma, resonance=resonance, point=res.point if res else None)
    point = cache.pr.point
    regime = _regime(point)
    size = _size(regime)
    wanted = list(orders) if orders is not None else _orders(max_order)
    if (0, 0) not in wanted:
        wanted.insert(0, (0, 0))

    coeffs: Dict[Order, np.ndarray] = {}
    provenance: Dict[Tuple[int, int, int, int], str] = {}
    for m, n in wanted:
        matrix = np.zeros((size, size), dtype=complex)
        closed: Dict[Tuple[int, int], complex] = {}
        if prefer_closed or (m, n) == (0, 0):
            try:
                closed = a_closed(regime, m, n, wp, point, resonance)
            except AbsentEntryError:
                closed = {}
        for k in range(1, size + 1):
            column = None
            for j in range(1, size + 1):
                if (j, k) in closed:
                    matrix[j - 1, k - 1] = closed[(j, k)]
                    provenance[(m, n, j, k)] = "closed"
                    continue
                if (m, n) == (0, 0):
                    raise DomainError("a^(0,0)(T) задаётся только замкнутой формулой")
                column = column or a_quadrature(cache, k, m, n)
                matrix[j - 1, k - 1] = column[j]
                provenance[(m, n, j, k)] = "quadrature"
        coeffs[(m, n)] = matrix
    reporting.info(f"ряд монодромии σ = {sigma:.12g}: порядки {sorted(coeffs)}")
    return MonodromySeries(sigma=sigma, dim=size, labels=tuple(cache.labels), period=wp.period, point=point,
                           coeffs=coeffs, provenance=provenance, resonance=res)


def monodromy_matrix(ms: MonodromySeries, delta: complex, eps: float) -> np.ndarray:
    """X(T; σ, δ, ε) из усечённого ряда"""
    total = np.zeros((ms.dim, ms.dim), dtype=complex)
    for (m, n), matrix in ms.coeffs.items():
        total = total + matrix * (delta ** m) * (eps ** n)
    return total


def cofactor_det(matrix) -> complex:
    """Определитель разложением по первой строке (размеры 1–4)"""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = 0
    for col in range(size):
        minor = [[row[c] for c in range(size) if c != col] for row in matrix[1:]]
        term = matrix[0][col] * cofactor_det(minor)
        total = total + term if col % 2 == 0 else total - term
    return total


def evans_value(ms: MonodromySeries, lam: complex, k: float, eps: float) -> complex:
    """Δ(λ, k; ε) = det(e^{ikT}I − X(T; σ, λ − iσ, ε))"""
    delta = lam - 1j * ms.sigma
    if abs(delta) > DELTA_GUARD:
        reporting.validity_warning("|δ|", abs(delta), DELTA_GUARD)
    if abs(eps) > DELTA_GUARD:
        reporting.validity_warning("|ε|", abs(eps), DELTA_GUARD)
    matrix = cmath.exp(1j * k * ms.period) * np.eye(ms.dim) - monodromy_matrix(ms, delta, eps)
    return complex(cofactor_det(matrix.tolist()))


# --- усечённые многочлены от (δ, γ, ε) ---

class TruncatedPoly:
    """Многочлен от (δ, γ, ε), усечённый по взвешенной степени

    weights задают веса переменных, cap - наибольший сохраняемый вес.
    """

    __slots__ = ("coeffs", "weights", "cap")

    def __init__(self, coeffs: Dict[Monomial, complex], weights: Tuple[int, int, int], cap: int):
        self.weights = weights
        self.cap = cap
        self.coeffs = {key: c for key, c in coeffs.items() if self.weight(key) <= cap and c != 0}

    def weight(self, key: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, key))

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        merged = dict(self.coeffs)
        for key, c in other.coeffs.items():
            merged[key] = merged.get(key, 0j) + c
        return TruncatedPoly(merged, self.weights, self.cap)

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly({k: -c for k, c in self.coeffs.items()}, self.weights, self.cap)

    def __sub__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        return self + (-other)

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        result: Dict[Monomial, complex] = {}
        for k1, c1 in self.coeffs.items():
            w1 = self.weight(k1)
            for k2, c2 in other.coeffs.items():
                if w1 + self.weight(k2) > self.cap:
                    continue
                key = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                result[key] = result.get(key, 0j) + c1 * c2
        return TruncatedPoly(result, self.weights, self.cap)

    def evaluate(self, delta: complex, gamma: complex, eps: complex) -> complex:
        return sum(c * delta ** l * gamma ** m * eps ** n for (l, m, n), c in self.coeffs.items())


@dataclass(frozen=True)
class EvansExpansion:
    """Коэффициенты d^(ℓ,m,n) разложения Δ(λ₀ + δ, k₀ + Kκ + γ; ε)"""
    d: Dict[Monomial, complex]
    K: int
    lam0: complex
    k0: float
    weights: Tuple[int, int, int]
    cap: int

    def coefficient(self, l: int, m: int, n: int) -> complex:
        return self.d.get((l, m, n), 0j)

    def scale(self) -> float:
        return max((abs(c) for c in self.d.values()), default=0.0)

    def lower_order_residual(self) -> float:
        """Наибольший |d| ниже ведущей взвешенной степени, относительно масштаба"""
        low = [abs(c) for key, c in self.d.items()
               if sum(w * e for w, e in zip(self.weights, key)) < self.cap]
        return max(low, default=0.0) / max(self.scale(), 1e-300)


def evans_expansion(ms: MonodromySeries, K: int = 0) -> EvansExpansion:
    """Разложение функции Эванса до ведущей взвешенной степени

    σ = 0: веса (1, 1, 1), степень 4; σ > σ_c: веса (2, 2, 1), степень 4
    (то есть δ, γ и ε² одного порядка).
    """
    if ms.regime == "zero":
        weights, cap, k0 = (1, 1, 1), 4, 0.0
    else:
        weights, cap, k0 = (2, 2, 1), 4, ms.point.k4
    T = ms.period
    phase = ms.base_phase()
    max_gamma = cap // weights[1]
    exp_series = TruncatedPoly({(0, m, 0): phase * (1j * T) ** m / math.factorial(m)
                                for m in range(max_gamma + 1)}, weights, cap)
    size = ms.dim
    grid: List[List[TruncatedPoly]] = []
    for row in range(size):
        line = []
        for col in range(size):
            entries = {(m, 0, n): -complex(matrix[row, col]) for (m, n), matrix in ms.coeffs.items()}
            poly = TruncatedPoly(entries, weights, cap)
            if row == col:
                poly = poly + exp_series
            line.append(poly)
        grid.append(line)
    det = _poly_det(grid, weights, cap)
    return EvansExpansion(d=dict(det.coeffs), K=K, lam0=1j * ms.sigma, k0=k0 + K * 2 * math.pi / T,
                          weights=weights, cap=cap)


def _poly_det(grid: List[List[TruncatedPoly]], weights, cap) -> TruncatedPoly:
    size = len(grid)
    total = TruncatedPoly({}, weights, cap)
    for perm in permutations(range(size)):
        sign = _perm_sign(perm)
        term = TruncatedPoly({(0, 0, 0): complex(sign)}, weights, cap)
        for row, col in enumerate(perm):
            term = term * grid[row][col]
            if not term.coeffs:
                break
        total = total + term
    return total


def _perm_sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign
