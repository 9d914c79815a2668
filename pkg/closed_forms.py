# Замкнутые формулы для элементов a^(m,n)(T) и постоянных поправок w
#
# Реестр устроен как словарь: ключ -> {"name", "regime", "entries"}.
# Элемент None означает, что замкнутой формулы нет ("*"), такие элементы
# считаются только квадратурой. Не перечисленные элементы равны нулю.

import cmath
import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from dispersion import DispersionPoint, WaveParams
from errors import AbsentEntryError, DomainError

PI = math.pi
Entry = Optional[Callable[..., complex]]


def _sc(wp: WaveParams) -> Tuple[float, float, float]:
    return wp.s, wp.c, wp.mu0


# --- σ = 0 ---

def _a10_11(wp, point=None):
    s, c, m = _sc(wp)
    return 4 * PI * c ** 3 / (m * s * (s * s - m + 1))


def _a10_33(wp, point=None):
    s, c, m = _sc(wp)
    return 2 * PI * c * (m + 1) / (m * s * (1 - m))


def _a10_41(wp, point=None):
    s, c, m = _sc(wp)
    return 4 * PI * (s * s + 1) / (m * (m - 1) * s)


def _a10_43(wp, point=None):
    s, c, m = _sc(wp)
    return 4 * PI ** 2 * (s * s + 1) / (m * m * s * s * (1 - m))


def _a01_13(wp, point=None):
    s, c, m = _sc(wp)
    return PI * (2 * s * s + 3) / (s * s - m + 1)


def _a01_41(wp, point=None):
    s, c, m = _sc(wp)
    k = wp.kappa
    # e^{2κ}/(e^{4κ} − 1) = 1/(2 sinh 2κ)
    return 4j * PI * (m - 4 * c * c) * (c * c - 1) / (2 * math.sinh(2 * k) * (m - 1))


def _a01_43(wp, point=None):
    s, c, m = _sc(wp)
    return 2 * PI * c * (m * m + m + 1) / (m * (m - 1))


def _a20_11(wp, point=None):
    s, c, m = _sc(wp)
    c2 = c * c
    real = 8 * PI ** 2 * c ** 6 / (m * m * (m - c2) ** 2 * (c2 - 1))
    imag = 2 * PI * c ** 4 * (c ** 4 + 4 * m * m * c2 - 3 * m * m - 2 * m * c2) / (m * m * (m - c2) ** 3 * (c2 - 1))
    return complex(real, imag)


def _a20_22(wp, point=None):
    return _a20_11(wp).conjugate()


def _a20_31(wp, point=None):
    s, c, m = _sc(wp)
    s2 = s * s
    return 4 * PI * (s2 + 1) * (s2 - 3 * m * s2 - 2 * m + m * m + 1) / (m * s * (m - 1) ** 2 * (s2 - m + 1))


def _a20_34(wp, point=None):
    s, c, m = _sc(wp)
    return 2 * PI * c * (c + s) / (m + c * s + c * c - m * c * c - m * c * s - 1)


def _a20_44(wp, point=None):
    s, c, m = _sc(wp)
    return -2 * PI ** 2 * (s * s + 1) / (m * m * s * s * (m - 1))


def _a11_11(wp, point=None):
    s, c, m = _sc(wp)
    return -2 * PI * (c + 2 * c ** 3) / ((m - c * c) * (m - 1))


def _a11_14(wp, point=None):
    s, c, m = _sc(wp)
    return 2 * PI * (s * s + 1) / (s * s - m + 1)


def _a11_31(wp, point=None):
    s, c, m = _sc(wp)
    left = 4 * c ** 4 + 4 * s * c ** 3 - 5 * c * c - 3 * s * c + 1
    right = -2 * c ** 4 * m * m - 4 * c ** 4 * m + 2 * c ** 4 + 3 * c * c * m * m + 2 * c * c * m - m ** 3
    bottom = c * (m - 1) ** 2 * (m - c * c) * (-4 * c ** 3 - 4 * s * c * c + 3 * c + s)
    return -2j * PI * left * right / bottom


def _a02_11(wp, point=None):
    s, c, m = _sc(wp)
    s2, s4, s6 = s * s, s ** 4, s ** 6
    top = (24 * s2 - 21 * m * s2 - 20 * m * s4 - 8 * m * s6 - 9 * m + 40 * s4 + 16 * s6
           + 15 * m * m * s2 + 16 * m * m * s4 + 8 * m * m * s6 + 9 * m * m)
    return -1j * m * PI * top / (4 * (s2 + 1) * (m - 1) * (s2 - m + 1))


def _const(value):
    return lambda wp, point=None: value


def _period(wp, point=None):
    return wp.period


def _kappa_inverse(wp, point=None):
    return 2 * PI / wp.kappa


# --- σ > σ_c ---

def _hf_parts(wp: WaveParams, point: DispersionPoint):
    k2, k4, sigma = point.k2, point.k4, point.sigma
    return k2, k4, sigma, math.cosh(k2), math.sinh(k2), math.cosh(k4), math.sinh(k4)


def _normalizer(k: float, sigma: float) -> float:
    return k * math.sinh(2 * k) + sigma * math.sinh(2 * k) + 2 * k * sigma - 2 * k * k


def a10_high_diag(k: float, sigma: float) -> float:
    """Множитель при x·e^{ikx} в диагональном элементе a^(1,0)(x)"""
    s2k = math.sinh(2 * k)
    return 2 * k * s2k / _normalizer(k, sigma)


def a12_high_constant(wp: WaveParams, point: DispersionPoint) -> complex:
    """a12,c: a12(x) = a12,c(e^{ik₂x} − e^{ik₄x})"""
    k2, k4, sg, c2, s2, c4, s4 = _hf_parts(wp, point)
    top = (k2 * k4 * k4 * c4 * s2 + k2 * k2 * k4 * c2 * s4 + 2 * k2 * k2 * k4 * c4 * s2 - k2 * sg * sg * c4 * s2
           + k4 * sg * sg * c2 * s4 - 2 * k2 * k4 * sg * c2 * s4 - 2 * k2 * k4 * sg * c4 * s2)
    half_gap = 0.5 * (k2 - k4)
    return -1j * top / (half_gap * (k2 + k4) * (k2 - sg) * _normalizer(k2, sg))


def a21_high_constant(wp: WaveParams, point: DispersionPoint) -> complex:
    """a21,c: a21(x) = a21,c(e^{ik₄x} − e^{ik₂x})"""
    k2, k4, sg, c2, s2, c4, s4 = _hf_parts(wp, point)
    top = (2 * k2 * k4 * k4 * c2 * s4 + k2 * k4 * k4 * c4 * s2 + k2 * k2 * k4 * c2 * s4 + k2 * sg * sg * c4 * s2
           - k4 * sg * sg * c2 * s4 - 2 * k2 * k4 * sg * c2 * s4 - 2 * k2 * k4 * sg * c4 * s2)
    half_gap = 0.5 * (k2 - k4)
    return 1j * top / (half_gap * (k2 + k4) * (k4 - sg) * _normalizer(k4, sg))


def a10_high_at(wp: WaveParams, point: DispersionPoint, x: float) -> np.ndarray:
    """a^(1,0)(x) при σ > σ_c (индексы 1, 2 соответствуют k₂, k₄)"""
    k2, k4, sigma = point.k2, point.k4, point.sigma
    e2, e4 = cmath.exp(1j * k2 * x), cmath.exp(1j * k4 * x)
    return np.array([
        [a10_high_diag(k2, sigma) * x * e2, a12_high_constant(wp, point) * (e2 - e4)],
        [a21_high_constant(wp, point) * (e4 - e2), a10_high_diag(k4, sigma) * x * e4],
    ])


def _phase(k: float, period: float) -> complex:
    return cmath.exp(1j * k * period)


CLOSED_FORMS: Dict[str, Dict] = {
    "a00_zero": {
        "name": "a^(0,0)(T), σ = 0",
        "regime": "zero",
        "entries": {(1, 1): _const(1.0), (2, 2): _const(1.0), (3, 3): _const(1.0), (4, 4): _const(1.0),
                    (4, 3): _period},
    },
    "a10_zero": {
        "name": "a^(1,0)(T), σ = 0",
        "regime": "zero",
        "entries": {(1, 1): _a10_11, (2, 2): _a10_11, (3, 3): _a10_33,
                    (4, 1): _a10_41, (4, 2): _a10_41, (4, 3): _a10_43, (4, 4): _kappa_inverse},
    },
    "a01_zero": {
        "name": "a^(0,1)(T), σ = 0",
        "regime": "zero",
        "entries": {(1, 3): _a01_13, (2, 3): _a01_13, (4, 1): _a01_41,
                    (4, 2): lambda wp, point=None: -_a01_41(wp), (4, 3): _a01_43},
    },
    "a20_zero": {
        "name": "a^(2,0)(T), σ = 0",
        "regime": "zero",
        "entries": {(1, 1): _a20_11, (2, 2): _a20_22, (3, 1): _a20_31, (3, 2): _a20_31,
                    (3, 4): _a20_34, (4, 4): _a20_44,
                    (1, 3): None, (2, 3): None, (3, 3): None, (4, 1): None, (4, 2): None, (4, 3): None},
    },
    "a11_zero": {
        "name": "a^(1,1)(T), σ = 0",
        "regime": "zero",
        "entries": {(1, 1): _a11_11, (1, 2): _a11_11, (2, 1): _a11_11, (2, 2): _a11_11,
                    (1, 4): _a11_14, (2, 4): _a11_14, (3, 1): _a11_31,
                    (1, 3): None, (2, 3): None, (3, 2): None, (3, 3): None,
                    (4, 1): None, (4, 2): None, (4, 3): None, (4, 4): None},
    },
    "a02_zero": {
        "name": "a^(0,2)(T), σ = 0",
        "regime": "zero",
        "entries": {(1, 1): _a02_11,
                    (1, 2): None, (1, 3): None, (2, 1): None, (2, 2): None, (2, 3): None,
                    (3, 1): None, (3, 2): None, (3, 3): None, (4, 1): None, (4, 2): None, (4, 3): None},
    },
    "a00_high": {
        "name": "a^(0,0)(T), σ > σ_c",
        "regime": "high",
        "entries": {(1, 1): lambda wp, point: _phase(point.k2, wp.period),
                    (2, 2): lambda wp, point: _phase(point.k4, wp.period)},
    },
    "a10_high": {
        "name": "a^(1,0)(T), σ > σ_c",
        "regime": "high",
        "entries": {(j, k): (lambda wp, point, j=j, k=k: complex(a10_high_at(wp, point, wp.period)[j - 1, k - 1]))
                    for j in (1, 2) for k in (1, 2)},
    },
}

ORDER_KEYS = {"zero": {(0, 0): "a00_zero", (1, 0): "a10_zero", (0, 1): "a01_zero",
                       (2, 0): "a20_zero", (1, 1): "a11_zero", (0, 2): "a02_zero"},
              "high": {(0, 0): "a00_high", (1, 0): "a10_high"}}


def form_key(order: Tuple[int, int], regime: str) -> str:
    """Ключ реестра для порядка (m, n); AbsentEntryError, если формул нет"""
    key = ORDER_KEYS.get(regime, {}).get(tuple(order))
    if key is None:
        raise AbsentEntryError(f"для a^{tuple(order)} в режиме {regime} замкнутых формул нет")
    return key


def get_entry(key: str, j: int, k: int, wp: WaveParams, point: Optional[DispersionPoint] = None) -> complex:
    """Элемент (j, k) по ключу реестра"""
    if key not in CLOSED_FORMS:
        raise DomainError(f"неизвестная замкнутая формула {key}")
    form = CLOSED_FORMS[key]
    size = 4 if form["regime"] == "zero" else 2
    if not (1 <= j <= size and 1 <= k <= size):
        raise DomainError(f"индекс ({j}, {k}) вне матрицы {size}×{size}")
    entries = form["entries"]
    if (j, k) not in entries:
        return 0j
    entry = entries[(j, k)]
    if entry is None:
        raise AbsentEntryError(f"{form['name']}: элемент ({j}, {k}) известен только квадратурой")
    if form["regime"] == "high":
        if point is None:
            raise DomainError("для σ > σ_c нужна точка дисперсии")
        return complex(entry(wp, point))
    return complex(entry(wp))


def get_matrix(key: str, wp: WaveParams, point: Optional[DispersionPoint] = None) -> Dict[Tuple[int, int], complex]:
    """Все известные элементы; отсутствующие пропускаются"""
    size = 4 if CLOSED_FORMS[key]["regime"] == "zero" else 2
    result = {}
    for j in range(1, size + 1):
        for k in range(1, size + 1):
            try:
                result[(j, k)] = get_entry(key, j, k, wp, point)
            except AbsentEntryError:
                continue
    return result


def absent_entries(key: str):
    return sorted(jk for jk, entry in CLOSED_FORMS[key]["entries"].items() if entry is None)


def list_available_forms() -> Dict[str, str]:
    """Ключи реестра с описаниями"""
    return {key: form["name"] for key, form in CLOSED_FORMS.items()}


# --- постоянные поправок w при σ = 0 ---

def w10_zero_constants(wp: WaveParams) -> Dict[str, complex]:
    """w₁^(1,0) = e^{−iκx}(P, −i tanh κ P, −i tanh κ P(1)), P = b11·y sinh κy + b12 + b13 cosh κy"""
    s, c, _ = _sc(wp)
    k = wp.kappa
    return {
        "b11": -2j * k * c * c / (k - c * s),
        "b12": -2j * c * c / (s - k * c),
        "b13": -1j * (2 * k * c ** 4 + c ** 3 * s - 3 * k * c * c) / (k - c * s) ** 2,
    }


def w10_zero_mode3(wp: WaveParams) -> Dict[str, float]:
    """w₃^(1,0) = (q2·y² + q0 + qc·cosh κy, 0, 0)"""
    s, c, _ = _sc(wp)
    k = wp.kappa
    return {
        "y2": -k * c / (s - k * c),
        "const": k * c * (3 * s - k * c) / (3 * (s - k * c) ** 2),
        "cosh": 4 * c / (k * (k - c * s)),
    }


def w01_zero_constants(wp: WaveParams) -> Dict[str, complex]:
    """Постоянные w₁^(0,1) при σ = 0"""
    s, c, _ = _sc(wp)
    k = wp.kappa
    shared = 2 * k * c * s - 2 * c * c + 2
    return {
        "b11": k * k * c,
        "b12": -k * (4 * c * c * s - k * c) / (4 * s - 4 * k * c),
        "b13": (2 * k * k * c ** 3 + k * k * c + k * c * c * s) / (2 * (k - c * s)),
        "b14": 3 * k * k * c / (4 * s ** 3),
        "b21": -1j * k * k * s,
        "b22": 1j * k * (k * c - k * c ** 3 + 2 * c * s - 2 * c ** 3 * s) / shared,
        "b23": 1j * k * (4 * k - 3 * k * c ** 4 - k * c * c + c * s - c ** 3 * s) / (2 * s * (k - c * s)),
        "b24": -3j * k * k / (2 * s * s),
        "b25": 1j * k * (k * c * c + k * c ** 3 - k - k * c + 2 * c * s - 2 * c ** 3 * s) / shared,
        "b26": 1j * k * (2 * k * s + c - c ** 3 - k * c * c * s) / (2 * k - 2 * c * s),
    }


def w01_zero_mode3(wp: WaveParams) -> Dict[str, float]:
    """w₃^(0,1) = (sin κx·Q, tanh κ cos κx·Q, ·), Q = b31·y sinh κy + b32 + b33 cosh κy"""
    s, c, _ = _sc(wp)
    k = wp.kappa
    return {
        "b31": (-2 * k * k * c * c - k * c * s) / (k - c * s),
        "b32": -c * (s + 2 * k * c) / (s - k * c),
        "b33": (c * c - c ** 4 + 6 * k * k * c * c - 4 * k * k * c ** 4 + 3 * k * c * s - 4 * k * c ** 3 * s)
               / (2 * k * k + 2 * c * c * s * s - 4 * k * c * s),
    }


def _adjoint_p(k: float, sigma: float, m: float) -> Tuple[float, float]:
    """p₁,j и p₂,j сопряжённой функции моды с волновым числом k"""
    d = k * math.sinh(2 * k) + sigma * math.sinh(2 * k) + 2 * k * sigma - 2 * k * k
    p1 = 2 * math.cosh(k) * (sigma ** 2 - 1) * (k - sigma) ** 2 / (m * m * math.sinh(1.0) * (k * k - 1) * d)
    p2 = (2 * k * k - 2 * sigma ** 2) / (m * (k * k - 1) * d)
    return p1, p2


def _w01_high_p12(k: float, k2: float, sg: float, c2: float, s2: float, c: float, s: float) -> Tuple[complex, complex]:
    d = (k2 * k2 - k * k) ** 2 * (k2 * math.sinh(2 * k2) + sg * math.sinh(2 * k2) + 2 * k2 * sg - 2 * k2 * k2)
    num1 = (
        k2**6*k*s + 4*k2**2*k**4*c + k2**2*k**6*c - 2*k2**4*k**4*c + k2**6*k**2*c - k2**2*k**5*s
        + 2*k2**2*k**5*c2**2*s - 2*k2**4*k**3*c2**2*s + 2*k2**3*k**4*sg*c - k2**5*k**2*sg*c
        + 2*k2**3*k**3*sg*s - k2*k**6*sg*c - k2*k**5*sg*s - k2**5*k*sg*s - 4*k2**2*k**4*c2**2*c
        + k2*k**6*c2*c*s2 - k**6*sg*c2*c*s2 + 3*k2*k**5*c2*s2*s + k2**5*k*c2*s2*s - k**5*sg*c2*s2*s
        - 4*k2**3*k**4*c2*c*s2 + 3*k2**5*k**2*c2*c*s2 - k2**4*k*sg*c2*s2*s + 2*k2**2*k**4*sg*c2*c*s2
        - k2**4*k**2*sg*c2*c*s2 + 2*k2**2*k**3*sg*c2*s2*s
    )
    num2 = (
        k**6*c2**3*s - 2*k2**6*c2*s - k**6*c2*s - 4*k2**2*k**4*c2**3*s + 3*k2**4*k**2*c2**3*s
        + 2*k2**5*sg*c2*s + k**6*sg*s2*s - 4*k2**2*k**3*c2*c + 2*k2**2*k**4*c2*s + k2**4*k**2*c2*s
        + 4*k2**2*k**3*c2**3*c - 4*k2**3*k**2*sg*c2*s - 2*k2**2*k**4*sg*s2*s + k2**4*k**2*sg*s2*s
        - 2*k2*k**5*c2**2*c*s2 - 4*k2**5*k*c2**2*c*s2 - 2*k2*k**4*c2**2*s2*s + 2*k2*k**4*sg*c2*s
        + 6*k2**3*k**3*c2**2*c*s2 - 2*k2**3*k**2*c2**2*s2*s
    )
    return -num1 / d, -1j * k2 * num2 / (c2 * d)


def _w01_high_p34(k, k2, k4, sg, c2, s2, c4, s4, c, s, m) -> Tuple[complex, complex]:
    p12, p22 = _adjoint_p(k2, sg, m)
    s1 = math.sinh(1.0)
    d2, d4, d24 = k2 - sg, k4 - sg, k2 * k2 - k4 * k4
    dk = k4 * k4 - k * k
    # общий множитель слагаемых, пришедших от моды k₄
    g4 = c4 * (k4 * k4 - 1) * d4 ** 2 / (k4 * s4 * (k4 + sg) * d2)
    p3 = p22 * (
        k2 * k * c2 * d2 * (k4 ** 2 * c4 * s + k * k * c4 * s + k4 * k ** 3 * c * s4 + k4 ** 3 * k * c * s4
                            - 2 * k4 ** 2 * k * k * c4 * s - 2 * k4 * k * c * s4) / dk ** 2
        + k2 ** 2 * k * sg * s2 * g4 * (k4 ** 2 * c4 * s + k * k * c4 * s - 2 * k4 * k * c * s4) / dk ** 2
        + k2 * k * c2 * d2 * (k * c4 * c - k4 * s4 * s - k4 ** 2 * c4 * s - k4 ** 2 * k * c4 * c + k4 * k * k * s4 * s
                              + k4 * k * c * s4) / dk
        + k2 * k * s2 * g4 * (2 * k * k * c4 * s - 2 * k4 * k * c * s4 + k2 * k * sg * c4 * c
                              - k2 * k4 * sg * s4 * s) / dk
        + k * c2 * s * d2 ** 2 * (k2 ** 2 * c4 * s2 + k4 ** 2 * c4 * s2 + k2 * k4 ** 3 * c2 * s4
                                  + k2 ** 3 * k4 * c2 * s4 - 2 * k2 ** 2 * k4 ** 2 * c4 * s2
                                  - 2 * k2 * k4 * c2 * s4) / (s2 * d24 ** 2)
        - k2 * k * s * d2 ** 2 * g4 * (k2 ** 2 * c4 * s2 + k4 ** 2 * c4 * s2 - 2 * k2 * k4 * c2 * s4) / d24 ** 2
        - k * s * d2 / (s2 * d24) * (
            k2 ** 2 * c2 - k2 * sg * c2 - k2 ** 2 * k4 ** 2 * c2 - k2 * sg * c4 * s2 ** 2 + k2 ** 2 * k4 * c2 ** 2 * s4
            + k2 * k4 ** 2 * sg * c2 - k2 * k4 ** 2 * c2 * c4 * s2 + k2 * k4 ** 2 * sg * c4 * s2 ** 2
            + k4 ** 2 * sg * c2 * c4 * s2 - k2 * k4 * sg * c2 ** 2 * s4 + k4 * sg * c2 * s2 * s4
            - k2 ** 2 * k4 * sg * c2 * s2 * s4)
        + k2 * k * g4 / (c2 * d24) * (
            2 * k2 ** 3 * c2 ** 2 * c4 * s - k2 ** 3 * c2 * s + k2 * sg ** 2 * c2 * s
            - 2 * k2 ** 2 * sg * c2 ** 2 * c4 * s + k2 * sg ** 2 * c4 * s2 ** 2 * s + k2 ** 2 * sg * c4 * s2 ** 2 * s
            - k4 * sg ** 2 * c2 * s2 * s4 * s
            + k2 * k4 * k * c2 ** 2 * c * s4 - k4 * k * sg * c2 ** 2 * c * s4 - k2 ** 2 * k * c2 * c4 * c * s2
            - 2 * k2 ** 2 * k4 * c2 * s2 * s4 * s + k2 * k4 * sg * c2 * s2 * s4 * s + k2 * k * sg * c2 * c4 * c * s2)
        + k * c2 * c4 * s * (k4 * k4 - 1) * d2 * (s2 - k2 * c2 + sg * c2) / (s2 * (k4 + sg))
    ) - p12 * k * s1 * c2 * s * d2 ** 2
    p4 = 1j * p22 * (
        k2 ** 2 * k * k * s2 * g4 * (k4 ** 2 * c4 * s + k * k * c4 * s - 2 * k4 * k * c * s4) / dk ** 2
        + k2 ** 2 * k * k * s2 * g4 * (k * c4 * c - k4 * s4 * s) / dk
        + k * c2 * c * d2 ** 2 * (k2 * c4 * s2 - k4 * c2 * s4 - k2 * k4 ** 2 * c4 * s2
                                 + k2 ** 2 * k4 * c2 * s4) / (s2 * d24)
        + k2 * g4 / (c2 * d24) * (
            k2 ** 2 * k * k * c2 * s - 2 * k2 ** 2 * k4 * c2 ** 2 * s4 * s + 2 * k2 ** 3 * c2 * c4 * s2 * s
            - k2 * k * k * sg * c2 * s + k2 * k * k * sg * c4 * s - k2 ** 2 * k * k * c2 ** 2 * c4 * s
            + 2 * k2 * k4 * sg * c2 ** 2 * s4 * s - k2 ** 2 * k4 * k * c2 ** 2 * c * s4 + k2 ** 3 * k * c2 * c4 * c * s2
            + k4 * k * sg ** 2 * c2 ** 2 * c * s4 - 2 * k2 ** 2 * sg * c2 * c4 * s2 * s
            - k2 * k * sg ** 2 * c2 * c4 * c * s2 + k2 * k4 * k * k * c2 * s2 * s4 * s)
        + c2 * c4 * (k4 * k4 - 1) * d2 / (k4 + sg) * (sg * s - k2 * s + k2 * k * c)
    ) + 1j * p12 * k * s1 * c2 ** 2 * c * d2 ** 2 / s2
    return p3, p4


def _w01_high_b67(k, k2, sg, c2, s2, c, s) -> Tuple[float, float]:
    """Амплитуды при cosh((k₂ ± κ)y)"""
    num6 = (
        2*k2**3*k**3*c2**2*s2 + 6*k2**4*k**2*c2**2*s2 - 4*k2**6*c2**3*c*s + 2*k**2*sg**4*c2**2*s2
        - 2*k**3*sg**3*c2**2*s2 - 2*k2**3*k**2*c2**3*c**2 + 4*k2**4*k*c2*c**2 + 4*k2**5*k*c2**2*s2
        + 4*k2**6*c2*c*s + 2*k2**3*k**2*c2*c**2 - 4*k2**4*k*c2**3*c**2 + 10*k2**5*k*c2*c*s
        + 4*k2*k*sg**4*c2**2*s2 - 16*k2**4*k*sg*c2**2*s2 - 16*k2**5*sg*c2*c*s
        + 2*k2**3*k**3*c2**2*c**2*s2 + 8*k2**4*k**2*c2**2*c**2*s2 - 2*k**2*sg**4*c2**2*c**2*s2
        - 2*k2*k**2*sg**2*c2*c**2 - 4*k2**2*k*sg**2*c2*c**2 + 4*k2**2*k**2*sg*c2*c**2
        + 2*k2**3*k**3*c2*c*s + 8*k2**4*k**2*c2*c*s - 6*k2**5*k*c2**3*c*s - 12*k2*k**2*sg**3*c2**2*s2
        + 6*k2*k**3*sg**2*c2**2*s2 - 16*k2**2*k*sg**3*c2**2*s2 - 6*k2**2*k**3*sg*c2**2*s2
        + 24*k2**3*k*sg**2*c2**2*s2 - 20*k2**3*k**2*sg*c2**2*s2 + 4*k2**2*sg**4*c2*c*s
        - 16*k2**3*sg**3*c2*c*s + 24*k2**4*sg**2*c2*c*s + 16*k2**5*sg*c2**3*c*s
        + 2*k2*k**2*sg**2*c2**3*c**2 + 4*k2**2*k*sg**2*c2**3*c**2 - 4*k2**2*k**2*sg*c2**3*c**2
        + 8*k2**5*k*c2**2*c**2*s2 - 2*k2**3*k**3*c2**3*c*s - 6*k2**4*k**2*c2**3*c*s
        + 24*k2**2*k**2*sg**2*c2**2*s2 - 4*k2**2*sg**4*c2**3*c*s + 16*k2**3*sg**3*c2**3*c*s
        - 24*k2**4*sg**2*c2**3*c*s + 2*k**2*sg**4*c2**3*c*s + 4*k2**5*c2**2*c*s2*s
        + 6*k2**2*k**2*sg**2*c2**2*c**2*s2 - 4*k2*k*sg**4*c2**2*c**2*s2 - 16*k2**4*k*sg*c2**2*c**2*s2
        + 16*k2**2*k**2*sg**2*c2*c*s - 4*k2*k**2*sg**3*c2**3*c*s - 2*k2*k**3*sg**2*c2**3*c*s
        + 4*k2**2*k**3*sg*c2**3*c*s - 12*k2**3*k*sg**2*c2**3*c*s + 12*k2**3*k**2*sg*c2**3*c*s
        + 2*k2**4*k*c2**2*c*s2*s - 4*k2*sg**4*c2**2*c*s2*s - 8*k2**4*sg*c2**2*c*s2*s
        - 2*k*sg**4*c2**2*c*s2*s + 2*k2*k*sg**4*c2*c*s - 32*k2**4*k*sg*c2*c*s
        + 4*k2*k**2*sg**3*c2**2*c**2*s2 + 2*k2*k**3*sg**2*c2**2*c**2*s2 + 8*k2**2*k*sg**3*c2**2*c**2*s2
        - 4*k2**2*k**3*sg*c2**2*c**2*s2 + 4*k2**3*k*sg**2*c2**2*c**2*s2 - 16*k2**3*k**2*sg*c2**2*c**2*s2
        - 4*k2**2*k**2*sg**2*c2**3*c*s + 8*k2**2*sg**3*c2**2*c*s2*s - 4*k2*k**2*sg**3*c2*c*s
        + 2*k2*k**3*sg**2*c2*c*s - 16*k2**2*k*sg**3*c2*c*s - 4*k2**2*k**3*sg*c2*c*s
        + 36*k2**3*k*sg**2*c2*c*s - 20*k2**3*k**2*sg*c2*c*s + 2*k2*k*sg**4*c2**3*c*s
        + 16*k2**4*k*sg*c2**3*c*s - 8*k2**2*k*sg**2*c2**2*c*s2*s + 8*k2*k*sg**3*c2**2*c*s2*s
    )
    den6 = (
        12*k2**2*k**2*c2**3*c**2 - 4*k**2*sg**2*c2**3*c**2 - 4*k2*k**3*c2*c**2 - 8*k2**3*k*c2*c**2
        - 8*k2**4*c*s2*s - 12*k2**2*k**2*c2*c**2 + 4*k2*k**3*c2**3*c**2 + 8*k2**3*k*c2**3*c**2
        + 4*k**2*sg**2*c2*c**2 + 8*k2*k*sg**2*c2*c**2 - 4*k2*k**3*c*s2*s - 20*k2**3*k*c*s2*s
        + 16*k2**3*sg*c*s2*s - 8*k2*k*sg**2*c2**3*c**2 - 16*k2**2*k**2*c*s2*s - 8*k2**2*sg**2*c*s2*s
        + 4*k2*k**3*c2**2*c*s2*s + 8*k2**3*k*c2**2*c*s2*s - 4*k2*k*sg**2*c*s2*s + 8*k2*k**2*sg*c*s2*s
        + 24*k2**2*k*sg*c*s2*s + 12*k2**2*k**2*c2**2*c*s2*s - 4*k**2*sg**2*c2**2*c*s2*s
        - 8*k2*k*sg**2*c2**2*c*s2*s
    )
    num7 = (
        6*k2**4*k**2*c2**2*s2 - 2*k2**3*k**3*c2**2*s2 + 4*k2**6*c2**3*c*s + 2*k**2*sg**4*c2**2*s2
        + 2*k**3*sg**3*c2**2*s2 - 2*k2**3*k**2*c2**3*c**2 - 4*k2**4*k*c2*c**2 - 4*k2**5*k*c2**2*s2
        - 4*k2**6*c2*c*s + 2*k2**3*k**2*c2*c**2 + 4*k2**4*k*c2**3*c**2 + 10*k2**5*k*c2*c*s
        - 4*k2*k*sg**4*c2**2*s2 + 16*k2**4*k*sg*c2**2*s2 + 16*k2**5*sg*c2*c*s
        - 2*k2**3*k**3*c2**2*c**2*s2 + 8*k2**4*k**2*c2**2*c**2*s2 - 2*k**2*sg**4*c2**2*c**2*s2
        - 2*k2*k**2*sg**2*c2*c**2 + 4*k2**2*k*sg**2*c2*c**2 + 4*k2**2*k**2*sg*c2*c**2
        + 2*k2**3*k**3*c2*c*s - 8*k2**4*k**2*c2*c*s - 6*k2**5*k*c2**3*c*s - 12*k2*k**2*sg**3*c2**2*s2
        - 6*k2*k**3*sg**2*c2**2*s2 + 16*k2**2*k*sg**3*c2**2*s2 + 6*k2**2*k**3*sg*c2**2*s2
        - 24*k2**3*k*sg**2*c2**2*s2 - 20*k2**3*k**2*sg*c2**2*s2 - 4*k2**2*sg**4*c2*c*s
        + 16*k2**3*sg**3*c2*c*s - 24*k2**4*sg**2*c2*c*s - 16*k2**5*sg*c2**3*c*s
        + 2*k2*k**2*sg**2*c2**3*c**2 - 4*k2**2*k*sg**2*c2**3*c**2 - 4*k2**2*k**2*sg*c2**3*c**2
        - 8*k2**5*k*c2**2*c**2*s2 - 2*k2**3*k**3*c2**3*c*s + 6*k2**4*k**2*c2**3*c*s
        + 24*k2**2*k**2*sg**2*c2**2*s2 + 4*k2**2*sg**4*c2**3*c*s - 16*k2**3*sg**3*c2**3*c*s
        + 24*k2**4*sg**2*c2**3*c*s - 2*k**2*sg**4*c2**3*c*s - 4*k2**5*c2**2*c*s2*s
        + 6*k2**2*k**2*sg**2*c2**2*c**2*s2 + 4*k2*k*sg**4*c2**2*c**2*s2 + 16*k2**4*k*sg*c2**2*c**2*s2
        - 16*k2**2*k**2*sg**2*c2*c*s + 4*k2*k**2*sg**3*c2**3*c*s - 2*k2*k**3*sg**2*c2**3*c*s
        + 4*k2**2*k**3*sg*c2**3*c*s - 12*k2**3*k*sg**2*c2**3*c*s - 12*k2**3*k**2*sg*c2**3*c*s
        + 2*k2**4*k*c2**2*c*s2*s + 4*k2*sg**4*c2**2*c*s2*s + 8*k2**4*sg*c2**2*c*s2*s
        - 2*k*sg**4*c2**2*c*s2*s + 2*k2*k*sg**4*c2*c*s - 32*k2**4*k*sg*c2*c*s
        + 4*k2*k**2*sg**3*c2**2*c**2*s2 - 2*k2*k**3*sg**2*c2**2*c**2*s2 - 8*k2**2*k*sg**3*c2**2*c**2*s2
        + 4*k2**2*k**3*sg*c2**2*c**2*s2 - 4*k2**3*k*sg**2*c2**2*c**2*s2 - 16*k2**3*k**2*sg*c2**2*c**2*s2
        + 4*k2**2*k**2*sg**2*c2**3*c*s - 8*k2**2*sg**3*c2**2*c*s2*s + 4*k2*k**2*sg**3*c2*c*s
        + 2*k2*k**3*sg**2*c2*c*s - 16*k2**2*k*sg**3*c2*c*s - 4*k2**2*k**3*sg*c2*c*s
        + 36*k2**3*k*sg**2*c2*c*s + 20*k2**3*k**2*sg*c2*c*s + 2*k2*k*sg**4*c2**3*c*s
        + 16*k2**4*k*sg*c2**3*c*s - 8*k2**2*k*sg**2*c2**2*c*s2*s + 8*k2*k*sg**3*c2**2*c*s2*s
    )
    den7 = (
        4*k**2*sg**2*c2**3*c**2 - 12*k2**2*k**2*c2**3*c**2 - 4*k2*k**3*c2*c**2 - 8*k2**3*k*c2*c**2
        - 8*k2**4*c*s2*s + 12*k2**2*k**2*c2*c**2 + 4*k2*k**3*c2**3*c**2 + 8*k2**3*k*c2**3*c**2
        - 4*k**2*sg**2*c2*c**2 + 8*k2*k*sg**2*c2*c**2 + 4*k2*k**3*c*s2*s + 20*k2**3*k*c*s2*s
        + 16*k2**3*sg*c*s2*s - 8*k2*k*sg**2*c2**3*c**2 - 16*k2**2*k**2*c*s2*s - 8*k2**2*sg**2*c*s2*s
        - 4*k2*k**3*c2**2*c*s2*s - 8*k2**3*k*c2**2*c*s2*s + 4*k2*k*sg**2*c*s2*s + 8*k2*k**2*sg*c*s2*s
        - 24*k2**2*k*sg*c*s2*s + 12*k2**2*k**2*c2**2*c*s2*s - 4*k**2*sg**2*c2**2*c*s2*s
        + 8*k2*k*sg**2*c2**2*c*s2*s
    )
    return num6 / den6, num7 / den7


def w01_high_constants(wp: WaveParams, point: DispersionPoint) -> Dict[str, complex]:
    """Постоянные w₁^(0,1) при σ > σ_c (столбец моды k₂)

    φ = e^{ik₂x}((b11 sin κx + b12 cos κx) cosh k₂y + b13 sin κx·y sinh κy + k₂κc cos κx·y sinh k₂y
        + (b14 sin κx + b15 cos κx) cosh k₄y + b16 e^{iκx} cosh (k₂+κ)y + b17 e^{−iκx} cosh (k₂−κ)y),
    υ = e^{ik₂x}((b18 sin κx + b19 cos κx) cosh k₂y + (b110 sin κx + b111 cos κx) cosh k₄y
        + (b112 sin κx + tanh κ·b13 cos κx) y sinh κy − k₂κs sin κx sinh k₂y + ik₂s(k₂−σ) cos κx·y sinh k₂y
        + i(k₂+κ−σ)/μ₀·b16 e^{iκx} cosh (k₂+κ)y + i(k₂−κ−σ)/μ₀·b17 e^{−iκx} cosh (k₂−κ)y),
    η = υ(x, 1).

    Для b112 замкнутой формулы нет: её даёт связь υ = μ₀⁻¹(φ_x − iσφ − f₁) вместе с правой частью.
    """
    k2, k4, sg, k = point.k2, point.k4, point.sigma, wp.kappa
    s, c, m = _sc(wp)
    c2, s2, c4, s4 = math.cosh(k2), math.sinh(k2), math.cosh(k4), math.sinh(k4)
    d2 = k2 - sg
    p1, p2 = _w01_high_p12(k, k2, sg, c2, s2, c, s)
    p3, p4 = _w01_high_p34(k, k2, k4, sg, c2, s2, c4, s4, c, s, m)
    b67 = _w01_high_b67(k, k2, sg, c2, s2, c, s)
    bracket = k2 ** 2 * c2 * s + sg ** 2 * c2 * s - k2 * k * c * s2 - 2 * k2 * sg * c2 * s
    b11 = (-4j * k2 ** 2 * bracket / (k * s2 * (4 * k2 ** 2 - k * k))
           - p2 * c2 * d2 ** 2 / (k2 * k * s2))
    b12 = 2 * k2 * bracket / (s2 * (4 * k2 ** 2 - k * k)) + p1 * c2 * d2 ** 2 / (k2 * k * s2)
    b13 = 1j * k * c2 * d2
    den45 = k4 * s4 * (2 * k2 * k4 - k2 ** 2 - k4 ** 2 + k * k)
    b14 = 1j * c4 * (k4 - sg) ** 2 * ((k4 - k2) * p3 + 1j * k * p4) / den45
    b15 = -1j * c4 * (k4 - sg) ** 2 * ((k2 - k4) * p4 + 1j * k * p3) / den45
    return {
        "p1": p1, "p2": p2, "p3": p3, "p4": p4,
        "b11": b11, "b12": b12, "b13": b13, "b14": b14, "b15": b15,
        "b16": b67[0], "b17": b67[1],
        "b18": 1j * d2 / m * b11 - k / m * b12 + p1 - sg * (c * c - 1) / c * d2,
        "b19": k / m * b11 + 1j * d2 / m * b12 + p2 - 1j * k2 * k * c,
        "b110": 1j * d2 / m * b14 - k / m * b15 + p3,
        "b111": k / m * b14 + 1j * d2 / m * b15 + p4,
        "phi_cos_ysinh_k2": k2 * k * c,
        "ups_cos_ysinh_kappa": math.tanh(k) * b13,
        "ups_sin_sinh_k2": -k2 * k * s,
        "ups_cos_ysinh_k2": 1j * k2 * s * d2,
        "ups_ratio_plus": 1j * (k2 + k - sg) / m,
        "ups_ratio_minus": 1j * (k2 - k - sg) / m,
    }
