"""
Операторы B^(m,n)(x; σ) разложения возмущения по δ и ε, 1 ≤ m + n ≤ 2
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Set

from dispersion import WaveParams
from errors import DomainError
from funcspace import FrequencyLattice, StateVec, TermFunction, vsub
from stokes import StokesTraces, build_stokes, stokes_traces

SUPPORTED_ORDERS = ((1, 0), (2, 0), (0, 1), (1, 1), (0, 2))


@dataclass(frozen=True)
class BOrder:
    """Порядок (m, n): m по δ, n по ε"""
    m: int
    n: int

    def __post_init__(self):
        if (self.m, self.n) not in SUPPORTED_ORDERS:
            raise DomainError(f"оператор B^({self.m},{self.n}) не поддерживается")


@lru_cache(maxsize=64)
def traces_for(wp: WaveParams, lattice: FrequencyLattice) -> StokesTraces:
    """Следы полей Стокса на заданной решётке (один раз на пару)"""
    return stokes_traces(build_stokes(wp, lattice))


class _Parts:
    """Производные и следы компонент u, нужные во всех формулах"""

    def __init__(self, u: StateVec):
        self.phi = u.phi
        self.phi_y = u.phi.dy()
        self.phi_yy = self.phi_y.dy()
        self.phi_1 = u.phi.at_y(1.0)
        self.phi_y1 = self.phi_y.at_y(1.0)
        self.ups = u.upsilon
        self.ups_y = u.upsilon.dy()
        self.ups_1 = u.upsilon.at_y(1.0)
        self.eta = u.eta


def _b10(m: float, sigma: float, u: _Parts) -> StateVec:
    return StateVec(u.phi, -u.ups - u.phi * (2j * sigma / m), u.eta)


def _b20(m: float, sigma: float, u: _Parts) -> StateVec:
    zero = TermFunction.zero(u.phi.lattice)
    return StateVec(zero, -u.phi / m, zero)


def _b01(m: float, s: float, t: StokesTraces, u: _Parts) -> StateVec:
    i = 1j
    y_p1_y = t.phi1_y.times_y()
    y_p1_xy = t.phi1_xy.times_y()
    first = (u.phi * (i * s * t.p1x)
             + u.phi_y * (t.eta1_x.times_y() + t.p1y)
             - y_p1_y * u.phi_y1
             + u.ups * (m * t.p1x - i * s * t.p1y)
             + y_p1_y * u.eta * (i * s))
    second = (u.phi * (i * s ** 3 * t.p1y + m * s * s * t.p1x - i * m * s * t.p1xx) / m ** 2
              - u.phi_y * (t.p1xy + 2 * i * s * t.p1y) / m
              + u.phi_yy * (m * t.p1x + 2 * m * t.eta1 - i * s * t.p1y) / m ** 2
              + u.phi_y1 * (i * s * y_p1_y - y_p1_xy) / m
              + u.ups * (i * s * t.p1xy - m * t.p1xx - i * m * s * t.p1x) / m
              + u.ups_y * (t.eta1_x.times_y() - t.p1y)
              + u.eta * (2 * t.phi1_yy + s * s * y_p1_y + i * s * y_p1_xy) / m)
    third = (u.phi_1 * (i * s * t.eta1_x)
             + u.phi_y1 * (t.eta1 - t.p1x)
             + u.ups_1 * (m * t.eta1_x)
             + u.eta * (t.p1y + i * s * t.p1x))
    return StateVec(first, second, third)


def _b11(m: float, s: float, t: StokesTraces, u: _Parts) -> StateVec:
    i = 1j
    y_p1_y = t.phi1_y.times_y()
    first = u.phi * t.p1x - u.ups * t.p1y + y_p1_y * u.eta
    second = (u.phi * (3 * s * s * t.p1y - m * t.p1xx - 2 * i * m * s * t.p1x) / m ** 2
              - u.phi_y * t.p1y * (2.0 / m)
              - u.phi_yy * t.p1y / m ** 2
              + y_p1_y * u.phi_y1 / m
              + u.ups * (t.p1xy - m * t.p1x) / m
              + u.eta * (t.phi1_xy.times_y() - 2 * i * s * y_p1_y) / m)
    third = u.phi_1 * t.eta1_x + u.eta * t.p1x
    return StateVec(first, second, third)


def _b02(m: float, s: float, t: StokesTraces, u: _Parts) -> StateVec:
    i = 1j
    P1x, P1y, P1xx, P1xy = t.p1x, t.p1y, t.p1xx, t.p1xy
    P2x, P2y, P2xx, P2xy = t.p2x, t.p2y, t.p2xx, t.p2xy
    e1, e1x, e1xx = t.eta1, t.eta1_x, t.eta1_xx
    e2, e2x = t.eta2, t.eta2_x
    bar, mu2 = t.phibar2, t.mu2
    y_f1y = t.phi1_y.times_y()
    y_f1xy = t.phi1_xy.times_y()
    y_f1yy = t.phi1_yy.times_y()
    y_f2y = t.phi2_y.times_y()
    y_f2xy = t.phi2_xy.times_y()
    y2_f1yy = y_f1yy.times_y()
    P1x2, P1y2 = P1x * P1x, P1y * P1y

    first = (u.phi * (i * s * (P1x2 + bar + P2x - P1y * e1x))
             + u.phi_y * (P2y + P1x * P1y - 2 * P1y * e1 + e2x.times_y() - (e1 * e1x).times_y())
             + u.phi_1 * (i * s * y_f1y * e1x)
             + u.phi_y1 * (2 * e1 * y_f1y - P1x * y_f1y - y_f2y)
             + u.ups * (mu2 + m * P1x2 + bar * m - P1y2 + m * P2x - i * s * P2y - m * P1y * e1x
                        - i * s * P1x * P1y + i * s * P1y * e1)
             + u.ups_1 * (m * y_f1y * e1x)
             + u.eta * (i * s * y_f2y - y_f1y * e1x + P1y * y_f1y + i * s * P1x * y_f1y
                        - i * s * e1 * y_f1y))

    phi_coeff = (m * m * s * s * P1x2 - m * mu2 * s * s - s ** 4 * P1y2 + bar * m * m * s * s
                 - i * m * m * s * P2xx + i * m * s ** 3 * P2y + m * s * s * P1y2 + m * m * s * s * P2x
                 + i * m * m * s * P1xy * e1x - i * m * m * s * P1x * P1xx + m * s * s * P1y * P1xx
                 + i * m * s ** 3 * P1x * P1y - i * m * s ** 3 * P1y * e1 - m * m * s * s * P1y * e1x
                 + i * m * m * s * P1y * e1xx)
    phi_y_coeff = (2 * s * s * P1y2 - m * P2xy - 2 * i * m * s * P2y - m * P1y * P1xx + m * P1y * e1x
                   + 2 * m * e1 * P1xy - i * s * P1y * P1xy - 2 * i * m * s * P1x * P1y
                   + 4 * i * m * s * P1y * e1)
    phi_1_coeff = s * s * y_f1y * e1x + i * s * e1x * y_f1xy
    phi_yy_coeff = (m * m * P2x - m * P1y2 + 2 * m * m * e2 + m * mu2 - m * m * P1y2 - 3 * m * m * e1 * e1
                    + s * s * P1y2 + bar * m * m - i * m * s * P2y - m * m * P1y * e1x - 2 * m * m * P1x * e1
                    + i * m * s * P1x * P1y + 3 * i * m * s * P1y * e1)
    phi_y1_coeff = (m * P1y * t.phi1_y - m * y_f2xy + m * y2_f1yy * e1x + m * y_f1y * e1x
                    - s * s * P1y * y_f1y + 2 * m * e1 * y_f1xy + m * P1y * y_f1yy
                    - i * s * P1y * y_f1xy + i * m * s * y_f2y + i * m * s * P1x * y_f1y
                    - 2 * i * m * s * e1 * y_f1y)
    ups_coeff = (m * m * P1y * e1xx - m * m * P2xx + 2 * m * P1y * P1xy - i * m * m * s * P2x
                 + m * m * P1xy * e1x - m * m * P1x * P1xx - s * s * P1y * P1xy - i * m * m * s * P1x2
                 - i * bar * m * m * s + i * m * s * P2xy + i * m * m * s * P1y * e1x
                 - i * m * s * P1y * e1x - i * m * s * e1 * P1xy)
    ups_y_coeff = 2 * P1y * e1 - P1x * P1y - P2y + e2x.times_y() - (e1 * e1x).times_y()
    ups_1_coeff = e1x * y_f1xy - i * s * y_f1y * e1x
    eta_coeff = (2 * m * t.phi2_yy - 2 * m * P1x * t.phi1_yy - 6 * m * e1 * t.phi1_yy
                 + 2 * i * s * P1y * t.phi1_yy - s * s * P1y * y_f1xy + m * s * s * y_f2y
                 - i * m * s * P1y * t.phi1_y + i * m * s * y_f2xy - m * e1x * y_f1xy
                 + i * s ** 3 * P1y * y_f1y + m * P1y * y_f1xy + m * s * s * P1x * y_f1y
                 - m * s * s * e1 * y_f1y - i * m * s * e1 * y_f1xy - i * m * s * P1y * y_f1yy
                 - i * m * s * e1x * y2_f1yy - i * m * s * P1y * y_f1y)
    second = (u.phi * phi_coeff / m ** 3
              + u.phi_y * phi_y_coeff / m ** 2
              + u.phi_1 * phi_1_coeff / m
              + u.phi_yy * phi_yy_coeff / m ** 3
              + u.phi_y1 * phi_y1_coeff / m ** 2
              + u.ups * ups_coeff / m ** 2
              + u.ups_y * ups_y_coeff
              + u.ups_1 * ups_1_coeff
              + u.eta * eta_coeff / m ** 2)

    third = (u.phi_1 * (i * s * (e2x + 2 * P1x * e1x))
             + u.phi_y1 * (e2 - P2x - bar + P1x * e1 - P1x2 - e1 * e1 + 2 * P1y * e1x)
             + u.ups_1 * (m * e2x + 2 * m * P1x * e1x - i * s * P1y * e1x)
             + u.eta * (i * s * P1x2 + P2y + P1x * P1y - 2 * P1y * e1 + i * bar * s + i * s * P2x
                        - i * s * P1y * e1x))
    return StateVec(first, second, third)


def apply_B(order: BOrder, wp: WaveParams, sigma: float, u: StateVec,
            traces: StokesTraces = None) -> StateVec:
    """B^(m,n)(x; σ)u в классе термов; u может зависеть от x"""
    if not isinstance(order, BOrder):
        order = BOrder(*order)
    parts = _Parts(u)
    m = wp.mu0
    if (order.m, order.n) == (1, 0):
        return _b10(m, sigma, parts)
    if (order.m, order.n) == (2, 0):
        return _b20(m, sigma, parts)
    traces = traces or traces_for(wp, u.lattice)
    if (order.m, order.n) == (0, 1):
        return _b01(m, sigma, traces, parts)
    if (order.m, order.n) == (1, 1):
        return _b11(m, sigma, traces, parts)
    return _b02(m, sigma, traces, parts)


def frequency_shifts(u: StateVec, image: StateVec) -> Set[int]:
    """Сдвиги x-частот B u относительно u в единицах κ

    u должен содержать одну x-частоту; сдвиг, не кратный κ, считается ошибкой.
    """
    lattice = u.lattice
    sources = {lattice.canonical(xf) for part in u.components() for xf in part.x_frequencies()}
    if len(sources) != 1:
        raise DomainError("для подсчёта сдвигов u должен содержать ровно одну x-частоту")
    source = sources.pop()
    shifts = set()
    for part in image.components():
        for xf in part.x_frequencies():
            delta = lattice.canonical(vsub(xf, source))
            if any(delta[1:]):
                raise DomainError(f"сдвиг частоты {delta} не кратен κ")
            shifts.add(delta[0])
    return shifts
