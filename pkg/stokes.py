import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

import reporting
from dispersion import WaveParams
from errors import ConsistencyError, DomainError
from funcspace import FrequencyLattice, TermFunction, freq
from robin_solver import solve_poisson_robin
from settings import COLLOCATION_X, COLLOCATION_Y, EPS_VALIDITY, STOKES_CROSSCHECK, STOKES_CROSSCHECK_TOL

K1 = freq(kappa=1)
K2 = freq(kappa=2)
K3 = freq(kappa=3)


@dataclass(frozen=True)
class StokesExpansion:
    """Волна Стокса малой амплитуды до третьего порядка по ε

    Индекс списка равен порядку; нулевые элементы пусты.
    """
    wp: WaveParams
    lattice: FrequencyLattice
    phibar: Tuple[float, ...]
    phi: Tuple[TermFunction, ...]
    eta: Tuple[TermFunction, ...]
    mu: Tuple[float, ...]
    u: Tuple[TermFunction, ...]


@dataclass(frozen=True)
class StokesTraces:
    """Поля φ₁, η₁, φ₂, η₂ и их следы при y = 1 для операторов B"""
    phi1: TermFunction
    phi1_x: TermFunction
    phi1_y: TermFunction
    phi1_xy: TermFunction
    phi1_yy: TermFunction
    eta1: TermFunction
    eta1_x: TermFunction
    eta1_xx: TermFunction
    phi2: TermFunction
    phi2_x: TermFunction
    phi2_y: TermFunction
    phi2_xy: TermFunction
    phi2_yy: TermFunction
    eta2: TermFunction
    eta2_x: TermFunction
    eta2_xx: TermFunction
    # следы при y = 1
    p1x: TermFunction
    p1y: TermFunction
    p1xx: TermFunction
    p1xy: TermFunction
    p1yy: TermFunction
    p1xxx: TermFunction
    p1xxy: TermFunction
    p2x: TermFunction
    p2y: TermFunction
    p2xx: TermFunction
    p2xy: TermFunction
    phibar2: float
    mu0: float
    mu2: float


def transcribed_coefficients(wp: WaveParams) -> Dict[str, float]:
    """Замкнутые коэффициенты второго и третьего порядков"""
    s, c, m = wp.s, wp.c, wp.mu0
    s2 = math.sinh(2.0 * wp.kappa)
    return {
        "phi2_cosh2": 3.0 * m / (8.0 * s * c),
        "phi2_ysinh1": m * s * s / (2.0 * c),
        "eta2_cos2": m / 4.0 * (2.0 * s * s + 3.0),
        "phibar2": m * m * math.tanh(wp.kappa) ** 2 / 4.0,
        "phi3_cosh3": -m * m * (4.0 * s * s - 9.0) / (16.0 * s2 * s2),
        "phi3_sin3_ysinh2": 3.0 * m * m * s / (8.0 * (s * s + 1.0)),
        "phi3_sin3_ysinh1": m * m * s * (2.0 * s * s + 3.0) / (8.0 * c),
        "phi3_sin3_y2cosh1": m * m * s ** 4 / (8.0 * (s * s + 1.0)),
        "phi3_sin1_ysinh2": 3.0 * m * m * s / (8.0 * (s * s + 1.0)),
        "phi3_sin1_ysinh1": -m * m * s * (2.0 * s * s + 3.0) / (8.0 * c),
        "phi3_sin1_y2cosh1": m * m * s ** 4 / (8.0 * (s * s + 1.0)),
        "eta3_cos3": m * m * (24.0 * s ** 6 + 72.0 * s ** 4 + 72.0 * s * s + 27.0) / (64.0 * (s ** 3 + s)),
        "eta3_cos1": m * m * s * (5.0 * s ** 4 + 13.0 * s * s + 6.0) / (8.0 * (s * s + 1.0)),
        "mu2": -m ** 3 * (8.0 * s ** 4 + 12.0 * s * s + 9.0) / (8.0 * (s * s + 1.0)),
    }


def _transcribed_fields(wp: WaveParams, lattice: FrequencyLattice):
    co = transcribed_coefficients(wp)
    T = TermFunction
    sin1, sin2, sin3 = T.sin_x(lattice, K1), T.sin_x(lattice, K2), T.sin_x(lattice, K3)
    phi1 = sin1 * T.cosh_y(lattice, K1)
    eta1 = T.cos_x(lattice, K1, wp.s)
    phi2 = sin2 * (T.cosh_y(lattice, K2, co["phi2_cosh2"]) + T.sinh_y(lattice, K1, co["phi2_ysinh1"], p=1))
    eta2 = T.cos_x(lattice, K2, co["eta2_cos2"])
    phi3 = (sin3 * (T.cosh_y(lattice, K3, co["phi3_cosh3"])
                    + T.sinh_y(lattice, K2, co["phi3_sin3_ysinh2"], p=1)
                    + T.sinh_y(lattice, K1, co["phi3_sin3_ysinh1"], p=1)
                    + T.cosh_y(lattice, K1, co["phi3_sin3_y2cosh1"], p=2))
            + sin1 * (T.sinh_y(lattice, K2, co["phi3_sin1_ysinh2"], p=1)
                      + T.sinh_y(lattice, K1, co["phi3_sin1_ysinh1"], p=1)
                      + T.cosh_y(lattice, K1, co["phi3_sin1_y2cosh1"], p=2)))
    eta3 = T.cos_x(lattice, K3, co["eta3_cos3"]) + T.cos_x(lattice, K1, co["eta3_cos1"])
    return (phi1, phi2, phi3), (eta1, eta2, eta3), co["phibar2"], co["mu2"]


def _x_mean(f: TermFunction) -> complex:
    block = f.block(freq())
    return block.scalar() if not block.is_zero() else 0j


def rederive(wp: WaveParams, lattice: FrequencyLattice):
    """Второй и третий порядки из линейных задач по порядкам (σ = 0)"""
    m = wp.mu0
    T = TermFunction
    phi1 = T.sin_x(lattice, K1) * T.cosh_y(lattice, K1)
    eta1 = T.cos_x(lattice, K1, wp.s)
    p1x, p1y = phi1.dx(), phi1.dy()
    e1x = eta1.dx()
    e1xx = e1x.dx()

    # второй порядок
    rhs2 = 2.0 * eta1 * p1y.dy() + e1xx * p1y.times_y() + 2.0 * e1x * p1x.dy().times_y()
    kin2 = e1x * p1x.at_y(1.0) + eta1 * p1y.at_y(1.0)
    dyn2 = e1x * p1y.at_y(1.0) + 0.5 * (p1x.at_y(1.0) * p1x.at_y(1.0) + p1y.at_y(1.0) * p1y.at_y(1.0))
    phi2, _ = solve_poisson_robin(lattice, 0.0, m, rhs2, dyn2.dx() + m * kin2)
    phibar2 = _x_mean(dyn2)
    eta2 = (phibar2 + phi2.dx().at_y(1.0) - dyn2) / m

    # третий порядок; μ₂ определяется условием разрешимости на ω = ±κ
    p2x, p2y = phi2.dx(), phi2.dy()
    e2x = eta2.dx()
    e2xx = e2x.dx()
    rhs3 = (2.0 * e1x * p2x.dy().times_y() + 2.0 * eta1 * p2y.dy() + e1xx * p2y.times_y()
            + 2.0 * (e2x - eta1 * e1x) * p1x.dy().times_y()
            + (2.0 * eta2 - 3.0 * eta1 * eta1 - e1x * e1x * T.term(lattice, 1.0, p=2)) * p1y.dy()
            + (e2xx - 2.0 * e1x * e1x - eta1 * e1xx) * p1y.times_y())
    P1x, P1y, P2x, P2y = p1x.at_y(1.0), p1y.at_y(1.0), p2x.at_y(1.0), p2y.at_y(1.0)
    kin3 = e1x * (P2x + phibar2) + eta1 * P2y + e2x * P1x + (eta2 - e1x * e1x - eta1 * eta1) * P1y
    dyn3 = (P1x * (P2x + phibar2) + e1x * P2y + P1y * (P2y + e2x)
            - (eta1 * e1x + P1x * e1x) * P1y - eta1 * P1y * P1y)
    # слагаемое μ₂η₁ в dyn3 даёт μ₂η₁ₓ в граничной правой части
    phi3, mu2 = solve_poisson_robin(lattice, 0.0, m, rhs3, dyn3.dx() + m * kin3,
                                    extra=(T.zero(lattice), e1x))
    mu2 = mu2.real
    dyn3 = dyn3 + mu2 * eta1
    phibar3 = _x_mean(dyn3)
    eta3 = (phibar3 + phi3.dx().at_y(1.0) - dyn3) / m
    return (phi1, phi2, phi3), (eta1, eta2, eta3), phibar2.real, mu2, phibar3


def _relative_gap(a: TermFunction, b: TermFunction) -> float:
    scale = max(a.max_coeff(), b.max_coeff(), 1e-300)
    return (a - b).max_coeff() / scale


def crosscheck(wp: WaveParams, lattice: FrequencyLattice) -> Dict[str, float]:
    """Сравнение замкнутых формул с решением задач по порядкам"""
    phis, etas, phibar2, mu2 = _transcribed_fields(wp, lattice)
    d_phis, d_etas, d_phibar2, d_mu2, d_phibar3 = rederive(wp, lattice)
    gaps = {
        "phi2": _relative_gap(phis[1], d_phis[1]),
        "eta2": _relative_gap(etas[1], d_etas[1]),
        "phi3": _relative_gap(phis[2], d_phis[2]),
        "eta3": _relative_gap(etas[2], d_etas[2]),
        "phibar2": abs(phibar2 - d_phibar2) / abs(phibar2),
        "phibar3": abs(d_phibar3) / abs(phibar2),
        "mu2": abs(mu2 - d_mu2) / abs(mu2),
    }
    return gaps


def _velocity(phibar, phis, etas, lattice: FrequencyLattice) -> Tuple[TermFunction, ...]:
    # u(1 + η) = (1 + η)φ_x − yη_xφ_y, ряд по ε до третьего порядка
    zero = TermFunction.zero(lattice)
    phi = [zero] + [phis[i] + TermFunction.term(lattice, phibar[i], q=1) for i in range(3)]
    eta = [zero] + list(etas)
    right = [zero] * 4
    for n in range(1, 4):
        total = phi[n].dx()
        for i in range(1, n):
            total = total + eta[i] * phi[n - i].dx() - eta[i].dx() * phi[n - i].dy().times_y()
        right[n] = total
    u = [zero] * 4
    for n in range(1, 4):
        total = right[n]
        for i in range(1, n):
            total = total - eta[i] * u[n - i]
        u[n] = total
    return tuple(u)


@lru_cache(maxsize=64)
def build_stokes(wp: WaveParams, lattice: Optional[FrequencyLattice] = None) -> StokesExpansion:
    """Разложение волны Стокса с проверкой замкнутых формул"""
    lattice = lattice or FrequencyLattice(wp.kappa)
    phis, etas, phibar2, mu2 = _transcribed_fields(wp, lattice)
    if STOKES_CROSSCHECK:
        gaps = crosscheck(wp, lattice)
        worst = max(gaps, key=gaps.get)
        if gaps[worst] > STOKES_CROSSCHECK_TOL:
            raise ConsistencyError(
                f"κ = {wp.kappa}: коэффициент {worst} расходится с решением по порядкам на {gaps[worst]:.3e}")
    phibar = (0.0, phibar2, 0.0)
    u = _velocity(phibar, phis, etas, lattice)
    zero = TermFunction.zero(lattice)
    return StokesExpansion(wp=wp, lattice=lattice, phibar=(0.0,) + phibar, phi=(zero,) + phis,
                           eta=(zero,) + etas, mu=(wp.mu0, 0.0, mu2, 0.0), u=u)


def _series_mul(a: List[TermFunction], b: List[TermFunction], order: int) -> List[TermFunction]:
    result = []
    for n in range(order + 1):
        total = TermFunction.zero(a[0].lattice)
        for i in range(n + 1):
            if not a[i].is_zero() and not b[n - i].is_zero():
                total = total + a[i] * b[n - i]
        result.append(total)
    return result


def residual_functions(se: StokesExpansion, order: int) -> Tuple[TermFunction, TermFunction, TermFunction]:
    """Коэффициенты при εⁿ в уравнениях волны, умноженных на степени (1 + η)

    Возвращает (внутреннее уравнение, кинематическое условие, динамическое условие).
    """
    if order not in (1, 2, 3):
        raise DomainError(f"порядок должен быть 1, 2 или 3, получено {order}")
    lattice = se.lattice
    zero = TermFunction.zero(lattice)
    one = TermFunction.constant(lattice, 1.0)
    phi = [zero] + [se.phi[i] + TermFunction.term(lattice, se.phibar[i], q=1) for i in range(1, 4)]
    u = list(se.u)
    eta = [zero] + list(se.eta[1:])
    grow = [one] + eta[1:]  # 1 + η
    mu = [TermFunction.constant(lattice, value) for value in se.mu]

    u_x = [f.dx() for f in u]
    u_y = [f.dy() for f in u]
    phi_y = [f.dy() for f in phi]
    phi_yy = [f.dy() for f in phi_y]
    eta_x = [f.dx() for f in eta]
    y_eta_x = [f * TermFunction.term(lattice, 1.0, p=1) for f in eta_x]

    grow2 = _series_mul(grow, grow, order)
    interior = _series_mul(grow2, u_x, order)
    interior_b = _series_mul(_series_mul(y_eta_x, grow, order), u_y, order)
    interior = [interior[n] - interior_b[n] + phi_yy[n] for n in range(order + 1)]

    u1 = [f.at_y(1.0) for f in u]
    py1 = [f.at_y(1.0) for f in phi_y]
    u_minus = [u1[0] - 1.0] + u1[1:]
    kinematic = _series_mul(_series_mul(u_minus, eta_x, order), grow, order)
    kinematic = [kinematic[n] - py1[n] for n in range(order + 1)]

    u_sq = _series_mul(u1, u1, order)
    mu_eta = _series_mul(mu, eta, order)
    inner_part = [u1[n] - 0.5 * u_sq[n] - mu_eta[n] for n in range(order + 1)]
    dynamic = _series_mul(grow2, inner_part, order)
    py2 = _series_mul(py1, py1, order)
    dynamic = [dynamic[n] - 0.5 * py2[n] for n in range(order + 1)]
    return interior[order], kinematic[order], dynamic[order]


def collocation_grid(wp: WaveParams) -> Tuple[np.ndarray, np.ndarray]:
    """Точки Чебышёва по y и равномерная сетка по x на периоде"""
    j = np.arange(COLLOCATION_Y)
    y = 0.5 * (1.0 - np.cos(np.pi * (j + 0.5) / COLLOCATION_Y))
    x = wp.period * np.arange(COLLOCATION_X) / COLLOCATION_X
    return x, y


def stokes_residual(se: StokesExpansion, order: int) -> float:
    """Наибольшая невязка уравнений порядка εⁿ на сетке коллокации"""
    interior, kinematic, dynamic = residual_functions(se, order)
    x, y = collocation_grid(se.wp)
    xx, yy = np.meshgrid(x, y)
    values = [np.max(np.abs(interior.evaluate(xx, yy))),
              np.max(np.abs(kinematic.evaluate(x))),
              np.max(np.abs(dynamic.evaluate(x)))]
    return float(max(values))


def eval_wave(se: StokesExpansion, eps: float, x: float, y: float) -> Tuple[float, float, float, float]:
    """(φ, u, η, μ) усечённого ряда в точке (x, y)"""
    if abs(eps) > EPS_VALIDITY:
        reporting.validity_warning("|ε|", abs(eps), EPS_VALIDITY)
    phi = u = eta = 0.0
    for n in range(1, 4):
        power = eps ** n
        phi += power * (se.phibar[n] * x + float(se.phi[n].evaluate(x, y).real))
        u += power * float(se.u[n].evaluate(x, y).real)
        eta += power * float(se.eta[n].evaluate(x).real)
    mu = se.mu[0] + se.mu[1] * eps + se.mu[2] * eps ** 2 + se.mu[3] * eps ** 3
    return phi, u, eta, mu


def stokes_traces(se: StokesExpansion) -> StokesTraces:
    """Производные и следы полей первого и второго порядков"""
    phi1, phi2 = se.phi[1], se.phi[2]
    eta1, eta2 = se.eta[1], se.eta[2]
    phi1_x, phi1_y = phi1.dx(), phi1.dy()
    phi2_x, phi2_y = phi2.dx(), phi2.dy()
    eta1_x, eta2_x = eta1.dx(), eta2.dx()
    return StokesTraces(
        phi1=phi1, phi1_x=phi1_x, phi1_y=phi1_y, phi1_xy=phi1_x.dy(), phi1_yy=phi1_y.dy(),
        eta1=eta1, eta1_x=eta1_x, eta1_xx=eta1_x.dx(),
        phi2=phi2, phi2_x=phi2_x, phi2_y=phi2_y, phi2_xy=phi2_x.dy(), phi2_yy=phi2_y.dy(),
        eta2=eta2, eta2_x=eta2_x, eta2_xx=eta2_x.dx(),
        p1x=phi1_x.at_y(1.0), p1y=phi1_y.at_y(1.0), p1xx=phi1_x.dx().at_y(1.0),
        p1xy=phi1_x.dy().at_y(1.0), p1yy=phi1_y.dy().at_y(1.0), p1xxx=phi1_x.dx().dx().at_y(1.0),
        p1xxy=phi1_x.dx().dy().at_y(1.0),
        p2x=phi2_x.at_y(1.0), p2y=phi2_y.at_y(1.0), p2xx=phi2_x.dx().at_y(1.0), p2xy=phi2_x.dy().at_y(1.0),
        phibar2=se.phibar[2], mu0=se.mu[0], mu2=se.mu[2],
    )


def stokes_table(se: StokesExpansion, order: int = 3) -> Dict[str, object]:
    """Таблица коэффициентов для вывода в JSON"""
    def terms(f: TermFunction):
        rows = []
        for (xf, q, p, kind, rate), c in sorted(f.terms.items()):
            rows.append({
                "x_freq": se.lattice.realize(xf),
                "y_power": p,
                "y_kind": ("const", "cosh", "sinh")[kind],
                "y_rate": se.lattice.realize(rate),
                "re": c.real,
                "im": c.imag,
            })
        return rows

    table = {"kappa": se.wp.kappa, "mu0": se.mu[0], "orders": []}
    for n in range(1, order + 1):
        table["orders"].append({
            "order": n,
            "phibar": se.phibar[n],
            "mu": se.mu[n],
            "phi": terms(se.phi[n]),
            "eta": terms(se.eta[n]),
        })
    return table
