import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from dispersion import DispersionPoint, Regime, WaveParams, roots_k
from errors import ConsistencyError, DomainError
from funcspace import ZERO, FrequencyLattice, StateVec, TermFunction, Vector, freq, inner, pair
from settings import BIORTH_TOL, KAPPA_ONE_TOL

UNIT = freq(unit=1)


@dataclass(frozen=True)
class ModePair:
    """Собственная функция φ_j и сопряжённая ψ_j с нормировочными постоянными"""
    j: int
    k: float
    kvec: Vector
    phi: StateVec
    psi: StateVec
    norm_consts: Dict[str, complex] = field(default_factory=dict)


@dataclass(frozen=True)
class Projector:
    """Спектральный проектор Π(σ) на подпространство Y(σ)"""
    sigma: float
    point: DispersionPoint
    lattice: FrequencyLattice
    modes: Tuple[ModePair, ...]

    def mode(self, j: int) -> ModePair:
        for mode in self.modes:
            if mode.j == j:
                return mode
        raise DomainError(f"моды {j} нет при σ = {self.sigma}")

    @property
    def labels(self) -> List[int]:
        return [mode.j for mode in self.modes]


def _domain_scale(u: StateVec) -> float:
    return max(u.max_coeff(), 1.0)


def apply_L(wp: WaveParams, lam: complex, u: StateVec, check_domain: bool = True) -> StateVec:
    """L(λ)u = (λφ + μ₀υ, −μ₀⁻¹(φ_yy + λ²φ + μ₀λυ), λη − φ_y(1))"""
    if check_domain and u.dom_residual() > 1e-10 * _domain_scale(u):
        raise DomainError("вектор не лежит в dom(L): нарушены η = υ(1) или φ_y(0) = 0")
    m = wp.mu0
    phi_y = u.phi.dy()
    return StateVec(
        u.phi * lam + u.upsilon * m,
        -(phi_y.dy() + u.phi * (lam * lam) + u.upsilon * (m * lam)) / m,
        u.eta * lam - phi_y.at_y(1.0),
    )


def adjoint_dom_residual(wp: WaveParams, u: StateVec) -> float:
    """Нарушение условий dom(L†): υ(1) + μ₀η = 0 и φ_y(0) = 0"""
    trace = (u.upsilon.at_y(1.0) + u.eta * wp.mu0).max_coeff()
    return max(trace, u.phi.dy().at_y(0.0).max_coeff())


def _particular_phi(wp: WaveParams, lam: complex, upsilon: TermFunction) -> TermFunction:
    # φ_p = (1 + λ̄²)/μ₀ [∫₀^y sinh(y − y′)υ dy′ − (∫₀¹ cosh(1 − y′)υ dy′) cosh y/sinh 1]
    lattice = upsilon.lattice
    cosh_y = TermFunction.cosh_y(lattice, UNIT)
    sinh_y = TermFunction.sinh_y(lattice, UNIT)
    c_part = (cosh_y * upsilon).antiderivative_y()
    s_part = (sinh_y * upsilon).antiderivative_y()
    convolution = sinh_y * c_part - cosh_y * s_part
    weight = (cosh_y * upsilon).integrate_y() * math.cosh(1.0) - (sinh_y * upsilon).integrate_y() * math.sinh(1.0)
    factor = (1.0 + np.conj(lam) ** 2) / wp.mu0
    return (convolution - weight * cosh_y / math.sinh(1.0)) * factor


def apply_L_adjoint(wp: WaveParams, lam: complex, u: StateVec, check_domain: bool = True) -> StateVec:
    """L(λ)†u = (λ̄φ + μ₀⁻¹υ + φ_p, μ₀φ − μ₀φ_yy − λ̄υ, μ₀φ_y(1) + λ̄η)"""
    if check_domain and adjoint_dom_residual(wp, u) > 1e-10 * _domain_scale(u):
        raise DomainError("вектор не лежит в dom(L†): нарушены υ(1) + μ₀η = 0 или φ_y(0) = 0")
    m = wp.mu0
    lam_bar = complex(np.conj(lam))
    phi_y = u.phi.dy()
    return StateVec(
        u.phi * lam_bar + u.upsilon / m + _particular_phi(wp, lam, u.upsilon),
        u.phi * m - phi_y.dy() * m - u.upsilon * lam_bar,
        phi_y.at_y(1.0) * m + u.eta * lam_bar,
    )


def adjoint_pairing_residual(wp: WaveParams, lam: complex, u1: StateVec, u2: StateVec) -> float:
    """|⟨L(λ)u₁, u₂⟩ − ⟨u₁, L(λ)†u₂⟩| относительно масштаба слагаемых"""
    left = inner(apply_L(wp, lam, u1), u2)
    right = inner(u1, apply_L_adjoint(wp, lam, u2))
    return abs(left - right) / max(abs(left), abs(right), 1e-300)


# --- собственные функции ---

def eigenfunction(wp: WaveParams, lattice: FrequencyLattice, sigma: float, k: float, kvec: Vector) -> StateVec:
    """φ_j(σ) = (μ₀cosh(k y), i(k − σ)cosh(k y), i(k − σ)cosh k)"""
    T = TermFunction
    profile = T.cosh_y(lattice, kvec)
    scale = 1j * (k - sigma)
    return StateVec(profile * wp.mu0, profile * scale, T.constant(lattice, scale * math.cosh(k)))


def _zero_modes(wp: WaveParams, lattice: FrequencyLattice) -> List[ModePair]:
    T = TermFunction
    m, kappa = wp.mu0, wp.kappa
    modes = []
    for j, sign in ((1, -1), (2, 1)):
        k = sign * kappa
        kvec = freq(kappa=sign)
        phi = eigenfunction(wp, lattice, 0.0, k, kvec)
        ck, sk = math.cosh(k), math.sinh(k)
        p = -1j * ck / (ck * ck * sk - m * sk)
        if abs(kappa - 1.0) < KAPPA_ONE_TOL:
            # предел (cosh k·cosh y/sinh 1 − μ₀cosh(ky))/(1 − κ) при κ → 1
            c1, s1 = math.cosh(1.0), math.sinh(1.0)
            limit = (T.cosh_y(lattice, UNIT, s1 - c1) + T.sinh_y(lattice, UNIT, s1, p=1)) * (c1 / s1 ** 2)
            first = limit * (1j * k * p / (m * m * (1.0 + kappa)))
        else:
            bracket = T.cosh_y(lattice, UNIT, ck / math.sinh(1.0)) - T.cosh_y(lattice, kvec, m)
            first = bracket * (1j * k * p / (m * m * (1.0 - k * k)))
        psi = StateVec(first, T.cosh_y(lattice, kvec, p), T.constant(lattice, -p * ck / m))
        modes.append(ModePair(j=j, k=k, kvec=kvec, phi=phi, psi=psi, norm_consts={"p": p}))

    phi3 = StateVec(T.zero(lattice), T.constant(lattice, 1.0), T.constant(lattice, 1.0))
    phi4 = StateVec(T.constant(lattice, m), T.zero(lattice), T.zero(lattice))
    psi3 = StateVec(T.zero(lattice), T.constant(lattice, m / (m - 1.0)), T.constant(lattice, -1.0 / (m - 1.0)))
    psi4 = StateVec((T.constant(lattice, m) - T.cosh_y(lattice, UNIT, 1.0 / math.sinh(1.0))) / ((m - 1.0) * m),
                    T.zero(lattice), T.zero(lattice))
    modes.append(ModePair(j=3, k=0.0, kvec=ZERO, phi=phi3, psi=psi3))
    modes.append(ModePair(j=4, k=0.0, kvec=ZERO, phi=phi4, psi=psi4))
    return modes


def _normalizer(k: float, sigma: float) -> float:
    return k * math.sinh(2.0 * k) + sigma * math.sinh(2.0 * k) + 2.0 * k * sigma - 2.0 * k * k


def high_frequency_adjoint(wp: WaveParams, lattice: FrequencyLattice, sigma: float, k: float,
                           kvec: Vector) -> Tuple[StateVec, Dict[str, complex]]:
    """ψ_j(σ) при σ > σ_c с постоянными p₁,j и p₂,j"""
    T = TermFunction
    m = wp.mu0
    if abs(k * k - 1.0) < KAPPA_ONE_TOL:
        raise DomainError(f"k = {k}: формула сопряжённой функции вырождается при k² = 1")
    d = _normalizer(k, sigma)
    p1 = 2.0 * math.cosh(k) * (sigma ** 2 - 1.0) * (k - sigma) ** 2 / (
        m * m * math.sinh(1.0) * (k * k - 1.0) * d)
    p2 = (2.0 * k * k - 2.0 * sigma ** 2) / (m * (k * k - 1.0) * d)
    scale = 1j * p2 * (k * k - 1.0) / (k + sigma)
    psi = StateVec(T.cosh_y(lattice, UNIT, p1) + T.cosh_y(lattice, kvec, p2),
                   T.cosh_y(lattice, kvec, -m * scale),
                   T.constant(lattice, scale * math.cosh(k)))
    return psi, {"p1": p1, "p2": p2}


def general_adjoint(wp: WaveParams, lattice: FrequencyLattice, sigma: float, k: float,
                    kvec: Vector) -> Tuple[StateVec, Dict[str, complex]]:
    """Сопряжённая собственная функция для простой моды ik при любом σ, γ = −ik"""
    T = TermFunction
    m = wp.mu0
    if abs(k * k - 1.0) < KAPPA_ONE_TOL:
        raise DomainError(f"k = {k}: формула сопряжённой функции вырождается при k² = 1")
    gamma = -1j * k
    amplitude = -2j * (k - sigma) / _normalizer(k, sigma)
    upsilon = T.cosh_y(lattice, kvec, amplitude)
    trace = amplitude * math.cosh(k)
    g2 = gamma * gamma + 1.0
    first = (T.cosh_y(lattice, UNIT, -(1.0 - sigma ** 2) * (gamma + 1j * sigma) / (m * m * g2) * trace
                      / math.sinh(1.0))
             + upsilon * ((gamma - 1j * sigma) / (m * g2)))
    psi = StateVec(first, upsilon, T.constant(lattice, -trace / m))
    return psi, {"C": amplitude}


def _mode_vectors(point: DispersionPoint) -> List[Tuple[int, float, Vector]]:
    if point.regime == Regime.ABOVE_CRITICAL:
        return [(2, point.k2, freq(k2=1)), (4, point.k4, freq(k4=1))]
    return [(1, point.k1, freq(k1=1)), (2, point.k2, freq(k2=1)),
            (3, point.k3, freq(k3=1)), (4, point.k4, freq(k4=1))]


def biorthogonality_matrix(pr: Projector) -> np.ndarray:
    """Матрица ⟨φ_j, ψ_j′⟩"""
    n = len(pr.modes)
    result = np.zeros((n, n), dtype=complex)
    for a, left in enumerate(pr.modes):
        for b, right in enumerate(pr.modes):
            result[a, b] = inner(left.phi, right.psi)
    return result


def modes_at(wp: WaveParams, sigma: float, resonance: Optional[int] = None,
             point: Optional[DispersionPoint] = None) -> Projector:
    """Моды и проектор Π(σ)"""
    point = point or roots_k(wp, sigma)
    if point.regime == Regime.AT_CRITICAL:
        raise DomainError("при σ = σ_c проектор не строится (жорданова клетка)")
    lattice = point.lattice(wp.kappa, resonance)
    if point.regime == Regime.AT_ZERO:
        modes = _zero_modes(wp, lattice)
    else:
        modes = []
        for j, k, kvec in _mode_vectors(point):
            phi = eigenfunction(wp, lattice, sigma, k, kvec)
            if point.regime == Regime.ABOVE_CRITICAL:
                psi, consts = high_frequency_adjoint(wp, lattice, sigma, k, kvec)
            else:
                psi, consts = general_adjoint(wp, lattice, sigma, k, kvec)
            modes.append(ModePair(j=j, k=k, kvec=kvec, phi=phi, psi=psi, norm_consts=consts))
    pr = Projector(sigma=sigma, point=point, lattice=lattice, modes=tuple(modes))
    gram = biorthogonality_matrix(pr)
    defect = np.max(np.abs(gram - np.eye(len(modes))))
    if defect > BIORTH_TOL:
        raise ConsistencyError(f"σ = {sigma}: нарушена биортогональность мод ({defect:.3e})")
    return pr


def jordan_modes(wp: WaveParams) -> Tuple[FrequencyLattice, StateVec, StateVec]:
    """φ₁(σ_c) и присоединённая функция φ₃(σ_c) для k = k_c"""
    point = roots_k(wp, 0.0)
    k, sigma = point.k_c, point.sigma_c
    lattice = FrequencyLattice(wp.kappa, k1=k, k3=k)
    T = TermFunction
    kvec = freq(k1=1)
    phi1 = eigenfunction(wp, lattice, sigma, k, kvec)
    shift = k - sigma
    phi3 = StateVec(T.sinh_y(lattice, kvec, -1j * wp.mu0, p=1),
                    T.cosh_y(lattice, kvec) + T.sinh_y(lattice, kvec, shift, p=1),
                    T.constant(lattice, math.cosh(k) + shift * math.sinh(k)))
    return lattice, phi1, phi3


def project(pr: Projector, u: StateVec) -> np.ndarray:
    """Коэффициенты ⟨u, ψ_j⟩ в порядке pr.modes"""
    return np.array([inner(u, mode.psi) for mode in pr.modes])


def reconstruct(pr: Projector, coeffs) -> StateVec:
    total = StateVec.zero(pr.lattice)
    for c, mode in zip(coeffs, pr.modes):
        total = total + mode.phi * complex(c)
    return total


def mode_pairings(pr: Projector, f: StateVec) -> Dict[int, TermFunction]:
    """⟨f, ψ_j⟩ как функции от x"""
    return {mode.j: pair(f, mode.psi) for mode in pr.modes}


def complement(pr: Projector, f: StateVec) -> StateVec:
    """(1 − Π)f для f, зависящего от x"""
    result = f
    for mode in pr.modes:
        result = result - mode.phi.scale(pair(f, mode.psi))
    return result


def eigen_residual(wp: WaveParams, pr: Projector, j: int) -> float:
    """‖(L(iσ) − ik_j)φ_j‖ по коэффициентам"""
    mode = pr.mode(j)
    image = apply_L(wp, 1j * pr.sigma, mode.phi) - mode.phi * (1j * mode.k)
    return image.max_coeff() / max(mode.phi.max_coeff(), 1e-300)


def sample_domain_vectors(lattice: FrequencyLattice, count: int = 4, seed: int = 7) -> List[StateVec]:
    """Случайные векторы из dom(L): φ_y(0) = 0, η = υ(1)"""
    rng = np.random.default_rng(seed)
    T = TermFunction
    samples = []
    for _ in range(count):
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        phi = (T.cosh_y(lattice, UNIT, c[0]) + T.cosh_y(lattice, freq(unit=2), c[1])
               + T.term(lattice, c[2], p=2) + T.constant(lattice, c[3]))
        upsilon = T.cosh_y(lattice, freq(unit=3), c[4]) + T.sinh_y(lattice, UNIT, c[5], p=1) + T.constant(lattice, c[6])
        samples.append(StateVec(phi, upsilon, upsilon.at_y(1.0)))
    return samples


def adjoint_eigen_residual(wp: WaveParams, sigma: float, j: int, pr: Optional[Projector] = None,
                           samples: Optional[List[StateVec]] = None) -> float:
    """max |⟨(L(iσ) − ik_j)u, ψ_j⟩| по случайным u из dom(L), относительно ‖u‖‖ψ_j‖"""
    pr = pr or modes_at(wp, sigma)
    mode = pr.mode(j)
    samples = samples or sample_domain_vectors(pr.lattice)
    psi_norm = math.sqrt(abs(inner(mode.psi, mode.psi)))
    worst = 0.0
    for u in samples:
        image = apply_L(wp, 1j * sigma, u) - u * (1j * mode.k)
        value = abs(inner(image, mode.psi))
        scale = math.sqrt(abs(inner(u, u))) * psi_norm * (1.0 + abs(mode.k) + abs(sigma)) ** 2
        worst = max(worst, value / scale)
    return worst
