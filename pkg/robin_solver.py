# Решатель Φ″ − ω²Φ = R(y), Φ′(0) = 0, −(ω − σ)²Φ(1) + μ₀Φ′(1) = S
# методом неопределённых коэффициентов по блокам x-частот

import math
from typing import Dict, List, Optional, Set, Tuple

import mpmath
import numpy as np
from scipy.linalg import lstsq

from errors import ConsistencyError
from funcspace import CONST, COSH, SINH, ZERO, FrequencyLattice, TermFunction, Vector
from settings import CONDITION_LIMIT, LSTSQ_RESIDUAL_TOL, MP_DPS, SINGULAR_TOL

# ключ y-профиля: (степень y, вид, показатель)
Profile = Tuple[int, int, Vector]


def _profiles(f: TermFunction) -> Dict[Profile, complex]:
    return {key[2:]: c for key, c in f.terms.items()}


def is_singular(omega_value: float, omega_zero: bool, sigma: float, mu0: float) -> bool:
    """Однородная задача имеет ядро (ω лежит на дисперсионной кривой)"""
    if omega_zero:
        return abs(sigma) < SINGULAR_TOL
    shift = (omega_value - sigma) ** 2 * math.cosh(omega_value)
    slope = mu0 * omega_value * math.sinh(omega_value)
    return abs(slope - shift) <= SINGULAR_TOL * (abs(shift) + abs(slope))


def _ansatz(lattice: FrequencyLattice, omega: Vector, sources: List[Dict[Profile, complex]]) -> List[Profile]:
    omega_zero = lattice.is_zero(omega)
    omega_rate = lattice.canonical_rate(omega)[0]
    columns: Set[Profile] = set()
    for source in sources:
        for p, kind, rate in source:
            if kind == CONST:
                top = p + 2 if omega_zero else p
                columns.update((r, CONST, ZERO) for r in range(top + 1))
                continue
            top = p + 1 if (not omega_zero and rate == omega_rate) else p
            for r in range(top + 1):
                columns.add((r, COSH, rate))
                columns.add((r, SINH, rate))
    if omega_zero:
        columns.update([(0, CONST, ZERO), (1, CONST, ZERO)])
    else:
        columns.update([(0, COSH, omega_rate), (0, SINH, omega_rate)])
    return sorted(columns)


def _mp_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # нормальные уравнения в расширенной точности
    with mpmath.workdps(MP_DPS):
        a = mpmath.matrix(matrix.tolist())
        b = mpmath.matrix(rhs.tolist())
        x = mpmath.lu_solve(a, b)
        return np.array([complex(x[i]) for i in range(x.rows)])


def solve_block(lattice: FrequencyLattice, omega: Vector, sigma: float, mu0: float, R: TermFunction,
                S: complex, extra: Optional[Tuple[TermFunction, complex]] = None
                ) -> Tuple[TermFunction, Optional[complex]]:
    """Профиль Φ(y) одного x-блока и, при наличии, дополнительный скаляр

    extra = (R₁, S₁): правые части дополняются слагаемыми μ·R₁ и μ·S₁,
    μ находится вместе с коэффициентами.
    """
    omega_value = lattice.realize(omega)
    omega_zero = lattice.is_zero(omega)
    source = _profiles(R)
    extra_source = _profiles(extra[0]) if extra is not None else {}
    if not source and S == 0 and (extra is None or (not extra_source and extra[1] == 0)):
        return TermFunction.zero(lattice), (0j if extra is not None else None)

    columns = _ansatz(lattice, omega, [source, extra_source])
    if is_singular(omega_value, omega_zero, sigma, mu0):
        kernel = (0, CONST, ZERO) if omega_zero else (0, COSH, lattice.canonical_rate(omega)[0])
        columns.remove(kernel)

    images = []
    boundary = []
    for p, kind, rate in columns:
        basis = TermFunction.term(lattice, 1.0, p=p, kind=kind, rate=rate)
        derivative = basis.dy()
        images.append(_profiles(derivative.dy() - basis * (omega_value ** 2)))
        neumann = derivative.at_y(0.0).scalar()
        robin = -(omega_value - sigma) ** 2 * basis.at_y(1.0).scalar() + mu0 * derivative.at_y(1.0).scalar()
        boundary.append((neumann, robin))

    rows = sorted(set(source) | set(extra_source) | {key for image in images for key in image})
    index = {key: i for i, key in enumerate(rows)}
    n_cols = len(columns) + (1 if extra is not None else 0)
    matrix = np.zeros((len(rows) + 2, n_cols), dtype=complex)
    rhs = np.zeros(len(rows) + 2, dtype=complex)
    for j, image in enumerate(images):
        for key, value in image.items():
            matrix[index[key], j] = value
        matrix[-2, j], matrix[-1, j] = boundary[j]
    for key, value in source.items():
        rhs[index[key]] = value
    rhs[-1] = S
    if extra is not None:
        for key, value in extra_source.items():
            matrix[index[key], -1] = -value
        matrix[-1, -1] = -extra[1]

    norms = np.linalg.norm(matrix, axis=0)
    norms[norms == 0] = 1.0
    scaled = matrix / norms
    solution = lstsq(scaled, rhs)[0]
    if np.linalg.cond(scaled) > CONDITION_LIMIT:
        solution = _mp_solve(scaled, rhs)
    solution = solution / norms

    residual = np.linalg.norm(matrix @ solution - rhs)
    if residual > LSTSQ_RESIDUAL_TOL * max(np.linalg.norm(rhs), 1e-300):
        raise ConsistencyError(
            f"блок ω = {omega_value:.6g}: система несовместна, невязка {residual:.3e}")

    profile = TermFunction.build(lattice, [((ZERO, 0, p, kind, rate), solution[j])
                                           for j, (p, kind, rate) in enumerate(columns)])
    return profile, (complex(solution[-1]) if extra is not None else None)


def solve_poisson_robin(lattice: FrequencyLattice, sigma: float, mu0: float, R: TermFunction,
                        S: TermFunction, extra: Optional[Tuple[TermFunction, TermFunction]] = None
                        ) -> Tuple[TermFunction, Optional[complex]]:
    """Решение по всем x-частотам R и S

    Дополнительный скаляр (если задан) определяется в каждом блоке, где
    есть R₁ или S₁, и значения из разных блоков должны совпасть.
    """
    for key in list(R.terms) + list(S.terms):
        if key[1] > 0:
            raise ConsistencyError("правая часть содержит секулярные по x члены")
    if not S.is_y_free():
        raise ConsistencyError("граничная правая часть зависит от y")
    frequencies = set(R.x_frequencies()) | set(S.x_frequencies())
    extra_frequencies = set()
    if extra is not None:
        extra_frequencies = set(extra[0].x_frequencies()) | set(extra[1].x_frequencies())
        frequencies |= extra_frequencies

    pairs = []
    values = []
    for omega in sorted(frequencies):
        block_extra = None
        if omega in extra_frequencies:
            block_extra = (extra[0].block(omega), _block_scalar(extra[1], omega))
        profile, value = solve_block(lattice, omega, sigma, mu0, R.block(omega), _block_scalar(S, omega),
                                     block_extra)
        if value is not None:
            values.append(value)
        pairs.extend(((omega,) + key[1:], c) for key, c in profile.terms.items())

    extra_value = None
    if extra is not None:
        if not values:
            raise ConsistencyError("дополнительный скаляр не определяется ни одним блоком")
        extra_value = values[0]
        for value in values[1:]:
            if abs(value - extra_value) > 1e-8 * max(abs(extra_value), 1.0):
                raise ConsistencyError(f"блоки дают разные значения скаляра: {extra_value} и {value}")
    return TermFunction.build(lattice, pairs), extra_value


def _block_scalar(f: TermFunction, omega: Vector) -> complex:
    block = f.block(omega)
    return block.scalar() if not block.is_zero() else 0j
