import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from errors import ConsistencyError, DomainError, UnsupportedDegreeError
from settings import PRUNE_TOL, SECULAR_TOL, SERIES_RADIUS, Y_POWER_CAP, Y_RATE_ZERO_TOL

# Образующие решётки частот: κ, k₁..k₄ и единица (профиль cosh(y)/sinh(1))
GENERATORS = ("kappa", "k1", "k2", "k3", "k4", "unit")
ZERO = (0, 0, 0, 0, 0, 0)

# Вид y-профиля терма
CONST, COSH, SINH = 0, 1, 2

Vector = Tuple[int, ...]
# (x-частота, степень x, степень y, вид профиля, показатель профиля)
TermKey = Tuple[Vector, int, int, int, Vector]


def freq(kappa: int = 0, k1: int = 0, k2: int = 0, k3: int = 0, k4: int = 0, unit: int = 0) -> Vector:
    """Целочисленный вектор частоты над образующими"""
    return (kappa, k1, k2, k3, k4, unit)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vscale(n: int, a: Vector) -> Vector:
    return tuple(n * x for x in a)


@dataclass(frozen=True)
class FrequencyLattice:
    """Значения образующих и, при резонансе k₂ − k₄ = Nκ, подстановка для k₂"""
    kappa: float
    k1: Optional[float] = None
    k2: Optional[float] = None
    k3: Optional[float] = None
    k4: Optional[float] = None
    resonance: Optional[int] = None

    @property
    def values(self) -> Tuple[Optional[float], ...]:
        return (self.kappa, self.k1, self.k2, self.k3, self.k4, 1.0)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.kappa

    def canonical(self, vec: Vector) -> Vector:
        """Каноническая форма: при резонансе k₂ исключается"""
        if self.resonance is None or vec[2] == 0:
            return vec
        n = vec[2]
        return (vec[0] + self.resonance * n, vec[1], 0, vec[3], vec[4] + n, vec[5])

    def is_zero(self, vec: Vector) -> bool:
        # точная проверка на решётке, без сравнения чисел с плавающей точкой
        return self.canonical(vec) == ZERO

    def realize(self, vec: Vector) -> float:
        total = []
        for n, name, value in zip(vec, GENERATORS, self.values):
            if n == 0:
                continue
            if value is None:
                raise DomainError(f"образующая {name} не задана в этой решётке")
            total.append(n * value)
        return math.fsum(total)

    def canonical_rate(self, vec: Vector) -> Tuple[Vector, int]:
        """Показатель y-профиля со знаком: первая ненулевая компонента положительна"""
        vec = self.canonical(vec)
        for n in vec:
            if n > 0:
                return vec, 1
            if n < 0:
                return vneg(vec), -1
        return vec, 1


def _canonical_key(lattice: FrequencyLattice, key: TermKey, coeff: complex):
    xfreq, q, p, kind, rate = key
    xfreq = lattice.canonical(xfreq)
    if kind == CONST:
        return (xfreq, q, p, CONST, ZERO), coeff
    rate, sign = lattice.canonical_rate(rate)
    if kind == SINH and sign < 0:
        coeff = -coeff
    if rate == ZERO or abs(lattice.realize(rate)) < Y_RATE_ZERO_TOL:
        if kind == SINH:
            return None, 0.0
        return (xfreq, q, p, CONST, ZERO), coeff
    return (xfreq, q, p, kind, rate), coeff


def _profile(kind: int, a: float, y):
    if kind == CONST:
        return np.ones_like(np.asarray(y, dtype=float))
    if kind == COSH:
        return np.cosh(a * y)
    return np.sinh(a * y)


def _fsum_complex(values: List[complex]) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _moment_exp(p: int, b: float) -> float:
    """∫₀¹ yᵖ e^{by} dy по рекуррентной формуле"""
    eb = math.exp(b)
    value = (eb - 1.0) / b
    for n in range(1, p + 1):
        value = (eb - n * value) / b
    return value


def y_moment(p: int, kind: int, a: float) -> float:
    """∫₀¹ yᵖ·{1, cosh, sinh}(ay) dy в замкнутом виде"""
    if kind == CONST:
        return 1.0 / (p + 1)
    if abs(a) < SERIES_RADIUS:
        # чётные степени для cosh, нечётные для sinh
        n = 0 if kind == COSH else 1
        term = 1.0 if n == 0 else a
        parts = []
        while True:
            contribution = term / (p + n + 1)
            parts.append(contribution)
            if abs(contribution) < 1e-18 * max(abs(parts[0]), 1e-300) and n > 4:
                break
            term *= a * a / ((n + 1) * (n + 2))
            n += 2
        return math.fsum(parts)
    plus = _moment_exp(p, a)
    minus = _moment_exp(p, -a)
    if kind == COSH:
        return 0.5 * (plus + minus)
    return 0.5 * (plus - minus)


class TermFunction:
    """Конечная сумма термов c·xᵠ·e^{iωx}·yᵖ·{1, cosh, sinh}(ay)

    Объект неизменяем после построения: равные ключи сложены, малые
    коэффициенты отброшены относительно наибольшего.
    """

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice: FrequencyLattice, terms: Optional[Dict[TermKey, complex]] = None):
        self.lattice = lattice
        self.terms: Dict[TermKey, complex] = terms if terms is not None else {}

    # --- построение ---

    @classmethod
    def build(cls, lattice: FrequencyLattice, pairs: Iterable[Tuple[TermKey, complex]]) -> "TermFunction":
        buckets: Dict[TermKey, List[complex]] = {}
        for key, coeff in pairs:
            if coeff == 0:
                continue
            key, coeff = _canonical_key(lattice, key, complex(coeff))
            if key is None:
                continue
            if key[2] > Y_POWER_CAP:
                raise UnsupportedDegreeError(f"степень y = {key[2]} превышает предел {Y_POWER_CAP}")
            buckets.setdefault(key, []).append(coeff)
        merged = {}
        for key, values in buckets.items():
            merged[key] = values[0] if len(values) == 1 else _fsum_complex(values)
        return cls(lattice, _prune(merged))

    @classmethod
    def zero(cls, lattice: FrequencyLattice) -> "TermFunction":
        return cls(lattice, {})

    @classmethod
    def constant(cls, lattice: FrequencyLattice, value: complex) -> "TermFunction":
        return cls.build(lattice, [((ZERO, 0, 0, CONST, ZERO), value)])

    @classmethod
    def term(cls, lattice: FrequencyLattice, coeff: complex = 1.0, xfreq: Vector = ZERO, q: int = 0,
             p: int = 0, kind: int = CONST, rate: Vector = ZERO) -> "TermFunction":
        return cls.build(lattice, [((xfreq, q, p, kind, rate), coeff)])

    @classmethod
    def exp_x(cls, lattice: FrequencyLattice, xfreq: Vector, coeff: complex = 1.0) -> "TermFunction":
        """c·e^{iωx}"""
        return cls.term(lattice, coeff, xfreq=xfreq)

    @classmethod
    def sin_x(cls, lattice: FrequencyLattice, xfreq: Vector, coeff: complex = 1.0) -> "TermFunction":
        return cls.build(lattice, [((xfreq, 0, 0, CONST, ZERO), coeff / 2j),
                                   ((vneg(xfreq), 0, 0, CONST, ZERO), -coeff / 2j)])

    @classmethod
    def cos_x(cls, lattice: FrequencyLattice, xfreq: Vector, coeff: complex = 1.0) -> "TermFunction":
        return cls.build(lattice, [((xfreq, 0, 0, CONST, ZERO), coeff / 2),
                                   ((vneg(xfreq), 0, 0, CONST, ZERO), coeff / 2)])

    @classmethod
    def cosh_y(cls, lattice: FrequencyLattice, rate: Vector, coeff: complex = 1.0, p: int = 0) -> "TermFunction":
        return cls.term(lattice, coeff, p=p, kind=COSH, rate=rate)

    @classmethod
    def sinh_y(cls, lattice: FrequencyLattice, rate: Vector, coeff: complex = 1.0, p: int = 0) -> "TermFunction":
        return cls.term(lattice, coeff, p=p, kind=SINH, rate=rate)

    # --- свойства ---

    def is_zero(self) -> bool:
        return not self.terms

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_x_free(self) -> bool:
        return all(key[0] == ZERO and key[1] == 0 for key in self.terms)

    def is_y_free(self) -> bool:
        return all(key[2] == 0 and key[3] == CONST for key in self.terms)

    def x_frequencies(self) -> List[Vector]:
        return sorted({key[0] for key in self.terms})

    def coefficient(self, xfreq: Vector = ZERO, q: int = 0, p: int = 0, kind: int = CONST,
                    rate: Vector = ZERO) -> complex:
        """Коэффициент при заданном ключе (в канонической форме)"""
        key, sign = _canonical_key(self.lattice, (xfreq, q, p, kind, rate), 1.0)
        if key is None:
            return 0j
        return sign * self.terms.get(key, 0j)

    def scalar(self) -> complex:
        """Значение постоянной функции"""
        if not self.is_x_free() or not self.is_y_free():
            raise DomainError("функция не постоянна")
        return self.terms.get((ZERO, 0, 0, CONST, ZERO), 0j)

    def block(self, xfreq: Vector) -> "TermFunction":
        """y-профиль при заданной x-частоте (без степеней x)"""
        xfreq = self.lattice.canonical(xfreq)
        return TermFunction(self.lattice, {(ZERO, 0) + key[2:]: c for key, c in self.terms.items()
                                           if key[0] == xfreq and key[1] == 0})

    def _check(self, other: "TermFunction"):
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise DomainError("функции заданы на разных решётках частот")

    # --- арифметика ---

    def __add__(self, other):
        if not isinstance(other, TermFunction):
            other = TermFunction.constant(self.lattice, other)
        self._check(other)
        return TermFunction.build(self.lattice, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return TermFunction(self.lattice, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TermFunction):
            other = TermFunction.constant(self.lattice, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TermFunction):
            return multiply(self, other)
        other = complex(other)
        if other == 0:
            return TermFunction.zero(self.lattice)
        return TermFunction(self.lattice, {k: c * other for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1.0 / complex(other))

    def conj(self) -> "TermFunction":
        """Комплексное сопряжение (показатели y вещественны)"""
        return TermFunction.build(self.lattice, [((vneg(k[0]),) + k[1:], c.conjugate())
                                                 for k, c in self.terms.items()])

    # --- производные ---

    def dx(self) -> "TermFunction":
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            if q > 0:
                pairs.append(((xf, q - 1, p, kind, rate), q * c))
            if xf != ZERO:
                pairs.append(((xf, q, p, kind, rate), 1j * self.lattice.realize(xf) * c))
        return TermFunction.build(self.lattice, pairs)

    def dy(self) -> "TermFunction":
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            if p > 0:
                pairs.append(((xf, q, p - 1, kind, rate), p * c))
            if kind == CONST:
                continue
            a = self.lattice.realize(rate)
            other = SINH if kind == COSH else COSH
            pairs.append(((xf, q, p, other, rate), a * c))
        return TermFunction.build(self.lattice, pairs)

    def times_y(self, power: int = 1) -> "TermFunction":
        return TermFunction.build(self.lattice, [((k[0], k[1], k[2] + power, k[3], k[4]), c)
                                                 for k, c in self.terms.items()])

    def times_x(self, power: int = 1) -> "TermFunction":
        return TermFunction.build(self.lattice, [((k[0], k[1] + power) + k[2:], c)
                                                 for k, c in self.terms.items()])

    # --- следы и вычисление ---

    def at_y(self, y0: float) -> "TermFunction":
        """След при фиксированном y: функция только от x"""
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            a = self.lattice.realize(rate) if kind != CONST else 0.0
            value = (y0 ** p) * float(_profile(kind, a, y0))
            pairs.append(((xf, q, 0, CONST, ZERO), c * value))
        return TermFunction.build(self.lattice, pairs)

    def at_x(self, x0: float) -> "TermFunction":
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            value = (x0 ** q) * np.exp(1j * self.lattice.realize(xf) * x0)
            pairs.append(((ZERO, 0, p, kind, rate), c * value))
        return TermFunction.build(self.lattice, pairs)

    def at_period(self) -> "TermFunction":
        """Значение при x = T; множители e^{inκT} равны единице точно"""
        period = self.lattice.period
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            rest = (0,) + xf[1:]
            phase = 1.0 if rest == ZERO else np.exp(1j * self.lattice.realize(rest) * period)
            pairs.append(((ZERO, 0, p, kind, rate), c * phase * period ** q))
        return TermFunction.build(self.lattice, pairs)

    def evaluate(self, x, y=0.0):
        """Значение на сетке (x, y) с numpy-broadcasting"""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        result = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for (xf, q, p, kind, rate), c in self.terms.items():
            w = self.lattice.realize(xf)
            a = self.lattice.realize(rate) if kind != CONST else 0.0
            result = result + c * (x ** q) * np.exp(1j * w * x) * (y ** p) * _profile(kind, a, y)
        return result

    # --- интегралы ---

    def integrate_y(self) -> "TermFunction":
        """∫₀¹ dy, остаётся функция от x"""
        buckets: Dict[TermKey, List[complex]] = {}
        for (xf, q, p, kind, rate), c in self.terms.items():
            a = self.lattice.realize(rate) if kind != CONST else 0.0
            buckets.setdefault((xf, q, 0, CONST, ZERO), []).append(c * y_moment(p, kind, a))
        return TermFunction.build(self.lattice, [(k, _fsum_complex(v)) for k, v in buckets.items()])

    def antiderivative_y(self) -> "TermFunction":
        """∫₀^y dy′ в классе термов"""
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            if kind == CONST:
                pairs.append(((xf, q, p + 1, CONST, ZERO), c / (p + 1)))
                continue
            a = self.lattice.realize(rate)
            if abs(a) < 1e-4:
                pairs.extend(_small_rate_antiderivative(xf, q, p, kind, a, c))
                continue
            factorial = math.factorial(p)
            for m in range(p + 1):
                cm = (-1) ** m * factorial / math.factorial(p - m) / a ** (m + 1)
                if kind == COSH:
                    target = SINH if m % 2 == 0 else COSH
                else:
                    target = COSH if m % 2 == 0 else SINH
                pairs.append(((xf, q, p - m, target, rate), c * cm))
                if m == p and target == COSH:
                    pairs.append(((xf, q, 0, CONST, ZERO), -c * cm))
        return TermFunction.build(self.lattice, pairs)

    def integrate_x(self) -> "TermFunction":
        """∫₀^x dx′; нулевая частота даёт секулярный терм xᵠ⁺¹"""
        pairs = []
        for (xf, q, p, kind, rate), c in self.terms.items():
            if self.lattice.is_zero(xf):
                pairs.append(((ZERO, q + 1, p, kind, rate), c / (q + 1)))
                continue
            beta = 1j * self.lattice.realize(xf)
            factorial = math.factorial(q)
            for m in range(q + 1):
                cm = (-1) ** m * factorial / math.factorial(q - m) / beta ** (m + 1)
                pairs.append(((xf, q - m, p, kind, rate), c * cm))
            pairs.append(((ZERO, 0, p, kind, rate), -c * (-1) ** q * factorial / beta ** (q + 1)))
        return TermFunction.build(self.lattice, pairs)

    def drop_secular(self, tol: float = SECULAR_TOL, scale: Optional[float] = None) -> "TermFunction":
        """Убрать остаточные члены с xᵠ, q > 0; значимые вызывают ошибку

        scale задаёт масштаб сравнения, по умолчанию наибольший коэффициент.
        """
        scale = self.max_coeff() if scale is None else scale
        kept = {}
        for key, c in self.terms.items():
            if key[1] > 0:
                if abs(c) > tol * scale:
                    raise ConsistencyError(f"секулярный терм с коэффициентом {abs(c):.3e} не сократился")
                continue
            kept[key] = c
        return TermFunction(self.lattice, kept)

    def __repr__(self):
        return f"TermFunction({len(self.terms)} термов, max |c| = {self.max_coeff():.3e})"


def _small_rate_antiderivative(xf, q, p, kind, a, c):
    # ряд Тейлора профиля; при |a| < 1e-4 хватает нескольких членов
    pairs = []
    n = 0 if kind == COSH else 1
    term = 1.0 if n == 0 else a
    while abs(term) > 1e-18 or n < 2:
        pairs.append(((xf, q, p + n + 1, CONST, ZERO), c * term / (p + n + 1)))
        term *= a * a / ((n + 1) * (n + 2))
        n += 2
    return pairs


def _prune(terms: Dict[TermKey, complex]) -> Dict[TermKey, complex]:
    if not terms:
        return terms
    scale = max(abs(c) for c in terms.values())
    cutoff = PRUNE_TOL * scale
    return {k: c for k, c in terms.items() if abs(c) > cutoff}


def _product_profiles(k1: int, a1: Vector, k2: int, a2: Vector) -> List[Tuple[int, Vector, float]]:
    # произведение y-профилей через формулы суммы
    if k1 == CONST:
        return [(k2, a2, 1.0)]
    if k2 == CONST:
        return [(k1, a1, 1.0)]
    plus, minus = vadd(a1, a2), vsub(a1, a2)
    if k1 == COSH and k2 == COSH:
        return [(COSH, plus, 0.5), (COSH, minus, 0.5)]
    if k1 == COSH and k2 == SINH:
        return [(SINH, plus, 0.5), (SINH, vneg(minus), 0.5)]
    if k1 == SINH and k2 == COSH:
        return [(SINH, plus, 0.5), (SINH, minus, 0.5)]
    return [(COSH, plus, 0.5), (COSH, minus, -0.5)]


def multiply(f: TermFunction, g: TermFunction) -> TermFunction:
    """Поточечное произведение двух функций класса"""
    f._check(g)
    pairs = []
    for (xf1, q1, p1, kind1, r1), c1 in f.terms.items():
        for (xf2, q2, p2, kind2, r2), c2 in g.terms.items():
            xf = vadd(xf1, xf2)
            for kind, rate, factor in _product_profiles(kind1, r1, kind2, r2):
                pairs.append(((xf, q1 + q2, p1 + p2, kind, rate), c1 * c2 * factor))
    return TermFunction.build(f.lattice, pairs)


def integrate_y01(f: TermFunction) -> complex:
    """Точное значение ∫₀¹ f(y) dy для функции без зависимости от x"""
    if not f.is_x_free():
        raise DomainError("integrate_y01 требует функцию без зависимости от x")
    return f.integrate_y().scalar()


def integrate_x(f: TermFunction) -> TermFunction:
    return f.integrate_x()


@dataclass(frozen=True)
class StateVec:
    """Тройка (φ, υ, η); η не зависит от y"""
    phi: TermFunction
    upsilon: TermFunction
    eta: TermFunction

    @property
    def lattice(self) -> FrequencyLattice:
        return self.phi.lattice

    @classmethod
    def zero(cls, lattice: FrequencyLattice) -> "StateVec":
        z = TermFunction.zero(lattice)
        return cls(z, z, z)

    def __add__(self, other: "StateVec") -> "StateVec":
        return StateVec(self.phi + other.phi, self.upsilon + other.upsilon, self.eta + other.eta)

    def __sub__(self, other: "StateVec") -> "StateVec":
        return StateVec(self.phi - other.phi, self.upsilon - other.upsilon, self.eta - other.eta)

    def __neg__(self) -> "StateVec":
        return StateVec(-self.phi, -self.upsilon, -self.eta)

    def scale(self, factor) -> "StateVec":
        """Умножение на число или на функцию от x"""
        return StateVec(self.phi * factor, self.upsilon * factor, self.eta * factor)

    def __mul__(self, factor) -> "StateVec":
        return self.scale(factor)

    __rmul__ = __mul__

    def components(self) -> Tuple[TermFunction, TermFunction, TermFunction]:
        return self.phi, self.upsilon, self.eta

    def is_zero(self) -> bool:
        return all(part.is_zero() for part in self.components())

    def max_coeff(self) -> float:
        return max(part.max_coeff() for part in self.components())

    def at_period(self) -> "StateVec":
        return StateVec(self.phi.at_period(), self.upsilon.at_period(), self.eta.at_period())

    def dom_residual(self) -> float:
        """Нарушение условий dom(L): η − υ(1) = 0 и φ_y(0) = 0"""
        trace = (self.eta - self.upsilon.at_y(1.0)).max_coeff()
        neumann = self.phi.dy().at_y(0.0).max_coeff()
        return max(trace, neumann)


def pair(u1: StateVec, u2: StateVec) -> TermFunction:
    """Скалярное произведение по y; при зависимости от x остаётся функция от x"""
    phi_part = u1.phi * u2.phi.conj() + u1.phi.dy() * u2.phi.dy().conj() + u1.upsilon * u2.upsilon.conj()
    return phi_part.integrate_y() + u1.eta * u2.eta.conj()


def inner(u1: StateVec, u2: StateVec) -> complex:
    """⟨u₁, u₂⟩ = ∫(φ₁φ₂* + φ₁_yφ₂_y*) + ∫υ₁υ₂* + η₁η₂*"""
    value = pair(u1, u2)
    if not value.is_x_free():
        raise DomainError("inner требует функции без зависимости от x")
    return value.scalar() if not value.is_zero() else 0j


def gauss_legendre_01(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Узлы и веса Гаусса–Лежандра на [0, 1]"""
    t, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (t + 1.0), 0.5 * w


def quad_oracle_inner(u1: StateVec, u2: StateVec, nodes: int = 64, x: float = 0.0) -> complex:
    """То же скалярное произведение квадратурой Гаусса–Лежандра"""
    if nodes < 16:
        raise DomainError("нужно не меньше 16 узлов")
    y, w = gauss_legendre_01(nodes)
    phi1, phi2 = u1.phi.evaluate(x, y), u2.phi.evaluate(x, y)
    dphi1, dphi2 = u1.phi.dy().evaluate(x, y), u2.phi.dy().evaluate(x, y)
    ups1, ups2 = u1.upsilon.evaluate(x, y), u2.upsilon.evaluate(x, y)
    integrand = phi1 * np.conj(phi2) + dphi1 * np.conj(dphi2) + ups1 * np.conj(ups2)
    eta = complex(u1.eta.evaluate(x)) * complex(u2.eta.evaluate(x)).conjugate()
    return complex(np.sum(w * integrand)) + eta
