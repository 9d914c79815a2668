# Конфигурация движка спектральной устойчивости волн Стокса
#
# Каждое значение можно переопределить переменной окружения STOKES_<ИМЯ>
# (в том числе через файл .env).

import os
import sys

from dotenv import load_dotenv

from errors import ConfigError

load_dotenv()


def _raw(name: str):
    return os.getenv(f"STOKES_{name}")


def env_float(name: str, default: float) -> float:
    """Вещественная настройка из окружения"""
    raw = _raw(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"STOKES_{name}: ожидалось число, получено {raw!r}")


def env_int(name: str, default: int) -> int:
    """Целочисленная настройка из окружения"""
    raw = _raw(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"STOKES_{name}: ожидалось целое число, получено {raw!r}")


def env_bool(name: str, default: bool) -> bool:
    """Логическая настройка из окружения"""
    raw = _raw(name)
    if raw is None or raw.strip() == "":
        return default
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on", "да"):
        return True
    if value in ("0", "false", "no", "off", "нет"):
        return False
    raise ConfigError(f"STOKES_{name}: ожидалось true/false, получено {raw!r}")


# Настройки алгебры термов
PRUNE_TOL = env_float("PRUNE_TOL", 1e-14)  # относительно наибольшего коэффициента
Y_POWER_CAP = env_int("Y_POWER_CAP", 6)
Y_RATE_ZERO_TOL = env_float("Y_RATE_ZERO_TOL", 1e-13)
SERIES_RADIUS = env_float("SERIES_RADIUS", 2.0)

# Настройки поиска корней
ROOT_TOL = env_float("ROOT_TOL", 1e-12)
# brentq не принимает rtol меньше 4·eps
BRENT_RTOL = max(env_float("BRENT_RTOL", 4 * sys.float_info.epsilon), 4 * sys.float_info.epsilon)
NEWTON_MAX_ITER = env_int("NEWTON_MAX_ITER", 50)
CRITICAL_TOL = env_float("CRITICAL_TOL", 1e-12)

# Настройки решателя неопределённых коэффициентов
LSTSQ_RESIDUAL_TOL = env_float("LSTSQ_RESIDUAL_TOL", 1e-8)
CONDITION_LIMIT = env_float("CONDITION_LIMIT", 1e10)
MP_DPS = env_int("MP_DPS", 32)
SECULAR_TOL = env_float("SECULAR_TOL", 1e-12)
SINGULAR_TOL = env_float("SINGULAR_TOL", 1e-9)

# Настройки волны Стокса
STOKES_CROSSCHECK = env_bool("CROSSCHECK", True)
STOKES_CROSSCHECK_TOL = env_float("CROSSCHECK_TOL", 1e-10)
COLLOCATION_Y = env_int("COLLOCATION_Y", 16)
COLLOCATION_X = env_int("COLLOCATION_X", 24)
EPS_VALIDITY = env_float("EPS_VALIDITY", 0.1)

# Настройки собственных функций
KAPPA_ONE_TOL = env_float("KAPPA_ONE_TOL", 1e-6)
BIORTH_TOL = env_float("BIORTH_TOL", 1e-8)

# Настройки индексов
F2_CONSISTENCY_TOL = env_float("F2_CONSISTENCY_TOL", 1e-7)
IND2_EXTENDED_THRESHOLD = env_float("IND2_EXTENDED_THRESHOLD", 1e-6)
KAPPA1_BRACKET = (env_float("KAPPA1_LO", 1.0), env_float("KAPPA1_HI", 2.0))
KAPPA2_BRACKET = (env_float("KAPPA2_LO", 1.5), env_float("KAPPA2_HI", 2.2))
KAPPA2_WIDTH = env_float("KAPPA2_WIDTH", 1e-6)
VARIANT_BRACKETS = ((0.8, 0.95), (0.95, 1.1))
BUBBLE_EPS_MAX = env_float("BUBBLE_EPS_MAX", 0.01)
DELTA_GUARD = env_float("DELTA_GUARD", 0.05)

# Настройки свипов и вывода
SWEEP_WORKERS = env_int("SWEEP_WORKERS", 4)
FLOAT_DIGITS = env_int("FLOAT_DIGITS", 17)
TOOL_NAME = "stokes-instability"
TOOL_VERSION = "1.0.0"
