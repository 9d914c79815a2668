# Иерархия исключений движка спектральной устойчивости волн Стокса
#
# Библиотечный код только поднимает исключения; перевод в коды выхода
# и сообщения в консоли делает cli.run.


class StokesEngineError(Exception):
    """Базовое исключение движка"""
    exit_code = 3


class DomainError(StokesEngineError, ValueError):
    """Недопустимые входные данные (κ ≤ 0, σ < 0, σ = σ_c, неподдерживаемый порядок)"""
    exit_code = 2


class ConfigError(DomainError):
    """Некорректное значение переменной окружения STOKES_*"""
    exit_code = 2


class PoleError(DomainError):
    """Знаменатель формулы обращается в ноль"""
    exit_code = 2


class UnsupportedDegreeError(StokesEngineError):
    """Превышена допустимая степень y в произведении термов"""


class SequencingError(StokesEngineError):
    """Не хватает данных младших порядков"""


class AbsentEntryError(StokesEngineError, KeyError):
    """Запрошен элемент, для которого нет замкнутой формулы ("*")"""

    def __str__(self):
        # KeyError оборачивает сообщение в кавычки
        return str(self.args[0]) if self.args else ""


class ConsistencyError(StokesEngineError):
    """Две независимые ветки вычисления разошлись"""


class BracketError(ConsistencyError):
    """На отрезке поиска корня нет смены знака"""
