# Вывод хода расчёта и результатов в консоль
#
# Всё пишется в stderr: stdout остаётся только для CSV/JSON.

import sys
from typing import Any, List, Sequence

from colorama import init, Fore, Style
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

init()

console = Console(stderr=True)

_state = {"quiet": False}


def set_quiet(quiet: bool):
    """Заглушить info и success (флаг --quiet)"""
    _state["quiet"] = bool(quiet)


def is_quiet() -> bool:
    return _state["quiet"]


def _line(color: str, text: str):
    print(f"{color}{text}{Style.RESET_ALL}", file=sys.stderr)


def banner(title: str, subtitle: str = ""):
    """Заголовок запуска"""
    if is_quiet():
        return
    console.print(Panel(f"🚀 {title}", subtitle=subtitle or None, border_style="blue"))


def info(message: str):
    if not is_quiet():
        _line(Fore.BLUE, f"🔍 {message}")


def success(message: str):
    if not is_quiet():
        _line(Fore.GREEN, f"✅ {message}")


def warning(message: str):
    _line(Fore.YELLOW, f"⚠️  {message}")


def error(message: str):
    _line(Fore.RED, f"❌ {message}")


def table(title: str, columns: Sequence[str], rows: List[Sequence[Any]]):
    """Таблица результатов"""
    if is_quiet():
        return
    result = Table(title=f"📊 {title}")
    for column in columns:
        result.add_column(str(column))
    for row in rows:
        result.add_row(*[_cell(value) for value in row])
    console.print(result)


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, complex):
        return f"{value.real:.10g}{value.imag:+.10g}i"
    return str(value)


def validity_warning(name: str, value: float, limit: float):
    """Предупреждение о выходе за область применимости разложения"""
    warning(f"{name} = {value:g} больше {limit:g}: остаточные члены разложения не контролируются")
