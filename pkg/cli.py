"""
Командная строка движка: dispersion, stokes, monodromy, indices, spectrum, sweep

Результаты (CSV/JSON) пишутся в stdout или в файл --out, ход расчёта - в stderr.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

import reporting
from closed_forms import absent_entries, form_key, list_available_forms
from dispersion import make_wave_params, resonance_sigma, roots_k
from errors import AbsentEntryError, DomainError, StokesEngineError
from indices import (bf_coefficients, bubble_spectrum, find_kappa1, find_kappa2, find_variant_window, ind1,
                     ind1_scale, ind2, nu_bridges_mielke, resonance3_stability_check)
from monodromy import MonodromySeries, build_series
from settings import (BUBBLE_EPS_MAX, DELTA_GUARD, EPS_VALIDITY, FLOAT_DIGITS, SWEEP_WORKERS, TOOL_NAME,
                      TOOL_VERSION)
from stokes import build_stokes, stokes_residual, stokes_table

SWEEP_TARGETS = ("ind1", "ind2", "resonances", "bubble")
INDEX_ACTIONS = ("value", "find-kappa1", "find-kappa2", "variant-window")


class _Parser(argparse.ArgumentParser):
    """argparse с кодом выхода 1 при ошибке разбора"""

    def error(self, message):
        self.print_usage(sys.stderr)
        reporting.error(message)
        raise SystemExit(1)


@dataclass(frozen=True)
class SweepSpec:
    """Параметры перебора по κ"""
    kappa_range: Tuple[float, float, int]
    targets: FrozenSet[str]
    eps: float = 0.001
    output: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        lo, hi, count = self.kappa_range
        if lo <= 0 or hi < lo:
            raise DomainError(f"некорректный диапазон κ: {lo}:{hi}")
        if count < 1:
            raise DomainError("число точек перебора должно быть не меньше 1")
        if self.eps < 0:
            raise DomainError("ε должно быть неотрицательным")
        unknown = set(self.targets) - set(SWEEP_TARGETS)
        if unknown or not self.targets:
            raise DomainError(f"неизвестные цели перебора: {sorted(unknown) or 'пусто'}")

    def kappas(self) -> List[float]:
        lo, hi, count = self.kappa_range
        return [float(k) for k in np.linspace(lo, hi, count)]


def parse_range(text: str) -> Tuple[float, float, int]:
    """'lo:hi:count' или одно значение κ"""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            value = float(parts[0])
            return value, value, 1
        if len(parts) == 3:
            return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        pass
    raise DomainError(f"ожидался диапазон вида lo:hi:count, получено '{text}'")


def parse_sigma(text: str) -> Tuple[Optional[float], Optional[int]]:
    """σ как число или 'res:N'"""
    if text.startswith("res:"):
        try:
            return None, int(text[4:])
        except ValueError:
            raise DomainError(f"некорректный порядок резонанса '{text}'")
    try:
        return float(text), None
    except ValueError:
        raise DomainError(f"некорректное σ '{text}'")


# --- сериализация ---

def jsonable(value: Any) -> Any:
    """Приведение к типам JSON; комплексные числа - {"re", "im"}"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def guards() -> Dict[str, float]:
    return {"delta_guard": DELTA_GUARD, "bubble_eps_max": BUBBLE_EPS_MAX, "eps_validity": EPS_VALIDITY}


def render_json(inputs: Dict[str, Any], outputs: Any, provenance: Optional[Dict[str, Any]] = None) -> str:
    payload = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "inputs": inputs,
        "outputs": outputs,
        "provenance": provenance or {},
        "guards": guards(),
    }
    return json.dumps(jsonable(payload), ensure_ascii=False, indent=2) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        # repr даёт кратчайшую запись, однозначно восстанавливающую число
        return repr(float(value)) if FLOAT_DIGITS >= 17 else f"{float(value):.{FLOAT_DIGITS}g}"
    return str(value)


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    buffer.write(f"# {TOOL_NAME} {TOOL_VERSION}\n")
    buffer.write("# " + " ".join(f"{k}={v!r}" for k, v in guards().items()) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        reporting.success(f"записано: {out}")
    else:
        sys.stdout.write(text)


# --- подкоманды ---

def cmd_dispersion(args) -> int:
    wp = make_wave_params(args.kappa)
    point = roots_k(wp, args.sigma)
    outputs = {"regime": point.regime.value, "k1": point.k1, "k2": point.k2, "k3": point.k3, "k4": point.k4,
               "sigma_c": point.sigma_c, "k_c": point.k_c}
    reporting.table("Корни k_j(σ)", ["k1", "k2", "k3", "k4"], [[point.k1, point.k2, point.k3, point.k4]])
    if args.format == "csv":
        columns = ["kappa", "sigma"] + list(outputs)
        emit(render_csv(columns, [[args.kappa, args.sigma] + list(outputs.values())]), args.out)
    else:
        emit(render_json({"kappa": args.kappa, "sigma": args.sigma}, outputs), args.out)
    return 0


def cmd_stokes(args) -> int:
    if not 1 <= args.order <= 3:
        raise DomainError("порядок волны Стокса должен быть от 1 до 3")
    se = build_stokes(make_wave_params(args.kappa))
    table = stokes_table(se, args.order)
    residuals = {n: stokes_residual(se, n) for n in range(1, args.order + 1)}
    reporting.table("Невязки по порядкам", ["порядок", "невязка"], [[n, r] for n, r in residuals.items()])
    if args.format == "csv":
        rows = []
        for block in table["orders"]:
            for name in ("phi", "eta"):
                for term in block[name]:
                    rows.append([block["order"], name, term["x_freq"], term["y_power"], term["y_kind"],
                                 term["y_rate"], term["re"], term["im"]])
        columns = ["order", "field", "x_freq", "y_power", "y_kind", "y_rate", "re", "im"]
        emit(render_csv(columns, rows), args.out)
    else:
        table["residuals"] = residuals
        emit(render_json({"kappa": args.kappa, "order": args.order}, table), args.out)
    return 0


def closed_form_summary(series: MonodromySeries) -> Dict[str, Any]:
    """Какие формулы реестра участвуют в ряде и какие их элементы берутся квадратурой"""
    names = list_available_forms()
    summary = {}
    for order in sorted(series.coeffs):
        try:
            key = form_key(order, series.regime)
        except AbsentEntryError:
            continue
        summary[key] = {"name": names[key], "quadrature_only": [f"{j},{k}" for j, k in absent_entries(key)]}
    return summary


def cmd_monodromy(args) -> int:
    sigma, order = parse_sigma(args.sigma)
    wp = make_wave_params(args.kappa)
    series = build_series(wp, sigma if sigma is not None else 0.0, max_order=args.order, resonance=order)
    matrices = {f"{m},{n}": series.coeffs[(m, n)] for (m, n) in sorted(series.coeffs)}
    provenance = {",".join(map(str, key)): path for key, path in sorted(series.provenance.items())}
    provenance["closed_forms"] = closed_form_summary(series)
    outputs = {"sigma": series.sigma, "labels": list(series.labels), "period": series.period,
               "matrices": matrices}
    if args.format == "csv":
        rows = []
        for (m, n), matrix in sorted(series.coeffs.items()):
            for j in range(series.dim):
                for k in range(series.dim):
                    value = complex(matrix[j, k])
                    rows.append([m, n, j + 1, k + 1, value.real, value.imag,
                                 series.provenance.get((m, n, j + 1, k + 1), "closed")])
        emit(render_csv(["m", "n", "j", "k", "re", "im", "provenance"], rows), args.out)
    else:
        emit(render_json({"kappa": args.kappa, "sigma": args.sigma, "order": args.order}, outputs, provenance),
             args.out)
    return 0


def _index_value(kappa: float, which: str) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    wp = make_wave_params(kappa)
    outputs: Dict[str, Any] = {}
    provenance: Dict[str, Any] = {}
    if which in ("ind1", "both"):
        bf = bf_coefficients(wp)
        outputs.update({"ind1": bf.ind1, "ind1_scale": ind1_scale(wp), "nu": bf.nu, "f1": bf.f1, "f2": bf.f2,
                        "f2_identity": bf.f2_identity, "alpha10": bf.alpha10, "alpha20": bf.alpha20,
                        "alpha11": bf.alpha11, "alpha11_sq": bf.alpha11_sq})
        provenance["zero"] = bf.provenance
        reporting.success(f"ind₁({kappa}) = {bf.ind1:.12g}")
    if which in ("ind2", "both"):
        bc = ind2(wp)
        outputs.update({"ind2": bc.ind2, "sigma2": bc.sigma, "witnesses": bc.witnesses,
                        "extended_precision": bc.extended_precision, "gamma_star": bc.gamma_star,
                        "gamma_star_alt": bc.gamma_star_alt, "alpha10_high": bc.alpha10, "alpha02": bc.alpha02,
                        "alpha20_high": bc.alpha20, "alpha12": bc.alpha12, "alpha04": bc.alpha04,
                        "d": {"200": bc.d200, "020": bc.d020, "004": bc.d004, "110": bc.d110, "102": bc.d102,
                              "012": bc.d012}})
        reporting.success(f"ind₂({kappa}) = {bc.ind2:.12g}")
    return outputs, provenance


def cmd_indices(args) -> int:
    if args.action == "value":
        if args.kappa is None:
            raise DomainError("для indices value нужен --kappa")
        outputs, provenance = _index_value(args.kappa, args.which)
        inputs = {"kappa": args.kappa, "which": args.which}
    elif args.action == "find-kappa1":
        outputs, provenance, inputs = find_kappa1(), {}, {}
        reporting.success(f"κ₁ = {outputs['kappa1']:.10g}")
    elif args.action == "find-kappa2":
        outputs, provenance, inputs = find_kappa2(), {}, {}
        reporting.success(f"κ₂ = {outputs['kappa2']:.10g}")
    else:
        lower, upper = find_variant_window()
        outputs, provenance, inputs = {"kappa_lower": lower, "kappa_upper": upper}, {}, {}
        reporting.success(f"окно варианта ind₂: ({lower:.6g}, {upper:.6g})")
    if args.format == "csv":
        flat = {k: v for k, v in outputs.items() if isinstance(v, (int, float, bool, str))}
        emit(render_csv(list(flat), [list(flat.values())]), args.out)
    else:
        emit(render_json(inputs, outputs, provenance), args.out)
    return 0


def cmd_spectrum(args) -> int:
    wp = make_wave_params(args.kappa)
    curve = bubble_spectrum(wp, args.eps, points=args.points)
    bc = curve.coeffs
    if curve.empty:
        reporting.warning(f"κ = {args.kappa}: ind₂ ≤ 0, пузыря неустойчивости нет")
    else:
        reporting.success(f"max Re δ = {curve.max_re:.12g} при γ* = {curve.gamma_star:.12g}")
    rows = [[g, p.real, p.imag, m.real, m.imag]
            for g, p, m in zip(curve.gamma, curve.delta_plus, curve.delta_minus)]
    columns = ["gamma", "re_delta_plus", "im_delta_plus", "re_delta_minus", "im_delta_minus"]
    sidecar = render_json(
        {"kappa": args.kappa, "eps": args.eps, "points": args.points},
        {"ind2": bc.ind2, "sigma2": bc.sigma, "gamma_star": curve.gamma_star, "max_re": curve.max_re,
         "alpha10": bc.alpha10, "alpha02": bc.alpha02, "alpha20": bc.alpha20, "alpha12": bc.alpha12,
         "alpha04": bc.alpha04,
         "d": {"200": bc.d200, "020": bc.d020, "004": bc.d004, "110": bc.d110, "102": bc.d102, "012": bc.d012}},
        {"series": "resonance N = 2"})
    if args.format == "json":
        outputs = json.loads(sidecar)
        outputs["outputs"]["curve"] = [dict(zip(columns, row)) for row in rows]
        emit(json.dumps(jsonable(outputs), ensure_ascii=False, indent=2) + "\n", args.out)
        return 0
    emit(render_csv(columns, rows), args.out)
    if args.out:
        Path(args.out).with_suffix(".json").write_text(sidecar, encoding="utf-8")
    return 0


def sweep_row(kappa: float, spec: SweepSpec) -> Dict[str, Any]:
    """Одна строка перебора; чистая функция от κ"""
    wp = make_wave_params(kappa)
    row: Dict[str, Any] = {"kappa": kappa}
    if "ind1" in spec.targets:
        row["ind1"] = ind1(wp)
        row["nu"] = nu_bridges_mielke(wp)
    if "resonances" in spec.targets:
        row["sigma2"] = resonance_sigma(wp, 2).sigma_N
        row["sigma3"] = resonance_sigma(wp, 3).sigma_N
    if "ind2" in spec.targets or "bubble" in spec.targets:
        bc = ind2(wp)
        if "ind2" in spec.targets:
            row["ind2"] = bc.ind2
        if "bubble" in spec.targets:
            row["bubble_max_re"] = bubble_spectrum(wp, spec.eps, coeffs=bc).max_re
    return row


def run_sweep(spec: SweepSpec, workers: int = SWEEP_WORKERS) -> List[Dict[str, Any]]:
    """Строки перебора в порядке κ независимо от порядка завершения"""
    kappas = spec.kappas()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(sweep_row, kappa, spec) for kappa in kappas]
        rows = [future.result() for future in futures]
    reporting.success(f"перебор: {len(rows)} значений κ")
    return rows


def cmd_sweep(args) -> int:
    spec = SweepSpec(kappa_range=parse_range(args.kappa),
                     targets=frozenset(t.strip() for t in args.targets.split(",") if t.strip()),
                     eps=args.eps, output=args.out, fmt=args.format or "csv")
    rows = run_sweep(spec, args.workers)
    columns = list(rows[0])
    if spec.fmt == "json":
        emit(render_json({"kappa": args.kappa, "targets": sorted(spec.targets), "eps": spec.eps}, rows), spec.output)
    else:
        emit(render_csv(columns, [[row[c] for c in columns] for row in rows]), spec.output)
    return 0


def resonance3_report(args) -> int:
    report = resonance3_stability_check(make_wave_params(args.kappa), args.order)
    reporting.table("Резонанс N ≥ 3", list(report), [list(report.values())])
    emit(render_json({"kappa": args.kappa, "order": args.order}, report), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="только ошибки и предупреждения")
    common.add_argument("--format", choices=["csv", "json"], default=None, help="формат вывода")
    common.add_argument("--out", default=None, help="файл результата (по умолчанию stdout)")

    parser = _Parser(prog=TOOL_NAME, description="Спектральная неустойчивость волн Стокса малой амплитуды")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", parents=[common], help="корни k_j(σ)")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.set_defaults(handler=cmd_dispersion)

    p = sub.add_parser("stokes", parents=[common], help="коэффициенты волны Стокса")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(handler=cmd_stokes)

    p = sub.add_parser("monodromy", parents=[common], help="матрицы a^(m,n)(T)")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--sigma", default="0", help="σ или res:N")
    p.add_argument("--order", type=int, default=2, choices=[0, 1, 2])
    p.set_defaults(handler=cmd_monodromy)

    p = sub.add_parser("indices", parents=[common], help="ind₁, ind₂ и их нули")
    p.add_argument("action", nargs="?", default="value", choices=INDEX_ACTIONS)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--which", choices=["ind1", "ind2", "both"], default="both")
    p.set_defaults(handler=cmd_indices)

    p = sub.add_parser("resonance3", parents=[common], help="проверка устойчивости при N ≥ 3")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(handler=resonance3_report)

    p = sub.add_parser("spectrum", parents=[common], help="пузырь высокочастотной неустойчивости")
    p.add_argument("kind", choices=["bubble"])
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--points", type=int, default=201)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("sweep", parents=[common], help="перебор по κ")
    p.add_argument("--kappa", required=True, help="lo:hi:count")
    p.add_argument("--targets", default="ind1", help=",".join(SWEEP_TARGETS))
    p.add_argument("--eps", type=float, default=0.001)
    p.add_argument("--workers", type=int, default=SWEEP_WORKERS)
    p.set_defaults(handler=cmd_sweep)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа: разбор аргументов, запуск подкоманды, код выхода 0/1/2/3"""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)
    reporting.set_quiet(args.quiet)
    reporting.banner(f"{TOOL_NAME} {TOOL_VERSION}", args.command)
    try:
        return args.handler(args)
    except StokesEngineError as exc:
        reporting.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
