#!/usr/bin/env python3
"""
Тестирование командной строки: подкоманды, форматы вывода, коды выхода
"""

import csv
import io
import json
from types import SimpleNamespace

import pytest

from cli import SweepSpec, closed_form_summary, jsonable, parse_range, parse_sigma, run
from errors import DomainError


def read_csv(text: str):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    return rows[0], rows[1:]


def test_dispersion_csv(capsys):
    assert run(["dispersion", "--kappa", "1", "--sigma", "0", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# ")
    header, rows = read_csv(out)
    record = dict(zip(header, rows[0]))
    assert record["regime"] == "AtZero"
    assert float(record["k1"]) == -1.0 and float(record["k2"]) == 1.0
    assert float(record["k3"]) == 0.0 and float(record["k4"]) == 0.0


def test_dispersion_json(capsys):
    assert run(["dispersion", "--kappa", "1.5", "--sigma", "0.05", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["inputs"] == {"kappa": 1.5, "sigma": 0.05}
    assert payload["outputs"]["regime"] == "BelowCritical"
    assert set(payload["guards"]) == {"delta_guard", "bubble_eps_max", "eps_validity"}


def test_find_kappa1(capsys):
    assert run(["indices", "find-kappa1", "--format", "json", "--quiet"]) == 0
    outputs = json.loads(capsys.readouterr().out)["outputs"]
    assert outputs["kappa1"] == pytest.approx(1.362782756726421, abs=1e-9)


def test_sweep_ind1(capsys):
    assert run(["sweep", "--kappa", "0.5:2.5:41", "--targets", "ind1", "--quiet"]) == 0
    header, rows = read_csv(capsys.readouterr().out)
    assert header == ["kappa", "ind1", "nu"]
    assert len(rows) == 41
    values = [float(row[1]) for row in rows]
    changes = sum(1 for a, b in zip(values, values[1:]) if a * b < 0)
    assert changes == 1
    crossing = next(i for i, (a, b) in enumerate(zip(values, values[1:])) if a * b < 0)
    assert float(rows[crossing][0]) < 1.362782756726421 < float(rows[crossing + 1][0])


def test_sweep_is_deterministic(capsys):
    argv = ["sweep", "--kappa", "0.8:1.6:9", "--targets", "ind1,resonances", "--workers", "3"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv[:-1] + ["1"]) == 0
    assert capsys.readouterr().out == first


def test_monodromy_csv(capsys):
    assert run(["monodromy", "--kappa", "1", "--order", "1", "--format", "csv", "--quiet"]) == 0
    header, rows = read_csv(capsys.readouterr().out)
    assert header == ["m", "n", "j", "k", "re", "im", "provenance"]
    # (0,0), (1,0), (0,1) по 16 элементов
    assert len(rows) == 48
    jordan = next(r for r in rows if r[:4] == ["0", "0", "4", "3"])
    assert float(jordan[4]) == pytest.approx(2 * 3.141592653589793)


def test_monodromy_json_lists_closed_forms(capsys):
    assert run(["monodromy", "--kappa", "1", "--order", "1", "--format", "json", "--quiet"]) == 0
    forms = json.loads(capsys.readouterr().out)["provenance"]["closed_forms"]
    assert set(forms) == {"a00_zero", "a10_zero", "a01_zero"}
    assert all(form["quadrature_only"] == [] for form in forms.values())


def test_closed_form_summary_marks_quadrature_entries():
    series = SimpleNamespace(coeffs={(0, 0): None, (2, 0): None}, regime="zero")
    summary = closed_form_summary(series)
    assert "1,3" in summary["a20_zero"]["quadrature_only"]
    assert summary["a00_zero"]["quadrature_only"] == []
    # для a^(0,1) при σ > σ_c формул в реестре нет
    high = closed_form_summary(SimpleNamespace(coeffs={(0, 0): None, (0, 1): None}, regime="high"))
    assert set(high) == {"a00_high"}


def test_stokes_json(capsys):
    assert run(["stokes", "--kappa", "1.2", "--order", "2", "--format", "json", "--quiet"]) == 0
    outputs = json.loads(capsys.readouterr().out)["outputs"]
    assert [block["order"] for block in outputs["orders"]] == [1, 2]
    assert max(outputs["residuals"].values()) < 1e-6


def test_unknown_flag_exits_with_1(capsys):
    assert run(["dispersion", "--kappa", "1", "--bogus"]) == 1
    assert capsys.readouterr().out == ""


def test_domain_error_exits_with_2(capsys):
    assert run(["dispersion", "--kappa=-1"]) == 2
    assert "DomainError" in capsys.readouterr().err
    assert run(["stokes", "--kappa", "1", "--order", "5"]) == 2
    assert run(["sweep", "--kappa", "2:1:5"]) == 2


def test_indices_value_requires_kappa():
    assert run(["indices", "value", "--quiet"]) == 2


@pytest.mark.slow
def test_spectrum_bubble_writes_sidecar(tmp_path, capsys):
    out = tmp_path / "bubble.csv"
    assert run(["spectrum", "bubble", "--kappa", "1.5", "--eps", "0.001", "--points", "21", "--out", str(out)]) == 0
    header, rows = read_csv(out.read_text(encoding="utf-8"))
    assert header[0] == "gamma" and len(rows) >= 21
    sidecar = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
    assert sidecar["outputs"]["ind2"] > 0
    assert sidecar["outputs"]["max_re"] > 0


def test_parse_range_and_sigma():
    assert parse_range("0.5:2.5:41") == (0.5, 2.5, 41)
    assert parse_range("1.3") == (1.3, 1.3, 1)
    with pytest.raises(DomainError):
        parse_range("1:2")
    assert parse_sigma("res:2") == (None, 2)
    assert parse_sigma("0.25") == (0.25, None)
    with pytest.raises(DomainError):
        parse_sigma("res:x")


def test_sweep_spec_validation():
    spec = SweepSpec(kappa_range=(1.0, 2.0, 3), targets=frozenset({"ind1"}))
    assert spec.kappas() == [1.0, 1.5, 2.0]
    with pytest.raises(DomainError):
        SweepSpec(kappa_range=(1.0, 2.0, 3), targets=frozenset({"ind9"}))
    with pytest.raises(DomainError):
        SweepSpec(kappa_range=(1.0, 2.0, 0), targets=frozenset({"ind1"}))


def test_jsonable_complex():
    assert jsonable({"a": 1 + 2j, (1, 0): [0.5]}) == {"a": {"re": 1.0, "im": 2.0}, "(1, 0)": [0.5]}
    assert jsonable(float("nan")) == "nan"


if __name__ == "__main__":
    print("🚀 Тестирование командной строки...")
    raise SystemExit(pytest.main([__file__, "-v"]))
