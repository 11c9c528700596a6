import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from spreadlens.cli import main

from conftest import DATA_DIR, GOLDEN_DIR

FOCUS = "lagoa formosa"
A = "2020-04-20"
B = "2020-05-09"


@pytest.fixture()
def runner():
    return CliRunner()


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


@pytest.fixture()
def small_inputs(tmp_path):
    cases = _write(tmp_path / "raw_cases.csv",
                   "city,date,new_cases\nAlfa,2020-03-02,3\nBravo,2020-03-04,1\n")
    coords = _write(tmp_path / "raw_coords.csv",
                    "city,lat,lon\nAlfa,-22.0,-51.0\nBravo,-22.5,-50.5\n")
    iso = _write(tmp_path / "raw_iso.csv",
                 "city,date,index\nAlfa,2020-03-02,45\n")
    return cases, coords, iso


def test_ingest_happy_path_writes_canonical_files(runner, small_inputs, tmp_path):
    cases, coords, iso = small_inputs
    out = tmp_path / "out"
    result = runner.invoke(main, [
        "ingest", "--cases", str(cases), "--coords", str(coords),
        "--isolation", str(iso), "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    for name in ("cases.csv", "coords.csv", "isolation.csv"):
        assert (out / name).exists()
    index = json.loads((out / "index.json").read_text("utf-8"))
    assert index["k"] == 10
    assert set(index["neighbors"]) == {"alfa", "bravo"}


def test_ingest_unknown_city_warns_but_succeeds(runner, small_inputs, tmp_path):
    cases, coords, iso = small_inputs
    cases = _write(tmp_path / "cases2.csv",
                   cases.read_text("utf-8") + "Fantasma,2020-03-05,9\n")
    out = tmp_path / "out2"
    result = runner.invoke(main, [
        "ingest", "--cases", str(cases), "--coords", str(coords), "--out", str(out),
    ])
    assert result.exit_code == 0
    warnings = [l for l in result.stderr.splitlines() if l.startswith("warning:")]
    assert len(warnings) == 1
    assert "fantasma" in warnings[0]


def test_ingest_header_only_coords_is_fatal_validation(runner, small_inputs, tmp_path):
    cases, _, _ = small_inputs
    coords = _write(tmp_path / "empty_coords.csv", "city,lat,lon\n")
    result = runner.invoke(main, [
        "ingest", "--cases", str(cases), "--coords", str(coords),
        "--out", str(tmp_path / "out3"),
    ])
    assert result.exit_code == 2


def test_ingest_malformed_cases_exit_1(runner, small_inputs, tmp_path):
    _, coords, _ = small_inputs
    bad = _write(tmp_path / "bad.csv", "city,date,new_cases\nAlfa,2020-03-02,\n")
    result = runner.invoke(main, [
        "ingest", "--cases", str(bad), "--coords", str(coords),
        "--out", str(tmp_path / "out4"),
    ])
    assert result.exit_code == 1


def test_ingest_seade_format(runner, tmp_path):
    feed = _write(tmp_path / "seade.csv",
                  "nome_munic;datahora;casos_novos\nAlfa;2020-03-02;3\nAlfa;2020-03-03;2\n")
    coords = _write(tmp_path / "coords.csv", "city,lat,lon\nAlfa,-22.0,-51.0\n")
    mapping = _write(tmp_path / "map.conf",
                     "city=nome_munic\ndate=datahora\ncases=casos_novos\ndelimiter=;\n")
    out = tmp_path / "out"
    result = runner.invoke(main, [
        "ingest", "--cases", str(feed), "--coords", str(coords),
        "--format", "seade", "--seade-config", str(mapping), "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert "alfa,2020-03-02,3" in (out / "cases.csv").read_text("utf-8")


def test_report_unknown_city_exit_3(runner):
    result = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", "atlantis", "--a", A, "--b", B,
    ])
    assert result.exit_code == 3


def test_report_text_includes_dominance_and_table(runner):
    result = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS, "--a", A, "--b", B,
    ])
    assert result.exit_code == 0, result.output
    assert "city window total:" in result.output
    assert "neighborhood window total:" in result.output
    assert "city dominates:" in result.output
    assert "glyph:" in result.output


def test_report_json_matches_api_golden_files(runner):
    result = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS,
        "--a", A, "--b", B, "--json",
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    glyph_golden = json.loads((GOLDEN_DIR / "glyph_lagoa_formosa.json").read_text("utf-8"))
    curves_golden = json.loads((GOLDEN_DIR / "curves_lagoa_formosa.json").read_text("utf-8"))
    assert payload["glyph"] == glyph_golden
    assert payload["curves"] == curves_golden


def test_report_zero_case_world(runner, tmp_path):
    _write(tmp_path / "cases.csv", "city,date,new_cases\nUm,2020-03-01,0\n")
    _write(tmp_path / "coords.csv",
           "city,lat,lon\nUm,-22.0,-51.0\nDois,-22.5,-50.5\nTres,-23.0,-50.0\n")
    result = runner.invoke(main, [
        "report", "--data", str(tmp_path), "--city", "um",
        "--a", "2020-03-01", "--b", "2020-03-01", "--json",
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["glyph"]["focus"]["window_total"] == 0
    assert payload["glyph"]["focus"]["saturation"] == 0.0
    assert payload["glyph"]["segments"] == []
    assert payload["curves"]["totals"] == {"city": 0, "neighborhood": 0}


def test_report_days_convenience_equals_explicit_window(runner):
    explicit = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS,
        "--a", A, "--b", B, "--json",
    ])
    convenience = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS,
        "--b", B, "--days", "20", "--json",
    ])
    assert json.loads(explicit.stdout) == json.loads(convenience.stdout)


def test_report_window_outside_range_exit_2(runner):
    result = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS,
        "--a", "2019-01-01", "--b", B,
    ])
    assert result.exit_code == 2


def test_windows_single_step_equals_report(runner):
    report = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS,
        "--a", A, "--b", B, "--json",
    ])
    windows = runner.invoke(main, [
        "windows", "--data", str(DATA_DIR), "--city", FOCUS,
        "--b", B, "--days", "20", "--steps", "1", "--json",
    ])
    report_payload = json.loads(report.stdout)
    row = json.loads(windows.stdout)["windows"][0]
    assert row["a"] == A and row["b"] == B
    assert row["city_total"] == report_payload["curves"]["totals"]["city"]
    assert row["neighborhood_total"] == report_payload["curves"]["totals"]["neighborhood"]
    assert row["saturation"] == report_payload["glyph"]["focus"]["saturation"]


def test_windows_calendar_arithmetic(runner):
    # 20-day windows ending 2020-05-16, three steps of stride 2, oldest first:
    # starts fall on April 23rd, 25th and 27th
    result = runner.invoke(main, [
        "windows", "--data", str(DATA_DIR), "--city", FOCUS,
        "--b", "2020-05-16", "--days", "20", "--steps", "3", "--stride", "2", "--json",
    ])
    assert result.exit_code == 0, result.output
    rows = json.loads(result.stdout)["windows"]
    assert [(r["a"], r["b"]) for r in rows] == [
        ("2020-04-23", "2020-05-12"),
        ("2020-04-25", "2020-05-14"),
        ("2020-04-27", "2020-05-16"),
    ]


def test_windows_monotone_fixture_totals_nondecreasing(runner, tmp_path):
    rows = [f"Solo,2020-03-{d:02d},{d}" for d in range(1, 31)]  # strictly growing dailies
    _write(tmp_path / "cases.csv", "city,date,new_cases\n" + "\n".join(rows) + "\n")
    _write(tmp_path / "coords.csv", "city,lat,lon\nSolo,-22.0,-51.0\n")
    result = runner.invoke(main, [
        "windows", "--data", str(tmp_path), "--city", "solo",
        "--b", "2020-03-30", "--days", "5", "--steps", "5", "--stride", "3", "--json",
    ])
    assert result.exit_code == 0, result.output
    totals = [r["city_total"] for r in json.loads(result.stdout)["windows"]]
    assert totals == sorted(totals)


def test_windows_rejects_bad_steps_and_stride(runner):
    for flag, value in (("--steps", "0"), ("--stride", "0")):
        result = runner.invoke(main, [
            "windows", "--data", str(DATA_DIR), "--city", FOCUS, flag, value,
        ])
        assert result.exit_code == 2


def test_report_rejects_malformed_date(runner):
    result = runner.invoke(main, [
        "report", "--data", str(DATA_DIR), "--city", FOCUS, "--a", "garbage", "--b", B,
    ])
    assert result.exit_code == 2
