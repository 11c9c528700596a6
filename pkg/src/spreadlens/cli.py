"""Operator command line: ingest data, run offline reports, launch the API.

Exit codes: 0 success, 1 parse failure, 2 validation/usage failure,
3 unknown city.
"""

from __future__ import annotations

import json
import sys
from datetime import date, timedelta
from pathlib import Path

import click

from .errors import (
    ConfigError,
    DateRangeError,
    ParseError,
    SpreadlensError,
    UnknownCityError,
    ValidationError,
)
from .geoindex import NeighborhoodConfig, build_index
from .ingest import (
    build_snapshot,
    load_snapshot,
    normalize_city_name,
    parse_cases,
    parse_coordinates,
    parse_isolation,
    read_mapping_config,
    write_snapshot,
)
from .risk import MODES, build_glyph, compare_city_vs_neighborhood, isolation_stats
from .series import CaseTable, TimeWindow

EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_UNKNOWN_CITY = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_cli_date(raw: str | None, name: str) -> date | None:
    if raw is None:
        return None
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise click.UsageError(f"--{name} must be an ISO date (YYYY-MM-DD), got {raw!r}")


def _positive(ctx, param, value):
    if value is not None and value < 1:
        raise click.UsageError(f"--{param.name} must be >= 1, got {value}")
    return value


def _load_analysis(data_dir: str, k: int):
    try:
        dataset, warnings = load_snapshot(data_dir)
    except (ParseError, ConfigError) as exc:
        _fail(EXIT_PARSE, str(exc))
    except ValidationError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    for w in warnings:
        click.echo(f"warning: {w}", err=True)
    index = build_index(dataset.cities, NeighborhoodConfig(k))
    return dataset, CaseTable(dataset), index


def _resolve_window(table: CaseTable, a: date | None, b: date | None, days: int) -> TimeWindow:
    if b is None:
        b = table.last_date
    if a is None:
        a = b - timedelta(days=days - 1)
    if a > b:
        _fail(EXIT_VALIDATION, f"window start {a} is after end {b}")
    window = TimeWindow(a, b)
    try:
        table.check_window(window)
    except DateRangeError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    return window


@click.group()
def main():
    """Neighborhood-based epidemic dissemination analytics."""


@main.command("ingest")
@click.option("--cases", "cases_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--coords", "coords_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--isolation", "isolation_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["canonical", "seade"]), default="canonical",
              show_default=True, help="Case feed layout.")
@click.option("--seade-config", type=click.Path(exists=True, dir_okay=False),
              help="key=value column mapping for --format seade.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--k", default=10, show_default=True, callback=_positive,
              help="Neighbor count for the exported index.")
def cmd_ingest(cases_path, coords_path, isolation_path, fmt, seade_config, out_dir, k):
    """Parse input files and write the canonical snapshot plus index JSON."""
    try:
        mapping = None
        if fmt == "seade":
            if not seade_config:
                raise click.UsageError("--format seade requires --seade-config")
            mapping = read_mapping_config(Path(seade_config).read_bytes())
        cases = parse_cases(Path(cases_path).read_bytes(), format=fmt, seade_mapping=mapping)
        cities = parse_coordinates(Path(coords_path).read_bytes())
        isolation = (
            parse_isolation(Path(isolation_path).read_bytes()) if isolation_path else []
        )
    except (ParseError, ConfigError) as exc:
        _fail(EXIT_PARSE, str(exc))

    try:
        snapshot, warnings = build_snapshot(
            cities, cases, isolation,
            provenance={"cases": str(cases_path), "coords": str(coords_path),
                        "isolation": str(isolation_path or "")},
        )
    except ValidationError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    for w in warnings:
        click.echo(f"warning: {w}", err=True)

    written = write_snapshot(snapshot, out_dir)
    index = build_index(snapshot.cities, NeighborhoodConfig(k))
    index_path = Path(out_dir) / "index.json"
    index_path.write_text(index.to_json(), encoding="utf-8")
    for path in written + [index_path]:
        click.echo(f"wrote {path}")


def _report_payloads(table, index, city, window, mode):
    glyph = build_glyph(city, table, index, window, mode=mode)
    bundle = compare_city_vs_neighborhood(city, table, index, window)
    stats = isolation_stats(table.isolation_series(city), window)
    return glyph, bundle, stats


@main.command("report")
@click.option("--data", "data_dir", default=".", show_default=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--city", required=True)
@click.option("--a", "a_raw", help="Window start (ISO date).")
@click.option("--b", "b_raw", help="Window end (ISO date); defaults to the last snapshot day.")
@click.option("--days", default=20, show_default=True, callback=_positive,
              help="Window length when --a is omitted.")
@click.option("--mode", type=click.Choice(list(MODES)), default="unit_square", show_default=True)
@click.option("--k", default=10, show_default=True, callback=_positive)
@click.option("--json", "as_json", is_flag=True, help="Emit the machine-readable report.")
def cmd_report(data_dir, city, a_raw, b_raw, days, mode, k, as_json):
    """City-vs-neighborhood report for one analysis window."""
    dataset, table, index = _load_analysis(data_dir, k)
    name = normalize_city_name(city)
    if name not in table:
        _fail(EXIT_UNKNOWN_CITY, f"unknown city {name!r}")
    window = _resolve_window(table, _parse_cli_date(a_raw, "a"), _parse_cli_date(b_raw, "b"), days)

    glyph, bundle, stats = _report_payloads(table, index, name, window, mode)

    if as_json:
        payload = {
            "city": name,
            "window": {"a": window.a.isoformat(), "b": window.b.isoformat()},
            "mode": mode,
            "glyph": glyph.to_payload(),
            "curves": bundle.to_payload(),
            "isolation": None if stats is None else {
                "city": name,
                "mean": stats.mean,
                "std": stats.std,
                "sample_count": stats.sample_count,
                "display": stats.display(),
            },
        }
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
        return

    click.echo(f"city: {name}")
    click.echo(f"window: {window.a} .. {window.b} ({window.length_days} days)")
    click.echo(f"mode: {mode}")
    click.echo(f"city window total: {bundle.city_window.n_b}")
    click.echo(f"neighborhood window total: {bundle.neighborhood_window.n_b}")
    click.echo(f"city dominates: {'yes' if bundle.city_dominates else 'no'}")
    if stats is None:
        click.echo("isolation: no data in window")
    else:
        click.echo(f"isolation: {stats.display()} ({stats.sample_count} days with data)")
    click.echo("glyph:")
    click.echo(f"  {'rank':<5} {'city':<30} {'total':>6}  saturation")
    focus = glyph.focus
    click.echo(f"  {'*':<5} {focus.city:<30} {focus.window_total:>6}  {focus.score.saturation:.4f}")
    for rank, seg in enumerate(glyph.segments, start=1):
        click.echo(f"  {rank:<5} {seg.city:<30} {seg.window_total:>6}  {seg.score.saturation:.4f}")


@main.command("windows")
@click.option("--data", "data_dir", default=".", show_default=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--city", required=True)
@click.option("--b", "b_raw", help="Last day of the newest window; defaults to snapshot end.")
@click.option("--days", default=20, show_default=True, callback=_positive)
@click.option("--steps", default=1, show_default=True, callback=_positive)
@click.option("--stride", default=1, show_default=True, callback=_positive)
@click.option("--mode", type=click.Choice(list(MODES)), default="unit_square", show_default=True)
@click.option("--k", default=10, show_default=True, callback=_positive)
@click.option("--json", "as_json", is_flag=True)
def cmd_windows(data_dir, city, b_raw, days, steps, stride, mode, k, as_json):
    """Per-period table across a sequence of sliding windows, oldest first."""
    dataset, table, index = _load_analysis(data_dir, k)
    name = normalize_city_name(city)
    if name not in table:
        _fail(EXIT_UNKNOWN_CITY, f"unknown city {name!r}")
    b = _parse_cli_date(b_raw, "b") or table.last_date

    rows = []
    for i in range(steps - 1, -1, -1):  # oldest window first
        end = b - timedelta(days=i * stride)
        window = _resolve_window(table, None, end, days)
        glyph, bundle, _ = _report_payloads(table, index, name, window, mode)
        rows.append({
            "a": window.a.isoformat(),
            "b": window.b.isoformat(),
            "city_total": bundle.city_window.n_b,
            "neighborhood_total": bundle.neighborhood_window.n_b,
            "saturation": glyph.focus.score.saturation,
        })

    if as_json:
        click.echo(json.dumps({"city": name, "mode": mode, "windows": rows},
                              ensure_ascii=False, indent=2))
        return
    click.echo(f"{'a':<12} {'b':<12} {'city':>6} {'nbhd':>6}  saturation")
    for row in rows:
        click.echo(f"{row['a']:<12} {row['b']:<12} {row['city_total']:>6} "
                   f"{row['neighborhood_total']:>6}  {row['saturation']:.4f}")


@main.command("serve")
@click.option("--data", "data_dir", envvar="DATA_DIR", default=".", show_default=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--port", envvar="PORT", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--k", default=10, show_default=True, callback=_positive)
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False),
              help="Static dashboard bundle to serve at /.")
def cmd_serve(data_dir, port, host, k, ui_dir):
    """Serve the analytics API (and the dashboard bundle, when provided)."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(data_dir, k=k, static_dir=ui_dir)
    except (ParseError, ConfigError) as exc:
        _fail(EXIT_PARSE, str(exc))
    except (ValidationError, SpreadlensError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    uvicorn.run(app, host=host, port=port, log_level="info", access_log=True)


if __name__ == "__main__":
    main()
