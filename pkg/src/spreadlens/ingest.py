"""Ingestion: parse case/isolation/coordinate files into a validated snapshot.

The canonical on-disk formats (see README) are small UTF-8 CSVs:

    cases.csv      city,date,new_cases
    isolation.csv  city,date,index
    coords.csv     city,lat,lon,population

City names are normalized to their identity form (trimmed + casefolded,
diacritics kept) at parse time; matching is exact afterwards. A feed in the
upstream (SEADE-style) layout is adapted through a column-name mapping read
from a key=value config file.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .errors import ConfigError, ParseError, ValidationError

CASES_HEADER = ["city", "date", "new_cases"]
ISOLATION_HEADER = ["city", "date", "index"]
COORDS_HEADER = ["city", "lat", "lon", "population"]


def normalize_city_name(raw: str) -> str:
    return raw.strip().casefold()


@dataclass(frozen=True)
class CityRecord:
    name: str
    latitude: float
    longitude: float
    population: int | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("city name must be non-empty")
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude out of range: {self.latitude}")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude out of range: {self.longitude}")
        if self.population is not None and self.population <= 0:
            raise ValueError(f"population must be positive: {self.population}")


@dataclass(frozen=True, order=True)
class DailyCaseRow:
    city: str
    date: date
    new_cases: int  # negative values are upstream corrections, kept as-is


@dataclass(frozen=True, order=True)
class IsolationRow:
    city: str
    date: date
    index: float  # fraction of inhabitants in isolation, [0, 1]


@dataclass(frozen=True)
class DatasetSnapshot:
    """One immutable, validated bundle of cities and their series.

    Provenance is excluded from equality so a serialize -> re-parse round
    trip compares equal field-by-field on the data.
    """

    cities: tuple[CityRecord, ...]       # sorted by name, names unique
    cases: tuple[DailyCaseRow, ...]      # sorted, one row per (city, date)
    isolation: tuple[IsolationRow, ...]  # sorted, one row per (city, date)
    date_range: tuple[date, date]
    provenance: Mapping[str, str] = field(compare=False, default_factory=dict)

    def city_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.cities)

    def city(self, name: str) -> CityRecord | None:
        for c in self.cities:
            if c.name == name:
                return c
        return None


def _text_lines(data: bytes | str | IO[bytes] | IO[str]) -> io.StringIO:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return io.StringIO(data.lstrip("﻿"))


def _check_header(row: list[str] | None, expected: list[str], optional_tail: int = 0):
    if row is None:
        raise ParseError("empty input, expected header " + ",".join(expected), line=1)
    got = [c.strip().casefold() for c in row]
    for keep in range(len(expected), len(expected) - optional_tail - 1, -1):
        if got == expected[:keep]:
            return keep
    raise ParseError(
        f"bad header {','.join(row)!r}, expected {','.join(expected)!r}", line=1
    )


def _parse_date(raw: str, line: int) -> date:
    try:
        return date.fromisoformat(raw.strip())
    except ValueError:
        raise ParseError(f"malformed date {raw!r} (expected ISO-8601 day)", line=line) from None


def parse_cases(
    data: bytes | str | IO[bytes] | IO[str],
    format: str = "canonical",
    seade_mapping: Mapping[str, str] | None = None,
) -> list[DailyCaseRow]:
    """Parse a case feed into normalized daily rows.

    Duplicate (city, date) rows are summed; output is sorted by (city, date).
    ``format`` is "canonical" or "seade" (requires ``seade_mapping``).
    """
    if format == "canonical":
        raw_rows = _read_canonical_cases(data)
    elif format == "seade":
        raw_rows = _read_seade_cases(data, seade_mapping or {})
    else:
        raise ConfigError(f"unknown case format tag: {format!r}")

    summed: dict[tuple[str, date], int] = {}
    for city, day, n in raw_rows:
        key = (city, day)
        summed[key] = summed.get(key, 0) + n
    return [DailyCaseRow(c, d, n) for (c, d), n in sorted(summed.items())]


def _read_canonical_cases(data) -> list[tuple[str, date, int]]:
    reader = csv.reader(_text_lines(data))
    _check_header(next(reader, None), CASES_HEADER)
    rows = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line)
        city = normalize_city_name(row[0])
        if not city:
            raise ParseError("empty city name", line=line)
        day = _parse_date(row[1], line)
        try:
            n = int(row[2].strip())
        except ValueError:
            raise ParseError(f"non-integer case count {row[2]!r}", line=line) from None
        rows.append((city, day, n))
    return rows


def _read_seade_cases(data, mapping: Mapping[str, str]) -> list[tuple[str, date, int]]:
    for key in ("city", "date", "cases"):
        if key not in mapping:
            raise ConfigError(f"seade mapping missing required key {key!r}")
    delimiter = mapping.get("delimiter", ",")
    date_format = mapping.get("date_format", "%Y-%m-%d")
    cumulative = str(mapping.get("cumulative", "false")).strip().casefold() in ("1", "true", "yes")

    reader = csv.DictReader(_text_lines(data), delimiter=delimiter)
    if reader.fieldnames is None:
        raise ParseError("empty input, expected a header row", line=1)
    fields = {f.strip(): f for f in reader.fieldnames}
    for key in ("city", "date", "cases"):
        if mapping[key] not in fields:
            raise ParseError(
                f"mapped column {mapping[key]!r} not found in header", line=1
            )

    rows: list[tuple[str, date, int]] = []
    for record in reader:
        line = reader.line_num
        city = normalize_city_name(record[fields[mapping["city"]]] or "")
        if not city:
            raise ParseError("empty city name", line=line)
        raw_date = (record[fields[mapping["date"]]] or "").strip()
        try:
            day = datetime.strptime(raw_date, date_format).date()
        except ValueError:
            raise ParseError(f"malformed date {raw_date!r}", line=line) from None
        raw_n = (record[fields[mapping["cases"]]] or "").strip()
        try:
            n = int(raw_n)
        except ValueError:
            raise ParseError(f"non-integer case count {raw_n!r}", line=line) from None
        rows.append((city, day, n))

    if cumulative:
        rows = _difference_cumulative(rows)
    return rows


def _difference_cumulative(rows: list[tuple[str, date, int]]) -> list[tuple[str, date, int]]:
    """Turn per-city running totals into daily new cases (first row kept)."""
    latest: dict[tuple[str, date], int] = {}
    for city, day, n in rows:  # duplicate (city, date): last snapshot wins
        latest[(city, day)] = n
    out = []
    prev_city = None
    prev_total = 0
    for (city, day), total in sorted(latest.items()):
        if city != prev_city:
            prev_city, prev_total = city, 0
        out.append((city, day, total - prev_total))
        prev_total = total
    return out


def parse_isolation(data: bytes | str | IO[bytes] | IO[str]) -> list[IsolationRow]:
    """Parse isolation-index rows; values in (1, 100] are percentages.

    Duplicate (city, date) rows keep the last occurrence (upstream
    corrections); output sorted by (city, date).
    """
    reader = csv.reader(_text_lines(data))
    _check_header(next(reader, None), ISOLATION_HEADER)
    latest: dict[tuple[str, date], float] = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line)
        city = normalize_city_name(row[0])
        if not city:
            raise ParseError("empty city name", line=line)
        day = _parse_date(row[1], line)
        try:
            value = float(row[2].strip())
        except ValueError:
            raise ParseError(f"non-numeric isolation index {row[2]!r}", line=line) from None
        if not 0.0 <= value <= 100.0:
            raise ParseError(f"isolation index out of range [0, 100]: {value}", line=line)
        if value > 1.0:
            value = value / 100.0
        latest[(city, day)] = value
    return [IsolationRow(c, d, v) for (c, d), v in sorted(latest.items())]


def parse_coordinates(data: bytes | str | IO[bytes] | IO[str]) -> list[CityRecord]:
    """Parse city coordinate records; the population column is optional."""
    reader = csv.reader(_text_lines(data))
    ncols = _check_header(next(reader, None), COORDS_HEADER, optional_tail=1)
    records: dict[str, CityRecord] = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != ncols:
            raise ParseError(f"expected {ncols} fields, got {len(row)}", line=line)
        city = normalize_city_name(row[0])
        try:
            lat = float(row[1].strip())
            lon = float(row[2].strip())
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {row[1:3]!r}", line=line) from None
        population = None
        if ncols == 4 and row[3].strip():
            try:
                population = int(row[3].strip())
            except ValueError:
                raise ParseError(f"non-integer population {row[3]!r}", line=line) from None
        if city in records:
            raise ParseError(f"duplicate city name {city!r}", line=line)
        try:
            records[city] = CityRecord(city, lat, lon, population)
        except ValueError as exc:
            raise ParseError(str(exc), line=line) from None
    return sorted(records.values(), key=lambda c: c.name)


def read_mapping_config(data: bytes | str | IO[bytes] | IO[str]) -> dict[str, str]:
    """Read a key=value config file (blank lines and # comments ignored)."""
    mapping: dict[str, str] = {}
    for n, line in enumerate(_text_lines(data), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {n}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def build_snapshot(
    cities: Iterable[CityRecord],
    cases: Iterable[DailyCaseRow],
    isolation: Iterable[IsolationRow] = (),
    date_range: tuple[date, date] | None = None,
    provenance: Mapping[str, str] | None = None,
) -> tuple[DatasetSnapshot, list[str]]:
    """Assemble and validate a snapshot; returns (snapshot, warnings).

    Rows naming unknown cities are dropped with a warning. Negative daily
    counts are kept but reported. An empty city set is fatal; so is a
    declared date_range that does not cover every row.
    """
    city_list = sorted(cities, key=lambda c: c.name)
    if not city_list:
        raise ValidationError("snapshot requires at least one city")
    names = [c.name for c in city_list]
    known = set(names)
    if len(known) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ValidationError(f"duplicate city records: {', '.join(dupes)}")

    warnings: list[str] = []

    summed: dict[tuple[str, date], int] = {}
    for row in cases:
        if row.city not in known:
            warnings.append(f"case row for unknown city {row.city!r} ({row.date}) dropped")
            continue
        key = (row.city, row.date)
        summed[key] = summed.get(key, 0) + row.new_cases
    case_rows = tuple(DailyCaseRow(c, d, n) for (c, d), n in sorted(summed.items()))
    for row in case_rows:
        if row.new_cases < 0:
            warnings.append(
                f"negative daily count for {row.city!r} on {row.date}: {row.new_cases}"
            )

    iso_latest: dict[tuple[str, date], float] = {}
    for row in isolation:
        if row.city not in known:
            warnings.append(f"isolation row for unknown city {row.city!r} ({row.date}) dropped")
            continue
        iso_latest[(row.city, row.date)] = row.index
    iso_rows = tuple(IsolationRow(c, d, v) for (c, d), v in sorted(iso_latest.items()))

    all_dates = [r.date for r in case_rows] + [r.date for r in iso_rows]
    if date_range is None:
        if not all_dates:
            raise ValidationError(
                "no dated rows survived ingestion and no date_range was declared"
            )
        date_range = (min(all_dates), max(all_dates))
    else:
        first, last = date_range
        if first > last:
            raise ValidationError(f"declared date_range is inverted: {first} > {last}")
        if all_dates and (min(all_dates) < first or max(all_dates) > last):
            raise ValidationError("declared date_range does not cover all rows")

    if provenance is None:
        provenance = {}
    provenance = dict(provenance)
    provenance.setdefault("ingested_at", datetime.now(timezone.utc).isoformat())

    snapshot = DatasetSnapshot(
        cities=tuple(city_list),
        cases=case_rows,
        isolation=iso_rows,
        date_range=date_range,
        provenance=provenance,
    )
    return snapshot, warnings


def _fmt_float(x: float) -> str:
    return repr(float(x))


def write_snapshot(snapshot: DatasetSnapshot, out_dir: str | Path) -> list[Path]:
    """Write the canonical CSV files; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    coords = out / "coords.csv"
    with coords.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(COORDS_HEADER) + "\n")
        for c in snapshot.cities:
            pop = "" if c.population is None else str(c.population)
            fh.write(f"{c.name},{_fmt_float(c.latitude)},{_fmt_float(c.longitude)},{pop}\n")

    cases = out / "cases.csv"
    with cases.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CASES_HEADER) + "\n")
        for r in snapshot.cases:
            fh.write(f"{r.city},{r.date.isoformat()},{r.new_cases}\n")

    isolation = out / "isolation.csv"
    with isolation.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(ISOLATION_HEADER) + "\n")
        for r in snapshot.isolation:
            fh.write(f"{r.city},{r.date.isoformat()},{_fmt_float(r.index)}\n")

    return [cases, coords, isolation]


def load_snapshot(data_dir: str | Path) -> tuple[DatasetSnapshot, list[str]]:
    """Load a snapshot from a directory of canonical CSV files."""
    root = Path(data_dir)
    coords_path = root / "coords.csv"
    cases_path = root / "cases.csv"
    iso_path = root / "isolation.csv"
    if not coords_path.exists() or not cases_path.exists():
        raise ValidationError(f"{root}: missing cases.csv/coords.csv")

    cities = parse_coordinates(coords_path.read_bytes())
    cases = parse_cases(cases_path.read_bytes())
    isolation = parse_isolation(iso_path.read_bytes()) if iso_path.exists() else []
    provenance = {
        "cases": str(cases_path),
        "coords": str(coords_path),
        "isolation": str(iso_path) if iso_path.exists() else "",
    }
    return build_snapshot(cities, cases, isolation, provenance=provenance)
