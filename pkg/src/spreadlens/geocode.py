"""Optional coordinate enrichment through a geocoding service.

The offline coordinates CSV is the primary path; geocoding only fills gaps.
Every resolved name lands in a persistent cache file (one record per line,
``name<TAB>lat<TAB>lon``) so repeat runs never hit the network again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import GeocoderUnavailable
from .ingest import CityRecord, normalize_city_name

# candidate lists are (lat, lon) pairs, best match first
Geocoder = Callable[[str], Sequence[tuple[float, float]]]

# lat_min, lat_max, lon_min, lon_max. Wide default: São Paulo state plus margin.
DEFAULT_BBOX = (-25.5, -19.5, -53.5, -44.0)


class GeocodeCache:
    """File-backed name -> (lat, lon) store; entries append on resolve."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[str, tuple[float, float]] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                name, lat, lon = line.split("\t")
                self._entries[name] = (float(lat), float(lon))

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, name: str) -> tuple[float, float] | None:
        return self._entries.get(name)

    def put(self, name: str, lat: float, lon: float) -> None:
        if name in self._entries:
            return
        self._entries[name] = (lat, lon)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{name}\t{lat!r}\t{lon!r}\n")


@dataclass
class GeocodeReport:
    records: list[CityRecord] = field(default_factory=list)
    unresolved: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def geocode_missing(
    names: Iterable[str],
    cache: GeocodeCache,
    geocoder: Geocoder | None = None,
    bbox: tuple[float, float, float, float] = DEFAULT_BBOX,
) -> GeocodeReport:
    """Resolve coordinates for city names, cache first, then the geocoder.

    Cache hits never call the geocoder. Without a geocoder (or when it is
    unreachable) the uncached names land in ``unresolved`` — degraded, not
    fatal. An ambiguous answer takes the first candidate inside ``bbox``;
    none inside means unresolved.
    """
    report = GeocodeReport()
    lat_min, lat_max, lon_min, lon_max = bbox

    for raw in sorted(set(names)):
        name = normalize_city_name(raw)
        hit = cache.get(name)
        if hit is not None:
            report.records.append(CityRecord(name, hit[0], hit[1]))
            continue
        if geocoder is None:
            report.unresolved.append(name)
            continue
        try:
            candidates = list(geocoder(name))
        except GeocoderUnavailable as exc:
            report.unresolved.append(name)
            report.warnings.append(f"geocoder unreachable for {name!r}: {exc}")
            continue
        if len(candidates) > 1:
            candidates = [
                (lat, lon)
                for lat, lon in candidates
                if lat_min <= lat <= lat_max and lon_min <= lon <= lon_max
            ]
        if not candidates:
            report.unresolved.append(name)
            continue
        lat, lon = candidates[0]
        try:
            record = CityRecord(name, lat, lon)
        except ValueError as exc:
            report.unresolved.append(name)
            report.warnings.append(f"geocoder returned invalid point for {name!r}: {exc}")
            continue
        cache.put(name, lat, lon)
        report.records.append(record)
    return report


class HttpGeocoder:
    """Minimal client for a Nominatim-style JSON search endpoint."""

    def __init__(self, base_url: str = "https://nominatim.openstreetmap.org/search",
                 region_hint: str = "São Paulo, Brazil", timeout: float = 10.0):
        self.base_url = base_url
        self.region_hint = region_hint
        self.timeout = timeout

    def __call__(self, name: str) -> list[tuple[float, float]]:
        import requests

        query = f"{name}, {self.region_hint}" if self.region_hint else name
        try:
            resp = requests.get(
                self.base_url,
                params={"q": query, "format": "jsonv2", "limit": 5},
                headers={"User-Agent": "spreadlens/0.1"},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
        except Exception as exc:
            raise GeocoderUnavailable(str(exc)) from exc
        return [(float(item["lat"]), float(item["lon"])) for item in payload]
