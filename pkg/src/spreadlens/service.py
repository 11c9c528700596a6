"""HTTP JSON service for the dashboard and for scripts.

Read endpoints are pure functions of one immutable ServiceSnapshot. A reload
builds a fresh snapshot off-thread and swaps a single reference, so readers
never block and every response is consistent with exactly one build (the
``X-Build-Id`` response header names it). Between reloads repeated GETs are
byte-identical.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .errors import SpreadlensError
from .geoindex import NeighborhoodConfig, NeighborhoodIndex, active_neighbors, build_index
from .ingest import DatasetSnapshot, load_snapshot, normalize_city_name
from .risk import build_glyph, compare_city_vs_neighborhood, isolation_stats, MODES
from .series import CaseTable, TimeWindow

DEFAULT_K = 10
BOUNDARY_FILENAME = "boundaries.geojson"


class ApiError(Exception):
    """Maps to the uniform error body {"error": code, "detail": text}."""

    def __init__(self, status_code: int, code: str, detail: str):
        self.status_code = status_code
        self.code = code
        self.detail = detail
        super().__init__(detail)


@dataclass(frozen=True)
class ServiceSnapshot:
    dataset: DatasetSnapshot
    table: CaseTable
    index: NeighborhoodIndex
    boundaries: Mapping[str, Any] | None
    build_id: int
    built_at: str
    warnings: tuple[str, ...]


class SnapshotHolder:
    """Owns the current snapshot reference; swap is atomic, ids increase."""

    def __init__(self, k: int = DEFAULT_K):
        self.k = k
        self._lock = threading.Lock()
        self._current: ServiceSnapshot | None = None

    @property
    def current(self) -> ServiceSnapshot | None:
        return self._current

    def load(self, data_dir: str | Path, k: int | None = None) -> ServiceSnapshot:
        """Build a snapshot from a data directory and swap it in.

        Raises on any ingest/validation failure, leaving the previous
        snapshot in place.
        """
        data_dir = Path(data_dir)
        dataset, warnings = load_snapshot(data_dir)
        index = build_index(dataset.cities, NeighborhoodConfig(k or self.k))
        table = CaseTable(dataset)
        boundaries = None
        boundary_path = data_dir / BOUNDARY_FILENAME
        if boundary_path.exists():
            boundaries = json.loads(boundary_path.read_text(encoding="utf-8"))
        with self._lock:
            build_id = self._current.build_id + 1 if self._current else 1
            snap = ServiceSnapshot(
                dataset=dataset,
                table=table,
                index=index,
                boundaries=boundaries,
                build_id=build_id,
                built_at=datetime.now(timezone.utc).isoformat(),
                warnings=tuple(warnings),
            )
            self._current = snap
        return snap


def _respond(snap: ServiceSnapshot, payload: Any, status_code: int = 200) -> JSONResponse:
    return JSONResponse(payload, status_code=status_code,
                        headers={"X-Build-Id": str(snap.build_id)})


def _require_snapshot(request: Request) -> ServiceSnapshot:
    snap = request.app.state.holder.current
    if snap is None:
        raise ApiError(503, "no_snapshot", "no dataset snapshot is loaded")
    return snap


def _parse_day(raw: str | None, name: str, default: date | None = None) -> date:
    if raw is None:
        if default is not None:
            return default
        raise ApiError(400, "bad_window", f"missing required date parameter {name!r}")
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise ApiError(400, "bad_window", f"malformed date {name}={raw!r}") from None


def _parse_window(snap: ServiceSnapshot, a_raw: str | None, b_raw: str | None) -> TimeWindow:
    a = _parse_day(a_raw, "a")
    b = _parse_day(b_raw, "b")
    if a > b:
        raise ApiError(400, "bad_window", f"window start {a} is after end {b}")
    first, last = snap.dataset.date_range
    if a < first or b > last:
        raise ApiError(
            400, "bad_window",
            f"window [{a}, {b}] outside snapshot range [{first}, {last}]",
        )
    return TimeWindow(a, b)


def _require_city(snap: ServiceSnapshot, raw: str) -> str:
    name = normalize_city_name(raw)
    if name not in snap.table:
        raise ApiError(404, "unknown_city", f"unknown city {name!r}")
    return name


def create_app(data_dir: str | Path | None = None, k: int = DEFAULT_K,
               static_dir: str | Path | None = None) -> FastAPI:
    """Build the service; `data_dir` may be omitted (endpoints answer 503)."""
    app = FastAPI(title="spreadlens", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.holder = SnapshotHolder(k=k)
    if data_dir is not None:
        app.state.holder.load(data_dir)

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse({"error": exc.code, "detail": exc.detail},
                            status_code=exc.status_code)

    @app.exception_handler(SpreadlensError)
    async def _domain_error(request: Request, exc: SpreadlensError):
        return JSONResponse({"error": "internal", "detail": str(exc)}, status_code=500)

    @app.get("/api/meta")
    def meta(request: Request):
        snap = _require_snapshot(request)
        first, last = snap.dataset.date_range
        return _respond(snap, {
            "build_id": snap.build_id,
            "built_at": snap.built_at,
            "first_date": first.isoformat(),
            "last_date": last.isoformat(),
            "k": snap.index.k,
            "city_count": len(snap.dataset.cities),
            "has_boundaries": snap.boundaries is not None,
        })

    @app.get("/api/cities")
    def cities(request: Request):
        snap = _require_snapshot(request)
        out = []
        for c in snap.dataset.cities:  # already name-sorted
            first_case = snap.table.first_case_date(c.name)
            entry = {
                "name": c.name,
                "lat": c.latitude,
                "lon": c.longitude,
                "has_cases": first_case is not None,
            }
            if first_case is not None:
                entry["first_case_date"] = first_case.isoformat()
            out.append(entry)
        return _respond(snap, out)

    @app.get("/api/neighborhood/{city}")
    def neighborhood(request: Request, city: str, as_of: str | None = None):
        snap = _require_snapshot(request)
        name = _require_city(snap, city)
        first, last = snap.dataset.date_range
        day = _parse_day(as_of, "as_of", default=last)
        if day < first or day > last:
            raise ApiError(400, "bad_window",
                           f"as_of {day} outside snapshot range [{first}, {last}]")
        members = sorted(snap.index.neighbors_of(name))
        active = sorted(active_neighbors(name, snap.index.augmented, snap.table, day))
        return _respond(snap, {
            "k": snap.index.k,
            "city": name,
            "as_of": day.isoformat(),
            "members": members,
            "active": active,
        })

    @app.get("/api/curves/{city}")
    def curves(request: Request, city: str, a: str | None = None, b: str | None = None):
        snap = _require_snapshot(request)
        name = _require_city(snap, city)
        window = _parse_window(snap, a, b)
        bundle = compare_city_vs_neighborhood(name, snap.table, snap.index, window)
        return _respond(snap, bundle.to_payload())

    @app.get("/api/glyph/{city}")
    def glyph(request: Request, city: str, a: str | None = None, b: str | None = None,
              mode: str = "unit_square"):
        snap = _require_snapshot(request)
        name = _require_city(snap, city)
        if mode not in MODES:
            raise ApiError(400, "bad_mode", f"mode must be one of {MODES}, got {mode!r}")
        window = _parse_window(snap, a, b)
        glyph = build_glyph(name, snap.table, snap.index, window, mode=mode)
        return _respond(snap, glyph.to_payload())

    @app.get("/api/isolation/{city}")
    def isolation(request: Request, city: str, a: str | None = None, b: str | None = None):
        snap = _require_snapshot(request)
        name = _require_city(snap, city)
        window = _parse_window(snap, a, b)
        stats = isolation_stats(snap.table.isolation_series(name), window)
        if stats is None:
            return Response(status_code=204, headers={"X-Build-Id": str(snap.build_id)})
        return _respond(snap, {
            "city": name,
            "mean": stats.mean,
            "std": stats.std,
            "sample_count": stats.sample_count,
            "display": stats.display(),
        })

    @app.get("/api/map")
    def state_map(request: Request, city: str | None = None):
        snap = _require_snapshot(request)
        if snap.boundaries is None:
            raise ApiError(503, "no_boundaries", "no boundary file configured")
        focus = _require_city(snap, city) if city is not None else None
        neighbor_names: frozenset[str] = frozenset()
        if focus is not None:
            neighbor_names = snap.index.neighbors_of(focus)

        features = []
        for feature in snap.boundaries.get("features", []):
            props = dict(feature.get("properties") or {})
            if focus is not None:
                feature_name = normalize_city_name(str(props.get("name", "")))
                props["focus"] = feature_name == focus
                props["neighbor"] = feature_name in neighbor_names
            out = dict(feature)
            out["properties"] = props
            features.append(out)
        return _respond(snap, {"type": "FeatureCollection", "features": features})

    @app.post("/api/admin/reload")
    async def reload(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "bad_request", "request body must be JSON") from None
        if not isinstance(body, dict) or not isinstance(body.get("data_dir"), str):
            raise ApiError(400, "bad_request", 'body must be {"data_dir": "<path>"}')
        k = body.get("k")
        if k is not None and (not isinstance(k, int) or k < 1):
            raise ApiError(400, "bad_request", '"k" must be a positive integer')
        try:
            snap = request.app.state.holder.load(body["data_dir"], k=k)
        except (SpreadlensError, OSError, json.JSONDecodeError) as exc:
            raise ApiError(422, "ingest_failed", str(exc)) from None
        return _respond(snap, {"build_id": snap.build_id, "warnings": list(snap.warnings)})

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
