"""Dissemination-risk scoring and the donut-glyph model.

The risk of a city over a window is the angle of the straight segment from
(a, n_a) to (b, n_b) on its windowed curve, expressed as a color saturation
in [0, 1]. Two normalizations ship:

* ``unit_square`` (default): slopes are divided by the steepest slope among
  the cities in the current view, so angles live in [0, pi/4] and the
  darkest color always means "fastest-growing city in this view".
* ``raw``: the angle of cases-per-day itself, angle in [0, pi/2), comparable
  across views but dependent on absolute case volume.

Both normalizations rank cities identically (arctan and scaling by a
positive constant are monotone). Negative window slopes (upstream
corrections) clamp to zero risk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping

from .geoindex import NeighborhoodIndex, active_neighbors
from .series import (
    CaseTable,
    TimeWindow,
    WindowedCurve,
    cumulative_slice,
    neighborhood_aggregate,
    neighborhood_cumulative_slice,
    windowed_curve,
)

MODES = ("unit_square", "raw")

HALF_PI = math.pi / 2.0
QUARTER_PI = math.pi / 4.0


@dataclass(frozen=True)
class RiskScore:
    slope: float       # cases per day over the window (may be negative)
    angle: float       # radians; clamped to 0 for negative slopes
    saturation: float  # in [0, 1], 0 iff angle == 0
    mode: str


@dataclass(frozen=True)
class GlyphSegment:
    city: str
    score: RiskScore
    window_total: int


@dataclass(frozen=True)
class RiskGlyph:
    """Inner circle = focus city; ring segments = active neighbors.

    Segments are ordered by descending saturation, ties by city name, and
    contain exactly the neighbors with cases by the window end.
    """

    focus: GlyphSegment
    segments: tuple[GlyphSegment, ...]
    window: TimeWindow
    mode: str

    def to_payload(self) -> dict:
        return {
            "focus": {
                "city": self.focus.city,
                "saturation": self.focus.score.saturation,
                "window_total": self.focus.window_total,
            },
            "segments": [
                {
                    "city": s.city,
                    "saturation": s.score.saturation,
                    "window_total": s.window_total,
                }
                for s in self.segments
            ],
            "window": {"a": self.window.a.isoformat(), "b": self.window.b.isoformat()},
            "mode": self.mode,
        }


@dataclass(frozen=True)
class IsolationStats:
    mean: float
    std: float  # population standard deviation
    window: TimeWindow
    sample_count: int

    def display(self) -> str:
        """Render like official isolation bulletins, e.g. ``47% ± 0.026``."""
        return f"{self.mean * 100:.0f}% ± {self.std:.3g}"


def _score_slope(slope: float, mode: str, view_max_slope: float | None) -> RiskScore:
    if mode not in MODES:
        raise ValueError(f"unknown risk mode {mode!r}")
    clamped = max(slope, 0.0)
    if mode == "raw":
        angle = math.atan(clamped)
        saturation = angle / HALF_PI
    else:
        if view_max_slope is None:
            raise ValueError("unit_square mode requires view_max_slope")
        if view_max_slope < 0:
            raise ValueError(f"view_max_slope must be >= 0, got {view_max_slope}")
        if clamped > 0 and view_max_slope == 0:
            raise ValueError("view_max_slope is 0 but the curve has positive slope")
        normalized = clamped / view_max_slope if view_max_slope > 0 else 0.0
        angle = math.atan(normalized)
        saturation = angle / QUARTER_PI
    return RiskScore(slope=slope, angle=angle, saturation=saturation, mode=mode)


def risk_score(
    curve: WindowedCurve, mode: str = "unit_square", view_max_slope: float | None = None
) -> RiskScore:
    """Score one windowed curve.

    unit_square requires ``view_max_slope``, the largest window slope among
    the glyph's cities; passing 0 with a growing curve is a contract
    violation. An all-zero view yields saturation 0 everywhere.
    """
    return _score_slope(curve.n_b / curve.window.length_days, mode, view_max_slope)


def build_glyph(
    focus: str,
    table: CaseTable,
    index: NeighborhoodIndex,
    window: TimeWindow,
    mode: str = "unit_square",
) -> RiskGlyph:
    """Assemble the glyph for a focus city over a window.

    Activity is judged at the window end: neighbors with no cases through
    ``window.b`` are dropped from the ring. The unit_square view maximum is
    taken over the focus plus its active neighbors.
    """
    if mode not in MODES:
        raise ValueError(f"unknown risk mode {mode!r}")
    table.require_city(focus)
    active = active_neighbors(focus, index.augmented, table, as_of=window.b)

    totals = table.window_totals_all(window)
    total_of = {name: int(totals[table.position(name)]) for name in active}
    focus_total = int(totals[table.position(focus)])

    days = window.length_days
    all_totals = [focus_total, *total_of.values()]
    view_max = max(max(t, 0) / days for t in all_totals)

    segments = sorted(
        (
            GlyphSegment(name, _score_slope(t / days, mode, view_max), t)
            for name, t in total_of.items()
        ),
        key=lambda s: (-s.score.saturation, s.city),
    )
    focus_segment = GlyphSegment(focus, _score_slope(focus_total / days, mode, view_max), focus_total)
    return RiskGlyph(focus=focus_segment, segments=tuple(segments), window=window, mode=mode)


def isolation_stats(
    series: Mapping[date, float] | Iterable[tuple[date, float]], window: TimeWindow
) -> IsolationStats | None:
    """Mean and population std over window days with data; None when empty."""
    if isinstance(series, Mapping):
        items = series.items()
    else:
        items = series
    values = [v for d, v in items if window.a <= d <= window.b]
    if not values:
        return None
    n = len(values)
    if min(values) == max(values):  # constant series: zero dispersion, exactly
        return IsolationStats(mean=values[0], std=0.0, window=window, sample_count=n)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return IsolationStats(mean=mean, std=math.sqrt(var), window=window, sample_count=n)


@dataclass(frozen=True)
class CurvesBundle:
    """The four linked comparison curves for a focus city over a window.

    ``city_total``/``neighborhood_total`` carry whole-period (since first
    notification) values over the window days; the ``*_window`` pair
    re-accumulates from the window start. ``city_dominates`` is the strict
    comparison of the two window totals.
    """

    focus: str
    window: TimeWindow
    members: tuple[str, ...]
    city_total: WindowedCurve
    neighborhood_total: WindowedCurve
    city_window: WindowedCurve
    neighborhood_window: WindowedCurve
    city_dominates: bool

    def to_payload(self) -> dict:
        return {
            "city": self.focus,
            "window": {"a": self.window.a.isoformat(), "b": self.window.b.isoformat()},
            "members": list(self.members),
            "curves": {
                "neighborhood_total": self.neighborhood_total.to_points(),
                "city_total": self.city_total.to_points(),
                "neighborhood_window": self.neighborhood_window.to_points(),
                "city_window": self.city_window.to_points(),
            },
            "totals": {
                "city": self.city_window.n_b,
                "neighborhood": self.neighborhood_window.n_b,
            },
            "city_dominates": self.city_dominates,
        }


def compare_city_vs_neighborhood(
    focus: str, table: CaseTable, index: NeighborhoodIndex, window: TimeWindow
) -> CurvesBundle:
    """City-vs-neighborhood bundle over the augmented neighborhood.

    Zero-case members contribute nothing to the sums, so aggregating the
    full augmented set equals aggregating only the active members.
    """
    table.require_city(focus)
    members = tuple(sorted(index.neighbors_of(focus)))
    series = table.series(focus)

    city_window = windowed_curve(series, window)
    neighborhood_window = neighborhood_aggregate(members, table, window)
    return CurvesBundle(
        focus=focus,
        window=window,
        members=members,
        city_total=cumulative_slice(series, window),
        neighborhood_total=neighborhood_cumulative_slice(members, table, window),
        city_window=city_window,
        neighborhood_window=neighborhood_window,
        city_dominates=city_window.n_b > neighborhood_window.n_b,
    )
