"""Time-series engine: cumulative curves, windowed curves, and aggregates.

A window [a, b] is an inclusive date interval. Windowed curves re-accumulate
from zero at the window start, and day ``a``'s new cases count inside the
window: points[a] = daily[a], points[b] = cumulative[b] - cumulative[a-1].
This convention makes adjacent window totals additive.

Missing days inside the snapshot range are zero new cases, not gaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable, Iterator

import numpy as np

from .errors import DateRangeError, UnknownCityError
from .ingest import DatasetSnapshot
from .kernels import window_totals


@dataclass(frozen=True)
class TimeWindow:
    a: date  # first day, inclusive
    b: date  # last day, inclusive

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"window start {self.a} is after end {self.b}")

    @property
    def length_days(self) -> int:
        return (self.b - self.a).days + 1

    def days(self) -> Iterator[date]:
        for offset in range(self.length_days):
            yield self.a + timedelta(days=offset)

    @classmethod
    def ending(cls, b: date, days: int) -> "TimeWindow":
        """The `days`-day window whose last (inclusive) day is `b`."""
        if days < 1:
            raise ValueError(f"window length must be >= 1 day, got {days}")
        return cls(b - timedelta(days=days - 1), b)


@dataclass(frozen=True)
class CaseSeries:
    """One city's daily counts over the full snapshot range, plus prefix sums."""

    city: str
    first_date: date
    daily: np.ndarray  # int64, one slot per day in the snapshot range
    cum: np.ndarray    # running totals, same shape

    @property
    def last_date(self) -> date:
        return self.first_date + timedelta(days=len(self.daily) - 1)

    def index_of(self, d: date) -> int:
        idx = (d - self.first_date).days
        if idx < 0 or idx >= len(self.daily):
            raise DateRangeError(
                f"{d} outside snapshot range [{self.first_date}, {self.last_date}]"
            )
        return idx


@dataclass(frozen=True)
class WindowedCurve:
    """Accumulated-in-window counts, one point per window day."""

    window: TimeWindow
    values: np.ndarray  # int64, len == window.length_days
    empty_neighborhood: bool = False

    @property
    def n_a(self) -> int:
        return int(self.values[0])

    @property
    def n_b(self) -> int:
        return int(self.values[-1])

    def points(self) -> list[tuple[date, int]]:
        return list(zip(self.window.days(), (int(v) for v in self.values)))

    def to_points(self) -> list[dict]:
        return [{"date": d.isoformat(), "value": v} for d, v in self.points()]


class CaseTable:
    """Dense (city x day) matrices derived from an immutable snapshot.

    Construction is the only mutation; afterwards the table is safe for
    unrestricted concurrent reads.
    """

    def __init__(self, snapshot: DatasetSnapshot):
        self.snapshot = snapshot
        self.first_date, self.last_date = snapshot.date_range
        self.n_days = (self.last_date - self.first_date).days + 1
        self.names: tuple[str, ...] = snapshot.city_names()
        self._row = {name: i for i, name in enumerate(self.names)}

        daily = np.zeros((len(self.names), self.n_days), dtype=np.int64)
        for row in snapshot.cases:
            daily[self._row[row.city], (row.date - self.first_date).days] += row.new_cases
        self._daily = daily
        self._cum = np.cumsum(daily, axis=1)

        iso: dict[str, dict[date, float]] = {}
        for row in snapshot.isolation:
            iso.setdefault(row.city, {})[row.date] = row.index
        self._isolation = iso

    def __contains__(self, name: str) -> bool:
        return name in self._row

    def require_city(self, name: str) -> None:
        if name not in self._row:
            raise UnknownCityError(name)

    def position(self, name: str) -> int:
        """Row of `name` in `names` order (the order of window_totals_all)."""
        self.require_city(name)
        return self._row[name]

    def _day_index(self, d: date) -> int:
        idx = (d - self.first_date).days
        if idx < 0 or idx >= self.n_days:
            raise DateRangeError(
                f"{d} outside snapshot range [{self.first_date}, {self.last_date}]"
            )
        return idx

    def check_window(self, window: TimeWindow) -> tuple[int, int]:
        return self._day_index(window.a), self._day_index(window.b)

    def series(self, city: str) -> CaseSeries:
        self.require_city(city)
        i = self._row[city]
        return CaseSeries(city, self.first_date, self._daily[i], self._cum[i])

    def cumulative_at(self, city: str, upto: date) -> int:
        self.require_city(city)
        return int(self._cum[self._row[city], self._day_index(upto)])

    def window_totals_all(self, window: TimeWindow) -> np.ndarray:
        """Accumulated-in-window total for every city, in `names` order."""
        a_idx, b_idx = self.check_window(window)
        return window_totals(self._cum, a_idx, b_idx)

    def isolation_series(self, city: str) -> dict[date, float]:
        self.require_city(city)
        return dict(self._isolation.get(city, {}))

    def first_case_date(self, city: str) -> date | None:
        self.require_city(city)
        positive = np.nonzero(self._daily[self._row[city]] > 0)[0]
        if len(positive) == 0:
            return None
        return self.first_date + timedelta(days=int(positive[0]))


def cumulative(series: CaseSeries, upto: date) -> int:
    """Prefix sum of daily counts through `upto` (0 before the first record)."""
    return int(series.cum[series.index_of(upto)])


def windowed_curve(series: CaseSeries, window: TimeWindow) -> WindowedCurve:
    a_idx = series.index_of(window.a)
    b_idx = series.index_of(window.b)
    base = series.cum[a_idx - 1] if a_idx > 0 else 0
    return WindowedCurve(window, series.cum[a_idx : b_idx + 1] - base)


def cumulative_slice(series: CaseSeries, window: TimeWindow) -> WindowedCurve:
    """Whole-period (since first notification) values over the window days."""
    a_idx = series.index_of(window.a)
    b_idx = series.index_of(window.b)
    return WindowedCurve(window, series.cum[a_idx : b_idx + 1].copy())


def whole_period_curve(series: CaseSeries, upto: date) -> list[tuple[date, int]]:
    """Cumulative points from the snapshot's first date through `upto`."""
    idx = series.index_of(upto)
    return [
        (series.first_date + timedelta(days=i), int(series.cum[i]))
        for i in range(idx + 1)
    ]


def neighborhood_aggregate(
    members: Iterable[str], table: CaseTable, window: TimeWindow
) -> WindowedCurve:
    """Pointwise sum of the members' windowed curves.

    The focus city is excluded by the caller (neighborhoods never contain
    their own focus). An empty member set yields the all-zero curve flagged
    ``empty_neighborhood`` — zero-case neighborhoods are data, not errors.
    """
    member_list = sorted(set(members))
    table.check_window(window)
    total = np.zeros(window.length_days, dtype=np.int64)
    for name in member_list:
        table.require_city(name)
        curve = windowed_curve(table.series(name), window)
        total += curve.values
    return WindowedCurve(window, total, empty_neighborhood=not member_list)


def neighborhood_cumulative_slice(
    members: Iterable[str], table: CaseTable, window: TimeWindow
) -> WindowedCurve:
    """Pointwise sum of members' whole-period values over the window days."""
    member_list = sorted(set(members))
    total = np.zeros(window.length_days, dtype=np.int64)
    for name in member_list:
        table.require_city(name)
        total += cumulative_slice(table.series(name), window).values
    return WindowedCurve(window, total, empty_neighborhood=not member_list)
