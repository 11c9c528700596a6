"""Neighborhood-based epidemic dissemination analytics.

Ingests per-city daily case and isolation data, builds k-nearest-city
neighborhoods over great-circle distances, scores time-windowed
dissemination risk, and serves the results to an interactive dashboard.
"""

from .errors import (
    ConfigError,
    DateRangeError,
    GeocoderUnavailable,
    ParseError,
    SpreadlensError,
    UnknownCityError,
    ValidationError,
)
from .geoindex import (
    NeighborhoodConfig,
    NeighborhoodIndex,
    active_neighbors,
    augmented_neighborhood,
    build_index,
    great_circle_distance,
    k_nearest_cities,
)
from .ingest import (
    CityRecord,
    DailyCaseRow,
    DatasetSnapshot,
    IsolationRow,
    build_snapshot,
    load_snapshot,
    parse_cases,
    parse_coordinates,
    parse_isolation,
    write_snapshot,
)
from .risk import (
    IsolationStats,
    RiskGlyph,
    RiskScore,
    build_glyph,
    compare_city_vs_neighborhood,
    isolation_stats,
    risk_score,
)
from .series import (
    CaseSeries,
    CaseTable,
    TimeWindow,
    WindowedCurve,
    cumulative,
    neighborhood_aggregate,
    whole_period_curve,
    windowed_curve,
)

__version__ = "0.1.0"
