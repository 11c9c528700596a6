"""Spatial neighborhood structure over the city set.

Builds the symmetric great-circle distance table, each city's k nearest
cities, and the augmented neighborhood: a city's k nearest plus every city
that counts it among their own k nearest. Zero-case members are filtered out
separately by :func:`active_neighbors`, because activity depends on the
analysis date while the index itself is static.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import UnknownCityError
from .kernels import EARTH_RADIUS_KM, knn_indices, pairwise_distance_km


def great_circle_distance(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Haversine distance in km between two (lat, lon) points in degrees.

    Sphere radius 6371.0 km; nonnegative and symmetric by construction.
    """
    lat1, lon1 = math.radians(p[0]), math.radians(p[1])
    lat2, lon2 = math.radians(q[0]), math.radians(q[1])
    a = (
        math.sin((lat2 - lat1) / 2.0) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * math.asin(math.sqrt(min(a, 1.0)))


@dataclass(frozen=True)
class NeighborhoodConfig:
    """Neighbor count for the kNN sets. Default matches the service default."""

    k: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class NeighborhoodIndex:
    """Immutable kNN index: safe to share across threads once built."""

    k: int
    names: tuple[str, ...]                      # sorted; row order of `distances`
    knn: Mapping[str, tuple[str, ...]]          # ascending distance, ties by name
    augmented: Mapping[str, frozenset[str]]
    distances: np.ndarray = field(repr=False, compare=False)
    _pos: Mapping[str, int] = field(repr=False, compare=False)

    def distance(self, a: str, b: str) -> float:
        try:
            return float(self.distances[self._pos[a], self._pos[b]])
        except KeyError as exc:
            raise UnknownCityError(str(exc.args[0])) from None

    def neighbors_of(self, city: str) -> frozenset[str]:
        try:
            return self.augmented[city]
        except KeyError:
            raise UnknownCityError(city) from None

    def to_json(self) -> str:
        """Debug/UI export: ``{"k": 10, "neighbors": {"a": ["b", ...]}}``."""
        doc = {"k": self.k, "neighbors": {name: list(self.knn[name]) for name in self.names}}
        return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def k_nearest_cities(
    cities: Sequence, config: NeighborhoodConfig
) -> dict[str, tuple[str, ...]]:
    """Each city's min(k, n-1) nearest other cities, ascending distance.

    `cities` is any sequence of objects with .name/.latitude/.longitude
    (CityRecord). Equal distances order lexicographically by city name.
    """
    index = build_index(cities, config)
    return dict(index.knn)


def build_index(cities: Sequence, config: NeighborhoodConfig) -> NeighborhoodIndex:
    records = sorted(cities, key=lambda c: c.name)
    if not records:
        raise ValueError("cannot build an index over an empty city set")
    names = tuple(c.name for c in records)
    if len(set(names)) != len(names):
        raise ValueError("duplicate city names in index input")

    lat = np.array([c.latitude for c in records], dtype=np.float64)
    lon = np.array([c.longitude for c in records], dtype=np.float64)
    dist = pairwise_distance_km(lat, lon)

    nn = knn_indices(dist, config.k)
    knn = {names[i]: tuple(names[j] for j in nn[i]) for i in range(len(names))}
    augmented = augmented_neighborhood(knn)
    pos = {name: i for i, name in enumerate(names)}
    return NeighborhoodIndex(
        k=config.k, names=names, knn=knn, augmented=augmented, distances=dist, _pos=pos
    )


def augmented_neighborhood(
    knn: Mapping[str, Sequence[str]]
) -> dict[str, frozenset[str]]:
    """knn(A) union reverse-knn(A); A never belongs to its own neighborhood."""
    members: dict[str, set[str]] = {name: set(neigh) for name, neigh in knn.items()}
    for name, neigh in knn.items():
        for other in neigh:
            members[other].add(name)
    for name in members:
        members[name].discard(name)
    return {name: frozenset(s) for name, s in members.items()}


def active_neighbors(
    city: str,
    augmented: Mapping[str, Iterable[str]],
    cases,
    as_of: date,
) -> set[str]:
    """Neighborhood members with at least one case accumulated by `as_of`.

    `cases` provides cumulative_at(name, as_of); first-case-on-as_of counts
    as active (inclusive boundary).
    """
    if city not in augmented:
        raise UnknownCityError(city)
    return {m for m in augmented[city] if cases.cumulative_at(m, as_of) > 0}
