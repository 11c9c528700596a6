import math
import random
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spreadlens.errors import UnknownCityError
from spreadlens.geoindex import (
    NeighborhoodConfig,
    active_neighbors,
    augmented_neighborhood,
    build_index,
    great_circle_distance,
    k_nearest_cities,
)
from spreadlens.ingest import CityRecord

from conftest import random_cities, snapshot_from_dailies
from oracles import brute_force_augmented, brute_force_knn, gc_distance_atan2
from spreadlens.series import CaseTable

HALF_CIRCUMFERENCE_KM = math.pi * 6371.0  # 20015.086796020572


def test_distance_identity():
    assert great_circle_distance((-22.12, -51.39), (-22.12, -51.39)) == 0.0


def test_distance_antipodal_half_circumference():
    d = great_circle_distance((0.0, 0.0), (0.0, 180.0))
    assert abs(d - HALF_CIRCUMFERENCE_KM) < 0.01


def test_distance_against_independent_formulation():
    # frozen from the atan2 great-circle oracle in oracles.py
    expected = 12.274708234772481
    assert gc_distance_atan2(-22.12, -51.39, -22.23, -51.40) == pytest.approx(expected)
    got = great_circle_distance((-22.12, -51.39), (-22.23, -51.40))
    assert got == pytest.approx(expected, rel=1e-6)


def test_single_city_has_empty_knn():
    knn = k_nearest_cities([CityRecord("a", -22.0, -51.0)], NeighborhoodConfig(3))
    assert knn == {"a": ()}


def test_collinear_cities_order_is_forced():
    cities = [CityRecord(f"c{i}", 0.0, float(i)) for i in range(5)]
    knn = k_nearest_cities(cities, NeighborhoodConfig(2))
    assert knn["c0"] == ("c1", "c2")
    assert knn["c4"] == ("c3", "c2")
    assert knn["c2"] in (("c1", "c3"), ("c3", "c1"))


def test_equal_distances_break_ties_lexicographically():
    # b and z sit symmetrically around m: identical float distances
    cities = [
        CityRecord("m", 0.0, 0.0),
        CityRecord("z", 0.0, 1.0),
        CityRecord("b", 0.0, -1.0),
    ]
    knn = k_nearest_cities(cities, NeighborhoodConfig(2))
    assert knn["m"] == ("b", "z")


def test_knn_matches_brute_force_oracle_12_cities():
    rng = random.Random(12)
    cities = random_cities(rng, 12)
    knn = k_nearest_cities(cities, NeighborhoodConfig(4))
    oracle = brute_force_knn({c.name: (c.latitude, c.longitude) for c in cities}, 4)
    assert knn == oracle


@given(st.integers(min_value=2, max_value=28), st.integers(min_value=1, max_value=27),
       st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_knn_equals_brute_force_property(n, k, seed):
    k = min(k, n - 1)
    cities = random_cities(random.Random(seed), n)
    knn = k_nearest_cities(cities, NeighborhoodConfig(k))
    oracle = brute_force_knn({c.name: (c.latitude, c.longitude) for c in cities}, k)
    assert knn == oracle


def test_augmented_asymmetric_collinear_example():
    cities = [
        CityRecord("p0", 0.0, 0.0),
        CityRecord("p1", 0.0, 1.0),
        CityRecord("p9", 0.0, 10.0),
    ]
    index = build_index(cities, NeighborhoodConfig(1))
    assert index.knn["p9"] == ("p1",)
    assert index.knn["p1"] == ("p0",)
    assert index.augmented["p1"] == {"p0", "p9"}


def test_augmented_symmetric_pair():
    cities = [CityRecord("a", -22.0, -51.0), CityRecord("b", -22.5, -51.2)]
    index = build_index(cities, NeighborhoodConfig(1))
    assert index.augmented["a"] == {"b"}
    assert index.augmented["b"] == {"a"}


def test_augmented_matches_brute_force_union():
    rng = random.Random(99)
    cities = random_cities(rng, 12)
    index = build_index(cities, NeighborhoodConfig(4))
    oracle = brute_force_augmented(
        brute_force_knn({c.name: (c.latitude, c.longitude) for c in cities}, 4)
    )
    assert {n: set(s) for n, s in index.augmented.items()} == oracle


def test_reverse_membership_and_size_properties():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randrange(2, 30)
        k = rng.randrange(1, n)
        cities = random_cities(rng, n)
        index = build_index(cities, NeighborhoodConfig(k))
        for a, neigh in index.knn.items():
            assert a not in neigh
            assert len(neigh) == min(k, n - 1)
            for b in neigh:
                assert a in index.augmented[b]
        for a in index.augmented:
            assert a not in index.augmented[a]
            assert len(index.augmented[a]) >= len(index.knn[a])


def test_distance_table_symmetry_and_diagonal(synth_index):
    import numpy as np

    d = synth_index.distances
    assert np.allclose(d, d.T)
    assert np.all(np.diag(d) == 0.0)
    assert d[d > 0].min() > 0.0


def test_index_export_is_deterministic():
    cities = random_cities(random.Random(3), 15)
    a = build_index(cities, NeighborhoodConfig(4)).to_json()
    b = build_index(list(reversed(cities)), NeighborhoodConfig(4)).to_json()
    assert a == b
    import json

    doc = json.loads(a)
    assert doc["k"] == 4
    assert set(doc["neighbors"]) == {c.name for c in cities}


def test_active_neighbors_filters_zero_case_cities():
    dailies = {
        "hub": [1, 2, 3],
        "n1": [0, 1, 0],
        "n2": [0, 0, 0],
        "n3": [2, 0, 0],
        "n4": [0, 0, 1],
        "n5": [0, 0, 0],
    }
    snapshot = snapshot_from_dailies(dailies)
    table = CaseTable(snapshot)
    augmented = {"hub": frozenset(["n1", "n2", "n3", "n4", "n5"])}

    # mixed fixture: exactly the 3 members with cases through day 2 survive
    assert active_neighbors("hub", augmented, table, date(2020, 3, 3)) == {"n1", "n3", "n4"}
    # first case exactly on as_of is included
    assert "n4" in active_neighbors("hub", augmented, table, date(2020, 3, 3))
    # all-zero neighborhoods filter to nothing
    empty = {"hub": frozenset(["n2", "n5"])}
    assert active_neighbors("hub", empty, table, date(2020, 3, 3)) == set()


def test_active_neighbors_unknown_city():
    snapshot = snapshot_from_dailies({"a": [1], "b": [1]})
    table = CaseTable(snapshot)
    with pytest.raises(UnknownCityError):
        active_neighbors("nowhere", {"a": frozenset()}, table, date(2020, 3, 1))


def test_index_lookup_errors():
    cities = [CityRecord("a", -22.0, -51.0), CityRecord("b", -23.0, -50.0)]
    index = build_index(cities, NeighborhoodConfig(1))
    with pytest.raises(UnknownCityError):
        index.neighbors_of("missing")
    with pytest.raises(UnknownCityError):
        index.distance("a", "missing")


def test_config_rejects_bad_k():
    with pytest.raises(ValueError):
        NeighborhoodConfig(0)


def test_build_index_rejects_empty_input():
    with pytest.raises(ValueError):
        build_index([], NeighborhoodConfig(1))
