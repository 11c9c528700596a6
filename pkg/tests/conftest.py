import random
from datetime import date, timedelta
from pathlib import Path

import pytest

from spreadlens.geoindex import NeighborhoodConfig, build_index
from spreadlens.ingest import (
    CityRecord,
    DailyCaseRow,
    build_snapshot,
    load_snapshot,
)
from spreadlens.series import CaseTable

DATA_DIR = Path(__file__).parent / "data" / "synth30"
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def synth_dataset():
    snapshot, warnings = load_snapshot(DATA_DIR)
    return snapshot


@pytest.fixture(scope="session")
def synth_table(synth_dataset):
    return CaseTable(synth_dataset)


@pytest.fixture(scope="session")
def synth_index(synth_dataset):
    return build_index(synth_dataset.cities, NeighborhoodConfig(10))


def random_cities(rng: random.Random, n: int, prefix: str = "c") -> list[CityRecord]:
    """Distinct random cities in a Sao-Paulo-sized box."""
    return [
        CityRecord(
            f"{prefix}{i:03d}",
            rng.uniform(-25.0, -20.0),
            rng.uniform(-53.0, -44.0),
        )
        for i in range(n)
    ]


def snapshot_from_dailies(dailies_by_city, first_day=date(2020, 3, 1), coords=None):
    """Snapshot out of {city: [daily counts]} lists, zero-padded to one range."""
    rng = random.Random(7)
    names = sorted(dailies_by_city)
    if coords is None:
        coords = {
            name: (rng.uniform(-25.0, -20.0), rng.uniform(-53.0, -44.0))
            for name in names
        }
    cities = [CityRecord(name, *coords[name]) for name in names]
    n_days = max(len(v) for v in dailies_by_city.values())
    rows = []
    for name, dailies in dailies_by_city.items():
        for i, n in enumerate(dailies):
            if n != 0:
                rows.append(DailyCaseRow(name, first_day + timedelta(days=i), n))
    last_day = first_day + timedelta(days=n_days - 1)
    snapshot, _ = build_snapshot(cities, rows, date_range=(first_day, last_day))
    return snapshot
