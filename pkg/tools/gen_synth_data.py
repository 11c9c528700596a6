#!/usr/bin/env python3
"""Generate the bundled 30-city / 90-day synthetic dataset.

Deterministic (fixed seed). Writes raw input files the way an upstream feed
would look: mixed-case city names, shuffled rows, only nonzero case days,
isolation given as percentages for half the cities and fractions for the
rest, plus a square-polygon boundary file.

Usage: python tools/gen_synth_data.py [outdir]   (default tests/data/synth30)
"""

import json
import random
import sys
from datetime import date, timedelta
from pathlib import Path

FIRST_DAY = date(2020, 3, 1)
N_DAYS = 90

NAMES = [
    "Alvorada do Norte", "Boa Esperança", "Campo Sereno", "Doura Velha",
    "Estrela do Vale", "Figueira Alta", "Guara Mirim", "Horizonte Azul",
    "Ipê Dourado", "Jacarandá", "Lagoa Formosa", "Monte Claro",
    "Nova Canária", "Outeiro Verde", "Pedra Branca", "Quaresmeira",
    "Riacho Fundo", "Serra Nevoada", "Três Coroas", "Uvaia Grande",
    "Vale Luminoso", "Ximbó", "Zimbro Alto", "Areia Rosa",
    "Bosque Frio", "Cachoeira Seca", "Delta Manso", "Encosta Longa",
    "Fonte Limpa", "Gameleira",
]


def main(out_dir: Path) -> None:
    rng = random.Random(20200301)
    out_dir.mkdir(parents=True, exist_ok=True)

    cities = []
    for name in NAMES:
        lat = rng.uniform(-24.8, -20.2)
        lon = rng.uniform(-52.8, -44.5)
        population = rng.randrange(5_000, 800_000)
        cities.append((name, lat, lon, population))

    # a handful of rows without population, as real coordinate files have
    no_pop = set(rng.sample(range(len(cities)), 4))

    coord_rows = []
    for i, (name, lat, lon, population) in enumerate(cities):
        pop = "" if i in no_pop else str(population)
        coord_rows.append(f"{name},{lat:.4f},{lon:.4f},{pop}")
    rng.shuffle(coord_rows)
    (out_dir / "coords.csv").write_text(
        "city,lat,lon,population\n" + "\n".join(coord_rows) + "\n", encoding="utf-8"
    )

    # case curves: larger cities start earlier and grow faster; five cities
    # never report a case; one city gets a negative correction row
    zero_case = set(rng.sample(range(len(cities)), 5))
    case_rows = []
    for i, (name, lat, lon, population) in enumerate(cities):
        if i in zero_case:
            continue
        weight = population / 800_000
        start = rng.randrange(5, 60 - int(40 * weight))
        rate = 0.05 + 2.5 * weight
        for d in range(start, N_DAYS):
            lam = rate * (1.0 + 0.04 * (d - start))
            n = _poisson(rng, lam)
            if n > 0:
                day = FIRST_DAY + timedelta(days=d)
                case_rows.append(f"{name},{day.isoformat()},{n}")
    correction_city = cities[sorted(zero_case)[0] - 1][0]  # any reporting city
    case_rows.append(f"{correction_city},{(FIRST_DAY + timedelta(days=70)).isoformat()},-2")
    rng.shuffle(case_rows)
    (out_dir / "cases.csv").write_text(
        "city,date,new_cases\n" + "\n".join(case_rows) + "\n", encoding="utf-8"
    )

    # isolation indices for 18 cities, with gaps; half submitted as percents
    iso_rows = []
    iso_cities = rng.sample(range(len(cities)), 18)
    for j, i in enumerate(iso_cities):
        name = cities[i][0]
        base = rng.uniform(0.35, 0.62)
        for d in range(10, N_DAYS):
            if rng.random() < 0.15:  # missing days
                continue
            value = min(0.95, max(0.05, base + rng.gauss(0, 0.04)))
            day = FIRST_DAY + timedelta(days=d)
            if j % 2 == 0:
                iso_rows.append(f"{name},{day.isoformat()},{value * 100:.1f}")
            else:
                iso_rows.append(f"{name},{day.isoformat()},{value:.3f}")
    rng.shuffle(iso_rows)
    (out_dir / "isolation.csv").write_text(
        "city,date,index\n" + "\n".join(iso_rows) + "\n", encoding="utf-8"
    )

    features = []
    for name, lat, lon, _ in cities:
        h = 0.08
        ring = [
            [lon - h, lat - h], [lon + h, lat - h], [lon + h, lat + h],
            [lon - h, lat + h], [lon - h, lat - h],
        ]
        features.append({
            "type": "Feature",
            "properties": {"name": name},
            "geometry": {"type": "Polygon", "coordinates": [ring]},
        })
    (out_dir / "boundaries.geojson").write_text(
        json.dumps({"type": "FeatureCollection", "features": features}, ensure_ascii=False),
        encoding="utf-8",
    )
    print(f"wrote synthetic dataset to {out_dir}")


def _poisson(rng: random.Random, lam: float) -> int:
    # Knuth's method; lam stays small here
    import math

    L = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= L:
            return k
        k += 1


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data/synth30")
    main(target)
