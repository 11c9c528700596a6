#!/usr/bin/env python3
"""Regenerate the golden API payloads for the bundled synthetic dataset.

Deliberately independent of the package: plain csv + math, naive O(n^2)
nearest-neighbor search, and per-date loop summation. The documented service
contracts are reimplemented here from scratch so the goldens act as an
oracle for the real pipeline.

Usage: python tools/gen_golden.py
"""

import csv
import json
import math
from datetime import date, timedelta
from pathlib import Path

DATA = Path("tests/data/synth30")
OUT = Path("tests/golden")

FOCUS = "lagoa formosa"
WINDOW_A = date(2020, 4, 20)
WINDOW_B = date(2020, 5, 9)
K = 10
MODE = "unit_square"

EARTH_RADIUS_KM = 6371.0
QUARTER_PI = math.pi / 4.0


def norm(name):
    return name.strip().casefold()


def load():
    cities = {}
    with (DATA / "coords.csv").open(encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            cities[norm(row["city"])] = (float(row["lat"]), float(row["lon"]))

    cases = {}
    with (DATA / "cases.csv").open(encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (norm(row["city"]), date.fromisoformat(row["date"]))
            cases[key] = cases.get(key, 0) + int(row["new_cases"])
    return cities, cases


def haversine(p, q):
    lat1, lon1, lat2, lon2 = map(math.radians, (p[0], p[1], q[0], q[1]))
    a = (
        math.sin((lat2 - lat1) / 2) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    )
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(a))


def knn_sets(cities, k):
    out = {}
    for name, p in cities.items():
        ranked = sorted(
            ((haversine(p, q), other) for other, q in cities.items() if other != name)
        )
        out[name] = [other for _, other in ranked[:k]]
    return out


def augmented(knn):
    out = {name: set(neigh) for name, neigh in knn.items()}
    for name, neigh in knn.items():
        for other in neigh:
            out[other].add(name)
    for name in out:
        out[name].discard(name)
    return out


def total_through(cases, city, upto):
    return sum(n for (c, d), n in cases.items() if c == city and d <= upto)


def total_in(cases, city, a, b):
    return sum(n for (c, d), n in cases.items() if c == city and a <= d <= b)


def window_days(a, b):
    days = []
    d = a
    while d <= b:
        days.append(d)
        d += timedelta(days=1)
    return days


def points(values_by_day):
    return [{"date": d.isoformat(), "value": v} for d, v in values_by_day]


def main():
    cities, cases = load()
    knn = knn_sets(cities, K)
    members = sorted(augmented(knn)[FOCUS])
    days = window_days(WINDOW_A, WINDOW_B)
    n_days = len(days)

    active = sorted(m for m in members if total_through(cases, m, WINDOW_B) > 0)

    totals = {name: total_in(cases, name, WINDOW_A, WINDOW_B) for name in [FOCUS, *active]}
    view_max = max(max(t, 0) / n_days for t in totals.values())

    def score(total):
        slope = max(total / n_days, 0.0)
        normalized = slope / view_max if view_max > 0 else 0.0
        return math.atan(normalized) / QUARTER_PI

    segments = sorted(
        ({"city": name, "saturation": score(totals[name]), "window_total": totals[name]}
         for name in active),
        key=lambda s: (-s["saturation"], s["city"]),
    )
    glyph = {
        "focus": {
            "city": FOCUS,
            "saturation": score(totals[FOCUS]),
            "window_total": totals[FOCUS],
        },
        "segments": segments,
        "window": {"a": WINDOW_A.isoformat(), "b": WINDOW_B.isoformat()},
        "mode": MODE,
    }

    city_total = [(d, total_through(cases, FOCUS, d)) for d in days]
    city_window = [(d, total_in(cases, FOCUS, WINDOW_A, d)) for d in days]
    nbhd_total = [(d, sum(total_through(cases, m, d) for m in members)) for d in days]
    nbhd_window = [(d, sum(total_in(cases, m, WINDOW_A, d) for m in members)) for d in days]

    city_n_b = city_window[-1][1]
    nbhd_n_b = nbhd_window[-1][1]
    curves = {
        "city": FOCUS,
        "window": {"a": WINDOW_A.isoformat(), "b": WINDOW_B.isoformat()},
        "members": members,
        "curves": {
            "neighborhood_total": points(nbhd_total),
            "city_total": points(city_total),
            "neighborhood_window": points(nbhd_window),
            "city_window": points(city_window),
        },
        "totals": {"city": city_n_b, "neighborhood": nbhd_n_b},
        "city_dominates": city_n_b > nbhd_n_b,
    }

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "glyph_lagoa_formosa.json").write_text(
        json.dumps(glyph, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    (OUT / "curves_lagoa_formosa.json").write_text(
        json.dumps(curves, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote goldens for {FOCUS} [{WINDOW_A}..{WINDOW_B}] k={K}")


if __name__ == "__main__":
    main()
