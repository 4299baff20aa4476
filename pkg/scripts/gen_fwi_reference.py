#!/usr/bin/env python3
"""Freeze the FWI reference test vectors consumed by the test-suite.

Builds a deterministic 45-day weather series (seeded random walk with dry
spells and rain events across a spring-to-fall season) and runs the
independent oracle transcription over it. Outputs:

  tests/fixtures/fwi/reference_weather.csv   input weather, CLI schema
  tests/fixtures/fwi/reference_indices.csv   expected six quantities per day

Re-running regenerates identical bytes.
"""

import csv
import datetime as dt
import pathlib
import random
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tests"))

from oracles.fwi_wang2015 import chain_ref

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "fwi"

LAT, LON = 48.25, -71.06  # southern Quebec station


def build_weather():
    rng = random.Random(20240613)
    start = dt.date(2023, 4, 13)
    temp, rh, wind = 12.0, 55.0, 15.0
    rows = []
    for day in range(45):
        date = start + dt.timedelta(days=day)
        temp = min(max(temp + rng.uniform(-3.0, 3.5), -5.0), 38.0)
        rh = min(max(rh + rng.uniform(-12.0, 12.0), 8.0), 100.0)
        wind = min(max(wind + rng.uniform(-6.0, 6.0), 0.0), 45.0)
        roll = rng.random()
        if roll < 0.12:
            rain = round(rng.uniform(8.0, 35.0), 1)  # soaking event
        elif roll < 0.30:
            rain = round(rng.uniform(0.2, 4.0), 1)  # light shower
        else:
            rain = 0.0
        rows.append((date, round(temp, 1), round(rh, 1), round(wind, 1), rain))
    return rows


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    weather = build_weather()

    with open(OUT_DIR / "reference_weather.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "lat", "lon", "temp_c", "rh_pct", "wind_kmh", "rain_mm"])
        for date, temp, rh, wind, rain in weather:
            writer.writerow([date.isoformat(), LAT, LON, temp, rh, wind, rain])

    rows = [(d.month, t, h, w, r) for d, t, h, w, r in weather]
    expected = chain_ref(rows)

    with open(OUT_DIR / "reference_indices.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "ffmc", "dmc", "dc", "isi", "bui", "fwi"])
        for (date, *_), vals in zip(weather, expected):
            writer.writerow([date.isoformat()] + [f"{v:.4f}" for v in vals])

    print(f"wrote {len(weather)} days to {OUT_DIR}")


if __name__ == "__main__":
    main()
