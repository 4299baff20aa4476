#!/usr/bin/env python3
"""Build the committed end-to-end scene fixture under tests/fixtures/scene/.

Contents:
  scene.png            64x64 synthetic forest mosaic (2x2 grid of 32px tiles)
  weather.csv          three hot dry days at a Quebec station
  expected_danger.csv  the danger map the `assess` command must reproduce
                       byte-for-byte
  zero.cnnw            written by gen_golden_fixtures.py (all-zero weights)

The expectation is derived from the module-level oracles, not from the
CLI: the FWI chain comes from the independent transcription in
tests/oracles, the base class from the documented thresholds, and the
fused level from round(base * (1 - p)) with p = sigmoid(0) = 0.5 for a
zero-weight network. The assertions at the bottom recompute all of that
here; the CLI output is then frozen as the file above.

Also writes tests/fixtures/weather/ payload fixtures for the provider
tests.
"""

import csv
import datetime as dt
import json
import pathlib
import sys

import numpy as np

BASE = pathlib.Path(__file__).resolve().parent.parent
SCENE = BASE / "tests" / "fixtures" / "scene"
WEATHER_FIX = BASE / "tests" / "fixtures" / "weather"

sys.path.insert(0, str(BASE / "tests"))
from oracles.fwi_wang2015 import chain_ref  # noqa: E402

LAT, LON = 46.81, -71.21

# three hot, dry, windy July days: the FWI climbs quickly from startup
WEATHER_DAYS = [
    ("2023-07-10", 31.0, 18.0, 30.0, 0.0),
    ("2023-07-11", 33.5, 15.0, 35.0, 0.0),
    ("2023-07-12", 34.0, 12.0, 40.0, 0.0),
]

EFFIS_THRESHOLDS = (5.2, 11.2, 21.3, 38.0, 50.0)


def build_scene_png():
    rng = np.random.default_rng(515151)
    pixels = np.zeros((64, 64, 3), dtype=np.uint8)
    # green forest texture with a brown burned patch in one quadrant
    pixels[:, :, 1] = rng.integers(90, 150, size=(64, 64))
    pixels[:, :, 0] = rng.integers(20, 60, size=(64, 64))
    pixels[:, :, 2] = rng.integers(10, 50, size=(64, 64))
    pixels[32:, :32, 0] = rng.integers(100, 140, size=(32, 32))
    pixels[32:, :32, 1] = rng.integers(60, 90, size=(32, 32))
    from PIL import Image

    SCENE.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels, mode="RGB").save(SCENE / "scene.png")


def write_weather_csv():
    with open(SCENE / "weather.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "lat", "lon", "temp_c", "rh_pct", "wind_kmh", "rain_mm"])
        for date, temp, rh, wind, rain in WEATHER_DAYS:
            writer.writerow([date, LAT, LON, temp, rh, wind, rain])


def expected_danger_rows():
    rows = [(dt.date.fromisoformat(d).month, t, h, w, r) for d, t, h, w, r in WEATHER_DAYS]
    final_fwi = chain_ref(rows)[-1][5]
    base = sum(final_fwi >= cut for cut in EFFIS_THRESHOLDS)
    p_burn = 0.5  # zero-weight sigmoid head
    level = int(np.floor(base * (1.0 - p_burn) + 0.5))
    print(f"oracle: final fwi={final_fwi:.2f} base={base} level={level}")
    return [(r, c, base, p_burn, level) for r in range(2) for c in range(2)], final_fwi


def write_expected(rows):
    with open(SCENE / "expected_danger.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col", "base_level", "p_burn", "level"])
        for r, c, base, p, level in rows:
            writer.writerow([r, c, base, f"{p:.6f}", level])


def write_weather_payload_fixtures():
    WEATHER_FIX.mkdir(parents=True, exist_ok=True)
    days = [
        {"date": d, "temp_c": t, "rh_pct": h, "wind_kmh": w, "rain_mm": r}
        for d, t, h, w, r in WEATHER_DAYS
    ]
    # full three-day payload
    (WEATHER_FIX / "46.8100_-71.2100_2023-07-10_2023-07-12.json").write_text(
        json.dumps({"days": days}, indent=2) + "\n"
    )
    # same key in a sibling directory, middle day missing: one gap expected
    gappy = WEATHER_FIX / "gappy"
    gappy.mkdir(parents=True, exist_ok=True)
    (gappy / "46.8100_-71.2100_2023-07-10_2023-07-12.json").write_text(
        json.dumps({"days": [days[0], days[2]]}, indent=2) + "\n"
    )


def main():
    build_scene_png()
    write_weather_csv()
    rows, final_fwi = expected_danger_rows()
    write_expected(rows)
    write_weather_payload_fixtures()

    # cross-check the oracle chain against the package implementation
    from pyrorisk import fwi as fwi_mod
    from pyrorisk.weather import read_weather_csv

    observations, _, _ = read_weather_csv(SCENE / "weather.csv")
    reports = fwi_mod.run_series(observations)
    assert abs(reports[-1].fwi - final_fwi) < 1e-9, "package vs oracle mismatch"
    print(f"scene fixture written to {SCENE}")


if __name__ == "__main__":
    main()
