"""Weather ingestion: CSV files plus a provider interface with record/replay.

No commercial API is hardcoded. ``HttpWeatherProvider`` takes a URL
template and emits the generic daily payload schema below; recorded
payloads replay byte-deterministically through ``FixtureWeatherProvider``
(both paths share one parser, so live and fixture modes cannot drift).

Payload schema (JSON)::

    {"days": [{"date": "YYYY-MM-DD", "temp_c": 17.0, "rh_pct": 42.0,
               "wind_kmh": 25.0, "rain_mm": 0.0}, ...]}
"""

from __future__ import annotations

import csv
import dataclasses
import datetime as dt
import json
import time
import urllib.error
import urllib.request
from pathlib import Path
from typing import Protocol

from .errors import (
    DomainError,
    FixtureNotFoundError,
    PayloadError,
    RetryableProviderError,
)
from .fwi import FwiReport, WeatherObservation

WEATHER_CSV_HEADER = ("date", "lat", "lon", "temp_c", "rh_pct", "wind_kmh", "rain_mm")
REPORT_CSV_HEADER = ("date", "ffmc", "dmc", "dc", "isi", "bui", "fwi")


@dataclasses.dataclass
class WeatherSeries:
    """Daily observations in date order plus the dates found missing."""

    observations: list[WeatherObservation]
    gaps: list[dt.date]


def fixture_key(lat: float, lon: float, start: dt.date, end: dt.date) -> str:
    return f"{lat:.4f}_{lon:.4f}_{start.isoformat()}_{end.isoformat()}.json"


def decode_payload(raw: bytes) -> dict:
    try:
        return json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise PayloadError(f"payload is not UTF-8: {exc.reason}", offset=exc.start) from exc
    except json.JSONDecodeError as exc:
        raise PayloadError(f"payload is not JSON: {exc.msg}", offset=exc.pos) from exc


def parse_payload(payload: dict) -> list[WeatherObservation]:
    """Decode the daily schema; the failing day index is reported."""
    days = payload.get("days")
    if not isinstance(days, list):
        raise PayloadError("payload has no 'days' list", offset=0)
    observations = []
    for i, day in enumerate(days):
        try:
            observations.append(
                WeatherObservation(
                    date=dt.date.fromisoformat(day["date"]),
                    temp_c=float(day["temp_c"]),
                    rh_pct=float(day["rh_pct"]),
                    wind_kmh=float(day["wind_kmh"]),
                    rain_mm=float(day["rain_mm"]),
                )
            )
        except (KeyError, TypeError, ValueError, DomainError) as exc:
            raise PayloadError(f"bad day record: {exc}", offset=i) from exc
    return observations


class WeatherProvider(Protocol):
    def fetch_raw(self, lat: float, lon: float, start: dt.date, end: dt.date) -> bytes: ...


class FixtureWeatherProvider:
    """Replays recorded payloads from a directory, byte-deterministically."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def fetch_raw(self, lat: float, lon: float, start: dt.date, end: dt.date) -> bytes:
        path = self.directory / fixture_key(lat, lon, start, end)
        if not path.is_file():
            raise FixtureNotFoundError(f"no recorded fixture {path}")
        return path.read_bytes()


class HttpWeatherProvider:
    """Fetches the daily payload from a templated URL, with retry/backoff.

    ``url_template`` may reference {lat}, {lon}, {start}, {end} and
    {token}. With ``record_dir`` set, every successful payload is written
    as a replayable fixture.
    """

    def __init__(
        self,
        url_template: str,
        token: str = "",
        timeout_s: float = 10.0,
        max_attempts: int = 3,
        backoff_s: float = 1.0,
        record_dir: str | Path | None = None,
    ):
        self.url_template = url_template
        self.token = token
        self.timeout_s = timeout_s
        self.max_attempts = max_attempts
        self.backoff_s = backoff_s
        self.record_dir = Path(record_dir) if record_dir else None

    def fetch_raw(self, lat: float, lon: float, start: dt.date, end: dt.date) -> bytes:
        url = self.url_template.format(
            lat=lat, lon=lon, start=start.isoformat(), end=end.isoformat(), token=self.token
        )
        last_error: Exception | None = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                with urllib.request.urlopen(url, timeout=self.timeout_s) as resp:
                    raw = resp.read()
                break
            except (urllib.error.URLError, OSError) as exc:
                last_error = exc
                if attempt < self.max_attempts:
                    time.sleep(self.backoff_s * 2 ** (attempt - 1))
        else:
            raise RetryableProviderError(
                f"weather fetch failed after {self.max_attempts} attempts: {last_error}",
                attempts=self.max_attempts,
                backoff_s=self.backoff_s * 2 ** (self.max_attempts - 1),
            )
        if self.record_dir is not None:
            self.record_dir.mkdir(parents=True, exist_ok=True)
            (self.record_dir / fixture_key(lat, lon, start, end)).write_bytes(raw)
        return raw


def fetch_weather(
    provider: WeatherProvider, lat: float, lon: float, start: dt.date, end: dt.date
) -> WeatherSeries:
    """One observation per day over [start, end]; missing days are gaps."""
    if end < start:
        raise DomainError(f"date range {start}..{end} is inverted")
    raw = provider.fetch_raw(lat, lon, start, end)
    observations = parse_payload(decode_payload(raw))
    by_date = {}
    for obs in observations:
        if obs.date in by_date:
            raise PayloadError(f"duplicate date {obs.date}", offset=0)
        by_date[obs.date] = obs

    kept, gaps = [], []
    day = start
    while day <= end:
        if day in by_date:
            kept.append(by_date[day])
        else:
            gaps.append(day)
        day += dt.timedelta(days=1)
    return WeatherSeries(observations=kept, gaps=gaps)


def read_weather_csv(path: str | Path) -> tuple[list[WeatherObservation], float | None, float | None]:
    """Read the weather CSV schema; returns observations plus station lat/lon."""
    observations = []
    lat = lon = None
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(WEATHER_CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise DomainError(f"weather CSV missing columns {sorted(missing)}")
        for row in reader:
            try:
                observations.append(
                    WeatherObservation(
                        date=dt.date.fromisoformat(row["date"]),
                        temp_c=float(row["temp_c"]),
                        rh_pct=float(row["rh_pct"]),
                        wind_kmh=float(row["wind_kmh"]),
                        rain_mm=float(row["rain_mm"]),
                    )
                )
                lat = float(row["lat"])
                lon = float(row["lon"])
            except (KeyError, ValueError) as exc:
                raise DomainError(f"bad weather row {row!r}: {exc}") from exc
    if not observations:
        raise DomainError(f"weather CSV {path} has no rows")
    return observations, lat, lon


def write_report_csv(
    path: str | Path, observations: list[WeatherObservation], reports: list[FwiReport]
) -> None:
    """Emit the report schema with the documented 1-decimal formatting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_CSV_HEADER)
        for obs, report in zip(observations, reports):
            writer.writerow(
                [
                    obs.date.isoformat(),
                    f"{report.state.ffmc:.1f}",
                    f"{report.state.dmc:.1f}",
                    f"{report.state.dc:.1f}",
                    f"{report.isi:.1f}",
                    f"{report.bui:.1f}",
                    f"{report.fwi:.1f}",
                ]
            )
