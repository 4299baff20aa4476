"""Canadian Forest Fire Weather Index system: daily moisture codes and indices.

Implements the standard Van Wagner (1987) daily equations as codified in
Van Wagner & Pickett (1985) and the updated source of Wang, Anderson &
Suddaby (2015): three moisture codes (FFMC, DMC, DC) carried day to day,
and the behavior indices (ISI, BUI, FWI) computed from them.

Conventions, fixed here and relied on by the tests:

* inputs are noon observations: temperature (C), relative humidity (%),
  wind speed (km/h), 24-h rain (mm);
* invalid inputs are rejected eagerly, never clamped;
* DMC drying uses the standard monthly effective day-length table and DC
  uses the standard monthly day-length factor, both selected by latitude
  band (default 30-90N, appropriate for mid/high northern latitudes);
* DC potential evapotranspiration is clamped at zero (winter months);
* conventional startup values are FFMC=85, DMC=6, DC=15.

All functions are pure: identical inputs give bit-identical outputs, and
independent stations may be stepped concurrently.
"""

from __future__ import annotations

import dataclasses
import datetime as dt
import enum
import math
from typing import Iterable

from .errors import DomainError
from .validation import check_range

__all__ = [
    "WeatherObservation",
    "FwiState",
    "FwiReport",
    "LatitudeBand",
    "band_for_latitude",
    "update_ffmc",
    "update_dmc",
    "update_dc",
    "compute_isi",
    "compute_bui",
    "compute_fwi",
    "step_day",
    "run_series",
]

DEFAULT_FFMC = 85.0
DEFAULT_DMC = 6.0
DEFAULT_DC = 15.0


class LatitudeBand(enum.Enum):
    """Latitude band selecting the monthly DMC/DC seasonal tables."""

    NORTH_30_90 = "30N-90N"
    NORTH_15_30 = "15N-30N"
    EQUATORIAL = "15S-15N"
    SOUTH_15_30 = "30S-15S"
    SOUTH_30_90 = "90S-30S"


# Effective day lengths for DMC drying, by month (Van Wagner 1987, table 1;
# hemisphere variants per Lawson & Armitage 2008 / cffdrs).
_DMC_DAY_LENGTH = {
    LatitudeBand.NORTH_30_90: (6.5, 7.5, 9.0, 12.8, 13.9, 13.9, 12.4, 10.9, 9.4, 8.0, 7.0, 6.0),
    LatitudeBand.NORTH_15_30: (7.9, 8.4, 8.9, 9.5, 9.9, 10.2, 10.1, 9.7, 9.1, 8.6, 8.1, 7.8),
    LatitudeBand.EQUATORIAL: (9.0,) * 12,
    LatitudeBand.SOUTH_15_30: (10.1, 9.6, 9.1, 8.5, 8.1, 7.8, 7.9, 8.3, 8.9, 9.4, 9.9, 10.2),
    LatitudeBand.SOUTH_30_90: (11.5, 10.5, 9.2, 7.9, 6.8, 6.2, 6.5, 7.4, 8.7, 10.0, 11.2, 11.8),
}

# Day-length factors for DC evapotranspiration, by month.
_DC_NORTH = (-1.6, -1.6, -1.6, 0.9, 3.8, 5.8, 6.4, 5.0, 2.4, 0.4, -1.6, -1.6)
_DC_SOUTH = (6.4, 5.0, 2.4, 0.4, -1.6, -1.6, -1.6, -1.6, -1.6, 0.9, 3.8, 5.8)
_DC_DAY_FACTOR = {
    LatitudeBand.NORTH_30_90: _DC_NORTH,
    LatitudeBand.NORTH_15_30: _DC_NORTH,
    LatitudeBand.EQUATORIAL: (1.39,) * 12,
    LatitudeBand.SOUTH_15_30: _DC_SOUTH,
    LatitudeBand.SOUTH_30_90: _DC_SOUTH,
}


def band_for_latitude(latitude: float) -> LatitudeBand:
    """Map a station latitude (degrees, north positive) to its table band."""
    lat = check_range("latitude", latitude, -90.0, 90.0)
    if lat >= 30.0:
        return LatitudeBand.NORTH_30_90
    if lat >= 15.0:
        return LatitudeBand.NORTH_15_30
    if lat > -15.0:
        return LatitudeBand.EQUATORIAL
    if lat > -30.0:
        return LatitudeBand.SOUTH_15_30
    return LatitudeBand.SOUTH_30_90


@dataclasses.dataclass(frozen=True)
class WeatherObservation:
    """One day of noon weather for a station."""

    date: dt.date
    temp_c: float
    rh_pct: float
    wind_kmh: float
    rain_mm: float

    def __post_init__(self):
        if not isinstance(self.date, dt.date):
            raise DomainError(f"date={self.date!r} is not a calendar date")
        check_range("temp_c", self.temp_c, -60.0, 60.0)
        check_range("rh_pct", self.rh_pct, 0.0, 100.0)
        check_range("wind_kmh", self.wind_kmh, 0.0)
        check_range("rain_mm", self.rain_mm, 0.0)

    @property
    def month(self) -> int:
        return self.date.month


@dataclasses.dataclass(frozen=True)
class FwiState:
    """The three moisture codes carried from one day to the next."""

    ffmc: float = DEFAULT_FFMC
    dmc: float = DEFAULT_DMC
    dc: float = DEFAULT_DC

    def __post_init__(self):
        check_range("ffmc", self.ffmc, 0.0, 101.0)
        check_range("dmc", self.dmc, 0.0)
        check_range("dc", self.dc, 0.0)


@dataclasses.dataclass(frozen=True)
class FwiReport:
    """Post-update moisture codes plus the day's behavior indices."""

    state: FwiState
    isi: float
    bui: float
    fwi: float


def update_ffmc(prev_ffmc: float, obs: WeatherObservation) -> float:
    """Fine Fuel Moisture Code for today given yesterday's value.

    Van Wagner & Pickett (1985) eqs. 1-10: rain phase first, then drying
    toward (or wetting from) the equilibrium moisture content.
    """
    prev_ffmc = check_range("ffmc", prev_ffmc, 0.0, 101.0)
    t, rh, wind, rain = obs.temp_c, obs.rh_pct, obs.wind_kmh, obs.rain_mm

    # eq. 1: previous day's fuel moisture content (%)
    mo = 147.2 * (101.0 - prev_ffmc) / (59.5 + prev_ffmc)

    if rain > 0.5:
        rf = rain - 0.5  # eq. 2: effective rainfall after canopy loss
        mr = mo + 42.5 * rf * math.exp(-100.0 / (251.0 - mo)) * (1.0 - math.exp(-6.93 / rf))
        if mo > 150.0:
            mr += 0.0015 * (mo - 150.0) ** 2 * math.sqrt(rf)  # eq. 3b surcharge
        mo = min(mr, 250.0)

    # eq. 4: equilibrium moisture content for drying
    ed = (
        0.942 * rh**0.679
        + 11.0 * math.exp((rh - 100.0) / 10.0)
        + 0.18 * (21.1 - t) * (1.0 - math.exp(-0.115 * rh))
    )

    if mo > ed:
        # eqs. 6a/6b: log drying rate, temperature-adjusted
        ko = 0.424 * (1.0 - (rh / 100.0) ** 1.7) + 0.0694 * math.sqrt(wind) * (
            1.0 - (rh / 100.0) ** 8
        )
        kd = ko * 0.581 * math.exp(0.0365 * t)
        m = ed + (mo - ed) * 10.0**-kd  # eq. 8
    else:
        # eq. 5: equilibrium moisture content for wetting
        ew = (
            0.618 * rh**0.753
            + 10.0 * math.exp((rh - 100.0) / 10.0)
            + 0.18 * (21.1 - t) * (1.0 - math.exp(-0.115 * rh))
        )
        if mo < ew:
            # eqs. 7a/7b: log wetting rate
            kl = 0.424 * (1.0 - ((100.0 - rh) / 100.0) ** 1.7) + 0.0694 * math.sqrt(wind) * (
                1.0 - ((100.0 - rh) / 100.0) ** 8
            )
            kw = kl * 0.581 * math.exp(0.0365 * t)
            m = ew - (ew - mo) * 10.0**-kw  # eq. 9
        else:
            m = mo

    ffmc = 59.5 * (250.0 - m) / (147.2 + m)  # eq. 10
    return min(max(ffmc, 0.0), 101.0)


def update_dmc(
    prev_dmc: float,
    obs: WeatherObservation,
    band: LatitudeBand = LatitudeBand.NORTH_30_90,
) -> float:
    """Duff Moisture Code for today given yesterday's value.

    Rain phase per eqs. 11-15, then the drying increment of eqs. 16-17
    with the monthly effective day length. No drying below -1.1 C.
    """
    prev_dmc = check_range("dmc", prev_dmc, 0.0)
    t, rh, rain = obs.temp_c, obs.rh_pct, obs.rain_mm

    if rain > 1.5:
        rw = 0.92 * rain - 1.27  # eq. 11: effective rainfall
        wmi = 20.0 + 280.0 * math.exp(-0.023 * prev_dmc)  # eq. 12: duff moisture content
        # eq. 13: slope factor by DMC regime
        if prev_dmc <= 33.0:
            b = 100.0 / (0.5 + 0.3 * prev_dmc)
        elif prev_dmc <= 65.0:
            b = 14.0 - 1.3 * math.log(prev_dmc)
        else:
            b = 6.2 * math.log(prev_dmc) - 17.2
        wmr = wmi + 1000.0 * rw / (48.77 + b * rw)  # eq. 14
        pr = max(43.43 * (5.6348 - math.log(wmr - 20.0)), 0.0)  # eq. 15
    else:
        pr = prev_dmc

    if t <= -1.1:
        rk = 0.0
    else:
        day_length = _DMC_DAY_LENGTH[band][obs.month - 1]
        rk = 1.894 * (t + 1.1) * (100.0 - rh) * day_length * 1e-4  # eqs. 16-17

    return max(pr + rk, 0.0)


def update_dc(
    prev_dc: float,
    obs: WeatherObservation,
    band: LatitudeBand = LatitudeBand.NORTH_30_90,
) -> float:
    """Drought Code for today given yesterday's value.

    Rain phase per eqs. 18-21, then the potential evapotranspiration of
    eq. 22 with the monthly day-length factor, clamped at zero so winter
    months never dry the deep layer.
    """
    prev_dc = check_range("dc", prev_dc, 0.0)
    t, rain = obs.temp_c, obs.rain_mm

    factor = _DC_DAY_FACTOR[band][obs.month - 1]
    pe = (0.36 * (max(t, -2.8) + 2.8) + factor) / 2.0  # eq. 22
    pe = max(pe, 0.0)

    if rain > 2.8:
        rw = 0.83 * rain - 1.27  # eq. 18
        smi = 800.0 * math.exp(-prev_dc / 400.0)  # eq. 19
        dr = prev_dc - 400.0 * math.log(1.0 + 3.937 * rw / smi)  # eqs. 20-21
        dc = max(dr, 0.0) + pe
    else:
        dc = prev_dc + pe

    return max(dc, 0.0)


def compute_isi(ffmc: float, wind_kmh: float) -> float:
    """Initial Spread Index from today's FFMC and wind (eqs. 24-26)."""
    ffmc = check_range("ffmc", ffmc, 0.0, 101.0)
    wind = check_range("wind_kmh", wind_kmh, 0.0)

    m = 147.2 * (101.0 - ffmc) / (59.5 + ffmc)
    ff = 91.9 * math.exp(-0.1386 * m) * (1.0 + m**5.31 / 4.93e7)  # eq. 25
    return 0.208 * ff * math.exp(0.05039 * wind)  # eq. 26


def compute_bui(dmc: float, dc: float) -> float:
    """Buildup Index from today's DMC and DC (eq. 27)."""
    dmc = check_range("dmc", dmc, 0.0)
    dc = check_range("dc", dc, 0.0)

    if dmc == 0.0:
        return 0.0
    if dmc <= 0.4 * dc:
        bui = 0.8 * dmc * dc / (dmc + 0.4 * dc)
    else:
        bui = dmc - (1.0 - 0.8 * dc / (dmc + 0.4 * dc)) * (0.92 + (0.0114 * dmc) ** 1.7)
    return max(bui, 0.0)


def compute_fwi(isi: float, bui: float) -> float:
    """Fire Weather Index from ISI and BUI (eqs. 28-30)."""
    isi = check_range("isi", isi, 0.0)
    bui = check_range("bui", bui, 0.0)

    if bui <= 80.0:
        fd = 0.626 * bui**0.809 + 2.0  # eq. 28a: duff moisture function
    else:
        fd = 1000.0 / (25.0 + 108.64 * math.exp(-0.023 * bui))  # eq. 28b
    b = 0.1 * isi * fd  # eq. 29

    if b <= 1.0:
        return b
    return math.exp(2.72 * (0.434 * math.log(b)) ** 0.647)  # eq. 30


def step_day(
    state: FwiState,
    obs: WeatherObservation,
    band: LatitudeBand = LatitudeBand.NORTH_30_90,
) -> FwiReport:
    """Advance one day: update the three codes, then derive ISI/BUI/FWI."""
    ffmc = update_ffmc(state.ffmc, obs)
    dmc = update_dmc(state.dmc, obs, band)
    dc = update_dc(state.dc, obs, band)
    isi = compute_isi(ffmc, obs.wind_kmh)
    bui = compute_bui(dmc, dc)
    fwi = compute_fwi(isi, bui)
    return FwiReport(state=FwiState(ffmc=ffmc, dmc=dmc, dc=dc), isi=isi, bui=bui, fwi=fwi)


def run_series(
    observations: Iterable[WeatherObservation],
    initial: FwiState | None = None,
    band: LatitudeBand = LatitudeBand.NORTH_30_90,
) -> list[FwiReport]:
    """Step a station through consecutive days, threading the moisture codes."""
    state = initial if initial is not None else FwiState()
    reports: list[FwiReport] = []
    for obs in observations:
        report = step_day(state, obs, band)
        reports.append(report)
        state = report.state
    return reports
