"""Independent FWI oracle: literal transcription of Wang, Anderson & Suddaby
(2015), "Updated source code for calculating fire danger indices in the
Canadian Forest Fire Weather Index System" (NOR-X-424), daily equations.

Deliberately kept separate from the package implementation: same published
equation set, but transcribed one-to-one from the reference source with its
variable names and control flow, so the two code paths cross-check each
other. Anchored against the published sample rows of the 1985 FWI program
documentation in the test-suite (see test_fwi.py).
"""

import math

# Effective day lengths (el) for DMC, 46N standard table.
EL = [6.5, 7.5, 9.0, 12.8, 13.9, 13.9, 12.4, 10.9, 9.4, 8.0, 7.0, 6.0]
# Day-length factors (fl) for DC, northern hemisphere.
FL = [-1.6, -1.6, -1.6, 0.9, 3.8, 5.8, 6.4, 5.0, 2.4, 0.4, -1.6, -1.6]


def ffmc_ref(ffmc_yda, temp, rh, ws, prec):
    wmo = 147.2 * (101.0 - ffmc_yda) / (59.5 + ffmc_yda)
    if prec > 0.5:
        ra = prec - 0.5
        if wmo > 150.0:
            wmo = (
                wmo
                + 42.5 * ra * math.exp(-100.0 / (251.0 - wmo)) * (1.0 - math.exp(-6.93 / ra))
                + 0.0015 * (wmo - 150.0) ** 2 * math.sqrt(ra)
            )
        else:
            wmo = wmo + 42.5 * ra * math.exp(-100.0 / (251.0 - wmo)) * (
                1.0 - math.exp(-6.93 / ra)
            )
    if wmo > 250.0:
        wmo = 250.0
    ed = (
        0.942 * rh**0.679
        + 11.0 * math.exp((rh - 100.0) / 10.0)
        + 0.18 * (21.1 - temp) * (1.0 - math.exp(-0.115 * rh))
    )
    ew = (
        0.618 * rh**0.753
        + 10.0 * math.exp((rh - 100.0) / 10.0)
        + 0.18 * (21.1 - temp) * (1.0 - math.exp(-0.115 * rh))
    )
    if wmo < ed and wmo < ew:
        z = 0.424 * (1.0 - ((100.0 - rh) / 100.0) ** 1.7) + 0.0694 * math.sqrt(ws) * (
            1.0 - ((100.0 - rh) / 100.0) ** 8
        )
        x = z * 0.581 * math.exp(0.0365 * temp)
        wm = ew - (ew - wmo) / 10.0**x
    elif wmo > ed:
        z = 0.424 * (1.0 - (rh / 100.0) ** 1.7) + 0.0694 * math.sqrt(ws) * (
            1.0 - (rh / 100.0) ** 8
        )
        x = z * 0.581 * math.exp(0.0365 * temp)
        wm = ed + (wmo - ed) / 10.0**x
    else:
        wm = wmo
    ffmc1 = 59.5 * (250.0 - wm) / (147.2 + wm)
    if ffmc1 > 101.0:
        ffmc1 = 101.0
    if ffmc1 < 0.0:
        ffmc1 = 0.0
    return ffmc1


def dmc_ref(dmc_yda, temp, rh, prec, mon):
    if temp < -1.1:
        rk = 0.0
    else:
        rk = 1.894 * (temp + 1.1) * (100.0 - rh) * EL[mon - 1] * 1e-4
    if prec <= 1.5:
        pr = dmc_yda
    else:
        ra = prec
        rw = 0.92 * ra - 1.27
        wmi = 20.0 + 280.0 / math.exp(0.023 * dmc_yda)
        if dmc_yda <= 33.0:
            b = 100.0 / (0.5 + 0.3 * dmc_yda)
        elif dmc_yda <= 65.0:
            b = 14.0 - 1.3 * math.log(dmc_yda)
        else:
            b = 6.2 * math.log(dmc_yda) - 17.2
        wmr = wmi + 1000.0 * rw / (48.77 + b * rw)
        pr = 43.43 * (5.6348 - math.log(wmr - 20.0))
    if pr < 0.0:
        pr = 0.0
    dmc1 = pr + rk
    if dmc1 < 0.0:
        dmc1 = 0.0
    return dmc1


def dc_ref(dc_yda, temp, prec, mon):
    if temp < -2.8:
        temp = -2.8
    pe = (0.36 * (temp + 2.8) + FL[mon - 1]) / 2.0
    if pe < 0.0:
        pe = 0.0
    if prec <= 2.8:
        dc1 = dc_yda + pe
    else:
        ra = prec
        rw = 0.83 * ra - 1.27
        smi = 800.0 * math.exp(-dc_yda / 400.0)
        dr0 = dc_yda - 400.0 * math.log(1.0 + 3.937 * rw / smi)
        if dr0 < 0.0:
            dr0 = 0.0
        dc1 = dr0 + pe
    if dc1 < 0.0:
        dc1 = 0.0
    return dc1


def isi_ref(ffmc, ws):
    fm = 147.2 * (101.0 - ffmc) / (59.5 + ffmc)
    fw = math.exp(0.05039 * ws)
    ff = 91.9 * math.exp(-0.1386 * fm) * (1.0 + fm**5.31 / 49300000.0)
    return 0.208 * fw * ff


def bui_ref(dmc, dc):
    if dmc == 0.0 and dc == 0.0:
        bui1 = 0.0
    elif dmc <= 0.4 * dc:
        bui1 = 0.8 * dc * dmc / (dmc + 0.4 * dc)
    else:
        bui1 = dmc - (1.0 - 0.8 * dc / (dmc + 0.4 * dc)) * (0.92 + (0.0114 * dmc) ** 1.7)
    if bui1 < 0.0:
        bui1 = 0.0
    return bui1


def fwi_ref(isi, bui):
    if bui > 80.0:
        bb = 0.1 * isi * (1000.0 / (25.0 + 108.64 / math.exp(0.023 * bui)))
    else:
        bb = 0.1 * isi * (0.626 * bui**0.809 + 2.0)
    if bb <= 1.0:
        return bb
    return math.exp(2.72 * (0.434 * math.log(bb)) ** 0.647)


def chain_ref(rows, ffmc0=85.0, dmc0=6.0, dc0=15.0):
    """Run the full system over (month, temp, rh, wind, rain) rows."""
    out = []
    ffmc, dmc, dc = ffmc0, dmc0, dc0
    for mon, temp, rh, ws, prec in rows:
        ffmc = ffmc_ref(ffmc, temp, rh, ws, prec)
        dmc = dmc_ref(dmc, temp, rh, prec, mon)
        dc = dc_ref(dc, temp, prec, mon)
        isi = isi_ref(ffmc, ws)
        bui = bui_ref(dmc, dc)
        fwi = fwi_ref(isi, bui)
        out.append((ffmc, dmc, dc, isi, bui, fwi))
    return out
