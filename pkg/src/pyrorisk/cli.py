"""Command-line pipeline.

Subcommands: ``fwi``, ``eval-reg``, ``tile``, ``infer``, ``assess``,
``split``, ``augment``, ``render``, ``verify-fixtures``.

Every command is deterministic given its flags, seeds and fixtures.
Configuration precedence is flags > ``PYRORISK_CONFIG`` (a JSON file of
defaults) > built-in defaults, and commands that produce an output
directory echo the effective configuration there as
``effective_config.json``.

Exit codes: 0 success, 2 usage (bad flags, missing input files), 3 data
errors (malformed files, domain violations), 4 weather-provider errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import datetime as dt
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import fusion, fwi, weather
from .errors import DomainError, ProviderError, PyroriskError
from .imaging import (
    AugmentConfig,
    augment,
    load_image,
    save_image,
    scan_class_directories,
    save_manifest,
    split_dataset,
    tile_filename,
    tile_image,
    to_tensor,
)
from .nn import load_network_file, load_tensor
from .regress import correlation_matrix, load_joined_csv, run_experiment, train_test_split

CONFIG_ENV = "PYRORISK_CONFIG"
TOKEN_ENV = "PYRORISK_WEATHER_TOKEN"

# danger-level overlay ramp, class 0 (green) to class 5 (dark red)
PALETTE = ("#1a9850", "#a6d96a", "#ffffbf", "#fdae61", "#d7191c", "#7f0000")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_PROVIDER = 4


class UsageError(PyroriskError):
    exit_code = EXIT_USAGE


def _load_config_file() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"{CONFIG_ENV} points to missing file {path}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"config file {path} is not valid JSON: {exc}") from exc


def _effective(args: argparse.Namespace, key: str, default):
    """flags > config file > default; flag values of None mean 'not given'."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    config = _load_config_file()
    if key in config:
        return config[key]
    return default


def _require_file(path: str | Path, what: str) -> Path:
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"{what} {path} does not exist")
    return path


def _echo_config(out_dir: Path, command: str, effective: dict) -> None:
    payload = {"command": command, **effective}
    (out_dir / "effective_config.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )


def _parse_thresholds(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad thresholds {text!r}: {exc}") from exc
    return values


def _parse_date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError as exc:
        raise UsageError(f"bad date {text!r} (expected YYYY-MM-DD)") from exc


def _band(args: argparse.Namespace, lat: float | None) -> fwi.LatitudeBand:
    name = getattr(args, "band", None)
    if name:
        try:
            return fwi.LatitudeBand(name)
        except ValueError:
            raise UsageError(
                f"bad band {name!r}; choose from "
                f"{[b.value for b in fwi.LatitudeBand]}"
            ) from None
    if lat is not None:
        return fwi.band_for_latitude(lat)
    return fwi.LatitudeBand.NORTH_30_90


def _initial_state(args: argparse.Namespace) -> fwi.FwiState:
    return fwi.FwiState(
        ffmc=_effective(args, "ffmc0", fwi.DEFAULT_FFMC),
        dmc=_effective(args, "dmc0", fwi.DEFAULT_DMC),
        dc=_effective(args, "dc0", fwi.DEFAULT_DC),
    )


def _resolve_weather(args: argparse.Namespace) -> tuple[list[fwi.WeatherObservation], float | None]:
    """Either a weather CSV or a provider query; returns (observations, lat)."""
    if getattr(args, "weather_csv", None):
        observations, lat, _ = weather.read_weather_csv(
            _require_file(args.weather_csv, "weather CSV")
        )
        return observations, lat

    provider_kind = getattr(args, "provider", None)
    if not provider_kind:
        raise UsageError("give either --weather-csv or --provider with --lat/--lon/--from/--to")
    for flag in ("lat", "lon", "from_date", "to_date"):
        if getattr(args, flag, None) is None:
            raise UsageError(f"provider mode requires --lat/--lon/--from/--to (missing {flag})")
    if provider_kind == "fixture":
        fixture_dir = getattr(args, "fixture_dir", None)
        if not fixture_dir:
            raise UsageError("--provider fixture requires --fixture-dir")
        provider = weather.FixtureWeatherProvider(fixture_dir)
    elif provider_kind == "http":
        template = getattr(args, "url_template", None)
        if not template:
            raise UsageError("--provider http requires --url-template")
        provider = weather.HttpWeatherProvider(
            template,
            token=os.environ.get(TOKEN_ENV, ""),
            record_dir=getattr(args, "record_dir", None),
        )
    else:
        raise UsageError(f"unknown provider {provider_kind!r} (fixture or http)")

    series = weather.fetch_weather(
        provider, args.lat, args.lon, _parse_date(args.from_date), _parse_date(args.to_date)
    )
    for gap in series.gaps:
        print(f"gap: no observation for {gap.isoformat()}", file=sys.stderr)
    if not series.observations:
        raise DomainError("provider returned no observations in range")
    return series.observations, args.lat


def _hex_to_rgb(value: str) -> tuple[int, int, int]:
    value = value.lstrip("#")
    return tuple(int(value[i : i + 2], 16) for i in (0, 2, 4))


# ---------------------------------------------------------------- commands


def cmd_fwi(args: argparse.Namespace) -> int:
    observations, lat = _resolve_weather(args)
    reports = fwi.run_series(observations, initial=_initial_state(args), band=_band(args, lat))
    weather.write_report_csv(args.out, observations, reports)
    print(f"wrote {len(reports)} daily reports to {args.out}")
    return EXIT_OK


def cmd_eval_reg(args: argparse.Namespace) -> int:
    data = load_joined_csv(
        _require_file(args.weather_csv, "weather CSV"),
        _require_file(args.fwi_csv, "FWI report CSV"),
    )
    seed = _effective(args, "seed", 0)
    test_fraction = _effective(args, "test_fraction", 0.2)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    train, test = train_test_split(data, test_fraction, seed=seed)
    table = run_experiment(
        train,
        test,
        kinds=("rf", "knn"),
        hyper={
            "rf": {"n_trees": _effective(args, "rf_trees", 100), "seed": seed},
            "knn": {"n_neighbors": _effective(args, "knn_k", 5)},
        },
    )
    table.write_csv(out_dir / "mae_table.csv")
    correlation_matrix(data).write_csv(out_dir / "correlation_matrix.csv")
    _echo_config(
        out_dir,
        "eval-reg",
        {
            "seed": seed,
            "test_fraction": test_fraction,
            "rf_trees": _effective(args, "rf_trees", 100),
            "knn_k": _effective(args, "knn_k", 5),
        },
    )
    for kind in table.regressors:
        row = ", ".join(f"{t}={table.get(kind, t):.3f}" for t in table.targets)
        print(f"{kind}: {row}")
    return EXIT_OK


def cmd_tile(args: argparse.Namespace) -> int:
    image = load_image(_require_file(args.image, "image"))
    size = _effective(args, "tile_size", 350)
    policy = _effective(args, "edge_policy", "pad-zero")
    grid = tile_image(image, size=size, edge_policy=policy)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.image).stem
    for tile in grid.tiles:
        save_image(tile.image, out_dir / tile_filename(stem, tile.row, tile.col))
    _echo_config(out_dir, "tile", {"tile_size": size, "edge_policy": policy, "source": stem})
    print(f"wrote {len(grid.tiles)} tiles ({grid.n_rows}x{grid.n_cols}) to {out_dir}")
    return EXIT_OK


def cmd_infer(args: argparse.Namespace) -> int:
    net = load_network_file(_require_file(args.weights, "weights file"))
    if bool(args.image) == bool(args.tensor):
        raise UsageError("give exactly one of --image or --tensor")
    if args.image:
        tensor = to_tensor(load_image(_require_file(args.image, "image")))
    else:
        tensor = load_tensor(_require_file(args.tensor, "tensor file"))
    scores = net.forward(tensor)
    payload = {
        "labels": list(scores.labels),
        "probabilities": [float(p) for p in scores.probabilities],
        "top": scores.top(),
    }
    if fusion.BURN_LABEL in scores.labels:
        payload["p_burn"] = scores.score(fusion.BURN_LABEL)
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_split(args: argparse.Namespace) -> int:
    root = Path(args.dataset_root)
    if not root.is_dir():
        raise UsageError(f"dataset root {root} does not exist")
    fractions = tuple(float(v) for v in _effective(args, "fractions", "0.70,0.15,0.15").split(","))
    if len(fractions) != 3:
        raise UsageError(f"--fractions needs three values, got {fractions}")
    seed = _effective(args, "seed", 0)
    manifest = split_dataset(scan_class_directories(root), fractions, seed=seed)
    save_manifest(manifest, args.out)
    sizes = manifest.split_sizes()
    print(
        f"split {len(manifest.entries)} entries -> "
        f"train={sizes['train']} test={sizes['test']} val={sizes['val']} (seed={seed})"
    )
    return EXIT_OK


def cmd_augment(args: argparse.Namespace) -> int:
    image = load_image(_require_file(args.image, "image"))
    seed = _effective(args, "seed", 0)
    cfg = AugmentConfig(
        rotation_deg=_effective(args, "rotation", 0.0),
        width_shift=_effective(args, "width_shift", 0.0),
        height_shift=_effective(args, "height_shift", 0.0),
        zoom=_effective(args, "zoom", 0.0),
        horizontal_flip=bool(args.hflip),
        seed=seed,
    )
    out = augment(image, cfg, np.random.default_rng(seed))
    save_image(out, args.out)
    print(f"wrote augmented image to {args.out}")
    return EXIT_OK


def _read_danger_csv(path: Path) -> list[tuple[int, int, int]]:
    import csv as _csv

    rows = []
    with open(path, newline="") as fh:
        reader = _csv.DictReader(fh)
        needed = {"row", "col", "level"}
        if not needed <= set(reader.fieldnames or ()):
            raise DomainError(f"danger CSV missing columns {sorted(needed)}")
        for record in reader:
            rows.append((int(record["row"]), int(record["col"]), int(record["level"])))
    if not rows:
        raise DomainError(f"danger CSV {path} has no rows")
    return rows


def _render_overlay(rows: list[tuple[int, int, int]], cell: int) -> np.ndarray:
    n_rows = 1 + max(r for r, _, _ in rows)
    n_cols = 1 + max(c for _, c, _ in rows)
    canvas = np.zeros((n_rows * cell, n_cols * cell, 3), dtype=np.uint8)
    for r, c, level in rows:
        if not 0 <= level <= 5:
            raise DomainError(f"level {level} at ({r},{c}) outside 0-5")
        canvas[r * cell : (r + 1) * cell, c * cell : (c + 1) * cell] = _hex_to_rgb(
            PALETTE[level]
        )
    return canvas


def cmd_render(args: argparse.Namespace) -> int:
    rows = _read_danger_csv(_require_file(args.danger_csv, "danger map CSV"))
    cell = _effective(args, "cell_size", 32)
    from .imaging import RasterImage

    save_image(RasterImage(pixels=_render_overlay(rows, cell)), args.out)
    print(f"rendered {len(rows)} cells to {args.out}")
    return EXIT_OK


def cmd_assess(args: argparse.Namespace) -> int:
    weights_path = _require_file(args.weights, "weights file")
    image_path = _require_file(args.image, "scene image")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    # weather -> daily chain -> the assessment day's report (the last day)
    observations, lat = _resolve_weather(args)
    band = _band(args, lat)
    reports = fwi.run_series(observations, initial=_initial_state(args), band=band)
    weather.write_report_csv(out_dir / "fwi_report.csv", observations, reports)
    final = reports[-1]

    tile_size = _effective(args, "tile_size", 350)
    policy = _effective(args, "edge_policy", "pad-zero")
    net = load_network_file(weights_path, input_shape=(tile_size, tile_size, 3))

    grid = tile_image(load_image(image_path), size=tile_size, edge_policy=policy)
    workers = _effective(args, "workers", 1)

    def score_tile(tile):
        scores = net.forward(to_tensor(tile.image))
        return tile.row, tile.col, fusion.p_burn_from_scores(scores)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            tile_scores = list(pool.map(score_tile, grid.tiles))
    else:
        tile_scores = [score_tile(t) for t in grid.tiles]

    cfg = fusion.FusionConfig(
        thresholds=tuple(_effective(args, "thresholds", fusion.DEFAULT_THRESHOLDS)),
        gamma=_effective(args, "gamma", 1.0),
        floor=_effective(args, "tau", 0.0),
    )
    danger_map = fusion.assess_grid(
        tile_scores, final.fwi, cfg, n_rows=grid.n_rows, n_cols=grid.n_cols
    )

    import csv as _csv

    with open(out_dir / "danger_map.csv", "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["row", "col", "base_level", "p_burn", "level"])
        writer.writerows(danger_map.csv_rows())

    if args.render:
        rows = [(d.row, d.col, d.level) for d in danger_map.levels]
        from .imaging import RasterImage

        save_image(
            RasterImage(pixels=_render_overlay(rows, _effective(args, "cell_size", 32))),
            out_dir / "overlay.png",
        )

    _echo_config(
        out_dir,
        "assess",
        {
            "weights": str(weights_path),
            "image": str(image_path),
            "tile_size": tile_size,
            "edge_policy": policy,
            "thresholds": list(cfg.thresholds),
            "gamma": cfg.gamma,
            "tau": cfg.floor,
            "seed": _effective(args, "seed", 0),
            "band": band.value,
            "workers": workers,
        },
    )
    histogram = danger_map.histogram()
    print(f"fwi={final.fwi:.1f} base_level={danger_map.base_level}")
    print("levels: " + " ".join(f"{k}:{v}" for k, v in sorted(histogram.items())))
    print(f"wrote {out_dir / 'danger_map.csv'}")
    return EXIT_OK


def cmd_verify_fixtures(args: argparse.Namespace) -> int:
    from .nn import read_manifest

    manifest = read_manifest(_require_file(args.manifest, "fixture manifest"))
    net = load_network_file(manifest["weights"])
    tolerance = float(manifest["tolerance"])
    worst = 0.0
    for pair in manifest["fixtures"]:
        x = load_tensor(pair["input"])
        want = load_tensor(pair["output"])
        got = np.asarray(net.forward(x).probabilities, dtype=np.float32)
        deviation = float(np.abs(got - want).max())
        worst = max(worst, deviation)
        print(f"{Path(pair['input']).name}: max_abs_dev={deviation:.3e}")
    print(f"overall max_abs_dev={worst:.3e} tolerance={tolerance:.1e}")
    if worst >= tolerance:
        print("FIXTURE PARITY FAILED", file=sys.stderr)
        return 1
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_weather_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weather-csv", help="daily weather CSV (date,lat,lon,temp_c,rh_pct,wind_kmh,rain_mm)")
    p.add_argument("--provider", choices=("fixture", "http"), help="weather provider mode")
    p.add_argument("--fixture-dir", help="directory of recorded payloads (fixture provider)")
    p.add_argument("--url-template", help="payload URL template (http provider)")
    p.add_argument("--record-dir", help="record fetched payloads here for replay")
    p.add_argument("--lat", type=float)
    p.add_argument("--lon", type=float)
    p.add_argument("--from", dest="from_date", help="range start, YYYY-MM-DD")
    p.add_argument("--to", dest="to_date", help="range end, YYYY-MM-DD")
    p.add_argument("--band", help="latitude band for the seasonal tables (default: from --lat)")
    p.add_argument("--ffmc0", type=float, help="startup FFMC (default 85)")
    p.add_argument("--dmc0", type=float, help="startup DMC (default 6)")
    p.add_argument("--dc0", type=float, help="startup DC (default 15)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyrorisk",
        description="Wildfire danger assessment: daily FWI indices fused with "
        "CNN burn scores over tiled imagery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fwi", help="compute the daily FWI chain from weather")
    _add_weather_flags(p)
    p.add_argument("--out", required=True, help="report CSV path")
    p.set_defaults(func=cmd_fwi)

    p = sub.add_parser("eval-reg", help="fit RF/KNN per index and report MAE")
    p.add_argument("--weather-csv", required=True)
    p.add_argument("--fwi-csv", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--test-fraction", type=float, dest="test_fraction")
    p.add_argument("--rf-trees", type=int, dest="rf_trees")
    p.add_argument("--knn-k", type=int, dest="knn_k")
    p.set_defaults(func=cmd_eval_reg)

    p = sub.add_parser("tile", help="cut an image into fixed-size tiles")
    p.add_argument("--image", required=True)
    p.add_argument("--tile-size", type=int, dest="tile_size")
    p.add_argument("--edge-policy", dest="edge_policy", choices=("pad-zero", "pad-reflect", "drop-partial"))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("infer", help="run the classifier on one image or tensor")
    p.add_argument("--weights", required=True)
    p.add_argument("--image")
    p.add_argument("--tensor", help="raw tensor fixture file (CNNT)")
    p.add_argument("--out", help="write the score JSON here instead of stdout")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("assess", help="weather + weights + scene image -> danger map")
    p.add_argument("--weights", required=True)
    p.add_argument("--image", required=True)
    _add_weather_flags(p)
    p.add_argument("--tile-size", type=int, dest="tile_size")
    p.add_argument("--edge-policy", dest="edge_policy", choices=("pad-zero", "pad-reflect", "drop-partial"))
    p.add_argument("--gamma", type=float)
    p.add_argument("--tau", type=float, help="burn-probability floor")
    p.add_argument("--thresholds", type=_parse_thresholds, help="five ascending FWI cut points")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--render", action="store_true", help="also write overlay.png")
    p.add_argument("--cell-size", type=int, dest="cell_size")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("split", help="build a stratified train/test/val manifest")
    p.add_argument("--dataset-root", required=True, dest="dataset_root")
    p.add_argument("--fractions", help="three comma-separated fractions (default 0.70,0.15,0.15)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="manifest CSV path")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("augment", help="apply one seeded augmentation draw")
    p.add_argument("--image", required=True)
    p.add_argument("--rotation", type=float)
    p.add_argument("--width-shift", type=float, dest="width_shift")
    p.add_argument("--height-shift", type=float, dest="height_shift")
    p.add_argument("--zoom", type=float)
    p.add_argument("--hflip", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("render", help="render a danger map CSV as a colored overlay")
    p.add_argument("--danger-csv", required=True, dest="danger_csv")
    p.add_argument("--cell-size", type=int, dest="cell_size")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify-fixtures", help="check engine parity against golden fixtures")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_verify_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProviderError as exc:
        print(f"error[provider]: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PyroriskError as exc:
        code = getattr(exc, "code", type(exc).__name__)
        print(f"error[{code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
