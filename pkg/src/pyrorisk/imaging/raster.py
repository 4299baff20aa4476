"""8-bit RGB rasters and the fixed-size tiling used to feed the classifier.

Tiling partitions the source: every pixel belongs to exactly one tile's
valid region, so reassembling the valid regions reproduces the source
losslessly whatever the edge policy pads with.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import DomainError
from ..validation import check_int

EDGE_POLICIES = ("pad-zero", "pad-reflect", "drop-partial")

_DECODABLE_MODES = {"RGB", "L", "LA", "P", "RGBA", "I;16", "1"}


@dataclasses.dataclass(frozen=True)
class GeoAnchor:
    """Corner coordinates of a north-up raster."""

    top_left: tuple[float, float]  # (lat, lon)
    bottom_right: tuple[float, float]


@dataclasses.dataclass
class RasterImage:
    """Row-major (H, W, 3) uint8 pixels with an optional geo anchor."""

    pixels: np.ndarray
    geo: GeoAnchor | None = None

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.dtype != np.uint8:
            raise DomainError(f"pixels must be uint8, got {self.pixels.dtype}")
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise DomainError(f"pixels must be (H, W, 3), got shape {self.pixels.shape}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def load_image(path: str | Path) -> RasterImage:
    """Decode a lossless 8-bit raster; grayscale is promoted to RGB."""
    try:
        with Image.open(path) as img:
            if img.mode not in _DECODABLE_MODES:
                raise DomainError(f"{path}: unsupported image mode {img.mode!r}")
            rgb = img.convert("RGB")
            pixels = np.asarray(rgb, dtype=np.uint8)
    except (OSError, SyntaxError) as exc:
        raise DomainError(f"{path}: cannot decode image: {exc}") from exc
    return RasterImage(pixels=pixels)


def save_image(image: RasterImage, path: str | Path) -> None:
    Image.fromarray(image.pixels, mode="RGB").save(path, format="PNG")


def to_tensor(image: RasterImage) -> np.ndarray:
    """(H, W, 3) float32 scaled to [0, 1], the network input convention."""
    return image.pixels.astype(np.float32) / 255.0


def from_tensor(tensor: np.ndarray) -> RasterImage:
    arr = np.clip(np.asarray(tensor), 0.0, 1.0)
    return RasterImage(pixels=np.round(arr * 255.0).astype(np.uint8))


@dataclasses.dataclass
class Tile:
    row: int
    col: int
    y0: int
    x0: int
    valid_h: int
    valid_w: int
    image: RasterImage


@dataclasses.dataclass
class TileGrid:
    source_height: int
    source_width: int
    tile_size: int
    edge_policy: str
    tiles: list[Tile]

    @property
    def n_rows(self) -> int:
        return -(-self.source_height // self.tile_size)

    @property
    def n_cols(self) -> int:
        return -(-self.source_width // self.tile_size)


def tile_image(image: RasterImage, size: int = 350, edge_policy: str = "pad-zero") -> TileGrid:
    """Cut the raster into a ceil(H/size) x ceil(W/size) grid of tiles.

    Tile origins are multiples of ``size``. Edge tiles keep their valid
    (source-covered) extent and are completed per policy: ``pad-zero``
    fills with black, ``pad-reflect`` mirrors the edge rows/columns, and
    ``drop-partial`` keeps only fully covered tiles.
    """
    size = check_int("size", size, lo=1)
    if edge_policy not in EDGE_POLICIES:
        raise DomainError(f"edge_policy={edge_policy!r} not one of {EDGE_POLICIES}")
    h, w = image.height, image.width
    tiles: list[Tile] = []
    for row in range(-(-h // size)):
        for col in range(-(-w // size)):
            y0, x0 = row * size, col * size
            valid_h = min(size, h - y0)
            valid_w = min(size, w - x0)
            partial = valid_h < size or valid_w < size
            if partial and edge_policy == "drop-partial":
                continue
            region = image.pixels[y0 : y0 + valid_h, x0 : x0 + valid_w]
            if not partial:
                patch = region
            elif edge_policy == "pad-zero":
                patch = np.zeros((size, size, 3), dtype=np.uint8)
                patch[:valid_h, :valid_w] = region
            else:  # pad-reflect: mirror including the edge pixel
                patch = np.pad(
                    region,
                    ((0, size - valid_h), (0, size - valid_w), (0, 0)),
                    mode="symmetric",
                )
            tiles.append(
                Tile(row=row, col=col, y0=y0, x0=x0, valid_h=valid_h, valid_w=valid_w,
                     image=RasterImage(pixels=patch))
            )
    return TileGrid(
        source_height=h, source_width=w, tile_size=size, edge_policy=edge_policy, tiles=tiles
    )


def reassemble(grid: TileGrid) -> RasterImage:
    """Rebuild the source from the tiles' valid regions, bit-exactly."""
    covered = sum(t.valid_h * t.valid_w for t in grid.tiles)
    if covered != grid.source_height * grid.source_width:
        raise DomainError(
            f"tiles cover {covered} pixels of a "
            f"{grid.source_height}x{grid.source_width} source; cannot reassemble"
        )
    out = np.empty((grid.source_height, grid.source_width, 3), dtype=np.uint8)
    for t in grid.tiles:
        out[t.y0 : t.y0 + t.valid_h, t.x0 : t.x0 + t.valid_w] = t.image.pixels[
            : t.valid_h, : t.valid_w
        ]
    return RasterImage(pixels=out)


def tile_filename(stem: str, row: int, col: int) -> str:
    return f"{stem}_r{row}_c{col}.png"
