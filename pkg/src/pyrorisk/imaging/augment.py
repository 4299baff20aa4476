"""Seeded training-time augmentation.

One draw applies, in this order: horizontal flip, rotation, zoom, shift.
Sampling is inverse-mapped affine with nearest-neighbor interpolation by
default (which keeps quarter-turn rotations exact permutations) and
zero fill outside the source, matching the padding convention of the
convolution stack. Output dimensions always equal input dimensions.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from ..errors import DomainError
from ..validation import check_range
from .raster import RasterImage

INTERPOLATIONS = ("nearest", "bilinear")


@dataclasses.dataclass(frozen=True)
class AugmentConfig:
    """Draw ranges; all-zero ranges make `augment` the identity."""

    rotation_deg: float = 0.0
    width_shift: float = 0.0
    height_shift: float = 0.0
    zoom: float = 0.0
    horizontal_flip: bool = False
    interpolation: str = "nearest"
    seed: int = 0

    def __post_init__(self):
        check_range("rotation_deg", self.rotation_deg, 0.0, 360.0)
        check_range("width_shift", self.width_shift, 0.0, 1.0 - 1e-12)
        check_range("height_shift", self.height_shift, 0.0, 1.0 - 1e-12)
        check_range("zoom", self.zoom, 0.0, 1.0 - 1e-12)
        if self.interpolation not in INTERPOLATIONS:
            raise DomainError(f"interpolation={self.interpolation!r} not in {INTERPOLATIONS}")

    @property
    def is_identity(self) -> bool:
        return (
            self.rotation_deg == 0.0
            and self.width_shift == 0.0
            and self.height_shift == 0.0
            and self.zoom == 0.0
            and not self.horizontal_flip
        )


def hflip(image: RasterImage) -> RasterImage:
    """Mirror left-right; an involution."""
    return RasterImage(pixels=image.pixels[:, ::-1].copy(), geo=image.geo)


def _sample(pixels: np.ndarray, src_r: np.ndarray, src_c: np.ndarray, interpolation: str):
    h, w = pixels.shape[:2]
    out = np.zeros(src_r.shape + (3,), dtype=np.uint8)
    if interpolation == "nearest":
        rr = np.floor(src_r + 0.5).astype(np.int64)
        cc = np.floor(src_c + 0.5).astype(np.int64)
        inside = (rr >= 0) & (rr < h) & (cc >= 0) & (cc < w)
        out[inside] = pixels[rr[inside], cc[inside]]
        return out
    # bilinear on a zero background
    r0 = np.floor(src_r).astype(np.int64)
    c0 = np.floor(src_c).astype(np.int64)
    fr = (src_r - r0)[..., None]
    fc = (src_c - c0)[..., None]
    acc = np.zeros(src_r.shape + (3,), dtype=np.float64)
    for dr, dc, weight in (
        (0, 0, (1 - fr) * (1 - fc)),
        (0, 1, (1 - fr) * fc),
        (1, 0, fr * (1 - fc)),
        (1, 1, fr * fc),
    ):
        rr, cc = r0 + dr, c0 + dc
        inside = (rr >= 0) & (rr < h) & (cc >= 0) & (cc < w)
        contrib = np.zeros_like(acc)
        contrib[inside] = pixels[rr[inside], cc[inside]]
        acc += weight * contrib
    np.round(acc, out=acc)
    return np.clip(acc, 0, 255).astype(np.uint8)


def _transform(
    image: RasterImage,
    angle_deg: float = 0.0,
    scale: float = 1.0,
    shift_rows: float = 0.0,
    shift_cols: float = 0.0,
    flip: bool = False,
    interpolation: str = "nearest",
) -> RasterImage:
    """Apply flip -> rotate -> zoom -> shift via one inverse-mapped affine."""
    pixels = image.pixels[:, ::-1] if flip else image.pixels
    h, w = pixels.shape[:2]
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0

    rows, cols = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    # undo shift, then zoom, then rotation, all about the image center
    r = (rows - shift_rows - cy) / scale
    c = (cols - shift_cols - cx) / scale
    theta = math.radians(angle_deg)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    src_r = cy + cos_t * r + sin_t * c
    src_c = cx - sin_t * r + cos_t * c
    return RasterImage(pixels=_sample(pixels, src_r, src_c, interpolation), geo=image.geo)


def rotate(image: RasterImage, degrees: float, interpolation: str = "nearest") -> RasterImage:
    """Rotate about the image center, dimensions preserved."""
    return _transform(image, angle_deg=degrees, interpolation=interpolation)


def zoom(image: RasterImage, scale: float, interpolation: str = "nearest") -> RasterImage:
    """Scale about the image center; factor 1 is the identity."""
    if scale <= 0:
        raise DomainError(f"scale={scale} must be positive")
    return _transform(image, scale=scale, interpolation=interpolation)


def shift(image: RasterImage, rows: float, cols: float, interpolation: str = "nearest") -> RasterImage:
    """Translate by (rows, cols) pixels, zero-filling uncovered margins."""
    return _transform(image, shift_rows=rows, shift_cols=cols, interpolation=interpolation)


def augment(image: RasterImage, cfg: AugmentConfig, rng: np.random.Generator) -> RasterImage:
    """One seeded draw of the configured transform composition."""
    if cfg.is_identity:
        return RasterImage(pixels=image.pixels.copy(), geo=image.geo)
    flip = bool(cfg.horizontal_flip and rng.random() < 0.5)
    angle = float(rng.uniform(-cfg.rotation_deg, cfg.rotation_deg)) if cfg.rotation_deg else 0.0
    scale = float(rng.uniform(1.0 - cfg.zoom, 1.0 + cfg.zoom)) if cfg.zoom else 1.0
    dy = float(rng.uniform(-cfg.height_shift, cfg.height_shift) * image.height) if cfg.height_shift else 0.0
    dx = float(rng.uniform(-cfg.width_shift, cfg.width_shift) * image.width) if cfg.width_shift else 0.0
    return _transform(
        image,
        angle_deg=angle,
        scale=scale,
        shift_rows=dy,
        shift_cols=dx,
        flip=flip,
        interpolation=cfg.interpolation,
    )
