"""Raster handling: tiling, augmentation, dataset manifests, batch streams."""

from .augment import AugmentConfig, augment, hflip, rotate, shift, zoom
from .dataset import (
    SPLITS,
    BatchStream,
    DatasetManifest,
    ManifestEntry,
    load_manifest,
    save_manifest,
    scan_class_directories,
    split_dataset,
)
from .raster import (
    RasterImage,
    Tile,
    TileGrid,
    from_tensor,
    load_image,
    reassemble,
    save_image,
    tile_filename,
    tile_image,
    to_tensor,
)

__all__ = [
    "RasterImage",
    "Tile",
    "TileGrid",
    "tile_image",
    "reassemble",
    "tile_filename",
    "load_image",
    "save_image",
    "to_tensor",
    "from_tensor",
    "AugmentConfig",
    "augment",
    "hflip",
    "rotate",
    "zoom",
    "shift",
    "SPLITS",
    "ManifestEntry",
    "DatasetManifest",
    "scan_class_directories",
    "split_dataset",
    "save_manifest",
    "load_manifest",
    "BatchStream",
]
