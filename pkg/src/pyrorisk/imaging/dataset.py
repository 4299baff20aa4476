"""Labeled image inventory: directory scan, stratified split, batch stream."""

from __future__ import annotations

import csv
import dataclasses
import logging
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from ..errors import DomainError
from .augment import AugmentConfig, augment
from .raster import load_image, to_tensor

logger = logging.getLogger(__name__)

SPLITS = ("train", "test", "val")
DEFAULT_FRACTIONS = (0.70, 0.15, 0.15)
IMAGE_SUFFIXES = {".png"}


@dataclasses.dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: str
    split: str

    def __post_init__(self):
        if self.split not in SPLITS:
            raise DomainError(f"split={self.split!r} not one of {SPLITS}")


@dataclasses.dataclass
class DatasetManifest:
    entries: list[ManifestEntry]

    def __post_init__(self):
        paths = [e.path for e in self.entries]
        if len(set(paths)) != len(paths):
            raise DomainError("manifest paths are not unique")

    def for_split(self, split: str) -> list[ManifestEntry]:
        if split not in SPLITS:
            raise DomainError(f"split={split!r} not one of {SPLITS}")
        return [e for e in self.entries if e.split == split]

    def class_counts(self, split: str | None = None) -> dict[str, int]:
        counts: dict[str, int] = {}
        for e in self.entries:
            if split is None or e.split == split:
                counts[e.label] = counts.get(e.label, 0) + 1
        return counts

    def split_sizes(self) -> dict[str, int]:
        return {s: len(self.for_split(s)) for s in SPLITS}


def scan_class_directories(root: str | Path) -> list[tuple[str, str]]:
    """Read a directory-per-class layout into sorted (path, label) pairs."""
    root = Path(root)
    if not root.is_dir():
        raise DomainError(f"dataset root {root} is not a directory")
    pairs: list[tuple[str, str]] = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for file in sorted(class_dir.iterdir()):
            if file.suffix.lower() in IMAGE_SUFFIXES:
                pairs.append((str(file.relative_to(root)), class_dir.name))
    if not pairs:
        raise DomainError(f"no images found under {root}")
    return pairs


def split_dataset(
    labeled_paths: Sequence[tuple[str, str]],
    fractions: tuple[float, float, float] = DEFAULT_FRACTIONS,
    seed: int = 0,
) -> DatasetManifest:
    """Assign train/test/val with per-class stratification.

    Within each class: seeded shuffle, then contiguous assignment with
    sizes ``floor(n * fraction)`` per split and the remainder going to
    train. Deterministic for a given (input order, seed).
    """
    if not labeled_paths:
        raise DomainError("no entries to split")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise DomainError(f"fractions {fractions} do not sum to 1")
    if any(f < 0 for f in fractions):
        raise DomainError(f"fractions {fractions} must be non-negative")

    by_label: dict[str, list[str]] = {}
    for path, label in labeled_paths:
        by_label.setdefault(label, []).append(path)

    rng = np.random.default_rng(seed)
    entries: list[ManifestEntry] = []
    for label in sorted(by_label):
        paths = by_label[label]
        order = rng.permutation(len(paths))
        n = len(paths)
        # floor of the exact product: the epsilon absorbs binary float
        # error (e.g. 20140 * 0.15 -> 3020.999...) without ever lifting a
        # true non-integer past its floor
        n_train = int(n * fractions[0] + 1e-9)
        n_test = int(n * fractions[1] + 1e-9)
        n_val = int(n * fractions[2] + 1e-9)
        n_train += n - (n_train + n_test + n_val)  # remainder to train
        assignment = ["train"] * n_train + ["test"] * n_test + ["val"] * n_val
        for idx, split in zip(order, assignment):
            entries.append(ManifestEntry(path=paths[idx], label=label, split=split))
    return DatasetManifest(entries=entries)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label", "split"])
        for e in manifest.entries:
            writer.writerow([e.path, e.label, e.split])


def load_manifest(path: str | Path) -> DatasetManifest:
    entries = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            try:
                entries.append(ManifestEntry(row["path"], row["label"], row["split"]))
            except (KeyError, TypeError) as exc:
                raise DomainError(f"bad manifest row {row!r}") from exc
    if not entries:
        raise DomainError(f"manifest {path} is empty")
    return DatasetManifest(entries=entries)


class BatchStream:
    """One-epoch stream of (batch tensor, labels) over a manifest split.

    Every entry appears exactly once per epoch, in a seeded shuffle
    order. Pixels are scaled to [0, 1]; augmentation applies only when a
    config is supplied (convention: train split only). Unreadable files
    raise in strict mode, otherwise they are skipped and recorded in
    ``errors`` as (path, message).
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        split: str,
        root: str | Path = ".",
        batch_size: int = 16,
        augment_cfg: AugmentConfig | None = None,
        seed: int = 0,
        strict: bool = True,
    ):
        self.entries = manifest.for_split(split)
        if not self.entries:
            raise DomainError(f"manifest has no entries for split {split!r}")
        if batch_size < 1:
            raise DomainError(f"batch_size={batch_size} must be >= 1")
        self.root = Path(root)
        self.batch_size = batch_size
        self.augment_cfg = augment_cfg
        self.seed = seed
        self.strict = strict
        self.errors: list[tuple[str, str]] = []

    def __iter__(self) -> Iterator[tuple[np.ndarray, list[str]]]:
        rng = np.random.default_rng(self.seed)
        order = rng.permutation(len(self.entries))
        batch_x: list[np.ndarray] = []
        batch_y: list[str] = []
        for idx in order:
            entry = self.entries[idx]
            try:
                image = load_image(self.root / entry.path)
                if self.augment_cfg is not None:
                    image = augment(image, self.augment_cfg, rng)
                tensor = to_tensor(image)
            except DomainError as exc:
                if self.strict:
                    raise
                self.errors.append((entry.path, str(exc)))
                logger.warning("skipping %s: %s", entry.path, exc)
                continue
            batch_x.append(tensor)
            batch_y.append(entry.label)
            if len(batch_x) == self.batch_size:
                yield np.stack(batch_x), batch_y
                batch_x, batch_y = [], []
        if batch_x:
            yield np.stack(batch_x), batch_y
