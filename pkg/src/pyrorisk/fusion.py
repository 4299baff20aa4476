"""Danger-level fusion: FWI base class attenuated by observed burn evidence.

The FWI value maps to a base danger class 0-5 through ascending cut
points (defaults follow the European fire-danger breakpoints). The
classifier's burn probability then attenuates the class: a tile that
already burned cannot also be at high danger, so

    level = round(base * (1 - p_burn) ** gamma)        for p_burn >= floor

with half-away-from-zero rounding. ``p_burn = 0`` leaves the base class
untouched and ``p_burn = 1`` collapses to 0 regardless of gamma. The
discrete severity variant replaces the probability with ``severity / 5``.
All functions are pure; per-tile fusion parallelizes trivially.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

from .errors import DomainError
from .nn.network import ClassScores
from .validation import check_int, check_range

__all__ = [
    "DEFAULT_THRESHOLDS",
    "BURN_LABEL",
    "FusionConfig",
    "DangerLevel",
    "DangerMap",
    "round_half_away",
    "fwi_to_danger",
    "fuse_binary",
    "fuse_severity",
    "p_burn_from_scores",
    "assess_grid",
]

# EFFIS-style FWI breakpoints: very low / low / moderate / high / very
# high / extreme
DEFAULT_THRESHOLDS = (5.2, 11.2, 21.3, 38.0, 50.0)

BURN_LABEL = "wildfire"

MAX_LEVEL = 5


@dataclasses.dataclass(frozen=True)
class FusionConfig:
    """Cut points and attenuation shape.

    ``thresholds`` are right-closed: an FWI exactly at a cut point takes
    the higher class. ``floor`` is the burn probability below which no
    attenuation applies.
    """

    thresholds: tuple[float, float, float, float, float] = DEFAULT_THRESHOLDS
    gamma: float = 1.0
    floor: float = 0.0

    def __post_init__(self):
        if len(self.thresholds) != MAX_LEVEL:
            raise DomainError(f"need {MAX_LEVEL} thresholds, got {len(self.thresholds)}")
        for a, b in zip(self.thresholds, self.thresholds[1:]):
            if not a < b:
                raise DomainError(f"thresholds {self.thresholds} not strictly ascending")
        if self.thresholds[0] < 0:
            raise DomainError("thresholds must be non-negative")
        check_range("gamma", self.gamma, 1e-9)
        check_range("floor", self.floor, 0.0, 1.0)


@dataclasses.dataclass(frozen=True)
class DangerLevel:
    """Fused danger class with its provenance."""

    level: int
    base_level: int
    p_burn: float
    severity: int | None = None
    row: int | None = None
    col: int | None = None

    def __post_init__(self):
        check_int("base_level", self.base_level, 0, MAX_LEVEL)
        check_int("level", self.level, 0, self.base_level)


def round_half_away(x: float) -> int:
    """Round with .5 going away from zero (not banker's rounding)."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def fwi_to_danger(fwi: float, cfg: FusionConfig = FusionConfig()) -> int:
    """Map an FWI value to the base class 0-5 (monotone step function)."""
    fwi = check_range("fwi", fwi, 0.0)
    level = 0
    for cut in cfg.thresholds:
        if fwi >= cut:
            level += 1
    return level


def fuse_binary(base: int, p_burn: float, cfg: FusionConfig = FusionConfig()) -> DangerLevel:
    """Attenuate a base class by the classifier's burn probability."""
    base = check_int("base", base, 0, MAX_LEVEL)
    p_burn = check_range("p_burn", p_burn, 0.0, 1.0)
    if p_burn >= cfg.floor:
        level = round_half_away(base * (1.0 - p_burn) ** cfg.gamma)
    else:
        level = base
    return DangerLevel(level=min(level, base), base_level=base, p_burn=p_burn)


def fuse_severity(base: int, severity: int, cfg: FusionConfig = FusionConfig()) -> DangerLevel:
    """Attenuate a base class by a 0-5 burn-damage severity grade."""
    base = check_int("base", base, 0, MAX_LEVEL)
    severity = check_int("severity", severity, 0, MAX_LEVEL)
    level = round_half_away(base * (MAX_LEVEL - severity) / MAX_LEVEL)
    return DangerLevel(
        level=min(level, base),
        base_level=base,
        p_burn=severity / MAX_LEVEL,
        severity=severity,
    )


def p_burn_from_scores(scores: ClassScores, burn_label: str = BURN_LABEL) -> float:
    """Burn probability = the score of the burn class."""
    if burn_label not in scores.labels:
        raise DomainError(f"scores carry no {burn_label!r} class: {scores.labels}")
    return scores.score(burn_label)


@dataclasses.dataclass
class DangerMap:
    """Per-tile fused levels over a tiling grid, ordered by (row, col)."""

    n_rows: int
    n_cols: int
    base_level: int
    levels: list[DangerLevel]

    def histogram(self) -> dict[int, int]:
        counts = {level: 0 for level in range(MAX_LEVEL + 1)}
        for d in self.levels:
            counts[d.level] += 1
        return counts

    def csv_rows(self) -> list[tuple]:
        return [
            (d.row, d.col, d.base_level, f"{d.p_burn:.6f}", d.level) for d in self.levels
        ]


def assess_grid(
    tile_scores: Sequence[tuple[int, int, ClassScores | float]],
    fwi_value: float,
    cfg: FusionConfig = FusionConfig(),
    n_rows: int | None = None,
    n_cols: int | None = None,
    burn_label: str = BURN_LABEL,
) -> DangerMap:
    """Fuse one scene: a burn score per tile against the day's FWI.

    ``tile_scores`` holds (row, col, scores) with scores either a
    ClassScores or a bare burn probability. The map is emitted in
    (row, col) order regardless of input order.
    """
    if not tile_scores:
        raise DomainError("no tile scores to assess")
    rows = 1 + max(r for r, _, _ in tile_scores)
    cols = 1 + max(c for _, c, _ in tile_scores)
    n_rows = n_rows if n_rows is not None else rows
    n_cols = n_cols if n_cols is not None else cols
    if len(tile_scores) != n_rows * n_cols:
        raise DomainError(
            f"{len(tile_scores)} tile scores for a {n_rows}x{n_cols} grid"
        )
    seen = {(r, c) for r, c, _ in tile_scores}
    if len(seen) != len(tile_scores):
        raise DomainError("duplicate (row, col) in tile scores")

    base = fwi_to_danger(fwi_value, cfg)
    levels = []
    for row, col, scores in sorted(tile_scores, key=lambda t: (t[0], t[1])):
        p = scores if isinstance(scores, float) else p_burn_from_scores(scores, burn_label)
        fused = fuse_binary(base, p, cfg)
        levels.append(
            DangerLevel(
                level=fused.level, base_level=base, p_burn=p, row=row, col=col
            )
        )
    return DangerMap(n_rows=n_rows, n_cols=n_cols, base_level=base, levels=levels)
