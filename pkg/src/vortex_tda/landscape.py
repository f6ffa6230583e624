"""Persistence landscapes, norms, and feature counts."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .persistence import PersistenceDiagram

DEFAULT_K_MAX = 5
DEFAULT_GRID_SIZE = 512
GRID_MARGIN = 1.05


@dataclass(frozen=True)
class Landscape:
    """``levels[k, i]`` is the (k+1)-th landscape function at ``nodes[i]``."""

    levels: np.ndarray
    grid: tuple[float, float, int]

    @property
    def nodes(self) -> np.ndarray:
        lo, hi, size = self.grid
        return np.linspace(lo, hi, size)

    @property
    def k_max(self) -> int:
        return self.levels.shape[0]

    def to_csv(self) -> str:
        header = "t," + ",".join(f"lambda_{k + 1}" for k in range(self.k_max))
        lines = [header]
        for t, col in zip(self.nodes, self.levels.T):
            lines.append(",".join(repr(float(x)) for x in (t, *col)))
        return "\n".join(lines) + "\n"


def default_grid(d: PersistenceDiagram, size: int = DEFAULT_GRID_SIZE) -> tuple[float, float, int]:
    """``[0, 1.05 * max death]``, or ``[0, 1]`` when there is nothing to cover."""
    deaths = [p.death for p in d.pairs if math.isfinite(p.death)]
    top = max(deaths, default=0.0)
    return (0.0, GRID_MARGIN * top if top > 0 else 1.0, size)


def _check_finite(d: PersistenceDiagram) -> None:
    if any(not math.isfinite(p.death) for p in d.pairs):
        raise DataError("landscapes need finite pairs; drop essential classes first")


def build_landscape(d: PersistenceDiagram, k_max: int = DEFAULT_K_MAX,
                    grid: tuple[float, float, int] | None = None) -> Landscape:
    _check_finite(d)
    if k_max < 1:
        raise ConfigError("k_max must be at least 1")
    if grid is None:
        grid = default_grid(d)
    lo, hi, size = float(grid[0]), float(grid[1]), int(grid[2])
    if size < 2 or not lo < hi:
        raise ConfigError(f"invalid grid {grid!r}")
    t = np.linspace(lo, hi, size)
    levels = np.zeros((k_max, size))
    if len(d):
        b = d.births[:, None]
        e = d.deaths[:, None]
        tents = np.maximum(0.0, np.minimum(t - b, e - t))
        tents = -np.sort(-tents, axis=0)
        k = min(k_max, len(tents))
        levels[:k] = tents[:k]
    return Landscape(levels, (lo, hi, size))


def landscape_norm(L: Landscape, p: float = 2.0) -> float:
    """L^p norm summed over levels, trapezoid rule on the landscape grid."""
    if not p >= 1:
        raise ConfigError(f"landscape norm needs p >= 1, got {p}")
    if math.isinf(p):
        return float(L.levels.max(initial=0.0))
    integrals = np.trapezoid(L.levels ** p, L.nodes, axis=1)
    return float(integrals.sum() ** (1.0 / p))


def total_persistence(d: PersistenceDiagram, p: float = 1.0) -> float:
    _check_finite(d)
    if not len(d):
        return 0.0
    lifetimes = d.deaths - d.births
    if math.isinf(p):
        return float(lifetimes.max())
    if not p > 0:
        raise ConfigError(f"total persistence needs p > 0, got {p}")
    return float((lifetimes ** p).sum() ** (1.0 / p))


def max_persistence(d: PersistenceDiagram) -> float:
    finite = [p.persistence for p in d.pairs if math.isfinite(p.death)]
    return max(finite, default=0.0)


def count_features(d: PersistenceDiagram, threshold: float) -> int:
    """Pairs living strictly longer than ``threshold``."""
    if threshold < 0:
        raise ConfigError("threshold must be non-negative")
    return sum(1 for p in d.pairs if p.persistence > threshold)
