"""Sliding-window (delay-coordinate) embedding of scalar windows."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import ConfigError, DataError, NormalizationError


@dataclass(frozen=True)
class EmbeddingConfig:
    """Delay embedding parameters.

    ``m`` delays of ``tau`` samples give points in R^(m+1); each analysis
    window holds ``window`` samples and consecutive windows start ``step``
    samples apart.  Defaults are the polar-vortex settings (M=7, tau=1,
    30-day windows advanced one day at a time).
    """

    m: int = 7
    tau: int = 1
    window: int = 30
    step: int = 1
    zscore: bool = False

    def __post_init__(self):
        for name in ("m", "tau", "window", "step"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if self.window <= self.span:
            raise ConfigError(
                f"window ({self.window}) must exceed m*tau ({self.span}) or the cloud is empty"
            )

    @property
    def span(self) -> int:
        return self.m * self.tau

    @property
    def dimension(self) -> int:
        return self.m + 1

    @property
    def n_points(self) -> int:
        return self.window - self.span


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    base_index: int = 0
    base_date: date | None = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


def sliding_window_embed(values, cfg: EmbeddingConfig, base_index: int = 0,
                         base_date: date | None = None) -> PointCloud:
    """Point i is ``(values[i], values[i+tau], ..., values[i+m*tau])``."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) != cfg.window:
        raise ConfigError(f"expected a window of {cfg.window} samples, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise DataError("window contains non-finite values")
    idx = np.arange(cfg.n_points)[:, None] + cfg.tau * np.arange(cfg.m + 1)[None, :]
    return PointCloud(values[idx], base_index, base_date)


def schedule_windows(series_length: int, cfg: EmbeddingConfig) -> list[int]:
    if series_length < cfg.window:
        warnings.warn(
            f"series of length {series_length} is shorter than one window ({cfg.window})",
            RuntimeWarning,
            stacklevel=2,
        )
        return []
    return list(range(0, series_length - cfg.window + 1, cfg.step))


def zscore_window(values) -> np.ndarray:
    """Centre to mean 0 and scale to sample standard deviation 1."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        raise NormalizationError("need at least two samples to normalise")
    sd = values.std(ddof=1)
    if not sd > 0:
        raise NormalizationError("window has zero variance")
    return (values - values.mean()) / sd


def cloud_to_csv(cloud: PointCloud) -> str:
    header = ",".join(f"x{j}" for j in range(cloud.dimension))
    rows = [",".join(repr(float(x)) for x in p) for p in cloud.points]
    return "\n".join([header, *rows]) + "\n"
