"""Vietoris-Rips filtrations built from point clouds.

Simplices are enumerated explicitly.  Clouds in this pipeline have a few
dozen points, so the 2-skeleton stays in the low thousands of simplices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .embed import PointCloud
from .errors import ConfigError, FiltrationSizeError

DEFAULT_MAX_SIMPLICES = 2_000_000


class Simplex(NamedTuple):
    vertices: tuple[int, ...]
    weight: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class Filtration:
    """Simplices in filtration order: ascending (weight, dimension, vertices)."""

    simplices: tuple[Simplex, ...]
    max_dim: int
    r_max: float

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __getitem__(self, i):
        return self.simplices[i]

    @cached_property
    def position(self) -> dict[tuple[int, ...], int]:
        return {s.vertices: i for i, s in enumerate(self.simplices)}

    @property
    def weights(self) -> np.ndarray:
        return np.array([s.weight for s in self.simplices], dtype=float)

    @property
    def dims(self) -> np.ndarray:
        return np.array([s.dim for s in self.simplices], dtype=int)

    def dump(self) -> str:
        return "".join(
            f"{s.weight!r} {s.dim} {' '.join(map(str, s.vertices))}\n" for s in self.simplices
        )


def pairwise_distances(cloud: PointCloud | np.ndarray) -> np.ndarray:
    points = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    if points.ndim != 2 or len(points) == 0:
        raise ConfigError("need a non-empty (n, d) array of points")
    # Broadcast differences keep the matrix exactly symmetric with a zero diagonal.
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def enclosing_radius(dm: np.ndarray) -> float:
    """Smallest r at which some vertex is within r of every other vertex.

    From that scale on the Rips complex is a cone, so no 1-cycle survives.
    """
    dm = np.asarray(dm, dtype=float)
    return float(dm.max(axis=1).min())


def build_vr_filtration(dm: np.ndarray, max_dim: int = 2, r_max: float | None = None,
                        max_simplices: int = DEFAULT_MAX_SIMPLICES) -> Filtration:
    """Rips filtration of ``dm`` truncated at dimension ``max_dim`` and scale ``r_max``.

    ``r_max`` defaults to the enclosing radius.  A simplex enters at the
    largest pairwise distance among its vertices.
    """
    dm = np.asarray(dm, dtype=float)
    n = dm.shape[0]
    if dm.ndim != 2 or dm.shape[1] != n:
        raise ConfigError("distance matrix must be square")
    if max_dim < 1:
        raise ConfigError("max_dim must be at least 1")
    if r_max is None:
        r_max = enclosing_radius(dm)
    if not r_max >= 0:
        raise ConfigError(f"r_max must be non-negative, got {r_max}")

    adjacent = dm <= r_max
    layers = [(np.arange(n)[:, None], np.zeros(n))]
    total = n
    for k in range(1, max_dim + 1):
        prev, prev_w = layers[-1]
        if len(prev) == 0:
            break
        new_vertices, new_weights = [], []
        for v in range(n):
            mask = (prev[:, -1] < v) & adjacent[prev, v].all(axis=1)
            if not mask.any():
                continue
            base = prev[mask]
            new_vertices.append(np.hstack([base, np.full((len(base), 1), v)]))
            new_weights.append(np.maximum(prev_w[mask], dm[base, v].max(axis=1)))
            total += len(base)
            if total > max_simplices:
                raise FiltrationSizeError(
                    f"more than {max_simplices} simplices at dimension {k} with r_max={r_max!r}"
                )
        if not new_vertices:
            break
        layers.append((np.vstack(new_vertices), np.concatenate(new_weights)))

    simplices = [
        Simplex(tuple(map(int, verts)), float(w))
        for block, weights in layers
        for verts, w in zip(block, weights)
    ]
    simplices.sort(key=lambda s: (s.weight, len(s.vertices), s.vertices))
    return Filtration(tuple(simplices), max_dim, float(r_max))
