"""Z/2 persistent homology by boundary-matrix reduction.

Columns are sets of row indices and column addition is symmetric
difference, which is exactly addition of chains with Z/2 coefficients.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, MalformedFiltrationError
from .rips import Filtration


@dataclass(frozen=True)
class BoundaryMatrix:
    columns: tuple[tuple[int, ...], ...]
    dims: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.columns)


def boundary_matrix(f: Filtration) -> BoundaryMatrix:
    """Column j lists (sorted) the filtration positions of simplex j's facets."""
    position = f.position
    columns = []
    for j, s in enumerate(f.simplices):
        if len(s.vertices) == 1:
            columns.append(())
            continue
        try:
            rows = sorted(position[facet] for facet in combinations(s.vertices, len(s.vertices) - 1))
        except KeyError as exc:
            raise MalformedFiltrationError(f"facet {exc.args[0]} of simplex {s.vertices} is missing") from None
        if rows[-1] >= j:
            raise MalformedFiltrationError(f"simplex {s.vertices} precedes one of its facets")
        columns.append(tuple(rows))
    return BoundaryMatrix(tuple(columns), tuple(s.dim for s in f.simplices))


@dataclass(frozen=True)
class Reduction:
    """Reduced columns plus the persistence pairing read off from them.

    ``pairs`` holds ``(birth_index, death_index)`` sorted by death index;
    ``essential`` lists births that are never killed.
    """

    columns: tuple[tuple[int, ...], ...]
    pairs: tuple[tuple[int, int], ...]
    essential: tuple[int, ...]


def reduce(bm: BoundaryMatrix, clearing: bool = True) -> Reduction:
    """Standard column reduction with a pivot lookup table.

    With ``clearing`` (the twist), dimensions are processed top-down and the
    column of every simplex that becomes a pivot row is zeroed without
    reduction, since a positive simplex always reduces to zero.  The pairing
    is the same either way.
    """
    n = len(bm.columns)
    reduced: list[set[int]] = [set() for _ in range(n)]
    pivot_col: dict[int, int] = {}
    cleared: set[int] = set()
    if clearing:
        order = sorted(range(n), key=lambda j: (-bm.dims[j], j))
    else:
        order = range(n)

    for j in order:
        if j in cleared or not bm.columns[j]:
            continue
        col = set(bm.columns[j])
        while col:
            k = pivot_col.get(max(col))
            if k is None:
                break
            col ^= reduced[k]
        reduced[j] = col
        if col:
            low = max(col)
            pivot_col[low] = j
            if clearing:
                cleared.add(low)

    pairs = tuple(sorted(((i, j) for i, j in pivot_col.items()), key=lambda p: p[1]))
    essential = tuple(j for j in range(n) if not reduced[j] and j not in pivot_col)
    return Reduction(tuple(tuple(sorted(c)) for c in reduced), pairs, essential)


class PersistencePair(NamedTuple):
    dim: int
    birth: float
    death: float
    birth_index: int
    death_index: int | None = None

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    dim: int
    pairs: tuple[PersistencePair, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def finite(self) -> PersistenceDiagram:
        return PersistenceDiagram(self.dim, tuple(p for p in self.pairs if math.isfinite(p.death)))

    @property
    def births(self) -> np.ndarray:
        return np.array([p.birth for p in self.pairs], dtype=float)

    @property
    def deaths(self) -> np.ndarray:
        return np.array([p.death for p in self.pairs], dtype=float)

    @property
    def intervals(self) -> np.ndarray:
        return np.array([(p.birth, p.death) for p in self.pairs], dtype=float).reshape(-1, 2)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "pairs": [[p.birth, p.death if math.isfinite(p.death) else None] for p in self.pairs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> PersistenceDiagram:
        dim = int(data["dim"])
        pairs = [
            PersistencePair(dim, float(b), math.inf if d is None else float(d), -1)
            for b, d in data["pairs"]
        ]
        return cls(dim, tuple(sorted(pairs, key=lambda p: (p.birth, p.death))))

    @classmethod
    def from_intervals(cls, intervals, dim: int = 1) -> PersistenceDiagram:
        pairs = [PersistencePair(dim, float(b), float(d), -1) for b, d in intervals]
        return cls(dim, tuple(sorted(pairs, key=lambda p: (p.birth, p.death))))


def extract_diagram(reduction: Reduction, f: Filtration, p: int = 1) -> PersistenceDiagram:
    """Dimension-``p`` diagram; zero-persistence pairs are dropped and
    essential classes get an infinite death."""
    if p < 0 or p > f.max_dim - 1:
        raise ConfigError(
            f"cannot read H{p} deaths from a filtration capped at dimension {f.max_dim}"
        )
    out = []
    for b, d in reduction.pairs:
        sb, sd = f.simplices[b], f.simplices[d]
        if sb.dim != p or sb.weight == sd.weight:
            continue
        out.append(PersistencePair(p, sb.weight, sd.weight, b, d))
    for b in reduction.essential:
        sb = f.simplices[b]
        if sb.dim == p:
            out.append(PersistencePair(p, sb.weight, math.inf, b, None))
    out.sort(key=lambda q: (q.birth, q.death, q.birth_index))
    return PersistenceDiagram(p, tuple(out))


def persistence_diagrams(f: Filtration, clearing: bool = True) -> dict[int, PersistenceDiagram]:
    """All diagrams whose deaths the filtration can witness (dims 0..max_dim-1)."""
    red = reduce(boundary_matrix(f), clearing=clearing)
    return {p: extract_diagram(red, f, p) for p in range(f.max_dim)}
