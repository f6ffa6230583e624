"""Brute-force reference implementations used to cross-check the fast path.

Nothing in here is optimised.  The reduction works on a dense boolean
matrix and scans for colliding pivots linearly; Betti numbers come from
ranks of boundary maps computed by Gaussian elimination over Z/2, built
from vertex sets rather than from :func:`persistence.boundary_matrix`.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import ConfigError
from .persistence import BoundaryMatrix, PersistenceDiagram, Reduction
from .rips import Filtration


def naive_reduce(bm: BoundaryMatrix) -> Reduction:
    n = len(bm.columns)
    cols = np.zeros((n, n), dtype=bool)  # cols[j] is column j
    for j, rows in enumerate(bm.columns):
        cols[j, list(rows)] = True
    lows = np.full(n, -1)
    for j in range(n):
        while True:
            nz = np.flatnonzero(cols[j])
            if len(nz) == 0:
                break
            low = nz[-1]
            clash = np.flatnonzero(lows[:j] == low)
            if len(clash) == 0:
                lows[j] = low
                break
            cols[j] ^= cols[clash[0]]
    pairs = tuple((int(lows[j]), j) for j in range(n) if lows[j] >= 0)
    births = set(int(x) for x in lows if x >= 0)
    essential = tuple(j for j in range(n) if lows[j] < 0 and j not in births)
    reduced = tuple(tuple(int(i) for i in np.flatnonzero(c)) for c in cols)
    return Reduction(reduced, pairs, essential)


def gf2_rank(matrix: np.ndarray) -> int:
    m = np.array(matrix, dtype=bool)
    rank = 0
    n_rows, n_cols = m.shape
    for c in range(n_cols):
        if rank == n_rows:
            break
        candidates = np.flatnonzero(m[rank:, c])
        if len(candidates) == 0:
            continue
        pivot = rank + candidates[0]
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        hits = np.flatnonzero(m[:, c])
        hits = hits[hits != rank]
        m[hits] ^= m[rank]
        rank += 1
    return rank


def _boundary_rank(lower: list[tuple[int, ...]], upper: list[tuple[int, ...]]) -> int:
    if not lower or not upper:
        return 0
    row = {s: i for i, s in enumerate(lower)}
    mat = np.zeros((len(lower), len(upper)), dtype=bool)
    for j, s in enumerate(upper):
        for facet in combinations(s, len(s) - 1):
            mat[row[facet], j] = True
    return gf2_rank(mat)


@dataclass(frozen=True)
class RankResult:
    p: int
    rank_Z: int
    rank_B: int

    @property
    def betti(self) -> int:
        return self.rank_Z - self.rank_B


def betti_at(f: Filtration, r: float, p: int) -> RankResult:
    """Betti number of the subcomplex with weights <= r, as rank Z_p - rank B_p."""
    if p < 0 or p + 1 > f.max_dim:
        raise ConfigError(f"betti_at needs p+1 <= max_dim ({f.max_dim}), got p={p}")
    by_dim: dict[int, list[tuple[int, ...]]] = {k: [] for k in range(p + 2)}
    for s in f.simplices:
        if s.weight <= r and s.dim <= p + 1:
            by_dim[s.dim].append(s.vertices)
    rank_dp = _boundary_rank(by_dim[p - 1], by_dim[p]) if p > 0 else 0
    rank_dp1 = _boundary_rank(by_dim[p], by_dim[p + 1])
    return RankResult(p, len(by_dim[p]) - rank_dp, rank_dp1)


def chain_complex_check(bm: BoundaryMatrix) -> bool:
    """True iff every column's boundary-of-boundary cancels mod 2."""
    for rows in bm.columns:
        counts = Counter(i for r in rows for i in bm.columns[r])
        if any(c % 2 for c in counts.values()):
            return False
    return True


def intervals_alive_at(d: PersistenceDiagram, r: float) -> int:
    """Number of classes born at or before r and still alive at r."""
    return sum(1 for p in d.pairs if p.birth <= r < p.death)


def bottleneck_distance(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """Bottleneck distance between the finite parts of two diagrams.

    Exhaustive over candidate thresholds; each one is tested with a perfect
    bipartite matching that allows points to go to the diagonal.
    """
    x = a.finite().intervals
    y = b.finite().intervals
    nx, ny = len(x), len(y)
    if nx == 0 and ny == 0:
        return 0.0
    size = nx + ny
    cost = np.zeros((size, size))
    if nx and ny:
        cost[:nx, :ny] = np.abs(x[:, None, :] - y[None, :, :]).max(axis=2)
    to_diag_x = (x[:, 1] - x[:, 0]) / 2 if nx else np.zeros(0)
    to_diag_y = (y[:, 1] - y[:, 0]) / 2 if ny else np.zeros(0)
    cost[:nx, ny:] = np.inf
    cost[nx:, :ny] = np.inf
    for i in range(nx):
        cost[i, ny + i] = to_diag_x[i]
    for j in range(ny):
        cost[nx + j, j] = to_diag_y[j]
    # diagonal-to-diagonal edges are free
    cost[nx:, ny:] = 0.0

    candidates = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        graph = csr_matrix((cost <= candidates[mid]).astype(np.int8))
        matched = maximum_bipartite_matching(graph, perm_type="column")
        if np.all(matched >= 0):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


# Small point sets with hand-checkable persistence.

def unit_square() -> np.ndarray:
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def equilateral_triangle(side: float = 1.0) -> np.ndarray:
    return side * np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])


def circle_points(n: int = 6, radius: float = 1.0) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    return radius * np.column_stack([np.cos(theta), np.sin(theta)])
