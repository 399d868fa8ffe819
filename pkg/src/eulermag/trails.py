"""Eulerian trails and the eulerian magnitude chain complex EMC_{*,l}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from eulermag.graph import INFINITY, DistanceMatrix, Graph, path_metric, trail_length
from eulermag.homology import (
    DimensionError,
    HomologyGroup,
    IntegerChainComplex,
    IntegerMatrix,
    all_homology,
    normalize_torsion,
)

Trail = tuple[int, ...]


def enumerate_trails(
    g: Graph,
    dm: DistanceMatrix,
    k: int,
    ell: int,
    endpoints: Optional[tuple[int, int]] = None,
) -> list[Trail]:
    """All (k+1)-tuples of distinct vertices with consecutive distances summing to ``ell``.

    Depth-first extension; a branch is cut when the spent length plus the
    minimum cost of the remaining hops (one per hop, or ``d(x, b)`` for the
    final hop into a fixed endpoint) exceeds ``ell``.
    """
    if k < 0 or ell < 0:
        raise ValueError("k and ell must be non-negative")
    if k > ell:
        return []
    n = g.n
    rows = dm.rows()
    if endpoints is not None:
        a, b = endpoints
        starts = [a]
        if k == 0:
            return [(a,)] if a == b and ell == 0 else []
        if a == b:
            return []
    else:
        b = None
        starts = range(n)
    if k == 0:
        return [(v,) for v in starts] if ell == 0 else []

    out: list[Trail] = []
    word = [0] * (k + 1)
    used = [False] * n

    def extend(pos: int, spent: int) -> None:
        last = word[pos - 1]
        row = rows[last]
        hops_left = k - pos  # hops after placing position pos
        if pos == k:
            if b is not None:
                d = row[b]
                if d is not INFINITY and not used[b] and spent + d == ell:
                    word[k] = b
                    out.append(tuple(word))
                return
            for v in range(n):
                d = row[v]
                if d is INFINITY or used[v] or d == 0:
                    continue
                if spent + d == ell:
                    word[k] = v
                    out.append(tuple(word))
            return
        for v in range(n):
            d = row[v]
            if d is INFINITY or used[v] or d == 0 or v == b:
                continue
            s = spent + d
            if b is not None:
                tail = rows[v][b]
                if tail is INFINITY or s + max(tail, hops_left) > ell:
                    continue
            elif s + hops_left > ell:
                continue
            used[v] = True
            word[pos] = v
            extend(pos + 1, s)
            used[v] = False

    for s in starts:
        if b is not None and rows[s][b] is INFINITY:
            continue
        used[s] = True
        word[0] = s
        extend(1, 0)
        used[s] = False
    out.sort()
    return out


@dataclass
class EmcBasis:
    k: int
    ell: int
    generators: list[Trail]
    index: dict[Trail, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {t: i for i, t in enumerate(self.generators)}

    def __len__(self) -> int:
        return len(self.generators)


def emc_basis(
    g: Graph, dm: DistanceMatrix, k: int, ell: int, endpoints: Optional[tuple[int, int]] = None
) -> EmcBasis:
    return EmcBasis(k, ell, enumerate_trails(g, dm, k, ell, endpoints))


def boundary_matrix(basis_k: EmcBasis, basis_km1: EmcBasis, dm: DistanceMatrix) -> IntegerMatrix:
    """Matrix of the differential from degree k to k-1.

    Only interior landmarks (positions 1..k-1) are deleted, with sign (-1)^i,
    and a deletion survives only if the length is still exactly ``ell``.
    """
    if basis_km1.k != basis_k.k - 1 or basis_km1.ell != basis_k.ell:
        raise DimensionError(
            f"bases do not chain: degree {basis_k.k} (ell={basis_k.ell}) -> "
            f"degree {basis_km1.k} (ell={basis_km1.ell})"
        )
    rows = dm.rows()
    entries: dict[tuple[int, int], int] = {}
    index = basis_km1.index
    for col, x in enumerate(basis_k.generators):
        for i in range(1, len(x) - 1):
            # removing x_i changes the length by d(x_{i-1},x_{i+1}) - d(x_{i-1},x_i) - d(x_i,x_{i+1})
            if rows[x[i - 1]][x[i + 1]] == rows[x[i - 1]][x[i]] + rows[x[i]][x[i + 1]]:
                face = x[:i] + x[i + 1 :]
                entries[(index[face], col)] = (-1) ** i
    return IntegerMatrix(len(basis_km1), len(basis_k), entries)


def build_emc(
    g: Graph,
    ell: int,
    endpoints: Optional[tuple[int, int]] = None,
    dm: Optional[DistanceMatrix] = None,
) -> IntegerChainComplex:
    """EMC_{*,ell}(G), or the summand of trails from a to b, in degrees 0..ell."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    dm = dm if dm is not None else path_metric(g)
    bases = [emc_basis(g, dm, k, ell, endpoints) for k in range(ell + 1)]
    boundaries = [IntegerMatrix.zeros(0, len(bases[0]))]
    for k in range(1, ell + 1):
        boundaries.append(boundary_matrix(bases[k], bases[k - 1], dm))
    return IntegerChainComplex(
        [len(b) for b in bases], boundaries, [b.generators for b in bases], offset=0
    )


def emh(
    g: Graph,
    ell: int,
    endpoints: Optional[tuple[int, int]] = None,
    dm: Optional[DistanceMatrix] = None,
) -> list[HomologyGroup]:
    """EMH_{k,ell} for k = 0..ell.

    Without endpoints the complex is split into its (a, b) summands and the
    homology added up, which keeps every Smith reduction small.
    """
    dm = dm if dm is not None else path_metric(g)
    if endpoints is not None:
        return all_homology(build_emc(g, ell, endpoints, dm))
    if ell == 0:
        return all_homology(build_emc(g, 0, None, dm))
    totals = [HomologyGroup(k, 0) for k in range(ell + 1)]
    for a in range(g.n):
        for b in range(g.n):
            if a == b or dm[a][b] is INFINITY or dm[a][b] > ell:
                continue
            totals = [merge_groups(t, h) for t, h in zip(totals, all_homology(build_emc(g, ell, (a, b), dm)))]
    return totals


def merge_groups(x: HomologyGroup, y: HomologyGroup) -> HomologyGroup:
    """Direct sum, with torsion brought back to divisibility-chain form."""
    torsion = [t for t in normalize_torsion(list(x.torsion) + list(y.torsion)) if t > 1]
    return HomologyGroup(x.degree, x.free_rank + y.free_rank, tuple(torsion))


def length(dm: DistanceMatrix, trail: Sequence[int]):
    return trail_length(dm, trail)
