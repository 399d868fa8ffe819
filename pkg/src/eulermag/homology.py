"""Exact integer homology via Smith normal form.

Boundary matrices here are sparse with entries in {-1, 0, 1}.  The reduction
first eliminates unit pivots on the sparse representation (each contributes an
invariant factor 1 and shrinks the problem), and only the leftover block, if
any, goes through a dense gcd-based Smith reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

# Switch from sparse elimination to dense once this fraction of the remaining
# block is filled in.
DENSIFY_FILL = 0.30


class DimensionError(ValueError):
    pass


class IntegerMatrix:
    """Sparse integer matrix stored as ``{(row, col): value}`` with no zero entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise DimensionError(f"entry ({i}, {j}) outside {rows}x{cols}")
                if v:
                    self.entries[(i, j)] = int(v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        return cls(nrows, ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def triplets(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, {key: v for key, v in acc.items() if v})

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntegerMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntegerMatrix":
        """Entry (i, j) moves to (row_perm[i], col_perm[j])."""
        return IntegerMatrix(
            self.rows,
            self.cols,
            {(row_perm[i], col_perm[j]): v for (i, j), v in self.entries.items()},
        )


@dataclass(frozen=True)
class SmithDecomposition:
    diagonal: tuple[int, ...]
    rank: int
    transforms: tuple[list[list[int]], list[list[int]]] | None = field(default=None, compare=False)

    @property
    def nontrivial_factors(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


# ---------------------------------------------------------------------------
# Dense Smith normal form


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _dense_snf(a: list[list[int]], with_transforms: bool = False):
    """Smith form of a dense matrix, in place on a copy.

    Returns ``(diagonal, U, V)`` with ``U @ A @ V == diag`` when transforms are
    requested, otherwise ``(diagonal, None, None)``.  Pivots are chosen by
    minimal absolute value.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    a = [row[:] for row in a]
    U = _identity(m) if with_transforms else None
    V = _identity(n) if with_transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        rs, rd = a[src], a[dst]
        for c in range(n):
            if rs[c]:
                rd[c] -= q * rs[c]
        if U is not None:
            us, ud = U[src], U[dst]
            for c in range(m):
                if us[c]:
                    ud[c] -= q * us[c]

    def add_col(src, dst, q):
        # col_dst -= q * col_src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(t, i, q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(t, j, q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot exists; move it to the pivot
                best = None
                for i in range(t, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                _, pi, pj = best
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            # row and column cleared; enforce divisibility on the rest
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, -1)
        if a[t][t] < 0:
            negate_row(t)
        diag.append(a[t][t])
        t += 1
    diag.extend([0] * (min(m, n) - len(diag)))
    return diag, U, V


def _sparse_unit_elimination(m: IntegerMatrix):
    """Eliminate unit pivots on a sparse copy.

    Returns ``(units, remainder)`` where ``units`` counts invariant factors equal
    to 1 and ``remainder`` is the dense leftover block (rows that never received
    a unit pivot restricted to the surviving columns).
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    nnz = len(m.entries)

    units = 0
    progress = True
    while progress and rows:
        progress = False
        # sweep columns sparsest first; repeat while pivots keep appearing
        for pj in sorted(cols, key=lambda c: (len(cols[c]), c)):
            if pj not in cols:
                continue
            if nnz > DENSIFY_FILL * len(rows) * len(cols):
                progress = False
                break
            pi = None
            for i in cols[pj]:
                if abs(rows[i][pj]) == 1 and (pi is None or (len(rows[i]), i) < (len(rows[pi]), pi)):
                    pi = i
            if pi is None:
                continue
            prow = rows.pop(pi)
            nnz -= len(prow)
            pval = prow[pj]
            for c in prow:
                cols[c].discard(pi)
            for i in list(cols[pj]):
                r = rows[i]
                factor = r[pj] * pval  # pval is +-1
                for c, v in prow.items():
                    nv = r.get(c, 0) - factor * v
                    if nv:
                        if c not in r:
                            cols[c].add(i)
                            nnz += 1
                        r[c] = nv
                    elif c in r:
                        del r[c]
                        cols[c].discard(i)
                        nnz -= 1
                if not r:
                    del rows[i]
            for c in prow:
                if not cols[c]:
                    del cols[c]
            units += 1
            progress = True

    if not rows:
        return units, []
    row_ids = sorted(rows)
    col_ids = sorted(cols)
    cidx = {c: k for k, c in enumerate(col_ids)}
    dense = [[0] * len(col_ids) for _ in row_ids]
    for r, i in enumerate(row_ids):
        for c, v in rows[i].items():
            dense[r][cidx[c]] = v
    return units, dense


def smith_normal_form(m: IntegerMatrix, with_transforms: bool = False) -> SmithDecomposition:
    """Invariant factors of ``m`` with ``d_1 | d_2 | ...``, zeros padded to ``min(rows, cols)``."""
    size = min(m.rows, m.cols)
    if with_transforms:
        diag, U, V = _dense_snf(m.to_dense(), with_transforms=True)
        nz = [d for d in diag if d]
        return SmithDecomposition(tuple(diag), len(nz), (U, V))
    units, rest = _sparse_unit_elimination(m)
    factors = [1] * units
    if rest:
        diag, _, _ = _dense_snf(rest)
        factors.extend(d for d in diag if d)
    factors = normalize_torsion(factors)
    return SmithDecomposition(tuple(factors + [0] * (size - len(factors))), len(factors))


def normalize_torsion(factors: list[int]) -> list[int]:
    """Rewrite nonzero factors into divisibility-chain form (same group)."""
    factors = sorted(abs(f) for f in factors if f)
    if all(factors[i + 1] % factors[i] == 0 for i in range(len(factors) - 1)):
        return factors
    # Z/a + Z/b == Z/gcd + Z/lcm; repeat until a chain
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a:
                    g = math.gcd(a, b)
                    factors[i], factors[j] = g, a * b // g
                    changed = True
        factors.sort()
    return factors


# ---------------------------------------------------------------------------
# Chain complexes and homology


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def to_dict(self) -> dict:
        return {"degree": self.degree, "free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass
class IntegerChainComplex:
    """Free chain complex.

    ``gradings[d]`` is the rank of the chain group in degree ``offset + d``;
    ``boundaries[d]`` maps that degree to the one below (a ``0 x size`` matrix
    for the lowest degree).
    """

    gradings: list[int]
    boundaries: list[IntegerMatrix]
    labels: list[list] | None = None
    offset: int = 0

    def __post_init__(self):
        if len(self.boundaries) != len(self.gradings):
            raise DimensionError("need one boundary matrix per degree")
        for d, (size, bd) in enumerate(zip(self.gradings, self.boundaries)):
            below = self.gradings[d - 1] if d > 0 else 0
            if bd.shape != (below, size):
                raise DimensionError(
                    f"boundary in degree {self.offset + d} has shape {bd.shape}, "
                    f"expected {(below, size)}"
                )

    @property
    def degrees(self) -> range:
        return range(self.offset, self.offset + len(self.gradings))

    def rank(self, degree: int) -> int:
        d = degree - self.offset
        return self.gradings[d] if 0 <= d < len(self.gradings) else 0

    def boundary(self, degree: int) -> IntegerMatrix:
        d = degree - self.offset
        if 0 <= d < len(self.gradings):
            return self.boundaries[d]
        below = self.rank(degree - 1)
        return IntegerMatrix.zeros(below, self.rank(degree))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.rank(k) for k in self.degrees)

    def check_d_squared(self) -> bool:
        for k in self.degrees:
            if self.rank(k - 1) and self.rank(k + 1):
                if not (self.boundary(k) @ self.boundary(k + 1)).is_zero():
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "offset": self.offset,
            "degrees": [
                {
                    "degree": k,
                    "generators": [list(x) for x in self.labels[k - self.offset]] if self.labels else None,
                    "boundary": {
                        "shape": list(self.boundary(k).shape),
                        "triplets": [list(t) for t in self.boundary(k).triplets()],
                    },
                }
                for k in self.degrees
            ],
        }


def homology_from_smith(
    degree: int, dim: int, out_smith: SmithDecomposition | None, in_smith: SmithDecomposition | None
) -> HomologyGroup:
    rank_out = out_smith.rank if out_smith else 0
    rank_in = in_smith.rank if in_smith else 0
    torsion = tuple(in_smith.nontrivial_factors) if in_smith else ()
    return HomologyGroup(degree, dim - rank_out - rank_in, torsion)


def homology(c: IntegerChainComplex, degree: int) -> HomologyGroup:
    if degree not in c.degrees:
        raise DimensionError(f"degree {degree} outside {c.degrees.start}..{c.degrees.stop - 1}")
    out_bd = c.boundary(degree)
    in_bd = c.boundary(degree + 1)
    out_s = smith_normal_form(out_bd) if out_bd.entries else None
    in_s = smith_normal_form(in_bd) if in_bd.entries else None
    return homology_from_smith(degree, c.rank(degree), out_s, in_s)


def all_homology(c: IntegerChainComplex) -> list[HomologyGroup]:
    """Homology in every degree, each boundary reduced once."""
    smiths = {}
    for k in list(c.degrees) + [c.degrees.stop]:
        bd = c.boundary(k)
        smiths[k] = smith_normal_form(bd) if bd.entries else None
    return [homology_from_smith(k, c.rank(k), smiths[k], smiths[k + 1]) for k in c.degrees]


def homology_report(groups: Iterable[HomologyGroup], euler: int | None = None) -> dict:
    groups = list(groups)
    if euler is None:
        euler = sum((-1) ** h.degree * h.free_rank for h in groups)
    return {
        "homology": [h.to_dict() for h in groups],
        "euler_characteristic": euler,
    }


def rank_mod_p(m: IntegerMatrix, p: int) -> int:
    """Rank over GF(p) by dense Gaussian elimination; used as an independent check."""
    a = [[x % p for x in row] for row in m.to_dense()]
    rank = 0
    rows, cols = m.rows, m.cols
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank
