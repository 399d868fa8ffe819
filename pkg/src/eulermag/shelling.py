"""Shellings of word complexes and closed-form shellability thresholds.

A facet order ``F_1, ..., F_t`` is a shelling when, for every ``k >= 2``, the
faces ``F_k`` shares with ``F_1, ..., F_{k-1}`` form a pure complex of
dimension ``dim F_k - 1``.  The empty face counts, so a vertex may always be
appended, while a positive-dimensional facet must meet its predecessors in a
non-empty union of codimension-one faces.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from eulermag.complexes import TupleComplex, Word, all_reduced_homology, deletions, subwords

DEFAULT_BUDGET = 10**6


class ShellStatus(str, enum.Enum):
    SHELLABLE = "SHELLABLE"
    NOT_SHELLABLE = "NOT_SHELLABLE"
    UNKNOWN = "UNKNOWN"


class ShellingError(ValueError):
    pass


@dataclass(frozen=True)
class ShellingOrder:
    facet_sequence: tuple[Word, ...]


@dataclass
class ShellingCheck:
    ok: bool
    failed_at: Optional[int] = None
    witness: Optional[Word] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _attach_ok(facet: Word, union: set[Word]) -> bool:
    """Does ``facet`` meet ``union`` in a pure complex of codimension one?"""
    if len(facet) == 1:
        return True
    shared_ridges = [r for r in deletions(facet) if r in union]
    if not shared_ridges:
        return False
    covered = set()
    for r in shared_ridges:
        covered.update(subwords(r))
    # every shared face must lie in a shared ridge
    for w in subwords(facet):
        if len(w) < len(facet) - 1 and w in union and w not in covered:
            return False
    return True


def is_shelling(x: TupleComplex, order: ShellingOrder | Sequence[Word]) -> ShellingCheck:
    seq = list(order.facet_sequence if isinstance(order, ShellingOrder) else order)
    seq = [tuple(f) for f in seq]
    if sorted(seq) != sorted(x.facets):
        raise ShellingError("order must list every facet of the complex exactly once")
    union: set[Word] = set()
    for k, f in enumerate(seq):
        if k > 0 and not _attach_ok(f, union):
            return ShellingCheck(False, k, f, "intersection with earlier facets is not a union of ridges")
        union.update(subwords(f))
    return ShellingCheck(True)


@dataclass
class ShellingResult:
    status: ShellStatus
    order: Optional[ShellingOrder] = None
    witness: Optional[Word] = None
    steps: int = 0
    reason: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status.value, "steps": self.steps}
        if self.order is not None:
            out["order"] = [list(f) for f in self.order.facet_sequence]
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.reason:
            out["reason"] = self.reason
        return out


def _ridge_graph_components(facets: list[Word], r: int) -> list[set[Word]]:
    """Connected components of the r-faces of ``facets`` glued along (r-1)-faces."""
    faces = {w for f in facets for w in subwords(f) if len(w) == r + 1}
    owner: dict[Word, list[Word]] = {}
    for w in faces:
        for ridge in deletions(w):
            owner.setdefault(ridge, []).append(w)
    seen: set[Word] = set()
    comps = []
    for start in sorted(faces):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            w = stack.pop()
            for ridge in deletions(w):
                for nb in owner[ridge]:
                    if nb not in seen:
                        seen.add(nb)
                        comp.add(nb)
                        stack.append(nb)
        comps.append(comp)
    return comps


def _obstruction(x: TupleComplex) -> Optional[tuple[Word, str]]:
    """A certificate that no shelling exists, or None.

    If X is shellable then so is the pure r-dimensional complex spanned by the
    r-faces of facets of dimension >= r, and a pure shellable complex of
    positive dimension is connected through codimension-one faces.  The same
    inheritance gives a homological test on every section.
    """
    facets = x.facets
    dims = sorted({len(f) - 1 for f in facets}, reverse=True)
    for r in range(1, dims[0] + 1 if dims else 0):
        big = [f for f in facets if len(f) - 1 >= r]
        comps = _ridge_graph_components(big, r)
        if len(comps) > 1:
            witness = min(comps[1])
            return witness, f"{r}-faces of facets of dim >= {r} are not connected through {r - 1}-faces"
    # shellability passes to every section X^(r,s), and a shellable complex whose
    # facets all have dim >= r is a wedge of spheres of dim >= r
    for r in range(0, x.dim + 1):
        for s in range(r, x.dim + 1):
            section = skeleton_section(x, r, s)
            for h in all_reduced_homology(section):
                if h.torsion or (h.degree < r and h.free_rank):
                    return section.facets[0], f"section ({r},{s}) has reduced homology {h} in degree {h.degree}"
    return None


def find_shelling(
    x: TupleComplex,
    budget: int = DEFAULT_BUDGET,
    time_limit: Optional[float] = None,
) -> ShellingResult:
    """Backtracking search over facet orders of non-increasing dimension.

    Restricting to such orders loses nothing (a shelling can always be
    rearranged by decreasing dimension), so exhausting them proves
    non-shellability.  ``budget`` caps the number of partial orders visited;
    running out yields UNKNOWN.
    """
    facets = x.facets
    if len(facets) <= 1:
        return ShellingResult(ShellStatus.SHELLABLE, ShellingOrder(tuple(facets)))
    obstruction = _obstruction(x)
    if obstruction is not None:
        return ShellingResult(ShellStatus.NOT_SHELLABLE, witness=obstruction[0], reason=obstruction[1])

    by_dim: dict[int, list[Word]] = {}
    for f in facets:
        by_dim.setdefault(len(f), []).append(f)
    levels = [by_dim[s] for s in sorted(by_dim, reverse=True)]
    face_sets = {f: subwords(f) for f in facets}

    deadline = time.monotonic() + time_limit if time_limit else None
    steps = 0
    dead: set[frozenset[Word]] = set()
    order: list[Word] = []
    union: set[Word] = set()
    placed: set[Word] = set()
    out_of_budget = False

    def add(f: Word) -> list[Word]:
        new = [w for w in face_sets[f] if w not in union]
        union.update(new)
        placed.add(f)
        order.append(f)
        return new

    def remove(f: Word, new: list[Word]) -> None:
        union.difference_update(new)
        placed.discard(f)
        order.pop()

    def search(level: int) -> bool:
        nonlocal steps, out_of_budget
        while level < len(levels) and all(f in placed for f in levels[level]):
            level += 1
        if level == len(levels):
            return True
        key = frozenset(placed)
        if key in dead:
            return False
        steps += 1
        if steps > budget or (deadline is not None and steps % 1024 == 0 and time.monotonic() > deadline):
            out_of_budget = True
            return False
        candidates = [f for f in levels[level] if f not in placed and (not order or _attach_ok(f, union))]
        # try facets that glue along the most ridges first
        candidates.sort(key=lambda f: (-sum(r in union for r in deletions(f)), f))
        for f in candidates:
            new = add(f)
            if search(level):
                return True
            remove(f, new)
            if out_of_budget:
                return False
        dead.add(key)
        return False

    found = search(0)
    if found:
        return ShellingResult(ShellStatus.SHELLABLE, ShellingOrder(tuple(order)), steps=steps)
    if out_of_budget:
        return ShellingResult(ShellStatus.UNKNOWN, steps=steps, reason="search budget exhausted")
    return ShellingResult(
        ShellStatus.NOT_SHELLABLE, steps=steps, reason="every dimension-ordered facet sequence fails"
    )


def skeleton_section(x: TupleComplex, r: int, s: int) -> TupleComplex:
    """Faces of dimension <= s lying in some facet of dimension >= r."""
    if not (0 <= r <= s <= x.dim):
        raise ValueError(f"need 0 <= r <= s <= dim = {x.dim}, got r={r}, s={s}")
    faces: set[Word] = set()
    for f in x.facets:
        if len(f) - 1 >= r:
            faces.update(w for w in subwords(f) if len(w) - 1 <= s)
    return TupleComplex(frozenset(faces))


# ---------------------------------------------------------------------------
# Threshold evaluators (exact rational arithmetic)


@dataclass(frozen=True)
class FacetDims:
    dims: tuple[int, ...]
    ell: int

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise ValueError("facet dimensions must be non-negative")
        if any(x < y for x, y in zip(self.dims, self.dims[1:])):
            raise ValueError(f"facet dimensions must be non-increasing, got {list(self.dims)}")

    @classmethod
    def of(cls, x: TupleComplex, ell: int) -> "FacetDims":
        return cls(tuple(x.facet_dims()), ell)


def _threshold(dims: Sequence[int], ell: int) -> Fraction:
    half = Fraction(ell - 2, 2)
    t = len(dims)
    if t <= 1:
        return Fraction(1)
    value = Fraction(1)
    # first index whose dimension drops below (ell-2)/2; facets before it use the high branch
    k = next((i for i, d in enumerate(dims) if d < half), t)
    for i in range(min(k, t - 1)):
        value *= Fraction(dims[i] + 3, ell + 4)
    for i in range(k, t - 1):
        value *= Fraction(dims[i] + dims[i + 1], ell + 2 * dims[i + 1] - 2)
    return value


def et_shelling_threshold(dims: FacetDims) -> Fraction:
    """Upper end of the alpha range in which ET_{<=l}(a, b) is shellable a.a.s."""
    if dims.ell < 3:
        raise ValueError("ell must be >= 3")
    return _threshold(dims.dims, dims.ell)


def etsub_shelling_threshold(dims: FacetDims) -> Fraction:
    """Same as :func:`et_shelling_threshold` with ``l - 1`` in place of ``l``."""
    if dims.ell < 3:
        raise ValueError("ell must be >= 3")
    return _threshold(dims.dims, dims.ell - 1)


def vanishing_threshold(ell: int) -> Fraction:
    """(l + 1) / (2l - 1): above this exponent the expected rank of EMH_{l,l} vanishes."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    return Fraction(ell + 1, 2 * ell - 1)


def is_shellable(x: TupleComplex, budget: int = DEFAULT_BUDGET) -> ShellStatus:
    return find_shelling(x, budget).status
