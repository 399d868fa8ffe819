"""Complexes of injective words.

A face is a tuple of pairwise-distinct vertices; its faces are the subwords
obtained by deleting entries, and ``(1, 2)`` and ``(2, 1)`` are different faces.
A word with ``t`` letters is a ``(t-1)``-dimensional cell whose boundary is the
alternating sum of single-letter deletions, exactly as for an ordered simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

from eulermag.homology import (
    HomologyGroup,
    IntegerChainComplex,
    IntegerMatrix,
    all_homology,
    homology,
)

Word = tuple[int, ...]


class ComplexError(ValueError):
    """Malformed complex: non-injective word, missing face, failed containment."""


def deletions(w: Word) -> list[Word]:
    return [w[:i] + w[i + 1 :] for i in range(len(w))]


def subwords(w: Word, include_empty: bool = False) -> list[Word]:
    """All order-preserving subwords of ``w`` (every subset of positions)."""
    lo = 0 if include_empty else 1
    return [
        tuple(w[i] for i in idx)
        for r in range(lo, len(w) + 1)
        for idx in combinations(range(len(w)), r)
    ]


def is_subword(small: Word, big: Word) -> bool:
    it = iter(big)
    return all(x in it for x in small)


@dataclass(frozen=True)
class TupleComplex:
    faces: frozenset[Word]

    def __post_init__(self):
        for w in self.faces:
            if not w:
                raise ComplexError("the empty word is implicit, not a stored face")
            if len(set(w)) != len(w):
                raise ComplexError(f"face {w} repeats a vertex")
            if len(w) > 1:
                for sub in deletions(w):
                    if sub not in self.faces:
                        raise ComplexError(f"face {w} present but its face {sub} is missing")

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]]) -> "TupleComplex":
        faces: set[Word] = set()
        for f in facets:
            faces.update(subwords(tuple(f)))
        return cls(frozenset(faces))

    @classmethod
    def empty(cls) -> "TupleComplex":
        return cls(frozenset())

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, w) -> bool:
        return tuple(w) in self.faces

    def __iter__(self):
        return iter(self.sorted_faces())

    @property
    def dim(self) -> int:
        return max((len(w) for w in self.faces), default=0) - 1

    @property
    def is_empty(self) -> bool:
        return not self.faces

    def sorted_faces(self) -> list[Word]:
        return sorted(self.faces, key=lambda w: (len(w), w))

    def faces_of_dim(self, d: int) -> list[Word]:
        return sorted(w for w in self.faces if len(w) == d + 1)

    @cached_property
    def facets(self) -> list[Word]:
        """Maximal faces, ordered by decreasing dimension then lexicographically.

        A face is maximal iff no one-letter insertion of it is a face, so it is
        enough to look at single deletions of every face.
        """
        covered = set()
        for w in self.faces:
            if len(w) > 1:
                covered.update(deletions(w))
        return sorted((w for w in self.faces if w not in covered), key=lambda w: (-len(w), w))

    def facet_dims(self) -> list[int]:
        return [len(f) - 1 for f in self.facets]

    def is_subcomplex_of(self, other: "TupleComplex") -> bool:
        return self.faces <= other.faces

    def relabel(self, perm) -> "TupleComplex":
        return TupleComplex(frozenset(tuple(perm[v] for v in w) for w in self.faces))

    def to_json(self) -> dict:
        facets = set(self.facets)
        return {
            "faces": [list(w) for w in self.sorted_faces()],
            "facets": [list(w) for w in self.facets],
            "is_facet": [w in facets for w in self.sorted_faces()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TupleComplex":
        if "faces" in data:
            return cls(frozenset(tuple(w) for w in data["faces"] if w))
        return cls.from_facets(data["facets"])


def _word_chain_complex(
    basis: dict[int, list[Word]], low: int, high: int, kill: frozenset[Word] = frozenset()
) -> IntegerChainComplex:
    """Chain complex on the given per-dimension word bases.

    ``basis[d]`` lists the words of ``d + 1`` letters (``basis[-1]`` may hold the
    empty word).  Faces outside the basis of the dimension below, or in ``kill``,
    map to zero.
    """
    gradings, boundaries, labels = [], [], []
    prev_index: dict[Word, int] = {}
    for d in range(low, high + 1):
        words = basis.get(d, [])
        index = {w: i for i, w in enumerate(words)}
        entries = {}
        if d > low:
            for j, w in enumerate(words):
                for i, sub in enumerate(deletions(w)):
                    row = prev_index.get(sub)
                    if row is not None and sub not in kill:
                        entries[(row, j)] = entries.get((row, j), 0) + (-1) ** i
        boundaries.append(IntegerMatrix(len(prev_index) if d > low else 0, len(words), entries))
        gradings.append(len(words))
        labels.append(words)
        prev_index = index
    return IntegerChainComplex(gradings, boundaries, labels, offset=low)


def chain_complex(x: TupleComplex, reduced: bool = False) -> IntegerChainComplex:
    top = max(x.dim, 0)
    basis = {d: x.faces_of_dim(d) for d in range(top + 1)}
    if reduced:
        basis[-1] = [()]
        return _word_chain_complex(basis, -1, top)
    return _word_chain_complex(basis, 0, top)


def relative_chain_complex(
    big: TupleComplex, sub: TupleComplex, augment: bool = False
) -> IntegerChainComplex:
    """Quotient complex C(big)/C(sub).

    With ``augment`` the empty word is a generator in degree -1 (the situation
    where ``big`` contains the empty face and ``sub`` does not).
    """
    if not sub.faces <= big.faces:
        witness = min(sub.faces - big.faces, key=lambda w: (len(w), w))
        raise ComplexError(f"subcomplex containment violated: face {witness} is not in the big complex")
    rel = big.faces - sub.faces
    top = max((len(w) for w in rel), default=1) - 1
    basis: dict[int, list[Word]] = {}
    for w in rel:
        basis.setdefault(len(w) - 1, []).append(w)
    for d in basis:
        basis[d].sort()
    if augment:
        basis[-1] = [()]
        return _word_chain_complex(basis, -1, max(top, 0))
    return _word_chain_complex(basis, 0, max(top, 0))


def simplicial_homology(x: TupleComplex, degree: int) -> HomologyGroup:
    c = chain_complex(x)
    if degree not in c.degrees:
        return HomologyGroup(degree, 0)
    return homology(c, degree)


def reduced_homology(x: TupleComplex, degree: int) -> HomologyGroup:
    """Homology of the complex augmented by the empty face.

    The empty complex is treated as the void complex: all groups trivial.
    """
    if x.is_empty:
        return HomologyGroup(degree, 0)
    c = chain_complex(x, reduced=True)
    if degree not in c.degrees:
        return HomologyGroup(degree, 0)
    return homology(c, degree)


def relative_homology(pair: tuple[TupleComplex, TupleComplex], degree: int) -> HomologyGroup:
    big, sub = pair
    c = relative_chain_complex(big, sub)
    if degree not in c.degrees:
        return HomologyGroup(degree, 0)
    return homology(c, degree)


def all_reduced_homology(x: TupleComplex) -> list[HomologyGroup]:
    if x.is_empty:
        return []
    return all_homology(chain_complex(x, reduced=True))
