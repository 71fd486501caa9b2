"""Subset cones of a weight configuration and minimal supports of a character."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .cones import Cone, cone_from_generators, membership
from .errors import DimensionMismatch


@lru_cache(maxsize=65536)
def subset_cone(columns: tuple[tuple[int, ...], ...], subset: tuple[int, ...]) -> Cone:
    """``cone(w_i : i in subset)`` with 1-based indices."""
    return cone_from_generators([columns[i - 1] for i in subset], len(columns[0]))


@dataclass(frozen=True)
class SupportFamily:
    """Antichain of minimal index sets ``I`` (1-based) with chi in cone(w_I).

    A point of affine space is semistable exactly when its support contains
    one of these sets.
    """

    n: int
    minimal_supports: tuple[tuple[int, ...], ...]

    def is_semistable(self, support) -> bool:
        s = set(support)
        return any(s.issuperset(m) for m in self.minimal_supports)

    @property
    def is_empty(self) -> bool:
        return not self.minimal_supports

    def refines(self, other: "SupportFamily") -> bool:
        """Whether every member contains a member of ``other``.

        Equivalently the semistable locus of ``self`` is contained in that of
        ``other``.
        """
        return all(other.is_semistable(m) for m in self.minimal_supports)

    def as_lists(self) -> list[list[int]]:
        return [list(m) for m in self.minimal_supports]


def minimal_supports(columns: Sequence[Sequence[int]], chi: Sequence) -> SupportFamily:
    columns = tuple(tuple(c) for c in columns)
    n = len(columns)
    if len(chi) != len(columns[0]):
        raise DimensionMismatch(f"character of length {len(chi)} for weights in dimension {len(columns[0])}")
    found: list[tuple[int, ...]] = []
    for size in range(n + 1):
        for subset in combinations(range(1, n + 1), size):
            if any(set(subset).issuperset(f) for f in found):
                continue
            if membership(subset_cone(columns, subset), chi):
                found.append(subset)
    return SupportFamily(n, tuple(sorted(found)))
