"""Polyhedra given by inequalities: vertices, lattice points, normal fans."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, floor
from typing import Sequence

from .cones import Cone, Fan, cone_from_generators, double_description, full_space, make_fan
from .errors import BudgetExceeded, DimensionMismatch, Unbounded
from .linalg import dot, primitive, rank

DEFAULT_POINT_BUDGET = 10**6


@dataclass(frozen=True)
class Polytope:
    """Polyhedron ``{m : <normal, m> >= -offset}``.

    Despite the name, unbounded polyhedra are allowed; they have vertices and
    a recession cone, and :meth:`lattice_points` refuses them.
    """

    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    dim: int

    @cached_property
    def _homogenized(self):
        cons = []
        for normal, offset in self.inequalities:
            cons.append(primitive(list(normal) + [offset]))
        cons.append(tuple([0] * self.dim + [1]))
        return double_description(cons, self.dim + 1)

    @cached_property
    def vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        lin, rays = self._homogenized
        if any(l[-1] for l in lin):
            raise AssertionError("homogenization cannot have lineality along t")
        if lin:
            # A polyhedron containing a line has no vertices.
            return ()
        out = {tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0}
        return tuple(sorted(out))

    @cached_property
    def recession_cone(self) -> Cone:
        lin, rays = self._homogenized
        gens = [r[:-1] for r in rays if r[-1] == 0]
        gens += [l[:-1] for l in lin] + [tuple(-x for x in l[:-1]) for l in lin]
        return cone_from_generators(gens, self.dim)

    @property
    def is_empty(self) -> bool:
        lin, rays = self._homogenized
        return not any(r[-1] > 0 for r in rays)

    @property
    def is_bounded(self) -> bool:
        return self.recession_cone.is_zero

    @cached_property
    def affine_dim(self) -> int:
        if self.is_empty:
            return -1
        verts = self.vertices
        base = verts[0]
        diffs = [[a - b for a, b in zip(v, base)] for v in verts[1:]]
        diffs += [list(g) for g in self.recession_cone.generators]
        return rank(diffs) if diffs else 0

    def contains(self, m: Sequence) -> bool:
        return all(dot(n, m) >= -o for n, o in self.inequalities)

    def _box(self, extra_rays=()) -> list[range]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.dim)]
        for r in extra_rays:
            for i, x in enumerate(r):
                if x > 0:
                    hi[i] += x
                else:
                    lo[i] += x
        return [range(ceil(a), floor(b) + 1) for a, b in zip(lo, hi)]

    def _scan(self, ranges, budget: int) -> list[tuple[int, ...]]:
        total = 1
        for r in ranges:
            total *= len(r)
        if total > budget:
            raise BudgetExceeded(f"{total} candidate points exceed the budget of {budget}")
        return [m for m in product(*ranges) if self.contains(m)]

    def lattice_points(self, budget: int = DEFAULT_POINT_BUDGET) -> list[tuple[int, ...]]:
        """All integer points, by a bounding-box scan."""
        if self.is_empty:
            return []
        if not self.is_bounded:
            raise Unbounded("polyhedron has a nonzero recession cone")
        if self.dim == 0:
            return [()]
        return self._scan(self._box(), budget)

    def lattice_generators(self, budget: int = DEFAULT_POINT_BUDGET) -> list[tuple[int, ...]]:
        """Integer points not obtained from another one by a nonzero recession step.

        These generate all lattice points as a module over the lattice points
        of the (pointed) recession cone. For a bounded polytope this is every
        lattice point.
        """
        if self.is_empty:
            return []
        rec = self.recession_cone
        if rec.is_zero:
            return self.lattice_points(budget)
        if not rec.is_pointed:
            raise Unbounded("polyhedron contains a line; generators are not finite")
        cands = self._scan(self._box(rec.rays), budget)
        steps = _zonotope_points(rec)
        out = []
        for p in cands:
            if any(self.contains([a - b for a, b in zip(p, h)]) for h in steps):
                continue
            out.append(p)
        return out


def _zonotope_points(rec: Cone) -> list[tuple[int, ...]]:
    """Nonzero lattice points of ``rec`` in the zonotope of its rays.

    They contain the Hilbert basis of the monoid ``rec ∩ Z^d``.
    """
    lo = [sum(min(0, r[i]) for r in rec.rays) for i in range(rec.ambient_dim)]
    hi = [sum(max(0, r[i]) for r in rec.rays) for i in range(rec.ambient_dim)]
    pts = []
    for m in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if any(m) and rec.contains(m):
            pts.append(m)
    return pts


def polytope_build(ineqs: Sequence[tuple[Sequence, object]], dim: int | None = None) -> Polytope:
    """Build from ``(normal, offset)`` pairs meaning ``<normal, m> >= -offset``."""
    rows = []
    for normal, offset in ineqs:
        if dim is None:
            dim = len(normal)
        elif len(normal) != dim:
            raise DimensionMismatch(f"normal of length {len(normal)} in dimension {dim}")
        rows.append((tuple(Fraction(x) for x in normal), Fraction(offset)))
    if dim is None:
        raise DimensionMismatch("cannot infer dimension of an empty system")
    return Polytope(tuple(rows), dim)


def dilate(p: Polytope, k: int) -> Polytope:
    return Polytope(tuple((n, o * k) for n, o in p.inequalities), p.dim)


def normal_fan(p: Polytope) -> Fan:
    """Inner normal fan: one cone per vertex, spanned by the normals tight there.

    A point (affine dimension 0) gives the trivial fan consisting of the whole
    space.
    """
    if p.is_empty:
        raise ValueError("empty polyhedron has no normal fan")
    if p.affine_dim == 0:
        return make_fan([full_space(p.dim)], ["v0"], p.dim)
    cones, labels = [], []
    for k, v in enumerate(p.vertices):
        tight = [n for n, o in p.inequalities if dot(n, v) == -o]
        cones.append(cone_from_generators(tight, p.dim))
        labels.append(f"v{k}")
    return make_fan(cones, labels, p.dim)
