"""Rational polyhedral cones and fans.

A :class:`Cone` always carries both descriptions: generators (extreme rays
plus a lineality basis) and inequalities (inward facet normals plus a basis of
the equations cutting out its linear span). Both are computed exactly by the
double description method and normalized so that two cones are equal as sets
exactly when they compare equal as dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, EmptyInput
from .linalg import dot, matvec, primitive, rank, rref

IntVec = tuple[int, ...]


# -- double description -------------------------------------------------------


def _neg(v):
    return tuple(-x for x in v)


def _comb(a, u, b, v) -> IntVec:
    return primitive([a * x - b * y for x, y in zip(u, v)])


def double_description(constraints: Sequence[IntVec], dim: int) -> tuple[list[IntVec], list[IntVec]]:
    """Generators of ``{x : <a, x> >= 0 for a in constraints}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extreme rays of the cone modulo that space. Constraints are inserted one
    at a time; adjacency of rays is decided by the combinatorial test on
    their sets of tight constraints.
    """
    lin: list[IntVec] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[IntVec, frozenset]] = []
    seen: list[int] = []
    for idx, a in enumerate(constraints):
        if len(a) != dim:
            raise DimensionMismatch(f"constraint of length {len(a)} in dimension {dim}")
        if not any(a):
            continue
        vals = [dot(a, l) for l in lin]
        piv = next((k for k, v in enumerate(vals) if v), None)
        if piv is not None:
            l, al = lin[piv], vals[piv]
            if al < 0:
                l, al = _neg(l), -al
            lin = [_comb(al, m, dot(a, m), l) for k, m in enumerate(lin) if k != piv]
            new_rays = [(_comb(al, r, dot(a, r), l), z | {idx}) for r, z in rays]
            new_rays.append((l, frozenset(seen)))
            rays = new_rays
        else:
            pos, zero, neg = [], [], []
            for r, z in rays:
                v = dot(a, r)
                if v > 0:
                    pos.append((r, z, v))
                elif v < 0:
                    neg.append((r, z, v))
                else:
                    zero.append((r, z | {idx}))
            new_rays = [(r, z) for r, z, _ in pos] + zero
            need = dim - len(lin) - 2
            for p, zp, vp in pos:
                for n, zn, vn in neg:
                    common = zp & zn
                    if len(common) < need:
                        continue
                    if any(common <= z for r, z in rays if r is not p and r is not n):
                        continue
                    new_rays.append((_comb(vp, n, vn, p), common | {idx}))
            rays = new_rays
        seen.append(idx)
    return lin, [r for r, _ in rays]


# -- canonical forms ----------------------------------------------------------


def _subspace_basis(vectors: Iterable[Sequence], dim: int) -> tuple[IntVec, ...]:
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return ()
    rows, _ = rref(vecs)
    return tuple(primitive(r) for r in rows)


def _project_away(v: Sequence, basis: Sequence[Sequence]) -> list[Fraction]:
    """Orthogonal projection of ``v`` onto the complement of span(basis)."""
    if not basis:
        return [Fraction(x) for x in v]
    gram = [[Fraction(dot(b, c)) for c in basis] for b in basis]
    rhs = [Fraction(dot(b, v)) for b in basis]
    k = len(basis)
    aug = [gram[i] + [rhs[i]] for i in range(k)]
    R, _ = rref(aug)
    coef = [R[i][k] for i in range(k)]
    out = [Fraction(x) for x in v]
    for c, b in zip(coef, basis):
        out = [x - c * y for x, y in zip(out, b)]
    return out


def _canonical_rays(vectors, away) -> tuple[IntVec, ...]:
    out = set()
    for v in vectors:
        p = primitive(_project_away(v, away))
        if any(p):
            out.add(p)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Cone:
    """Canonical rational polyhedral cone.

    ``rays`` are primitive extreme rays orthogonal to the lineality space,
    ``facets`` are primitive inward normals lying in the linear span, and
    ``lineality`` / ``equations`` are reduced-echelon primitive bases.
    """

    ambient_dim: int
    rays: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...]
    facets: tuple[IntVec, ...]
    equations: tuple[IntVec, ...]

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def generators(self) -> tuple[IntVec, ...]:
        return self.rays + self.lineality + tuple(_neg(l) for l in self.lineality)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, x, strict: bool = False) -> bool:
        return membership(self, x, "relative_interior" if strict else "closure")

    def relint_point(self) -> IntVec:
        """Sum of the extreme rays: a relative interior point (origin if none)."""
        s = [0] * self.ambient_dim
        for r in self.rays:
            s = [a + b for a, b in zip(s, r)]
        return tuple(s)

    def interior_point(self) -> IntVec:
        """Primitive vector on the ray through :meth:`relint_point`."""
        return primitive(self.relint_point())

    def key(self):
        return (self.ambient_dim, self.rays, self.lineality)

    def __repr__(self) -> str:
        parts = [f"rays={list(self.rays)}"]
        if self.lineality:
            parts.append(f"lineality={list(self.lineality)}")
        return f"Cone(dim={self.ambient_dim}, {', '.join(parts)})"


@lru_cache(maxsize=65536)
def _cone_cached(dim: int, gens: tuple[IntVec, ...]) -> Cone:
    if dim == 0:
        return Cone(0, (), (), (), ())
    dlin, drays = double_description(gens, dim)
    equations = _subspace_basis(dlin, dim)
    eq_list = list(equations)
    cons = list(drays) + eq_list + [_neg(e) for e in eq_list]
    plin, prays = double_description(cons, dim)
    lineality = _subspace_basis(plin, dim)
    rays = _canonical_rays(prays, lineality)
    facets = _canonical_rays(drays, equations)
    return Cone(dim, rays, lineality, facets, equations)


def _check_dim(vectors, dim) -> int:
    for v in vectors:
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise DimensionMismatch(f"vector of length {len(v)} in dimension {dim}")
    return dim


def cone_from_generators(gens: Iterable[Sequence], dim: Optional[int] = None) -> Cone:
    """Canonical cone spanned by nonnegative combinations of ``gens``.

    ``dim`` is needed only when ``gens`` is empty (giving the zero cone).
    """
    gens = [tuple(g) for g in gens]
    if not gens and dim is None:
        raise EmptyInput("no generators and no ambient dimension")
    dim = _check_dim(gens, dim)
    prim = tuple(sorted({primitive(g) for g in gens if any(g)}))
    return _cone_cached(dim, prim)


def cone_from_inequalities(
    ineqs: Iterable[Sequence], equations: Iterable[Sequence] = (), dim: Optional[int] = None
) -> Cone:
    """Canonical cone ``{x : <a, x> >= 0, <e, x> = 0}``."""
    ineqs = [primitive(a) for a in ineqs]
    equations = [primitive(e) for e in equations]
    dim = _check_dim(ineqs + equations, dim)
    if dim is None:
        raise EmptyInput("no inequalities and no ambient dimension")
    cons = ineqs + equations + [_neg(e) for e in equations]
    lin, rays = double_description(cons, dim)
    return cone_from_generators(list(rays) + list(lin) + [_neg(l) for l in lin], dim)


def zero_cone(dim: int) -> Cone:
    return cone_from_generators([], dim)


def full_space(dim: int) -> Cone:
    return cone_from_inequalities([], dim=dim)


def dual_cone(c: Cone) -> Cone:
    """Cone of linear forms nonnegative on ``c``."""
    return cone_from_generators(
        list(c.facets) + list(c.equations) + [_neg(e) for e in c.equations], c.ambient_dim
    )


# -- queries ------------------------------------------------------------------


def membership(c: Cone, x: Sequence, kind: str = "closure") -> bool:
    """Closure or relative-interior membership of ``x`` in ``c``."""
    if len(x) != c.ambient_dim:
        raise DimensionMismatch(f"point of length {len(x)} for cone in dimension {c.ambient_dim}")
    if any(dot(e, x) != 0 for e in c.equations):
        return False
    if kind == "closure":
        return all(dot(n, x) >= 0 for n in c.facets)
    if kind == "relative_interior":
        return all(dot(n, x) > 0 for n in c.facets)
    raise ValueError(f"unknown membership kind {kind!r}")


def contains_cone(outer: Cone, inner: Cone) -> bool:
    if outer.ambient_dim != inner.ambient_dim:
        raise DimensionMismatch("cones live in different dimensions")
    return all(membership(outer, g) for g in inner.generators)


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_dim != c2.ambient_dim:
        raise DimensionMismatch("cones live in different dimensions")
    return cone_from_inequalities(
        c1.facets + c2.facets, c1.equations + c2.equations, dim=c1.ambient_dim
    )


def intersect_all(cones: Sequence[Cone], dim: int) -> Cone:
    ineqs, eqs = [], []
    for c in cones:
        ineqs.extend(c.facets)
        eqs.extend(c.equations)
    return cone_from_inequalities(ineqs, eqs, dim=dim)


def project(c: Cone, q: Sequence[Sequence[int]]) -> Cone:
    """Image of ``c`` under the linear map ``x -> q @ x``."""
    q = [list(row) for row in q]
    for row in q:
        if len(row) != c.ambient_dim:
            raise DimensionMismatch(f"map row of length {len(row)} for cone in dimension {c.ambient_dim}")
    if q and rank(q) < len(q):
        raise DimensionMismatch("projection map does not have full row rank")
    images = [tuple(matvec(q, g)) if q else () for g in c.generators]
    return cone_from_generators(images, len(q))


def face_of_point(c: Cone, x: Sequence) -> Cone:
    """Smallest face of ``c`` containing ``x`` (which must lie in ``c``)."""
    if not membership(c, x):
        raise ValueError(f"{tuple(x)} is not in the cone")
    tight = [n for n in c.facets if dot(n, x) == 0]
    return _face(c, tight)


def _face(c: Cone, normals) -> Cone:
    rays = [r for r in c.rays if all(dot(n, r) == 0 for n in normals)]
    lin = list(c.lineality) + [_neg(l) for l in c.lineality]
    return cone_from_generators(rays + lin, c.ambient_dim)


def facets_as_cones(c: Cone) -> list[Cone]:
    return [_face(c, [n]) for n in c.facets]


def faces(c: Cone) -> list[Cone]:
    """Every face of ``c`` (including ``c`` and its lineality space)."""
    found = {c.rays: c}
    frontier = [c]
    while frontier:
        nxt = []
        for f in frontier:
            for n in c.facets:
                if all(dot(n, r) == 0 for r in f.rays):
                    continue
                sub_rays = tuple(r for r in f.rays if dot(n, r) == 0)
                if sub_rays not in found:
                    g = _face(c, [m for m in c.facets if all(dot(m, r) == 0 for r in sub_rays)])
                    found[sub_rays] = g
                    nxt.append(g)
        frontier = nxt
    return sorted(found.values(), key=lambda f: (f.dim, f.rays))


def is_face(f: Cone, c: Cone) -> bool:
    if f.ambient_dim != c.ambient_dim or not contains_cone(c, f):
        return False
    return face_of_point(c, f.relint_point()) == f


def on_relative_boundary(c: Cone, x: Sequence) -> bool:
    return membership(c, x) and not membership(c, x, "relative_interior")


# -- fans ---------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    """Collection of maximal cones; faces are implicit."""

    ambient_dim: int
    cones: tuple[Cone, ...]
    labels: tuple[str, ...] = ()
    adjacency: tuple[tuple[int, int], ...] = ()

    def all_cones(self) -> list[Cone]:
        out = {}
        for c in self.cones:
            for f in faces(c):
                out[f.key()] = f
        return [out[k] for k in sorted(out)]

    def rays(self) -> list[IntVec]:
        return sorted({r for c in self.cones for r in c.rays})

    def key(self):
        return tuple(sorted(c.key() for c in self.cones))


def make_fan(cones: Sequence[Cone], labels: Optional[Sequence[str]] = None, dim: Optional[int] = None) -> Fan:
    cones = list(cones)
    if dim is None:
        if not cones:
            raise EmptyInput("fan without cones needs an ambient dimension")
        dim = cones[0].ambient_dim
    for c in cones:
        if c.ambient_dim != dim:
            raise DimensionMismatch("fan cones live in different dimensions")
    if labels is None:
        labels = [str(i) for i in range(len(cones))]
    adj = []
    for i, j in combinations(range(len(cones)), 2):
        a, b = cones[i], cones[j]
        if a.dim != b.dim or a.dim == 0:
            continue
        inter = intersect(a, b)
        if inter.dim == a.dim - 1 and is_face(inter, a) and is_face(inter, b):
            adj.append((i, j))
    return Fan(dim, tuple(cones), tuple(labels), tuple(adj))


@dataclass(frozen=True)
class Violation:
    first: int
    second: int
    intersection: Cone
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def fan_validate(f: Fan) -> ValidationReport:
    """Check that every pairwise intersection is a face of both cones."""
    bad = []
    for i, j in combinations(range(len(f.cones)), 2):
        a, b = f.cones[i], f.cones[j]
        inter = intersect(a, b)
        fa, fb = is_face(inter, a), is_face(inter, b)
        if not (fa and fb):
            which = "either" if not (fa or fb) else ("first" if not fa else "second")
            bad.append(Violation(i, j, inter, f"intersection is not a face of {which} cone"))
    return ValidationReport(tuple(bad))


def fan_support_equals(f: Fan, k: Cone) -> bool:
    """Whether the union of the fan's maximal cones is exactly the convex cone ``k``.

    Every cone must lie in ``k`` with the dimension of ``k``, and every facet
    of every cone must either lie on the relative boundary of ``k`` or be a
    facet of another cone of the fan.
    """
    if not f.cones:
        return False
    if any(c.dim != k.dim or not contains_cone(k, c) for c in f.cones):
        return False
    facet_count: dict = {}
    for c in f.cones:
        for fc in facets_as_cones(c):
            facet_count[fc.key()] = facet_count.get(fc.key(), 0) + 1
    for c in f.cones:
        for fc in facets_as_cones(c):
            if on_relative_boundary(k, fc.relint_point()):
                continue
            if facet_count[fc.key()] < 2:
                return False
    return True


def fan_union_hull(f: Fan) -> Cone:
    gens = [g for c in f.cones for g in c.generators]
    return cone_from_generators(gens, f.ambient_dim)
