"""Toric models via Gale duality: divisor polytopes, fixed parts, model fans.

These computations never look at the chamber complex; they go through
monomials of the Cox ring and serve as an independent check on it.

Over an affine (non-point) base the divisor polyhedra are unbounded, and
``section_count`` counts generators of the section module over the degree-0
invariants, which equals ``h^0`` when the base is a point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .chambers import ChamberComplex, DegreeMatrix, designated_chamber, effective_cone, moving_cone
from .cones import Fan, membership
from .errors import BudgetExceeded, InternalInconsistency, NonIntegralLift, NotBig, NotEffective
from .linalg import dot, integer_kernel_basis, integer_solve, primitive
from .polytope import DEFAULT_POINT_BUDGET, Polytope, normal_fan, polytope_build

DEFAULT_MULTIPLE_BOUND = 12


@dataclass(frozen=True)
class GaleData:
    """Rays ``v_i`` (columns of the saturated kernel of the degree matrix)."""

    kernel: tuple[tuple[int, ...], ...]
    rays: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.kernel)


def gale_dual(d: DegreeMatrix) -> GaleData:
    K = integer_kernel_basis(d.matrix())
    rays = tuple(tuple(row[i] for row in K) for i in range(d.n))
    return GaleData(tuple(tuple(row) for row in K), rays)


@dataclass(frozen=True)
class DivisorPolytope:
    divisor_class: tuple[int, ...]
    lift: tuple[int, ...]
    polytope: Polytope
    points: tuple[tuple[int, ...], ...]

    @property
    def section_count(self) -> int:
        return len(self.points)

    def exponents(self, g: GaleData) -> list[tuple[int, ...]]:
        """Monomial exponent vectors ``a + K^T m`` of the listed sections."""
        return [tuple(dot(v, m) + a for v, a in zip(g.rays, self.lift)) for m in self.points]


def _integral(cls) -> tuple[int, ...]:
    fr = [Fraction(x) for x in cls]
    if any(x.denominator != 1 for x in fr):
        raise NonIntegralLift(f"class {tuple(cls)} is not a lattice class")
    return tuple(int(x) for x in fr)


def divisor_polytope(g: GaleData, d: DegreeMatrix, cls: Sequence, budget: int = DEFAULT_POINT_BUDGET) -> DivisorPolytope:
    cls = _integral(cls)
    lift = integer_solve(d.matrix(), cls)
    if lift is None:
        raise NonIntegralLift(f"class {cls} has no integral lift")
    P = polytope_build([(v, a) for v, a in zip(g.rays, lift)], g.dim)
    return DivisorPolytope(cls, tuple(lift), P, tuple(P.lattice_generators(budget)))


def movable_fixed_decomposition(
    g: GaleData, d: DegreeMatrix, cls: Sequence, budget: int = DEFAULT_POINT_BUDGET
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ``cls = M + sum F_i w_i`` with ``F_i`` the order of vanishing of
    every section along the ``i``-th toric divisor."""
    dp = divisor_polytope(g, d, cls, budget)
    if not dp.points:
        raise NotEffective(f"class {dp.divisor_class} has no sections")
    exps = dp.exponents(g)
    fixed = tuple(min(e[i] for e in exps) for i in range(d.n))
    moving = tuple(c - sum(f * w[k] for f, w in zip(fixed, d.columns)) for k, c in enumerate(dp.divisor_class))
    return moving, fixed


def _lattice_multiple(d: DegreeMatrix, p: Sequence[int]) -> tuple[int, ...]:
    for k in range(1, 10**6):
        cand = tuple(k * x for x in p)
        if integer_solve(d.matrix(), cand) is not None:
            return cand
    raise InternalInconsistency("no lattice multiple found")


def model_fan(g: GaleData, d: DegreeMatrix, cc: ChamberComplex, chamber_id: str, budget: int = DEFAULT_POINT_BUDGET) -> Fan:
    """Fan of the model attached to a chamber: normal fan of a generic interior class.

    Two interior classes are tried and must agree.
    """
    cone = cc.chamber(chamber_id).cone
    first = cone.interior_point()
    second = [0] * cone.ambient_dim
    for j, r in enumerate(cone.rays):
        second = [x + (j + 1) * y for x, y in zip(second, r)]
    fans = []
    for p in (first, primitive(second)):
        cls = tuple(2 * x for x in _lattice_multiple(d, p))
        dp = divisor_polytope(g, d, cls, budget)
        fans.append(normal_fan(dp.polytope))
    if fans[0].key() != fans[1].key():
        raise InternalInconsistency(f"chamber {chamber_id} has two different model fans")
    return fans[0]


def mori_equivalent(g: GaleData, d: DegreeMatrix, cls1: Sequence, cls2: Sequence) -> bool:
    eff = effective_cone(d)
    for c in (cls1, cls2):
        if not membership(eff, c, "relative_interior"):
            raise NotBig(f"class {tuple(c)} is not in the interior of Eff")
    f1 = normal_fan(divisor_polytope(g, d, cls1).polytope)
    f2 = normal_fan(divisor_polytope(g, d, cls2).polytope)
    return f1.key() == f2.key()


class BaseLocus(enum.Enum):
    SEMIAMPLE = "semiample"
    MOVABLE_NOT_SEMIAMPLE = "movable_not_semiample"
    CODIM1_FIXED = "codim1_fixed"
    NOT_EFFECTIVE = "not_effective"


def fixed_part_vanishes_at(
    g: GaleData, d: DegreeMatrix, cls: Sequence, max_multiple: int = DEFAULT_MULTIPLE_BOUND,
    budget: int = DEFAULT_POINT_BUDGET,
) -> Optional[int]:
    """Smallest ``m <= max_multiple`` with ``F(m * cls) = 0``, or None."""
    for m in range(1, max_multiple + 1):
        mult = tuple(m * x for x in cls)
        try:
            _, fixed = movable_fixed_decomposition(g, d, mult, budget)
        except (NotEffective, NonIntegralLift):
            continue
        if not any(fixed):
            return m
    return None


def base_locus_class(
    g: GaleData, d: DegreeMatrix, cc: ChamberComplex, cls: Sequence,
    designated=None, max_multiple: int = DEFAULT_MULTIPLE_BOUND, budget: int = DEFAULT_POINT_BUDGET,
) -> BaseLocus:
    """Classify the stable base locus of a lattice class on the designated model.

    ``designated`` is an interior point of the designated movable chamber
    (default: the first movable chamber). The polytope verdict is checked
    against cone membership and a mismatch is raised, never resolved.
    """
    cls = _integral(cls)
    if not membership(cc.eff, cls):
        return BaseLocus.NOT_EFFECTIVE
    in_mov = membership(cc.mov, cls)
    nef = designated_chamber(cc, designated).cone
    m = fixed_part_vanishes_at(g, d, cls, max_multiple, budget)
    if m is None:
        if in_mov:
            raise BudgetExceeded(f"class {cls} is movable but F(m*D) != 0 for all m <= {max_multiple}")
        return BaseLocus.CODIM1_FIXED
    if not in_mov:
        raise InternalInconsistency(f"class {cls} has a free multiple but lies outside Mov")
    if membership(nef, cls):
        return BaseLocus.SEMIAMPLE
    return BaseLocus.MOVABLE_NOT_SEMIAMPLE
