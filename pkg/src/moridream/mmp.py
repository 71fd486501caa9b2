"""Divisor-directed MMP as a straight-line walk through the chamber complex.

Starting from an ample class ``a`` in a movable chamber, the segment from
``a`` to the target class ``d`` is followed. Each wall it crosses is an
elementary contraction that is negative for ``d``: a flip moves to the
neighbouring movable chamber, a divisorial contraction passes to the
quotient grading, and a wall on the boundary of Eff ends the walk in a Mori
fibre space. Reaching a chamber whose closure contains ``d`` gives a good
minimal model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .chambers import (
    ChamberComplex,
    DegreeMatrix,
    chamber_complex,
    classify_wall,
)
from .cones import Cone, cone_from_generators, membership
from .errors import AmpleNotInterior, InternalInconsistency, NotContractible
from .linalg import dot, matvec, saturated_quotient

MAX_PERTURBATIONS = 64

RatVec = tuple[Fraction, ...]


@dataclass(frozen=True)
class MMPStep:
    kind: str  # "flip" | "divisorial" | "fiber"
    stage: int
    chamber: str
    target: Optional[str]
    crossing_point: RatVec
    wall: Cone
    contracted_index: Optional[int] = None
    contracted_label: Optional[str] = None
    reduced: Optional[DegreeMatrix] = None
    quotient_map: Optional[tuple[tuple[int, ...], ...]] = None


@dataclass(frozen=True)
class Outcome:
    kind: str  # "good_minimal_model" | "mori_fiber_space"
    stage: int
    chamber: Optional[str] = None
    final_class: Optional[RatVec] = None
    wall: Optional[Cone] = None


@dataclass(frozen=True)
class MMPTrace:
    input_class: RatVec
    start_chamber: str
    ample: RatVec
    steps: tuple[MMPStep, ...]
    outcome: Outcome
    perturbation: Optional[int] = None  # attempt number k when a was perturbed
    requested_ample: Optional[RatVec] = None


class _NonGeneric(Exception):
    pass


def _vec(v) -> RatVec:
    return tuple(Fraction(x) for x in v)


def divisorial_reduction(cc: ChamberComplex, i: int) -> tuple[DegreeMatrix, list[list[int]]]:
    """Grading of the model obtained by contracting the ``i``-th divisor.

    Returns the reduced degree matrix (generator ``i`` dropped, the others
    pushed to the quotient lattice) and the saturated quotient map whose
    kernel is the line through ``w_i``. Generators whose degree becomes zero
    are functions on the base and are dropped as well.
    """
    if not any(w.wall_type and w.wall_type.kind == "divisorial" and w.wall_type.index == i for w in cc.walls):
        raise NotContractible(f"generator {i} is not contracted across any divisorial wall")
    d = cc.degrees
    q = saturated_quotient([d.column(i)], d.r)
    keep = [j for j in range(1, d.n + 1) if j != i and (not q or any(matvec(q, d.column(j))))]
    cols = tuple(tuple(matvec(q, d.column(j))) if q else () for j in keep)
    labels = tuple(d.labels[j - 1] for j in keep)
    try:
        reduced = DegreeMatrix(cols, labels)
    except ValueError as exc:
        raise InternalInconsistency(f"contracting generator {i} gives an invalid grading: {exc}") from exc
    return reduced, q


def _walk(cc: ChamberComplex, start: str, a: RatVec, d: RatVec, stage: int, budget: list[int]):
    steps: list[MMPStep] = []
    ch = cc.chamber(start)
    t_cur = Fraction(0)
    direction = [y - x for x, y in zip(a, d)]
    while True:
        if membership(ch.cone, d):
            return steps, Outcome("good_minimal_model", stage, ch.id, d)
        budget[0] -= 1
        if budget[0] < 0:
            raise InternalInconsistency("MMP exceeded the chamber-count termination bound")
        best, tight = None, []
        for n in ch.cone.facets:
            slope = dot(n, direction)
            if slope >= 0:
                continue
            t = Fraction(dot(n, a)) / -slope
            if best is None or t < best:
                best, tight = t, [n]
            elif t == best:
                tight.append(n)
        if best is None:
            raise InternalInconsistency(f"segment never leaves chamber {ch.id} but misses the target")
        if len(tight) != 1 or best <= t_cur:
            raise _NonGeneric
        p = tuple(x + best * v for x, v in zip(a, direction))
        rays = [r for r in ch.cone.rays if dot(tight[0], r) == 0]
        lin = list(ch.cone.lineality) + [tuple(-x for x in l) for l in ch.cone.lineality]
        wall = cone_from_generators(rays + lin, cc.degrees.r)
        wt = classify_wall(cc, ch.id, wall)
        if wt.kind == "flip":
            steps.append(MMPStep("flip", stage, ch.id, wt.target, p, wall))
            ch = cc.chamber(wt.target)
            t_cur = best
            continue
        if wt.kind == "fiber":
            steps.append(MMPStep("fiber", stage, ch.id, None, p, wall))
            return steps, Outcome("mori_fiber_space", stage, ch.id, None, wall)
        reduced, q = divisorial_reduction(cc, wt.index)
        steps.append(
            MMPStep(
                "divisorial", stage, ch.id, wt.target, p, wall,
                contracted_index=wt.index,
                contracted_label=cc.degrees.labels[wt.index - 1],
                reduced=reduced,
                quotient_map=tuple(tuple(row) for row in q),
            )
        )
        cc2 = chamber_complex(reduced)
        a2 = tuple(matvec(q, p)) if q else ()
        d2 = tuple(matvec(q, d)) if q else ()
        nxt = cc2.chamber_of_interior_point(a2)
        if nxt is None or not nxt.in_mov:
            raise _NonGeneric
        budget[0] += len(cc2.chambers)
        more, outcome = _walk(cc2, nxt.id, a2, d2, stage + 1, budget)
        return steps + more, outcome


def _perturbation(cone: Cone, k: int) -> list[int]:
    out = [0] * cone.ambient_dim
    for j, r in enumerate(cone.rays):
        w = (j + 1) ** k
        out = [x + w * y for x, y in zip(out, r)]
    return out


def run_mmp(cc: ChamberComplex, start: str, d: Sequence, a: Optional[Sequence] = None) -> MMPTrace:
    """Run the MMP for the class ``d`` from the model of chamber ``start``.

    ``a`` defaults to the canonical interior point of the start chamber. If
    the segment meets a face of codimension two or more, ``a`` is moved to
    ``a + δ/2^k`` for a deterministic interior direction ``δ`` and the walk
    is repeated; the attempt number is recorded on the trace.
    """
    ch = cc.chamber(start)
    if not ch.in_mov:
        raise ValueError(f"chamber {start} is not in the movable cone")
    d = _vec(d)
    if len(d) != cc.degrees.r:
        raise ValueError(f"class of length {len(d)} in rank {cc.degrees.r}")
    requested = None if a is None else _vec(a)
    a0 = _vec(ch.cone.interior_point()) if a is None else requested
    if not membership(ch.cone, a0, "relative_interior"):
        raise AmpleNotInterior(f"{a0} is not interior to chamber {start}")
    for k in range(MAX_PERTURBATIONS + 1):
        if k == 0:
            ak = a0
        else:
            delta = _perturbation(ch.cone, k)
            eps = Fraction(1, 2**k)
            ak = tuple(x + eps * y for x, y in zip(a0, delta))
        budget = [len(cc.chambers)]
        try:
            steps, outcome = _walk(cc, start, ak, d, 0, budget)
        except _NonGeneric:
            continue
        return MMPTrace(d, start, ak, tuple(steps), outcome, k or None, requested)
    raise InternalInconsistency("no generic perturbation of the ample class was found")


def replay_trace(cc: ChamberComplex, trace: MMPTrace) -> Outcome:
    """Re-apply the recorded steps, checking each one, and return the outcome."""
    stage_cc, ch = cc, cc.chamber(trace.start_chamber)
    d = trace.input_class
    for step in trace.steps:
        if step.chamber != ch.id:
            raise InternalInconsistency(f"step starts in {step.chamber}, walk is in {ch.id}")
        if not membership(step.wall, step.crossing_point):
            raise InternalInconsistency("crossing point is off the recorded wall")
        wt = classify_wall(stage_cc, ch.id, step.wall)
        if wt.kind != step.kind:
            raise InternalInconsistency(f"wall re-classified as {wt.kind}, trace says {step.kind}")
        if step.kind == "fiber":
            return Outcome("mori_fiber_space", step.stage, ch.id, None, step.wall)
        if step.kind == "flip":
            ch = stage_cc.chamber(wt.target)
            continue
        reduced, q = divisorial_reduction(stage_cc, wt.index)
        if reduced != step.reduced or tuple(map(tuple, q)) != step.quotient_map:
            raise InternalInconsistency("divisorial reduction differs from the trace")
        stage_cc = chamber_complex(reduced)
        p = tuple(matvec(q, step.crossing_point)) if q else ()
        d = tuple(matvec(q, d)) if q else ()
        ch = stage_cc.chamber_of_interior_point(p)
    if not membership(ch.cone, d):
        raise InternalInconsistency("trace ends before reaching the target class")
    stage = trace.steps[-1].stage + (trace.steps[-1].kind == "divisorial") if trace.steps else 0
    return Outcome("good_minimal_model", stage, ch.id, tuple(d))
