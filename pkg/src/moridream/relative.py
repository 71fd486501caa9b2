"""Relative cones and fans over a face of a nef chamber.

A face ``σ`` of a movable chamber is the pullback of the nef cone of the
contraction ``f : X -> Y`` it defines. Classes pulled back from ``Y`` span
``span(σ)``, so relative positivity over ``Y`` is read off in the quotient
``N^1(X) / span(σ)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .chambers import Chamber, ChamberComplex, designated_chamber, face_in_complex, mov_fan
from .cones import (
    Cone,
    Fan,
    cone_from_generators,
    fan_support_equals,
    fan_validate,
    is_face,
    make_fan,
    project,
)
from .errors import NotAFaceOfNefCone
from .linalg import saturated_quotient


@dataclass(frozen=True)
class RelativeContext:
    base_face: Cone
    quotient_map: tuple[tuple[int, ...], ...]
    star: tuple[str, ...]  # ids of movable chambers having base_face as a face

    @property
    def relative_dim(self) -> int:
        return len(self.quotient_map)


@dataclass(frozen=True)
class AxiomReport:
    q_factorial_model_exists: bool
    nef_polyhedral: bool
    mov_covered_by_sqm_nef_cones: bool
    fan_valid: bool

    @property
    def all_true(self) -> bool:
        return (
            self.q_factorial_model_exists
            and self.nef_polyhedral
            and self.mov_covered_by_sqm_nef_cones
            and self.fan_valid
        )


def _as_face(cc: ChamberComplex, sigma) -> Cone:
    if isinstance(sigma, Cone):
        return sigma
    return cone_from_generators(list(sigma), cc.degrees.r)


def relative_context(cc: ChamberComplex, sigma_generators: Sequence) -> RelativeContext:
    sigma = _as_face(cc, sigma_generators)
    star = face_in_complex(cc, sigma)
    if not star:
        raise NotAFaceOfNefCone(f"{sigma} is not a face of any movable chamber")
    q = saturated_quotient(sigma.generators, cc.degrees.r)
    return RelativeContext(sigma, tuple(tuple(row) for row in q), tuple(c.id for c in star))


def relative_cone(ctx: RelativeContext, c: Cone) -> Cone:
    return project(c, ctx.quotient_map)


def relative_nef(ctx: RelativeContext, cc: ChamberComplex, point=None) -> Cone:
    """Relative nef cone of the model of the designated chamber (or the first star chamber)."""
    chosen: Optional[Chamber] = None
    try:
        chosen = designated_chamber(cc, point)
    except ValueError:
        chosen = None
    if chosen is None or chosen.id not in ctx.star:
        chosen = cc.chamber(ctx.star[0])
    return relative_cone(ctx, chosen.cone)


def relative_mov_fan(ctx: RelativeContext, cc: ChamberComplex, star: Optional[Sequence[str]] = None) -> Fan:
    """Projection of ``Star(σ)``; ``star`` overrides the chambers used."""
    ids = list(ctx.star if star is None else star)
    images, labels = {}, {}
    for cid in ids:
        img = relative_cone(ctx, cc.chamber(cid).cone)
        images.setdefault(img.key(), img)
        labels.setdefault(img.key(), cid)
    keys = sorted(images)
    return make_fan([images[k] for k in keys], [labels[k] for k in keys], ctx.relative_dim)


def factor_check(cc: ChamberComplex, sigma1, sigma2) -> bool:
    """Whether the contraction of ``sigma1`` factors through that of ``sigma2``.

    True exactly when ``sigma2`` is a face of ``sigma1``.
    """
    s1, s2 = _as_face(cc, sigma1), _as_face(cc, sigma2)
    for s in (s1, s2):
        if not face_in_complex(cc, s):
            raise NotAFaceOfNefCone(f"{s} is not a face of any movable chamber")
    return is_face(s2, s1)


def mdm_axiom_report(ctx: RelativeContext, cc: ChamberComplex, star: Optional[Sequence[str]] = None) -> AxiomReport:
    fan = relative_mov_fan(ctx, cc, star)
    rel_mov = relative_cone(ctx, cc.mov)
    return AxiomReport(
        q_factorial_model_exists=any(c.is_full_dimensional for c in fan.cones),
        # Every projected cone is the image of a finitely generated cone.
        nef_polyhedral=True,
        mov_covered_by_sqm_nef_cones=fan_support_equals(fan, rel_mov),
        fan_valid=fan_validate(fan).ok,
    )


def all_movable_faces(cc: ChamberComplex) -> list[Cone]:
    """Every face of every movable chamber, without repetition."""
    out = {}
    for f in mov_fan(cc).all_cones():
        out[f.key()] = f
    return [out[k] for k in sorted(out)]
