"""Effective cone, movable cone and the Mori/GIT chamber complex of a grading."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .cones import (
    Cone,
    Fan,
    cone_from_generators,
    cone_from_inequalities,
    contains_cone,
    face_of_point,
    facets_as_cones,
    intersect,
    intersect_all,
    is_face,
    make_fan,
    membership,
    on_relative_boundary,
)
from .errors import (
    DimensionMismatch,
    InternalInconsistency,
    InvariantViolation,
    NoProjectiveModel,
    NotAFacet,
)
from .linalg import lattice_kernel, primitive, rank
from .supports import SupportFamily, minimal_supports, subset_cone

IntVec = tuple[int, ...]


@dataclass(frozen=True)
class DegreeMatrix:
    """Degrees ``w_1..w_n`` in ``Z^r`` of the Cox ring generators.

    Generator indices are 1-based everywhere in the public API.
    """

    columns: tuple[IntVec, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        cols = tuple(tuple(int(x) for x in c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise InvariantViolation("degree matrix has no columns")
        r = len(cols[0])
        for i, c in enumerate(cols, 1):
            if len(c) != r:
                raise InvariantViolation(f"column {i} has length {len(c)}, expected {r}", column=i)
            # Rank 0 arises only as the target of a contraction in rank 1.
            if r and not any(c):
                raise InvariantViolation(f"column {i} is zero", column=i)
        if rank(cols) != r:
            raise InvariantViolation(f"columns span a space of rank {rank(cols)} < {r}")
        labels = tuple(self.labels) or tuple(f"x{i}" for i in range(1, len(cols) + 1))
        if len(labels) != len(cols):
            raise InvariantViolation(f"{len(labels)} labels for {len(cols)} columns")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def r(self) -> int:
        return len(self.columns[0])

    def matrix(self) -> list[list[int]]:
        return [[c[k] for c in self.columns] for k in range(self.r)]

    def column(self, i: int) -> IntVec:
        return self.columns[i - 1]

    def subset_cone(self, subset) -> Cone:
        return subset_cone(self.columns, tuple(sorted(subset)))

    def deletion_cone(self, i: int) -> Cone:
        return self.subset_cone(j for j in range(1, self.n + 1) if j != i)

    def supports(self, chi) -> SupportFamily:
        return minimal_supports(self.columns, chi)


@dataclass(frozen=True)
class Chamber:
    id: str
    cone: Cone
    in_mov: bool
    exc_indices: tuple[int, ...]
    minimal_supports: SupportFamily


@dataclass(frozen=True)
class WallType:
    kind: str  # "flip" | "divisorial" | "fiber"
    target: Optional[str] = None
    index: Optional[int] = None

    @property
    def label(self) -> str:
        if self.kind == "divisorial":
            return f"divisorial:{self.index}"
        return self.kind


@dataclass(frozen=True)
class Wall:
    first: str
    second: Optional[str]  # None when the wall lies on the boundary of Eff
    face: Cone
    wall_type: Optional[WallType]  # None unless one side is a movable chamber

    @property
    def label(self) -> str:
        return self.wall_type.label if self.wall_type else "wall"


@dataclass(frozen=True)
class ChamberComplex:
    degrees: DegreeMatrix
    eff: Cone
    mov: Cone
    chambers: tuple[Chamber, ...]
    walls: tuple[Wall, ...]

    def chamber(self, cid: str) -> Chamber:
        for c in self.chambers:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def movable_chambers(self) -> list[Chamber]:
        return [c for c in self.chambers if c.in_mov]

    def neighbor(self, cid: str, facet: Cone) -> Optional[Chamber]:
        for c in self.chambers:
            if c.id != cid and facet in facets_as_cones(c.cone):
                return c
        return None

    def chamber_of_interior_point(self, x) -> Optional[Chamber]:
        for c in self.chambers:
            if membership(c.cone, x, "relative_interior"):
                return c
        return None


def effective_cone(d: DegreeMatrix) -> Cone:
    return cone_from_generators(d.columns, d.r)


def moving_cone(d: DegreeMatrix) -> Cone:
    """Intersection of the cones spanned by all but one generator degree."""
    return intersect_all([d.deletion_cone(i) for i in range(1, d.n + 1)], d.r)


def git_cone(d: DegreeMatrix, w) -> Cone:
    """``λ(w)``: intersection of all subset cones containing ``w``."""
    fam = d.supports(w)
    if fam.is_empty:
        raise ValueError(f"{tuple(w)} lies outside the effective cone")
    return intersect_all([d.subset_cone(s) for s in fam.minimal_supports], d.r)


def candidate_walls(d: DegreeMatrix) -> list[IntVec]:
    """Normals of hyperplanes spanned by ``r - 1`` generator degrees."""
    r = d.r
    distinct = sorted(set(d.columns))
    out = set()
    for sub in combinations(distinct, r - 1):
        if sub and rank(sub) != r - 1:
            continue
        ker = lattice_kernel([list(v) for v in sub], ncols=r)
        if len(ker) != 1:
            continue
        v = primitive(ker[0])
        lead = next(x for x in v if x)
        out.add(v if lead > 0 else tuple(-x for x in v))
    return sorted(out)


def _split(cells: list[Cone], h: IntVec) -> list[Cone]:
    out = []
    for c in cells:
        vals = [sum(a * b for a, b in zip(h, g)) for g in c.generators]
        if any(v > 0 for v in vals) and any(v < 0 for v in vals):
            neg = tuple(-x for x in h)
            out.append(intersect(c, cone_from_inequalities([h], dim=len(h))))
            out.append(intersect(c, cone_from_inequalities([neg], dim=len(h))))
        else:
            out.append(c)
    return out


def exceptional_indices(d: DegreeMatrix, c: Cone) -> tuple[int, ...]:
    return tuple(i for i in range(1, d.n + 1) if not contains_cone(d.deletion_cone(i), c))


def chamber_complex(d: DegreeMatrix, require_model: bool = True) -> ChamberComplex:
    """Full-dimensional GIT chambers of the effective cone.

    Cells of the arrangement of candidate walls inside Eff are labelled by
    ``λ`` of an interior sample point; distinct labels are the chambers.
    """
    eff = effective_cone(d)
    mov = moving_cone(d)
    if d.r == 0:
        point = Chamber("C0", eff, True, (), d.supports(()))
        return ChamberComplex(d, eff, mov, (point,), ())
    cells = [eff]
    for h in candidate_walls(d):
        cells = _split(cells, h)
    found: dict = {}
    for cell in cells:
        w = cell.relint_point()
        if not membership(cell, w, "relative_interior"):
            raise InternalInconsistency(f"arrangement cell {cell} is not pointed")
        if any(membership(c, w, "relative_interior") for c in found.values()):
            continue
        lam = git_cone(d, w)
        if not lam.is_full_dimensional or not contains_cone(lam, cell):
            raise InternalInconsistency(f"GIT cone of {w} does not contain its cell")
        found[lam.key()] = lam
    cones = [found[k] for k in sorted(found)]
    chambers = []
    for k, c in enumerate(cones):
        in_mov = contains_cone(mov, c)
        exc = exceptional_indices(d, c)
        if in_mov != (not exc):
            raise InternalInconsistency(f"chamber {c}: in_mov={in_mov} but exc={exc}")
        chambers.append(Chamber(f"C{k}", c, in_mov, exc, d.supports(c.relint_point())))
    if require_model and not any(c.in_mov for c in chambers):
        raise NoProjectiveModel("no full-dimensional chamber lies in the movable cone")
    cc = ChamberComplex(d, eff, mov, tuple(chambers), ())
    return ChamberComplex(d, eff, mov, tuple(chambers), tuple(_walls(cc)))


def _walls(cc: ChamberComplex) -> list[Wall]:
    seen = {}
    for ch in cc.chambers:
        for f in facets_as_cones(ch.cone):
            far = cc.neighbor(ch.id, f)
            ids = tuple(sorted([ch.id, far.id])) if far else (ch.id, None)
            key = (ids, f.key())
            if key in seen:
                continue
            wt = None
            mov_side = ch if ch.in_mov else (far if far is not None and far.in_mov else None)
            if mov_side is not None:
                wt = classify_wall(cc, mov_side.id, f)
            seen[key] = Wall(ids[0], ids[1], f, wt)
    return [seen[k] for k in sorted(seen, key=lambda k: (k[0][0], k[0][1] or "~", k[1]))]


def classify_wall(cc: ChamberComplex, chamber_id: str, facet: Cone) -> WallType:
    """Type of the elementary contraction across a facet of a movable chamber."""
    ch = cc.chamber(chamber_id)
    if not ch.in_mov:
        raise ValueError(f"chamber {chamber_id} is not in the movable cone")
    if facet not in facets_as_cones(ch.cone):
        raise NotAFacet(f"{facet} is not a facet of chamber {chamber_id}")
    far = cc.neighbor(chamber_id, facet)
    if far is not None and far.in_mov:
        return WallType("flip", target=far.id)
    p = facet.relint_point()
    if on_relative_boundary(cc.eff, p):
        return WallType("fiber")
    if far is None:
        raise InternalInconsistency(f"facet {facet} has no far chamber but is interior to Eff")
    if not on_relative_boundary(cc.mov, p):
        raise InternalInconsistency(f"facet {facet} separates Mov from a non-movable chamber")
    gained = sorted(set(far.exc_indices) - set(ch.exc_indices))
    if len(gained) != 1 or len(far.exc_indices) != 1:
        raise InternalInconsistency(f"divisorial wall gains exceptional indices {gained}")
    return WallType("divisorial", target=far.id, index=gained[0])


def mov_fan(cc: ChamberComplex) -> Fan:
    chs = cc.movable_chambers
    return make_fan([c.cone for c in chs], [c.id for c in chs], cc.degrees.r)


@dataclass(frozen=True)
class Location:
    kind: str  # "interior" | "face" | "outside_eff"
    chambers: tuple[str, ...] = ()
    face: Optional[Cone] = None


def locate_class(cc: ChamberComplex, x) -> Location:
    if len(x) != cc.degrees.r:
        raise DimensionMismatch(f"class of length {len(x)} in rank {cc.degrees.r}")
    if not membership(cc.eff, x):
        return Location("outside_eff")
    containing = [c for c in cc.chambers if membership(c.cone, x)]
    if not containing:
        raise InternalInconsistency(f"{tuple(x)} is in Eff but in no chamber")
    face = face_of_point(containing[0].cone, x)
    if len(containing) == 1 and face == containing[0].cone:
        return Location("interior", (containing[0].id,), face)
    for c in containing[1:]:
        if face_of_point(c.cone, x) != face:
            raise InternalInconsistency("chambers meet in a non-face")
    return Location("face", tuple(c.id for c in containing), face)


def designated_chamber(cc: ChamberComplex, point=None) -> Chamber:
    """The movable chamber containing ``point`` in its interior, else the first one."""
    if point is not None:
        ch = cc.chamber_of_interior_point(point)
        if ch is None or not ch.in_mov:
            raise ValueError(f"{tuple(point)} is not interior to a movable chamber")
        return ch
    movable = cc.movable_chambers
    if not movable:
        raise NoProjectiveModel("no movable chamber")
    return movable[0]


def face_in_complex(cc: ChamberComplex, face: Cone, movable_only: bool = True) -> list[Chamber]:
    """Chambers having ``face`` as a face."""
    pool = cc.movable_chambers if movable_only else cc.chambers
    return [c for c in pool if is_face(face, c.cone)]
