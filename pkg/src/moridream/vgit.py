"""Variation of GIT quotients for a diagonal torus acting on affine space.

The torus with character lattice ``Z^r`` acts on ``A^n`` with weights given by
the columns of a degree matrix. For such actions a point's stability depends
only on its support, so semistable loci are encoded by :class:`SupportFamily`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations, product
from math import lcm
from typing import Optional, Sequence

from .chambers import ChamberComplex, DegreeMatrix, chamber_complex, effective_cone
from .cones import Cone, faces, membership
from .errors import DimensionMismatch
from .linalg import dot, hermite_normal_form, rank
from .supports import SupportFamily, minimal_supports


def weight_cone(d: DegreeMatrix) -> Cone:
    """Characters with a nonzero invariant section: the cone over the weights."""
    return effective_cone(d)


def semistable_supports(d: DegreeMatrix, chi: Sequence) -> SupportFamily:
    if len(chi) != d.r:
        raise DimensionMismatch(f"character of length {len(chi)} in rank {d.r}")
    return minimal_supports(d.columns, chi)


def git_equivalent(d: DegreeMatrix, chi1: Sequence, chi2: Sequence) -> bool:
    return semistable_supports(d, chi1) == semistable_supports(d, chi2)


@dataclass(frozen=True)
class StabilityReport:
    ss_equals_s: bool
    unstable_codim: Optional[int]  # None: the unstable locus is empty
    weight_cone_member: bool
    isotropy_bound: Optional[int] = None

    def codim_at_least(self, k: int) -> bool:
        return self.unstable_codim is None or self.unstable_codim >= k


def _lattice_index(vectors) -> int:
    """Index of the lattice spanned by full-rank ``vectors`` in Z^r."""
    H, _ = hermite_normal_form([list(v) for v in vectors])
    out = 1
    for k, row in enumerate(r for r in H if any(r)):
        out *= next(x for x in row if x)
    return out


def stability_report(d: DegreeMatrix, chi: Sequence) -> StabilityReport:
    fam = semistable_supports(d, chi)
    stable = True
    for s in fam.minimal_supports:
        cols = [d.column(i) for i in s]
        if not cols or rank(cols) < d.r or not membership(d.subset_cone(s), chi, "relative_interior"):
            stable = False
            break
    largest_unstable = -1
    for size in range(d.n, -1, -1):
        if any(not fam.is_semistable(s) for s in combinations(range(1, d.n + 1), size)):
            largest_unstable = size
            break
    codim = None if largest_unstable < 0 else d.n - largest_unstable
    bound = None
    if stable and fam.minimal_supports:
        bound = 1
        for s in fam.minimal_supports:
            bound = lcm(bound, _lattice_index([d.column(i) for i in s]))
    return StabilityReport(stable and not fam.is_empty, codim, not fam.is_empty, bound)


@dataclass(frozen=True)
class GitChamberView:
    complex: ChamberComplex
    families: tuple[tuple[str, SupportFamily], ...]
    full_dimensional: bool
    interiors_equivalent: bool
    boundary_containment: bool

    @property
    def verified(self) -> bool:
        return self.full_dimensional and self.interiors_equivalent and self.boundary_containment


def git_chambers(d: DegreeMatrix, require_model: bool = False) -> GitChamberView:
    """Chamber complex labelled by semistable support families, with checks.

    The checks are: every chamber is full-dimensional; distinct chambers have
    distinct interior families while the family is constant on each interior
    (sampled at the interior point and at interior points of each facet
    direction); and on every face the family is coarser than in the interior.
    """
    cc = chamber_complex(d, require_model=require_model)
    fams = tuple((c.id, c.minimal_supports) for c in cc.chambers)
    full = all(c.cone.is_full_dimensional for c in cc.chambers)
    interiors = len({f for _, f in fams}) == len(fams)
    for c in cc.chambers:
        p = c.cone.relint_point()
        for ray in c.cone.rays:
            q = tuple(2 * x + y for x, y in zip(p, ray))
            if semistable_supports(d, q) != c.minimal_supports:
                interiors = False
    containment = True
    for c in cc.chambers:
        for f in faces(c.cone):
            if not c.minimal_supports.refines(semistable_supports(d, f.relint_point())):
                containment = False
    return GitChamberView(cc, fams, full, interiors, containment)


def support_is_stable(d: DegreeMatrix, chi: Sequence, support) -> bool:
    """Finite stabilizers and closed orbits for points with this support."""
    cols = [d.column(i) for i in support]
    return bool(cols) and rank(cols) == d.r and membership(d.subset_cone(support), chi, "relative_interior")


@dataclass(frozen=True)
class HilbertMumfordVerdict:
    support: tuple[int, ...]
    destabilized: bool  # some λ in the box has a limit and <λ, chi> < 0
    not_stable: bool  # some nonzero λ in the box has a limit and <λ, chi> <= 0


def hilbert_mumford(d: DegreeMatrix, chi: Sequence, bound: int = 5) -> list[HilbertMumfordVerdict]:
    """Brute-force one-parameter-subgroup test on every support.

    A cocharacter ``λ`` with ``<λ, w_i> >= 0`` on the support has a limit;
    it destabilizes when ``<λ, chi> < 0`` and rules out stability when
    ``<λ, chi> <= 0``. Only ``λ`` in ``[-bound, bound]^r`` are tried, so the
    absence of a witness is not a proof.
    """
    lams = [l for l in product(range(-bound, bound + 1), repeat=d.r) if any(l)]
    pairings = [([dot(l, w) for w in d.columns], dot(l, chi)) for l in lams]
    out = []
    for size in range(d.n + 1):
        for s in combinations(range(1, d.n + 1), size):
            unstable = not_stable = False
            for pr, c in pairings:
                if all(pr[i - 1] >= 0 for i in s):
                    if c < 0:
                        unstable = not_stable = True
                        break
                    if c == 0:
                        not_stable = True
            out.append(HilbertMumfordVerdict(s, unstable, not_stable))
    return out


def hilbert_mumford_agrees(d: DegreeMatrix, chi: Sequence, bound: int = 5) -> bool:
    """Compare the brute-force test with the support-cone criterion.

    Returns False when the oracle found a witness contradicting the
    criterion. When the criterion says unstable (or not stable) but no
    witness exists within the bound, the oracle is inconclusive and only a
    warning is issued.
    """
    fam = semistable_supports(d, chi)
    ok = True
    for v in hilbert_mumford(d, chi, bound):
        ss = fam.is_semistable(v.support)
        st = ss and support_is_stable(d, chi, v.support)
        if (v.destabilized and ss) or (v.not_stable and st):
            ok = False
        if (not ss and not v.destabilized) or (not st and not v.not_stable):
            warnings.warn(f"no witness within bound {bound} for support {v.support} and character {tuple(chi)}")
    return ok
