"""Canonical JSON and DOT rendering of computed objects.

Rationals are written as ``"p/q"`` strings (``q > 0``, reduced; integers as
``"p"``); integral cone data is written as JSON integers. Keys are sorted, so
identical input gives byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .chambers import Chamber, ChamberComplex, DegreeMatrix, Wall, WallType
from .cones import Cone, Fan
from .mmp import MMPStep, MMPTrace, Outcome
from .supports import SupportFamily


def rat(x) -> str:
    return str(Fraction(x))


def ratvec(v) -> list[str]:
    return [rat(x) for x in v]


def parse_rat(s) -> Fraction:
    return Fraction(s)


def cone_label(c: Cone) -> Optional[str]:
    """Short names for cones on a line: ``0``, ``Q>=0``, ``Q<=0``, ``Q``."""
    if c.ambient_dim != 1:
        return None
    if c.lineality:
        return "Q"
    if not c.rays:
        return "0"
    return "Q>=0" if c.rays[0][0] > 0 else "Q<=0"


def cone_to_json(c: Cone) -> dict:
    out = {
        "ambient_dim": c.ambient_dim,
        "rays": [list(r) for r in c.rays],
        "lineality": [list(r) for r in c.lineality],
        "facets": [list(r) for r in c.facets],
        "equations": [list(r) for r in c.equations],
    }
    label = cone_label(c)
    if label is not None:
        out["label"] = label
    return out


def cone_from_json(obj: dict) -> Cone:
    def rows(key):
        return tuple(tuple(int(x) for x in r) for r in obj[key])

    return Cone(int(obj["ambient_dim"]), rows("rays"), rows("lineality"), rows("facets"), rows("equations"))


def fan_to_json(f: Fan) -> dict:
    return {
        "ambient_dim": f.ambient_dim,
        "cones": [dict(cone_to_json(c), id=lab) for c, lab in zip(f.cones, f.labels)],
        "adjacency": [[f.labels[i], f.labels[j]] for i, j in f.adjacency],
        "rays": [list(r) for r in f.rays()],
    }


def degrees_to_json(d: DegreeMatrix) -> dict:
    return {"n": d.n, "rank": d.r, "degrees": [list(c) for c in d.columns], "labels": list(d.labels)}


def degrees_from_json(obj: dict) -> DegreeMatrix:
    return DegreeMatrix(tuple(tuple(c) for c in obj["degrees"]), tuple(obj.get("labels") or ()))


def wall_type_to_json(wt: Optional[WallType]):
    if wt is None:
        return None
    return {"kind": wt.kind, "target": wt.target, "index": wt.index, "label": wt.label}


def chamber_to_json(c: Chamber) -> dict:
    return {
        "id": c.id,
        "cone": cone_to_json(c.cone),
        "in_mov": c.in_mov,
        "exc": list(c.exc_indices),
        "supports": c.minimal_supports.as_lists(),
    }


def chamber_from_json(obj: dict, n: int) -> Chamber:
    fam = SupportFamily(n, tuple(tuple(s) for s in obj["supports"]))
    return Chamber(obj["id"], cone_from_json(obj["cone"]), bool(obj["in_mov"]), tuple(obj["exc"]), fam)


def wall_to_json(w: Wall) -> dict:
    return {
        "chambers": [w.first, w.second if w.second is not None else "outside"],
        "face": cone_to_json(w.face),
        "type": wall_type_to_json(w.wall_type),
        "label": w.label,
    }


def wall_from_json(obj: dict) -> Wall:
    a, b = obj["chambers"]
    t = obj["type"]
    wt = None if t is None else WallType(t["kind"], t["target"], t["index"])
    return Wall(a, None if b == "outside" else b, cone_from_json(obj["face"]), wt)


@dataclass(frozen=True)
class ReportBundle:
    degrees: DegreeMatrix
    eff: Cone
    mov: Cone
    chambers: tuple[Chamber, ...]
    walls: tuple[Wall, ...]
    extras: dict = field(default_factory=dict, compare=True, hash=False)

    @classmethod
    def from_complex(cls, cc: ChamberComplex, extras: Optional[dict] = None) -> "ReportBundle":
        return cls(cc.degrees, cc.eff, cc.mov, cc.chambers, cc.walls, dict(extras or {}))

    def to_json(self) -> dict:
        return {
            "input": degrees_to_json(self.degrees),
            "eff": cone_to_json(self.eff),
            "mov": cone_to_json(self.mov),
            "chambers": [chamber_to_json(c) for c in self.chambers],
            "walls": [wall_to_json(w) for w in self.walls],
            "extras": self.extras,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReportBundle":
        d = degrees_from_json(obj["input"])
        return cls(
            d,
            cone_from_json(obj["eff"]),
            cone_from_json(obj["mov"]),
            tuple(chamber_from_json(c, d.n) for c in obj["chambers"]),
            tuple(wall_from_json(w) for w in obj["walls"]),
            obj.get("extras", {}),
        )


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def complex_to_dot(cc: ChamberComplex) -> str:
    lines = ["graph chambers {"]
    for c in cc.chambers:
        rays = " ".join("(" + ",".join(map(str, r)) + ")" for r in c.cone.rays)
        shape = "box" if c.in_mov else "ellipse"
        lines.append(f'  "{c.id}" [label="{c.id}\\n{rays}", shape={shape}];')
    for w in cc.walls:
        if w.second is None:
            continue
        lines.append(f'  "{w.first}" -- "{w.second}" [label="{w.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def outcome_to_json(o: Outcome) -> dict:
    return {
        "kind": o.kind,
        "stage": o.stage,
        "chamber": o.chamber,
        "final_class": None if o.final_class is None else ratvec(o.final_class),
        "wall": None if o.wall is None else cone_to_json(o.wall),
    }


def step_to_json(s: MMPStep) -> dict:
    out = {
        "kind": s.kind,
        "stage": s.stage,
        "chamber": s.chamber,
        "target": s.target,
        "crossing_point": ratvec(s.crossing_point),
        "wall": cone_to_json(s.wall),
    }
    if s.kind == "divisorial":
        out["contracted_index"] = s.contracted_index
        out["contracted_label"] = s.contracted_label
        out["reduced"] = degrees_to_json(s.reduced)
        out["quotient_map"] = [list(r) for r in s.quotient_map]
    return out


def trace_to_json(t: MMPTrace) -> dict:
    return {
        "input_class": ratvec(t.input_class),
        "start_chamber": t.start_chamber,
        "ample": ratvec(t.ample),
        "requested_ample": None if t.requested_ample is None else ratvec(t.requested_ample),
        "perturbation": t.perturbation,
        "steps": [step_to_json(s) for s in t.steps],
        "outcome": outcome_to_json(t.outcome),
    }
