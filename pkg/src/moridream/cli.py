"""Command line interface.

Every subcommand reads a JSON input file describing a degree matrix, runs the
requested computation together with its consistency checks and prints
canonical JSON. Exit status: 0 on success, 2 for invalid input, 3 when an
internal consistency check fails, 4 when a budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import serialize as ser
from .chambers import (
    ChamberComplex,
    DegreeMatrix,
    chamber_complex,
    designated_chamber,
    locate_class,
    mov_fan,
)
from .cones import cone_from_generators, fan_support_equals, fan_validate, make_fan, membership
from .errors import (
    BudgetExceeded,
    InternalInconsistency,
    InvariantViolation,
    MoriDreamError,
    ParseError,
)
from .mmp import replay_trace, run_mmp
from .polytope import DEFAULT_POINT_BUDGET
from .relative import mdm_axiom_report, relative_context, relative_cone, relative_mov_fan, relative_nef
from .toric import (
    DEFAULT_MULTIPLE_BOUND,
    base_locus_class,
    divisor_polytope,
    gale_dual,
    model_fan,
    movable_fixed_decomposition,
)
from .vgit import git_equivalent, hilbert_mumford_agrees, semistable_supports, stability_report, weight_cone

VECTOR_FLAGS = ("--divisor", "--ample", "--face", "--character", "--pair")


@dataclass(frozen=True)
class InputSpec:
    n: int
    rank: int
    degrees: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()
    designated_chamber: Optional[tuple[Fraction, ...]] = None

    def degree_matrix(self) -> DegreeMatrix:
        return DegreeMatrix(self.degrees, self.labels)


def _field(obj, name, kind, where):
    if name not in obj:
        raise ParseError(f"missing field {name!r}", where)
    val = obj[name]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise ParseError(f"field {name!r} must be an integer", where)
    if kind is list and not isinstance(val, list):
        raise ParseError(f"field {name!r} must be a list", where)
    return val


def parse_input_text(text: str, source: str = "<input>") -> InputSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", source)
    n = _field(obj, "n", int, source)
    r = _field(obj, "rank", int, source)
    degrees = _field(obj, "degrees", list, source)
    if len(degrees) != n:
        raise ParseError(f"'n' is {n} but {len(degrees)} degrees are given", f"{source}:degrees")
    cols = []
    for i, col in enumerate(degrees, 1):
        where = f"{source}:degrees[{i}]"
        if not isinstance(col, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in col):
            raise ParseError("degree must be a list of integers", where)
        if len(col) != r:
            raise ParseError(f"degree has length {len(col)}, rank is {r}", where)
        if not any(col):
            raise InvariantViolation(f"column {i} is zero", column=i)
        cols.append(tuple(col))
    labels = tuple(obj.get("labels") or ())
    if labels and len(labels) != n:
        raise ParseError(f"{len(labels)} labels for {n} generators", f"{source}:labels")
    designated = obj.get("designated_chamber")
    if designated is not None:
        try:
            designated = tuple(Fraction(x) for x in designated)
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), f"{source}:designated_chamber") from exc
        if len(designated) != r:
            raise ParseError("designated_chamber has the wrong length", f"{source}:designated_chamber")
    spec = InputSpec(n, r, tuple(cols), labels, designated)
    spec.degree_matrix()  # raises InvariantViolation on rank deficiency
    return spec


def parse_input(path) -> InputSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), str(p)) from exc
    return parse_input_text(text, str(p))


def parse_vector(s: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in s.split(",") if x.strip())
    except ValueError as exc:
        raise ParseError(f"cannot parse vector {s!r}") from exc


def _check(cond: bool, what: str):
    if not cond:
        raise InternalInconsistency(what)


def _complex_checks(cc: ChamberComplex) -> dict:
    mf = mov_fan(cc)
    whole = make_fan([c.cone for c in cc.chambers], [c.id for c in cc.chambers], cc.degrees.r)
    checks = {
        "chambers_form_fan": fan_validate(whole).ok,
        "chambers_cover_eff": fan_support_equals(whole, cc.eff),
        "mov_fan_valid": fan_validate(mf).ok,
        "mov_fan_support_is_mov": fan_support_equals(mf, cc.mov),
    }
    for k, v in checks.items():
        _check(v, f"consistency check failed: {k}")
    return checks


def cmd_chambers(spec: InputSpec, args) -> dict:
    cc = chamber_complex(spec.degree_matrix())
    checks = _complex_checks(cc)
    bundle = ser.ReportBundle.from_complex(cc, {"checks": checks})
    _check(ser.ReportBundle.from_json(json.loads(ser.dumps(bundle.to_json()))) == bundle, "round trip failed")
    if args.dot:
        Path(args.dot).write_text(ser.complex_to_dot(cc), encoding="utf-8")
    return bundle.to_json()


def cmd_mov(spec: InputSpec, args) -> dict:
    cc = chamber_complex(spec.degree_matrix())
    checks = _complex_checks(cc)
    return {
        "eff": ser.cone_to_json(cc.eff),
        "mov": ser.cone_to_json(cc.mov),
        "mov_fan": ser.fan_to_json(mov_fan(cc)),
        "checks": checks,
    }


def _start(cc: ChamberComplex, spec: InputSpec, start: Optional[str]) -> str:
    if start:
        return start
    return designated_chamber(cc, spec.designated_chamber).id


def cmd_mmp(spec: InputSpec, args) -> dict:
    cc = chamber_complex(spec.degree_matrix())
    d = parse_vector(args.divisor)
    a = parse_vector(args.ample) if args.ample else None
    trace = run_mmp(cc, _start(cc, spec, args.start), d, a)
    _check(replay_trace(cc, trace) == trace.outcome, "trace replay gave a different outcome")
    good = trace.outcome.kind == "good_minimal_model"
    _check(good == membership(cc.eff, d), "MMP outcome contradicts effective-cone membership")
    return {"trace": ser.trace_to_json(trace), "checks": {"replay": True, "dichotomy": True}}


def cmd_relative(spec: InputSpec, args) -> dict:
    cc = chamber_complex(spec.degree_matrix())
    gens = [parse_vector(v) for v in args.face.split(";") if v.strip()]
    sigma = cone_from_generators(gens, cc.degrees.r)
    ctx = relative_context(cc, sigma)
    report = mdm_axiom_report(ctx, cc)
    _check(report.all_true, f"relative axioms fail: {report}")
    return {
        "face": ser.cone_to_json(ctx.base_face),
        "quotient_map": [list(r) for r in ctx.quotient_map],
        "relative_dim": ctx.relative_dim,
        "star": list(ctx.star),
        "relative_eff": ser.cone_to_json(relative_cone(ctx, cc.eff)),
        "relative_mov": ser.cone_to_json(relative_cone(ctx, cc.mov)),
        "relative_nef": ser.cone_to_json(relative_nef(ctx, cc, spec.designated_chamber)),
        "relative_mov_fan": ser.fan_to_json(relative_mov_fan(ctx, cc)),
        "axioms": {
            "q_factorial_model_exists": report.q_factorial_model_exists,
            "nef_polyhedral": report.nef_polyhedral,
            "mov_covered_by_sqm_nef_cones": report.mov_covered_by_sqm_nef_cones,
            "fan_valid": report.fan_valid,
        },
    }


def cmd_vgit(spec: InputSpec, args) -> dict:
    d = spec.degree_matrix()
    chi = parse_vector(args.character)
    rep = stability_report(d, chi)
    out = {
        "character": ser.ratvec(chi),
        "weight_cone": ser.cone_to_json(weight_cone(d)),
        "supports": semistable_supports(d, chi).as_lists(),
        "stability": {
            "ss_equals_s": rep.ss_equals_s,
            "unstable_codim": "inf" if rep.unstable_codim is None else rep.unstable_codim,
            "weight_cone_member": rep.weight_cone_member,
            "isotropy_bound": rep.isotropy_bound,
        },
    }
    if d.n <= 5:
        ok = hilbert_mumford_agrees(d, chi)
        _check(ok, "Hilbert-Mumford oracle contradicts the support criterion")
        out["hilbert_mumford_agrees"] = ok
    if args.pair:
        other = parse_vector(args.pair)
        out["pair"] = ser.ratvec(other)
        out["git_equivalent"] = git_equivalent(d, chi, other)
    return out


def cmd_model(spec: InputSpec, args) -> dict:
    d = spec.degree_matrix()
    cc = chamber_complex(d)
    g = gale_dual(d)
    cid = args.chamber or designated_chamber(cc, spec.designated_chamber).id
    fan = model_fan(g, d, cc, cid, args.budget)
    _check(fan_validate(fan).ok, "model fan is not a fan")
    return {"chamber": cid, "gale_rays": [list(r) for r in g.rays], "fan": ser.fan_to_json(fan)}


def cmd_classify(spec: InputSpec, args) -> dict:
    d = spec.degree_matrix()
    cc = chamber_complex(d)
    x = parse_vector(args.divisor)
    loc = locate_class(cc, x)
    out = {
        "class": ser.ratvec(x),
        "location": {
            "kind": loc.kind,
            "chambers": list(loc.chambers),
            "face": None if loc.face is None else ser.cone_to_json(loc.face),
        },
        "in_mov": membership(cc.mov, x),
    }
    if all(v.denominator == 1 for v in x):
        g = gale_dual(d)
        verdict = base_locus_class(g, d, cc, x, spec.designated_chamber, args.multiple_bound, args.budget)
        out["base_locus"] = verdict.value
        if loc.kind != "outside_eff":
            m, f = movable_fixed_decomposition(g, d, x, args.budget)
            out["movable_part"] = list(m)
            out["fixed_part"] = list(f)
    return out


def cmd_sections(spec: InputSpec, args) -> dict:
    d = spec.degree_matrix()
    g = gale_dual(d)
    dp = divisor_polytope(g, d, parse_vector(args.divisor), args.budget)
    P = dp.polytope
    return {
        "class": list(dp.divisor_class),
        "lift": list(dp.lift),
        "gale_rays": [list(r) for r in g.rays],
        "bounded": P.is_bounded,
        "vertices": [ser.ratvec(v) for v in P.vertices],
        "points": [list(p) for p in dp.points],
        "section_count": dp.section_count,
        "monomials": [list(e) for e in dp.exponents(g)],
    }


COMMANDS = {
    "chambers": cmd_chambers,
    "mov": cmd_mov,
    "mmp": cmd_mmp,
    "relative": cmd_relative,
    "vgit": cmd_vgit,
    "model": cmd_model,
    "classify": cmd_classify,
    "sections": cmd_sections,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moridream", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="JSON file with n, rank, degrees")
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        p.add_argument("--budget", type=int, default=DEFAULT_POINT_BUDGET, help="lattice point budget")
        p.add_argument(
            "--multiple-bound", type=int, default=DEFAULT_MULTIPLE_BOUND,
            help="largest multiple tried when testing for a free multiple",
        )
        return p

    p = add("chambers", "chamber complex of the effective cone")
    p.add_argument("--dot", help="write the wall-adjacency graph in DOT format here")
    add("mov", "movable cone and its fan")
    p = add("mmp", "run the MMP for a divisor class")
    p.add_argument("--divisor", required=True)
    p.add_argument("--ample")
    p.add_argument("--start")
    p = add("relative", "relative cones over a face of a nef chamber")
    p.add_argument("--face", required=True, help="generators separated by ';'")
    p = add("vgit", "semistability data of a character")
    p.add_argument("--character", required=True)
    p.add_argument("--pair")
    p = add("model", "fan of the toric model of a chamber")
    p.add_argument("--chamber")
    p = add("classify", "locate a class and classify its base locus")
    p.add_argument("--divisor", required=True)
    p = add("sections", "divisor polytope and section count")
    p.add_argument("--divisor", required=True)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--divisor -1,2`` into ``--divisor=-1,2`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VECTOR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        spec = parse_input(args.input)
        result = COMMANDS[args.command](spec, args)
    except (ParseError, InvariantViolation) as exc:
        return _fail(2, exc)
    except BudgetExceeded as exc:
        return _fail(4, exc)
    except InternalInconsistency as exc:
        return _fail(3, exc)
    except (MoriDreamError, ValueError, KeyError) as exc:
        return _fail(2, exc)
    text = ser.dumps(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _fail(code: int, exc: Exception) -> int:
    diag = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    column = getattr(exc, "column", None)
    if column is not None:
        diag["column"] = column
    location = getattr(exc, "location", None)
    if location is not None:
        diag["location"] = location
    sys.stderr.write(ser.dumps(diag))
    return code


if __name__ == "__main__":
    sys.exit(main())


def main_exit() -> None:
    sys.exit(main())
