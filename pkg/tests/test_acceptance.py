"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run ``python3 -m pytest tests/test_acceptance.py -v``; the summary lines are
printed at the end of the session (see ``conftest.pytest_terminal_summary``).
"""

import os
import random
import subprocess
import sys
import time
import warnings
from itertools import product

import pytest

from moridream.chambers import chamber_complex, designated_chamber, locate_class, mov_fan
from moridream.cones import cone_from_generators, fan_support_equals, fan_validate, membership
from moridream.linalg import matvec
from moridream.mmp import replay_trace, run_mmp
from moridream.polytope import normal_fan
from moridream.relative import all_movable_faces, mdm_axiom_report, relative_context, relative_mov_fan, relative_nef, relative_cone
from moridream.toric import (
    divisor_polytope,
    fixed_part_vanishes_at,
    gale_dual,
    model_fan,
    mori_equivalent,
    movable_fixed_decomposition,
)
from moridream.vgit import git_chambers, hilbert_mumford_agrees, stability_report
from conftest import FIXTURE_DIR, FIXTURE_NAMES, INVOCATIONS, fixture_degrees, random_degree_matrices
from oracles import member
from test_chambers import matches_refinement

RESULTS: dict = {}
RANDOM_50 = random_degree_matrices(50, seed=20240601)
RANDOM_20 = random_degree_matrices(20, seed=4242)


def record(number, title, ok, detail=""):
    RESULTS[number] = (title, ok, detail)
    assert ok, f"criterion {number} failed: {detail}"


def box(r, lo=-3, hi=3):
    return list(product(range(lo, hi + 1), repeat=r))


def test_criterion_01_blowup_relative_cones():
    t0 = time.perf_counter()
    cc = chamber_complex(fixture_degrees("blpp2"))
    ctx = relative_context(cc, [(1, 0)])
    # orient the quotient so that E = (0, 1) has coordinate +1
    sign = matvec(ctx.quotient_map, (0, 1))[0]
    q_le = cone_from_generators([(-sign,)])
    nef = relative_nef(ctx, cc)
    mov = relative_cone(ctx, cc.mov)
    fan = relative_mov_fan(ctx, cc)
    elapsed = time.perf_counter() - t0
    ok = abs(sign) == 1 and nef == q_le and mov == q_le and fan.cones == (q_le,) and elapsed < 1
    record(1, "relative Nef = Mov = Q<=0[E] on the blow-up", ok, f"{elapsed:.2f}s")


def test_criterion_02_mmp_dichotomy():
    t0 = time.perf_counter()
    bad = []
    count = 0
    for name in ("blpp2", "flop"):
        d = fixture_degrees(name)
        cc = chamber_complex(d)
        start = designated_chamber(cc).id
        for x in box(d.r):
            count += 1
            t = run_mmp(cc, start, x)
            stays = member(d.columns, x)
            y = x
            for s in t.steps:
                if s.kind == "divisorial":
                    y = tuple(matvec(s.quotient_map, y)) if s.quotient_map else ()
                    stays = stays and (not y or member(s.reduced.columns, y))
            good = t.outcome.kind == "good_minimal_model"
            again = run_mmp(cc, start, x)
            if good != stays or replay_trace(cc, t) != t.outcome or again != t:
                bad.append((name, x))
    elapsed = time.perf_counter() - t0
    record(2, "MMP dichotomy and replay on blpp2 and flop", not bad and elapsed < 5,
           f"{count} classes, {len(bad)} failures, {elapsed:.2f}s")


def test_criterion_03_chamber_oracle():
    t0 = time.perf_counter()
    bad = [d.columns for d in RANDOM_50 if not matches_refinement(d)]
    elapsed = time.perf_counter() - t0
    record(3, "chamber complex equals brute-force refinement (50 random)", not bad and elapsed < 60,
           f"{len(bad)} mismatches, {elapsed:.1f}s")


def test_criterion_04_git_chamber_properties():
    bad = [d.columns for d in RANDOM_50 if not git_chambers(d).verified]
    record(4, "GIT chamber properties on 50 random matrices", not bad, f"{len(bad)} failures")


def _quotient_criterion(d, rng, samples):
    failures = 0
    for _ in range(samples):
        chi = tuple(rng.randint(-4, 4) for _ in range(d.r))
        if membership(chamber_complex(d, require_model=False).mov, chi) != stability_report(d, chi).codim_at_least(2):
            failures += 1
    return failures


def test_criterion_05_quotient_criterion():
    rng = random.Random(5)
    failures = 0
    mats = [fixture_degrees(n) for n in FIXTURE_NAMES] + RANDOM_20
    for d in mats:
        failures += _quotient_criterion(d, rng, 25)
        cc = chamber_complex(d, require_model=False)
        for c in cc.movable_chambers:
            if not stability_report(d, c.cone.interior_point()).ss_equals_s:
                failures += 1
        if d.n <= 5:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                for c in cc.chambers:
                    if not hilbert_mumford_agrees(d, c.cone.interior_point(), bound=5):
                        failures += 1
    record(5, "Mov <=> unstable codim >= 2; ss = s on ample; Hilbert-Mumford agrees", failures == 0,
           f"{failures} failures")


def test_criterion_06_movable_fixed():
    failures, inconclusive, checked = 0, 0, 0
    for name in FIXTURE_NAMES:
        d = fixture_degrees(name)
        g = gale_dual(d)
        cc = chamber_complex(d)
        for x in box(d.r):
            if not member(d.columns, x):
                continue
            checked += 1
            m, f = movable_fixed_decomposition(g, d, x)
            if divisor_polytope(g, d, m).section_count != divisor_polytope(g, d, x).section_count:
                failures += 1
            in_mov = membership(cc.mov, x)
            free = fixed_part_vanishes_at(g, d, x, 12)
            if in_mov and free is None:
                inconclusive += 1
            elif in_mov != (free is not None):
                failures += 1
            if not any(f) and not in_mov:
                failures += 1
    record(6, "D = M + F: h0(D) = h0(M), F(mD) = 0 for some m <= 12 iff D movable",
           failures == 0 and inconclusive == 0,
           f"{checked} classes, {failures} failures, {inconclusive} inconclusive")


def test_criterion_07_fan_axioms():
    failures = 0
    for name in FIXTURE_NAMES:
        d = fixture_degrees(name)
        cc = chamber_complex(d)
        g = gale_dual(d)
        fans = [mov_fan(cc)]
        if not fan_support_equals(mov_fan(cc), cc.mov):
            failures += 1
        for face in all_movable_faces(cc):
            fans.append(relative_mov_fan(relative_context(cc, face), cc))
        if g.dim:
            fans += [model_fan(g, d, cc, c.id) for c in cc.chambers]
            for x in box(d.r):
                if member(d.columns, x):
                    fans.append(normal_fan(divisor_polytope(g, d, x).polytope))
        failures += sum(not fan_validate(f).ok for f in fans)
    record(7, "every emitted fan is valid; |mov_fan| = Mov", failures == 0, f"{failures} failures")


def test_criterion_08_relative_axioms():
    failures, faces_seen = 0, 0
    for name in FIXTURE_NAMES:
        cc = chamber_complex(fixture_degrees(name))
        for face in all_movable_faces(cc):
            faces_seen += 1
            if not mdm_axiom_report(relative_context(cc, face), cc).all_true:
                failures += 1
    record(8, "relative axioms over every face of every movable chamber", failures == 0,
           f"{faces_seen} faces, {failures} failures")


def test_criterion_09_mori_equivalence():
    bl = fixture_degrees("blpp2")
    g = gale_dual(bl)
    ok = mori_equivalent(g, bl, (2, -1), (3, -1)) and not mori_equivalent(g, bl, (2, -1), (2, 1))
    contradictions = 0
    for name in FIXTURE_NAMES:
        d = fixture_degrees(name)
        cc = chamber_complex(d)
        gd = gale_dual(d)
        if not gd.dim:
            continue
        rng = random.Random(name)
        interior = [x for x in box(d.r, -4, 4)
                    if membership(cc.eff, x, "relative_interior") and locate_class(cc, x).kind == "interior"]
        for _ in range(10):
            a, b = rng.choice(interior), rng.choice(interior)
            same = locate_class(cc, a).chambers == locate_class(cc, b).chambers
            if mori_equivalent(gd, d, a, b) != same:
                contradictions += 1
    record(9, "Mori equivalence by normal fans matches chambers", ok and contradictions == 0,
           f"{contradictions} contradictions")


def test_criterion_10_determinism(tmp_path):
    differing = []
    for name in FIXTURE_NAMES:
        path = str(FIXTURE_DIR / f"{name}.json")
        for args in INVOCATIONS[name]:
            outs = []
            for seed in ("1", "2"):
                target = tmp_path / f"{name}-{args[0]}-{seed}.json"
                env = dict(os.environ, PYTHONHASHSEED=seed)
                cmd = [sys.executable, "-m", "moridream.cli", args[0], path, "-o", str(target)] + args[1:]
                subprocess.run(cmd, check=True, env=env)
                outs.append(target.read_bytes())
            if outs[0] != outs[1]:
                differing.append((name, args[0]))
    record(10, "CLI output is byte-identical across runs", not differing, f"{differing}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
