import json
import random
from pathlib import Path

import pytest

from moridream.chambers import DegreeMatrix

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_NAMES = ("blpp2", "flop", "p1xp1", "p2", "sqm2")

# one representative invocation per subcommand and fixture
INVOCATIONS = {
    "blpp2": [["chambers"], ["mov"], ["mmp", "--divisor", "0,1"], ["relative", "--face", "1,0"],
              ["vgit", "--character", "2,-1", "--pair", "3,-1"], ["model"], ["classify", "--divisor", "1,1"],
              ["sections", "--divisor", "2,-1"]],
    "flop": [["chambers"], ["mov"], ["mmp", "--divisor", "-1"], ["relative", "--face", "0"],
             ["vgit", "--character", "1", "--pair", "-1"], ["model"], ["classify", "--divisor", "-1"],
             ["sections", "--divisor", "2"]],
    "p1xp1": [["chambers"], ["mov"], ["mmp", "--divisor", "-1,1"], ["relative", "--face", "1,0"],
              ["vgit", "--character", "1,1"], ["model"], ["classify", "--divisor", "1,2"],
              ["sections", "--divisor", "1,1"]],
    "p2": [["chambers"], ["mov"], ["mmp", "--divisor", "-1"], ["relative", "--face", "0"],
           ["vgit", "--character", "1"], ["model"], ["classify", "--divisor", "3"], ["sections", "--divisor", "3"]],
    "sqm2": [["chambers"], ["mov"], ["mmp", "--divisor", "1,0"], ["relative", "--face", "1,1"],
             ["vgit", "--character", "1,2"], ["model"], ["classify", "--divisor", "2,1"],
             ["sections", "--divisor", "1,1"]],
}


def load_fixture(name):
    return json.loads((FIXTURE_DIR / f"{name}.json").read_text())


def fixture_degrees(name) -> DegreeMatrix:
    obj = load_fixture(name)
    return DegreeMatrix(tuple(tuple(c) for c in obj["degrees"]), tuple(obj.get("labels") or ()))


def random_degree_matrices(count, seed, max_n=6, max_r=3):
    """Full-rank integer matrices with nonzero columns and entries in [-3, 3]."""
    import sympy

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.randint(1, max_r)
        n = rng.randint(r + 1, max_n)
        cols = [tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(n)]
        if any(not any(c) for c in cols) or sympy.Matrix(cols).rank() < r:
            continue
        out.append(DegreeMatrix(tuple(cols)))
    return out


@pytest.fixture(params=FIXTURE_NAMES)
def fixture_name(request):
    return request.param


@pytest.fixture
def blpp2():
    return fixture_degrees("blpp2")


@pytest.fixture
def flop():
    return fixture_degrees("flop")


@pytest.fixture
def p2():
    return fixture_degrees("p2")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    lines = {n: (t, ok, detail) for n, (t, ok, detail) in RESULTS.items()}
    # criteria that raised before recording a verdict
    for rep in terminalreporter.stats.get("failed", []):
        name = rep.nodeid.rsplit("::", 1)[-1]
        if name.startswith("test_criterion_"):
            number = int(name.split("_")[2])
            lines.setdefault(number, (name, False, "raised " + rep.longrepr.reprcrash.message.splitlines()[0]))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        title, ok, detail = lines[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({detail})")
