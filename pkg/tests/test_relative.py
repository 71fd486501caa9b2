import pytest

from moridream.chambers import DegreeMatrix, chamber_complex, mov_fan
from moridream.cones import cone_from_generators, fan_validate, zero_cone
from moridream.errors import NotAFaceOfNefCone
from moridream.linalg import matvec
from moridream.relative import (
    all_movable_faces,
    factor_check,
    mdm_axiom_report,
    relative_cone,
    relative_context,
    relative_mov_fan,
    relative_nef,
)
from conftest import fixture_degrees

Q_LE = cone_from_generators([(-1,)])
Q_GE = cone_from_generators([(1,)])
LINE = cone_from_generators([(1,), (-1,)])
FIXTURES = ["blpp2", "flop", "p1xp1", "p2", "sqm2"]


@pytest.fixture
def bl():
    return chamber_complex(fixture_degrees("blpp2"))


@pytest.fixture
def flop_cc():
    return chamber_complex(fixture_degrees("flop"))


def e_coordinate(ctx):
    """Sign so that the exceptional class (0, 1) maps to +1."""
    return matvec(ctx.quotient_map, (0, 1))[0]


def test_blowup_relative_cones(bl):
    ctx = relative_context(bl, [(1, 0)])
    assert ctx.relative_dim == 1
    assert [list(r) for r in ctx.quotient_map] in ([[0, 1]], [[0, -1]])
    sign = e_coordinate(ctx)
    expected = cone_from_generators([(-sign,)])
    # relative Nef and Mov are the nonpositive multiples of E
    assert relative_nef(ctx, bl) == expected
    assert relative_cone(ctx, bl.mov) == expected
    assert relative_cone(ctx, bl.eff) == LINE
    fan = relative_mov_fan(ctx, bl)
    assert len(fan.cones) == 1 and fan.cones[0] == expected


def test_zero_face_is_absolute(bl):
    ctx = relative_context(bl, cone_from_generators([], 2))
    assert [list(r) for r in ctx.quotient_map] == [[1, 0], [0, 1]]
    assert relative_cone(ctx, bl.mov) == bl.mov
    assert relative_mov_fan(ctx, bl).key() == mov_fan(bl).key()


def test_not_a_face(bl):
    with pytest.raises(NotAFaceOfNefCone):
        relative_context(bl, [(1, 1)])


def test_whole_chamber_gives_trivial_fan(bl):
    nef = next(c for c in bl.chambers if c.in_mov)
    ctx = relative_context(bl, nef.cone)
    fan = relative_mov_fan(ctx, bl)
    assert ctx.relative_dim == 0
    assert fan.cones == (zero_cone(0),)


def test_flop_over_affine_base(flop_cc):
    ctx = relative_context(flop_cc, cone_from_generators([], 1))
    fan = relative_mov_fan(ctx, flop_cc)
    assert sorted(c.key() for c in fan.cones) == sorted([Q_GE.key(), Q_LE.key()])
    assert mdm_axiom_report(ctx, flop_cc).all_true


def test_factor_check(bl):
    h, f = [(1, 0)], [(1, -1)]
    assert factor_check(bl, h, cone_from_generators([], 2))
    assert not factor_check(bl, f, h)
    assert factor_check(bl, h, h)


def test_axioms_on_blowup(bl):
    ctx = relative_context(bl, [(1, 0)])
    assert mdm_axiom_report(ctx, bl).all_true


def test_dropped_chamber_is_detected(flop_cc):
    ctx = relative_context(flop_cc, cone_from_generators([], 1))
    report = mdm_axiom_report(ctx, flop_cc, star=ctx.star[:1])
    assert not report.mov_covered_by_sqm_nef_cones
    assert not report.all_true


@pytest.mark.parametrize("name", FIXTURES)
def test_axioms_on_every_face(name):
    cc = chamber_complex(fixture_degrees(name))
    for face in all_movable_faces(cc):
        ctx = relative_context(cc, face)
        assert mdm_axiom_report(ctx, cc).all_true
        assert fan_validate(relative_mov_fan(ctx, cc)).ok


def star_quotient_fan(cc, ctx):
    """Mov fan of the projected grading, keeping generators not killed by q."""
    q = ctx.quotient_map
    cols = [tuple(matvec(q, w)) for w in cc.degrees.columns]
    cols = tuple(c for c in cols if any(c))
    return mov_fan(chamber_complex(DegreeMatrix(cols)))


@pytest.mark.parametrize("name,face", [("blpp2", [(1, 0)]), ("flop", [])])
def test_star_matches_quotient_grading(name, face):
    cc = chamber_complex(fixture_degrees(name))
    ctx = relative_context(cc, cone_from_generators(face, cc.degrees.r))
    assert relative_mov_fan(ctx, cc).key() == star_quotient_fan(cc, ctx).key()
