import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moridream.chambers import (
    DegreeMatrix,
    chamber_complex,
    classify_wall,
    effective_cone,
    locate_class,
    mov_fan,
    moving_cone,
)
from moridream.cones import cone_from_generators, fan_support_equals, fan_validate, make_fan, membership
from moridream.errors import InvariantViolation, NoProjectiveModel
from oracles import member, refinement_cells
from conftest import fixture_degrees, random_degree_matrices

Q_GE = cone_from_generators([(1,)])
Q_LE = cone_from_generators([(-1,)])
LINE = cone_from_generators([(1,), (-1,)])


def matches_refinement(d: DegreeMatrix) -> bool:
    """Each chamber is exactly one cell of the brute-force common refinement."""
    cc = chamber_complex(d, require_model=False)
    cells = refinement_cells(list(d.columns))
    image = {}
    for pattern, points in cells.items():
        hits = set()
        for p in points:
            inside = [c.id for c in cc.chambers if membership(c.cone, p, "relative_interior")]
            if len(inside) != 1:
                return False
            hits.add(inside[0])
        if len(hits) != 1:
            return False
        image[pattern] = hits.pop()
    return sorted(image.values()) == sorted(c.id for c in cc.chambers)


def test_degree_matrix_invariants():
    with pytest.raises(InvariantViolation):
        DegreeMatrix(((0,),))
    with pytest.raises(InvariantViolation):
        DegreeMatrix(((1, 0), (2, 0), (3, 0)))


def test_effective_cones():
    assert effective_cone(fixture_degrees("p2")) == Q_GE
    assert effective_cone(fixture_degrees("blpp2")) == cone_from_generators([(1, -1), (0, 1)])
    assert effective_cone(fixture_degrees("flop")) == LINE


def test_moving_cones():
    assert moving_cone(fixture_degrees("blpp2")) == cone_from_generators([(1, -1), (1, 0)])
    assert moving_cone(fixture_degrees("flop")) == LINE
    assert moving_cone(fixture_degrees("p2")) == Q_GE


def test_blpp2_chambers():
    cc = chamber_complex(fixture_degrees("blpp2"))
    by_cone = {c.cone: c for c in cc.chambers}
    nef = by_cone[cone_from_generators([(1, -1), (1, 0)])]
    other = by_cone[cone_from_generators([(1, 0), (0, 1)])]
    assert len(cc.chambers) == 2
    assert nef.in_mov and nef.exc_indices == ()
    assert not other.in_mov and other.exc_indices == (4,)


def test_flop_and_p2_chambers():
    cc = chamber_complex(fixture_degrees("flop"))
    assert sorted(c.cone.key() for c in cc.chambers) == sorted([Q_GE.key(), Q_LE.key()])
    assert all(c.in_mov for c in cc.chambers)
    assert len(chamber_complex(fixture_degrees("p2")).chambers) == 1


def test_mov_fans():
    assert len(mov_fan(chamber_complex(fixture_degrees("blpp2"))).cones) == 1
    f = mov_fan(chamber_complex(fixture_degrees("flop")))
    assert len(f.cones) == 2 and f.cones[0].rays != f.cones[1].rays
    assert len(mov_fan(chamber_complex(fixture_degrees("p2"))).cones) == 1


def test_wall_types():
    cc = chamber_complex(fixture_degrees("blpp2"))
    nef = next(c for c in cc.chambers if c.in_mov)
    assert classify_wall(cc, nef.id, cone_from_generators([(1, -1)])).label == "fiber"
    assert classify_wall(cc, nef.id, cone_from_generators([(1, 0)])).label == "divisorial:4"
    cf = chamber_complex(fixture_degrees("flop"))
    pos = next(c for c in cf.chambers if c.cone == Q_GE)
    wt = classify_wall(cf, pos.id, cone_from_generators([], 1))
    neg = next(c for c in cf.chambers if c.cone == Q_LE)
    assert wt.kind == "flip" and wt.target == neg.id


def test_locate_class():
    cc = chamber_complex(fixture_degrees("blpp2"))
    nef = next(c for c in cc.chambers if c.in_mov)
    loc = locate_class(cc, (2, -1))
    assert loc.kind == "interior" and loc.chambers == (nef.id,)
    loc = locate_class(cc, (1, 0))
    assert loc.kind == "face" and len(loc.chambers) == 2
    assert locate_class(cc, (0, -1)).kind == "outside_eff"


def test_no_projective_model():
    # the moving cone is {0}: every deletion cone misses the others
    with pytest.raises(NoProjectiveModel):
        chamber_complex(DegreeMatrix(((1, 0), (0, 1))))


@pytest.mark.parametrize("name", ["blpp2", "flop", "p1xp1", "p2", "sqm2"])
def test_fixtures_match_refinement(name):
    assert matches_refinement(fixture_degrees(name))


@pytest.mark.parametrize("name", ["blpp2", "flop", "p1xp1", "p2", "sqm2"])
def test_complex_is_fan_covering_eff(name):
    cc = chamber_complex(fixture_degrees(name))
    whole = make_fan([c.cone for c in cc.chambers])
    assert fan_validate(whole).ok
    assert fan_support_equals(whole, cc.eff)
    assert fan_support_equals(mov_fan(cc), cc.mov)


@pytest.mark.parametrize("name", ["blpp2", "flop", "p1xp1", "p2", "sqm2"])
def test_exc_rule_against_caratheodory(name):
    d = fixture_degrees(name)
    cc = chamber_complex(d)
    for c in cc.chambers:
        p = c.cone.interior_point()
        exc = tuple(i for i in range(1, d.n + 1) if not member([w for j, w in enumerate(d.columns, 1) if j != i], p))
        assert exc == c.exc_indices
        assert c.in_mov == (exc == ())


def test_random_matrices_match_refinement():
    for d in random_degree_matrices(15, seed=7):
        assert matches_refinement(d), d.columns


columns = st.integers(1, 3).flatmap(
    lambda r: st.lists(st.tuples(*[st.integers(-3, 3)] * r), min_size=r + 1, max_size=5)
)


@settings(max_examples=25, deadline=None)
@given(columns)
def test_refinement_property(cols):
    try:
        d = DegreeMatrix(tuple(cols))
    except InvariantViolation:
        return
    assert matches_refinement(d)
