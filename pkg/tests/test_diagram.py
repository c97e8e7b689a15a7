import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotforge import fixtures
from knotforge.codes import parse
from knotforge.diagram import Diagram, canonical, canonical_code, diagram_from_code
from knotforge.errors import DisconnectedDiagram, InconsistentOrientation, MalformedCode, NonRealizable
from knotforge.randomdiag import random_diagram

from oracles import face_count, graph_components

TREFOIL = "PD[X(4,2,5,1), X(6,4,1,3), X(2,6,3,5)]"


def relabel(d: Diagram, rng: random.Random) -> Diagram:
    labels = sorted({e for x in d.pd for e in x})
    new = list(range(100, 100 + len(labels)))
    rng.shuffle(new)
    m = dict(zip(labels, new))
    xs = [(*(m[e] for e in x.edges), x.sign) for x in d.crossings]
    rng.shuffle(xs)
    return Diagram(xs, d.free_loops)


def test_circle_has_one_free_loop():
    d = parse("PD[]")
    assert len(d) == 0 and d.free_loops == 1
    assert d.num_components == 1


def test_dt_trefoil_signs_all_equal():
    d = parse("DT[4 6 2]")
    assert len(d) == 3
    assert len(set(d.signs)) == 1


def test_writhe_examples():
    assert Diagram.unknot().writhe() == 0
    assert parse(TREFOIL).writhe() == 3
    two_kinks = Diagram.from_pd([(1, 1, 2, 4), (2, 3, 3, 4)])
    assert sorted(two_kinks.signs) == [-1, 1]
    assert two_kinks.writhe() == 0


def test_alternation():
    t = parse(TREFOIL)
    assert t.is_alternating()
    assert not t.switch(0).is_alternating()
    assert Diagram.unknot().is_alternating()


def test_faces_examples():
    u = Diagram.unknot()
    assert u.num_faces() == 2
    assert {f.color for f in u.faces()} == {"white", "black"}
    t = parse(TREFOIL)
    assert len(t.faces()) == 5
    assert len(t) - 2 * len(t) + len(t.faces()) == 2
    h = fixtures.diagram("hopf-plus")
    assert len(h.faces()) == 4


def test_checkerboard_is_proper():
    for name in fixtures.names():
        d = fixtures.diagram(name)
        if not d.crossings:
            continue
        cols = d.face_colors()
        fod = d.face_of_dart
        for i in range(len(d)):
            # faces across each edge-end differ in colour
            for p in range(4):
                assert cols[fod[(i, p)]] != cols[fod[(i, (p + 1) % 4)]]


def test_faces_need_connected_diagram():
    split = fixtures.diagram("hopf-plus")
    d = Diagram([*split.crossings, *((x.a + 10, x.b + 10, x.c + 10, x.d + 10, x.sign) for x in split.crossings)])
    with pytest.raises(DisconnectedDiagram):
        d.faces()


def test_canonical_code_relabel_invariant():
    rng = random.Random(7)
    t = parse(TREFOIL)
    assert canonical_code(relabel(t, rng)) == canonical_code(t)
    assert canonical_code(t) != canonical_code(fixtures.diagram("fig8"))


def test_canonical_code_round_trip():
    for name in fixtures.names():
        d = fixtures.diagram(name)
        c = canonical_code(d)
        assert canonical_code(diagram_from_code(c)) == c
        assert canonical(d).writhe() == d.writhe()


def test_mirror_need_not_share_code():
    # fig8 is amphicheiral; its diagram and mirror diagram may or may not share a code,
    # but writhe and crossing count agree
    f = fixtures.diagram("fig8")
    assert f.mirror().writhe() == -f.writhe()


def test_reversing_one_strand_flips_signs():
    h = fixtures.diagram("hopf-plus")
    r = h.reverse_component(0)
    assert r.signs == [-s for s in h.signs]
    t = parse(TREFOIL)
    assert t.reverse().writhe() == t.writhe()
    assert t.reverse_component(0).writhe() == t.writhe()


def test_malformed_codes():
    for bad in ["PD[X(1,2,3)]", "PD[X(1,2,3,4)]", "DT[4 6 3]", "DT[4 6 6]", "GAUSS[O1 O1]", "foo", "PD[X(1,a,2,2)]"]:
        with pytest.raises(MalformedCode):
            parse(bad)


def test_inconsistent_orientation():
    with pytest.raises(InconsistentOrientation):
        parse("PD[X(1,3,2,4,+1), X(3,1,4,2,-1)]")
    with pytest.raises(InconsistentOrientation):
        parse("PD[X(1,2,4,5), X(3,6,4,1), X(5,2,6,3)]")


def test_non_planar_rotation_system():
    with pytest.raises(NonRealizable):
        parse("PD[X(1,5,2,4), X(3,6,4,1), X(5,2,6,3)]")


def test_fixture_euler_counts():
    for name in fixtures.names():
        d = fixtures.diagram(name)
        assert d.num_faces() == face_count(d.pd, d.free_loops)
        pieces = graph_components(d.pd) if d.crossings else 0
        assert len(d) - 2 * len(d) + face_count(d.pd) == 2 * pieces


@given(st.integers(0, 10**6))
def test_random_diagrams_are_spherical(seed):
    d = random_diagram(seed, 8, moves=3)
    if d.crossings:
        assert len(d) - 2 * len(d) + face_count(d.pd) == 2 * graph_components(d.pd)
    comps = d.components
    edges = sorted(e for c in comps for e in c)
    assert edges == sorted(d.edges)
    for c in comps:
        e = c[0]
        for _ in range(len(c)):
            e = d.next_edge(e)
        assert e == c[0]


@given(st.integers(0, 10**6))
def test_knot_writhe_survives_reversal(seed):
    d = random_diagram(seed, 8)
    assert d.reverse().writhe() == d.writhe()
    for k in range(len(d.components)):
        dd = d.reverse_component(k)
        assert sum(abs(a - b) for a, b in zip(dd.signs, d.signs)) % 4 == 0 or d.num_components > 1
