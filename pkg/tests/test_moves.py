import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotforge import fixtures
from knotforge.bracket import bracket, jones_via_bracket, kauffman_F, kauffman_lambda
from knotforge.census import generate_alternating, is_prime_diagram
from knotforge.diagram import Diagram, canonical_code
from knotforge.errors import KnotforgeError, NonRealizable, StaleSite
from knotforge.moves import (
    FLYPE,
    R1,
    R2,
    R3,
    apply_move,
    connected_sum,
    find_moves,
    is_nugatory,
    mirror,
    nugatory_crossings,
    reverse,
    simplify,
)
from knotforge.poly import LaurentPoly
from knotforge.randomdiag import random_diagram

from oracles import face_count, is_cut_crossing

KINK = Diagram.from_pd([(1, 1, 2, 2)])
CLASP = fixtures.diagram("hopf-plus").switch(1)


def trefoil():
    return fixtures.diagram("trefoil-r")


def twisted_band_sum(d1: Diagram, d2: Diagram) -> tuple[Diagram, int]:
    """Connected sum whose two joining arcs cross once; returns the diagram
    and the index of that crossing."""
    s = connected_sum(d1, d2)
    off = max(d1.ends)
    e1 = min(d1.ends)
    e2 = min(d2.ends) + off
    n1, n2 = max(s.ends) + 1, max(s.ends) + 2
    xs = [list(x) for x in s.crossings]
    (h1, p1), (h2, p2) = s.head[e1], s.head[e2]
    xs[h1][p1] = n1
    xs[h2][p2] = n2
    for new in ([e1, n2, n1, e2, 1], [e1, e2, n1, n2, -1]):
        try:
            return Diagram(xs + [new]), len(xs)
        except NonRealizable:
            continue
    raise AssertionError("no planar twisted band")


def test_one_kink_has_one_r1_site():
    assert len(find_moves(KINK, R1)) == 1


def test_clasp_has_one_r2_site():
    assert CLASP.num_components == 2
    assert len(find_moves(CLASP, R2)) == 1


def test_reduced_trefoil_has_no_r1_r2_sites():
    assert find_moves(trefoil(), R1) == []
    assert find_moves(trefoil(), R2) == []


def test_r1_reduce_kink():
    out = apply_move(KINK, find_moves(KINK, R1)[0])
    assert len(out) == 0 and out.free_loops == 1


def test_stale_site():
    site = find_moves(KINK, R1)[0]
    with pytest.raises(StaleSite):
        apply_move(trefoil(), site)


def test_unknown_kind():
    with pytest.raises(KnotforgeError):
        find_moves(KINK, "R4")


def test_reducing_moves_drop_crossings():
    for seed in range(40):
        d = random_diagram(seed, 8, moves=4)
        for kind, drop in ((R1, 1), (R2, 2)):
            for site in find_moves(d, kind):
                assert len(apply_move(d, site)) == len(d) - drop


def test_r3_is_an_involution():
    checked = 0
    for seed in range(300):
        d = random_diagram(seed, 8, moves=3)
        for site in find_moves(d, R3):
            e = apply_move(d, site)
            back = [apply_move(e, s) for s in find_moves(e, R3)]
            assert canonical_code(d) in {canonical_code(b) for b in back}
            checked += 1
    assert checked > 20


def test_flypes_preserve_alternation_crossings_writhe():
    count = 0
    for n in (5, 6, 7):
        for d in generate_alternating(n):
            for site in find_moves(d, FLYPE):
                e = apply_move(d, site)
                assert e.is_alternating()
                assert len(e) == len(d)
                assert e.writhe() == d.writhe()
                count += 1
    assert count > 50


def test_nugatory_examples():
    assert is_nugatory(KINK, 0)
    assert nugatory_crossings(trefoil()) == []
    d, band = twisted_band_sum(trefoil(), trefoil())
    assert len(d) == 7
    assert is_nugatory(d, band)
    assert nugatory_crossings(d) == [band]
    assert face_count(d.pd) == len(d) + 2


def test_nugatory_matches_cut_search():
    hits = 0
    for seed in range(150):
        d = random_diagram(seed, 6, moves=3)
        for site in find_moves(d, R1, "increase")[:2]:
            d2 = apply_move(d, site)
            for i in range(len(d2)):
                assert is_nugatory(d2, i) == is_cut_crossing(d2.pd, i)
                hits += is_nugatory(d2, i)
    d, band = twisted_band_sum(trefoil(), trefoil())
    assert [i for i in range(len(d)) if is_cut_crossing(d.pd, i)] == [band]
    assert hits > 100


def test_mirror_and_reverse():
    t = trefoil()
    m = mirror(t)
    assert m.writhe() == -3
    assert jones_via_bracket(m) == jones_via_bracket(fixtures.diagram("trefoil-l"))
    f = fixtures.diagram("fig8")
    assert reverse(f).writhe() == f.writhe()


def test_granny_knot():
    g = connected_sum(trefoil(), trefoil())
    assert len(g) == 6 and g.writhe() == 6
    assert g.num_components == 1
    assert not is_prime_diagram(g)
    assert jones_via_bracket(g) == jones_via_bracket(trefoil()) ** 2


def test_simplify_examples():
    double = apply_move(KINK, find_moves(KINK, R1, "increase")[0])
    assert len(double) == 2
    out = simplify(double)
    assert len(out) == 0 and out.free_loops == 1
    t = trefoil()
    assert simplify(t) == t
    u = simplify(CLASP)
    assert len(u) == 0 and u.free_loops == 2


@given(st.integers(0, 10**6))
def test_simplify_idempotent(seed):
    d = random_diagram(seed, 8, moves=5)
    s = simplify(d)
    assert simplify(s) == s
    assert len(s) <= len(d)


MU_A = -LaurentPoly.var("A", 2) - LaurentPoly.var("A", -2)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_random_move_invariance(seed, pick):
    d = random_diagram(seed, 6, moves=2)
    sites = []
    for kind in (R1, R2, R3, FLYPE):
        sites += find_moves(d, kind)
    sites += find_moves(d, R1, "increase") + find_moves(d, R2, "increase")
    site = sites[pick % len(sites)]
    e = apply_move(d, site)
    assert jones_via_bracket(e) == jones_via_bracket(d)
    assert kauffman_F(e) == kauffman_F(d)
    dw = e.writhe() - d.writhe()
    if site.kind == R1:
        assert abs(dw) == 1
        assert bracket(e) == LaurentPoly.monomial((-1) ** dw, A=3 * dw) * bracket(d)
        assert kauffman_lambda(e) == LaurentPoly.var("a", dw) * kauffman_lambda(d)
    else:
        assert dw == 0
        assert bracket(e) == bracket(d)
        assert kauffman_lambda(e) == kauffman_lambda(d)
