from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotforge import fixtures
from knotforge.bracket import jones_via_bracket
from knotforge.classical import (
    PolyCurve3,
    chromatic_polynomial,
    diagram_from_curves,
    format_curves,
    gauss_integral,
    linking_number,
    parse_curves,
    projected_linking_number,
    read_curves,
    tait_graph,
)
from knotforge.diagram import Diagram
from knotforge.errors import CurvesTooClose, DisconnectedDiagram, MalformedCode, SameComponent
from knotforge.moves import R1, R2, R3, apply_move, find_moves
from knotforge.poly import LaurentPoly
from knotforge.randomdiag import random_diagram

from oracles import count_colorings

k = LaurentPoly.var("k")


def test_linking_examples():
    assert linking_number(Diagram.unlink(2), 0, 1) == 0
    assert linking_number(fixtures.diagram("hopf-plus"), 0, 1) == 1
    assert linking_number(fixtures.diagram("hopf-minus"), 0, 1) == -1
    mx = fixtures.diagram("maxwell")
    assert linking_number(mx, 0, 1) == 0
    assert jones_via_bracket(mx) != jones_via_bracket(Diagram.unlink(2))


def test_same_component():
    with pytest.raises(SameComponent):
        linking_number(fixtures.diagram("hopf-plus"), 1, 1)


@given(st.integers(0, 10**6))
def test_linking_symmetry_mirror_moves(seed):
    d = random_diagram(seed, 8, moves=2)
    c = len(d.components)
    for i, j in combinations(range(c), 2):
        lk = linking_number(d, i, j)
        assert lk == linking_number(d, j, i)
        assert linking_number(d.mirror(), i, j) == -lk
    for kind in (R1, R2, R3):
        for site in find_moves(d, kind)[:2]:
            e = apply_move(d, site)
            if len(e.components) == c:
                assert sorted(abs(linking_number(e, i, j)) for i, j in combinations(range(c), 2)) == sorted(
                    abs(linking_number(d, i, j)) for i, j in combinations(range(c), 2)
                )


def test_gauss_integral_examples():
    split = fixtures.curves("split3d")
    assert abs(gauss_integral(*split)) < 1e-6
    hopf = fixtures.curves("hopf3d")
    g = gauss_integral(*hopf)
    assert abs(abs(g) - 1) < 1e-3
    assert round(g) == linking_number(diagram_from_curves(hopf), 0, 1) == projected_linking_number(*hopf)
    assert abs(gauss_integral(*fixtures.curves("maxwell3d"))) < 1e-3


def test_maxwell_embedding_projects_to_fixture():
    d = diagram_from_curves(fixtures.curves("maxwell3d"))
    assert jones_via_bracket(d) == jones_via_bracket(fixtures.diagram("maxwell"))
    d = diagram_from_curves(fixtures.curves("hopf3d"))
    assert jones_via_bracket(d) == jones_via_bracket(fixtures.diagram("hopf-plus"))


@pytest.mark.parametrize("name", ["hopf3d", "maxwell3d", "split3d"])
def test_gauss_integral_perturbations(name):
    rng = np.random.default_rng(11)
    curves = fixtures.curves(name)
    for _ in range(20):
        c1, c2 = (c.perturbed(rng, 0.03) for c in curves)
        g = gauss_integral(c1, c2)
        assert abs(g - round(g)) < 1e-3
        assert round(g) == linking_number(diagram_from_curves([c1, c2]), 0, 1)


def test_gauss_integral_antisymmetry_under_reversal():
    c1, c2 = fixtures.curves("hopf3d")
    rev = PolyCurve3(c2.points[::-1].copy())
    assert abs(gauss_integral(c1, c2) + gauss_integral(c1, rev)) < 1e-9
    assert abs(gauss_integral(c1, c2) - gauss_integral(c2, c1)) < 1e-9


def test_curves_too_close():
    c = fixtures.curves("hopf3d")[0]
    with pytest.raises(CurvesTooClose):
        gauss_integral(c, PolyCurve3(c.points + 1e-12))


def test_curve_validation():
    with pytest.raises(MalformedCode):
        PolyCurve3(np.zeros((2, 3)))
    with pytest.raises(MalformedCode):
        PolyCurve3(np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]]))


def test_curve_file_round_trip(tmp_path):
    curves = fixtures.curves("maxwell3d")
    p = tmp_path / "mx.txt"
    p.write_text(format_curves(curves))
    back = read_curves(p)
    assert len(back) == 2
    for c, b in zip(curves, back):
        assert np.allclose(c.points, b.points)
    assert len(parse_curves("0 0 0\n1 0 0\n0 1 0\n")) == 1


def test_tait_trefoil():
    d = fixtures.diagram("trefoil-r")
    w, b = tait_graph(d, "white"), tait_graph(d, "black")
    graphs = sorted([w, b], key=lambda g: g.num_vertices)
    assert (graphs[0].num_vertices, graphs[0].num_edges) == (2, 3)
    assert len({frozenset(e[:2]) for e in graphs[0].edges}) == 1
    assert (graphs[1].num_vertices, graphs[1].num_edges) == (3, 3)
    assert chromatic_polynomial(graphs[1]) == k * (k - 1) * (k - 2)


def test_tait_kink_and_hopf():
    kink = Diagram.from_pd([(1, 1, 2, 2)])
    gs = [tait_graph(kink, c) for c in ("white", "black")]
    loops = [g for g in gs if g.num_vertices == 1]
    assert len(loops) == 1 and loops[0].edges[0][0] == loops[0].edges[0][1]
    assert chromatic_polynomial(loops[0]) == 0
    h = fixtures.diagram("hopf-plus")
    g = tait_graph(h, "white")
    assert g.num_vertices == 2 and g.num_edges == 2


def test_tait_disconnected():
    with pytest.raises(DisconnectedDiagram):
        tait_graph(Diagram.unlink(2))


def test_tait_duality_counts_and_mirror_signs():
    for name in fixtures.names():
        d = fixtures.diagram(name)
        if not d.crossings:
            continue
        w, b = tait_graph(d, "white"), tait_graph(d, "black")
        assert w.num_vertices + b.num_vertices == d.num_faces()
        assert w.num_edges == b.num_edges == len(d)
        # mirroring keeps the plane graph, so match faces by their edge sets
        m = d.mirror()
        wfaces = {frozenset(d.faces()[v].edges) for v in w.vertices}
        for color in ("white", "black"):
            mg = tait_graph(m, color)
            if {frozenset(m.faces()[v].edges) for v in mg.vertices} == wfaces:
                break
        else:
            raise AssertionError("mirror lost the face structure")
        assert sorted(-e[2] for e in w.edges) == sorted(e[2] for e in mg.edges)


def test_chromatic_examples():
    assert chromatic_polynomial((2, [(0, 1)])) == k * (k - 1)
    assert chromatic_polynomial((3, [(0, 1), (1, 2), (0, 2)])) == k * (k - 1) * (k - 2)
    assert chromatic_polynomial((2, [(0, 1), (1, 1)])) == 0


def _graphs_up_to(max_edges, n):
    pairs = [(u, v) for u in range(n) for v in range(u, n)]
    rng = np.random.default_rng(5)
    for m in range(max_edges + 1):
        for _ in range(15):
            idx = rng.integers(0, len(pairs), size=m)
            yield [pairs[i] for i in idx]


def test_chromatic_matches_bruteforce_small_graphs():
    for n in range(1, 6):
        for edges in _graphs_up_to(8, n):
            p = chromatic_polynomial((n, edges))
            for kk in (2, 3):
                assert p.evaluate({"k": kk}) == count_colorings(n, edges, kk)


@given(st.integers(0, 10**6))
def test_tait_edge_count(seed):
    d = random_diagram(seed, 8, moves=2)
    if d.is_connected() and d.crossings:
        assert tait_graph(d).num_edges == len(d)
