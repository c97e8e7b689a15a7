import dataclasses
import json

import pytest

from knotforge import fixtures
from knotforge.bracket import kauffman_F
from knotforge.census import (
    CensusClass,
    census_entries,
    check_tait,
    chord_canonical,
    dedupe,
    flype_closure,
    flype_neighbours,
    generate_alternating,
    is_prime_diagram,
    load_entries,
    make_entry,
    run_census,
    store_path,
)
from knotforge.diagram import canonical_code
from knotforge.errors import CapExceeded, FingerprintClash
from knotforge.moves import connected_sum, is_reduced


@pytest.fixture(scope="module")
def entries():
    return {n: census_entries(n) for n in range(3, 8)}


def test_n3_two_diagrams():
    ds = generate_alternating(3)
    assert len(ds) == 2
    assert sorted(d.writhe() for d in ds) == [-3, 3]


def test_n4_contains_figure_eight():
    codes = {canonical_code(d) for d in generate_alternating(4)}
    assert canonical_code(fixtures.diagram("fig8")) in codes


def test_nugatory_filter_is_monotone():
    # a nugatory crossing always sits behind a 2-edge cut, so the prime filter
    # has to be off as well for the extra diagrams to survive
    loose = generate_alternating(3, reduced=False, prime=False)
    assert len(loose) > len(generate_alternating(3))
    assert any(not is_reduced(d) for d in loose)
    assert len(generate_alternating(3, reduced=False)) == len(generate_alternating(3))


def test_generated_diagrams_are_clean():
    for n in range(3, 8):
        for d in generate_alternating(n):
            assert len(d) == n
            assert d.num_components == 1
            assert d.is_alternating()
            assert is_reduced(d)
            assert is_prime_diagram(d)


def test_primality_examples():
    t = fixtures.diagram("trefoil-r")
    assert is_prime_diagram(t)
    assert not is_prime_diagram(connected_sum(t, t))


def test_chord_canonical_rotation_invariant():
    partner = (3, 4, 5, 0, 1, 2)
    rotated = tuple((partner[(i + 1) % 6] - 1) % 6 for i in range(6))
    assert chord_canonical(partner) == chord_canonical(rotated)


def test_dedupe_counts(entries):
    assert len(dedupe(entries[3], fold_mirrors=True)) == 1
    assert len(dedupe(entries[3], fold_mirrors=False)) == 2
    assert len(dedupe(entries[7], fold_mirrors=True)) == 7


def test_orbits_share_fingerprint_and_writhe(entries):
    for n, es in entries.items():
        for cls_ in dedupe(es):
            assert len({e.fingerprint for e in cls_.members}) == 1
            assert len({e.writhe for e in cls_.members}) == 1
            assert {e.n for e in cls_.members} == {n}


def test_fingerprints_flype_invariant(entries):
    for es in entries.values():
        for e in es[:8]:
            d = e.diagram()
            for c in flype_neighbours(d):
                other = make_entry(dataclasses.replace(e, code=c).diagram())
                assert other.fingerprint == e.fingerprint


def test_generated_sets_are_flype_closed():
    for n in (5, 6):
        ds = generate_alternating(n)
        assert len(flype_closure(ds)) == len(ds)


def test_fingerprint_clash_is_reported(entries):
    r, l = entries[3]
    fake = dataclasses.replace(l, jones=r.jones, kauffman_f=r.kauffman_f, det=r.det)
    with pytest.raises(FingerprintClash):
        dedupe([dataclasses.replace(r), fake])


def test_tait_report_n3_to_6(entries):
    classes = {n: dedupe(entries[n], fold_mirrors=True) for n in range(3, 7)}
    rep = check_tait(classes, fold_mirrors=True)
    assert rep.ok
    assert rep.t2_violations == [] and rep.t1_collisions == []
    assert rep.classes_checked == 1 + 1 + 2 + 3


def test_single_class_report():
    e = make_entry(fixtures.diagram("trefoil-r"))
    rep = check_tait({3: [CensusClass(0, [e])]})
    assert rep.ok and rep.diagrams_checked == 1


def test_cap():
    with pytest.raises(CapExceeded):
        generate_alternating(11)
    with pytest.raises(CapExceeded):
        run_census(11)


def test_store_round_trip(tmp_path, entries):
    res = run_census(5, store=tmp_path)
    assert res.table() == "3..5: 1 1 2"
    path = store_path(tmp_path, 4)
    data = json.loads(path.read_text())
    assert data["format"] == "knotforge-census" and data["version"] == 1 and data["n"] == 4
    loaded = load_entries(tmp_path, 4)
    assert [e.code for e in loaded] == [e.code for e in entries[4]]
    assert [e.fingerprint for e in loaded] == [e.fingerprint for e in entries[4]]
    # a stale header is ignored
    data["version"] = 0
    path.write_text(json.dumps(data))
    assert load_entries(tmp_path, 4) is None
    again = run_census(5, store=tmp_path)
    assert again.counts == res.counts


def test_perko_pair_fingerprints():
    a, b = fixtures.diagram("perko-a"), fixtures.diagram("perko-b")
    assert len(a) == len(b) == 10
    assert a.writhe() != b.writhe()
    assert kauffman_F(a) == kauffman_F(b)
