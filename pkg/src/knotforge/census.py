"""Census of prime reduced alternating knot diagrams.

Pipeline for n crossings:

1. enumerate DT pairings (odd position 2i+1 with an even position), skipping
   chords between neighbouring positions, which would be kinks;
2. drop chord diagrams whose interlacement graph is disconnected (these are
   composite or nugatory) and keep one representative per rotation/reflection
   class of the chord diagram;
3. realize each survivor in the sphere with alternating over/under, together
   with its mirror;
4. keep reduced prime diagrams, keyed by canonical code;
5. close under flypes (and mirrors when folding) with a union-find;
6. fingerprint every diagram by (Jones, Kauffman F, determinant).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .bracket import bracket, jones_via_bracket, kauffman_F
from .codes import find_embedding, _gauss_pd, _occurrences
from .diagram import Diagram, _UnionFind, canonical_code, diagram_from_code
from .errors import CapExceeded, FingerprintClash
from .moves import FLYPE, apply_move, find_moves, is_reduced
from .poly import LaurentPoly
from .skein import LambdaEngine, determinant

STORE_VERSION = 1
DEFAULT_CAP = 10


# -- chord diagrams -----------------------------------------------------------

def _dt_pairings(n: int, allow_kinks: bool = False):
    """Yield partner arrays on positions 0..2n-1 from DT pairings."""
    m = 2 * n
    partner = [-1] * m
    used = [False] * m

    def rec(i):
        if i == n:
            yield tuple(partner)
            return
        odd = 2 * i  # 0-based position of label 2i+1
        for even in range(1, m, 2):
            if used[even]:
                continue
            if not allow_kinks and (even - odd) % m in (1, m - 1):
                continue
            used[even] = True
            partner[odd], partner[even] = even, odd
            yield from rec(i + 1)
            used[even] = False
            partner[odd] = partner[even] = -1

    yield from rec(0)


def chord_canonical(partner: tuple) -> tuple:
    """Minimal chord-offset sequence over rotations and reflections."""
    m = len(partner)
    best = None
    for refl in (False, True):
        p = partner
        if refl:
            p = tuple((m - partner[(m - k) % m]) % m for k in range(m))
        offs = [(p[k] - k) % m for k in range(m)]
        for r in range(m):
            cand = tuple(offs[r:] + offs[:r])
            if best is None or cand < best:
                best = cand
    return best


def interlaced(partner: tuple, a: int, b: int) -> bool:
    a0, a1 = sorted((a, partner[a]))
    b0 = b
    b1 = partner[b]
    return (a0 < b0 < a1) != (a0 < b1 < a1)


def interlacement_connected(partner: tuple) -> bool:
    chords = [k for k in range(len(partner)) if k < partner[k]]
    if len(chords) <= 1:
        return True
    seen = {chords[0]}
    stack = [chords[0]]
    while stack:
        a = stack.pop()
        for b in chords:
            if b not in seen and interlaced(partner, a, b):
                seen.add(b)
                stack.append(b)
    return len(seen) == len(chords)


def realize_alternating(partner: tuple) -> Diagram | None:
    """Alternating diagram of a one-component chord diagram, or None."""
    m = len(partner)
    ids = {}
    seq = []
    for k in range(m):
        key = min(k, partner[k])
        if key not in ids:
            ids[key] = len(ids) + 1
        seq.append(("U" if k % 2 == 0 else "O", ids[key], None))
    comps = [seq]
    occ = _occurrences(comps)
    signs = find_embedding(comps, occ)
    if signs is None:
        return None
    return Diagram(_gauss_pd(comps, occ, signs))


# -- primality ----------------------------------------------------------------

def is_prime_diagram(d: Diagram) -> bool:
    """No two edges bounding the same pair of faces cut the crossings in two."""
    n = len(d.crossings)
    if n <= 1:
        return True
    fod = d.face_of_dart
    sides = {}
    for e, ((i, p), (j, q)) in d.ends.items():
        # faces on the two sides of edge e: right of dart (i,p) and right of dart (j,q)
        sides[e] = frozenset((fod[(i, p)], fod[(j, q)]))
    edges = sorted(sides)
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            e, f = edges[a], edges[b]
            if sides[e] != sides[f] or len(sides[e]) != 2:
                continue
            if _splits(d, {e, f}):
                return False
    return True


def _splits(d: Diagram, cut: set) -> bool:
    n = len(d.crossings)
    nbr = [[] for _ in range(n)]
    for e, ((i, _), (j, _)) in d.ends.items():
        if e not in cut:
            nbr[i].append(j)
            nbr[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in nbr[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) < n


# -- generation ---------------------------------------------------------------

def generate_alternating(
    n: int,
    *,
    reduced: bool = True,
    prime: bool = True,
    cap: int = DEFAULT_CAP,
    unsafe_cap: bool = False,
) -> list[Diagram]:
    """All alternating knot diagrams with n crossings, one per canonical code."""
    if n < 1:
        raise CapExceeded("crossing number must be positive")
    if n > cap and not unsafe_cap:
        raise CapExceeded(f"n = {n} exceeds the census cap {cap}")
    seen_chords = set()
    codes: dict = {}
    for partner in _dt_pairings(n, allow_kinks=not reduced):
        key = chord_canonical(partner)
        if key in seen_chords:
            continue
        seen_chords.add(key)
        if reduced and prime and not interlacement_connected(partner):
            continue
        d = realize_alternating(partner)
        if d is None:
            continue
        if reduced and not is_reduced(d):
            continue
        if prime and not is_prime_diagram(d):
            continue
        for x in (d, d.mirror()):
            codes.setdefault(canonical_code(x), x)
    return [codes[k] for k in sorted(codes)]


# -- entries, fingerprints, classes ------------------------------------------

@dataclass
class CensusEntry:
    code: tuple
    n: int
    writhe: int
    jones: LaurentPoly
    kauffman_f: LaurentPoly
    det: int
    orbit: int = -1

    @property
    def fingerprint(self) -> tuple:
        return (self.jones, self.kauffman_f, self.det)

    def diagram(self) -> Diagram:
        return diagram_from_code(self.code)

    def to_json(self) -> dict:
        return {
            "code": [[list(x) for x in piece] for piece in self.code[0]],
            "free_loops": self.code[1],
            "n": self.n,
            "writhe": self.writhe,
            "jones": self.jones.to_json(),
            "kauffman_f": self.kauffman_f.to_json(),
            "det": self.det,
            "orbit": self.orbit,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CensusEntry":
        code = (tuple(tuple(tuple(x) for x in piece) for piece in data["code"]), data["free_loops"])
        return cls(
            code,
            data["n"],
            data["writhe"],
            LaurentPoly.from_json(data["jones"]),
            LaurentPoly.from_json(data["kauffman_f"]),
            data["det"],
            data.get("orbit", -1),
        )


def make_entry(d: Diagram, engine: LambdaEngine | None = None) -> CensusEntry:
    return CensusEntry(
        canonical_code(d),
        len(d),
        d.writhe(),
        jones_via_bracket(d),
        kauffman_F(d, engine=engine),
        determinant(d),
    )


def flype_neighbours(d: Diagram) -> list[tuple]:
    return [canonical_code(apply_move(d, s)) for s in find_moves(d, FLYPE)]


@dataclass
class CensusClass:
    orbit: int
    members: list[CensusEntry] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.members[0].n


def dedupe(entries: list[CensusEntry], fold_mirrors: bool = False) -> list[CensusClass]:
    """Flype-orbit closure, optionally merged with mirror images.

    Two classes with equal fingerprints raise :class:`FingerprintClash`.
    """
    by_code = {e.code: e for e in entries}
    uf = _UnionFind()
    for e in entries:
        uf.find(e.code)
    for e in entries:
        d = e.diagram()
        for c in flype_neighbours(d):
            if c in by_code:
                uf.union(e.code, c)
        if fold_mirrors:
            m = canonical_code(d.mirror())
            if m in by_code:
                uf.union(e.code, m)
    groups: dict = {}
    for e in entries:
        groups.setdefault(uf.find(e.code), []).append(e)
    classes = []
    for k, root in enumerate(sorted(groups)):
        members = sorted(groups[root], key=lambda x: x.code)
        for e in members:
            e.orbit = k
        classes.append(CensusClass(k, members))
    seen: dict = {}
    for cls_ in classes:
        fps = {e.fingerprint for e in cls_.members}
        for fp in fps:
            if fp in seen and seen[fp] != cls_.orbit:
                raise FingerprintClash(
                    f"orbits {seen[fp]} and {cls_.orbit} share a fingerprint but are not flype-related"
                )
            seen[fp] = cls_.orbit
    return classes


def flype_closure(diagrams: list[Diagram]) -> list[Diagram]:
    """Add any flype images missing from the list (a completeness check)."""
    codes = {canonical_code(d): d for d in diagrams}
    todo = list(codes.values())
    while todo:
        d = todo.pop()
        for s in find_moves(d, FLYPE):
            e = apply_move(d, s)
            c = canonical_code(e)
            if c not in codes:
                codes[c] = e
                todo.append(e)
    return [codes[k] for k in sorted(codes)]


# -- Tait checks ----------------------------------------------------------------

@dataclass
class TaitReport:
    t1_span_violations: list = field(default_factory=list)
    t1_collisions: list = field(default_factory=list)
    t2_violations: list = field(default_factory=list)
    t3_violations: list = field(default_factory=list)
    classes_checked: int = 0
    diagrams_checked: int = 0

    @property
    def ok(self) -> bool:
        return not (self.t1_span_violations or self.t1_collisions or self.t2_violations or self.t3_violations)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "classes_checked": self.classes_checked,
            "diagrams_checked": self.diagrams_checked,
            "t1_span_violations": self.t1_span_violations,
            "t1_collisions": self.t1_collisions,
            "t2_violations": self.t2_violations,
            "t3_violations": self.t3_violations,
        }


def check_tait(classes_by_n: dict[int, list[CensusClass]], fold_mirrors: bool = False) -> TaitReport:
    """T2: one writhe per flype orbit (mirror-merged classes are compared up
    to sign).  T3: members of an orbit are flype-connected.  T1: bracket span
    4n, and no fingerprint shared with a smaller crossing number."""
    rep = TaitReport()
    lower: dict = {}
    for n in sorted(classes_by_n):
        for cls_ in classes_by_n[n]:
            rep.classes_checked += 1
            members = cls_.members
            writhes = {e.writhe for e in members}
            if fold_mirrors:
                writhes = {abs(w) for w in writhes}
            if len(writhes) > 1:
                rep.t2_violations.append({"n": n, "orbit": cls_.orbit, "writhes": sorted(writhes)})
            if not _flype_connected(members, fold_mirrors):
                rep.t3_violations.append({"n": n, "orbit": cls_.orbit})
            for e in members:
                rep.diagrams_checked += 1
                span = bracket(e.diagram()).span("A")
                if span != 4 * n:
                    rep.t1_span_violations.append({"n": n, "orbit": cls_.orbit, "span": str(span)})
                if e.fingerprint in lower:
                    rep.t1_collisions.append({"n": n, "orbit": cls_.orbit, "smaller_n": lower[e.fingerprint]})
        for cls_ in classes_by_n[n]:
            for e in cls_.members:
                lower.setdefault(e.fingerprint, n)
    return rep


def _flype_connected(members: list[CensusEntry], fold_mirrors: bool) -> bool:
    codes = {e.code for e in members}
    start = members[0].code
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        d = diagram_from_code(c)
        nbrs = flype_neighbours(d)
        if fold_mirrors:
            nbrs.append(canonical_code(d.mirror()))
        for x in nbrs:
            if x in codes and x not in seen:
                seen.add(x)
                stack.append(x)
    return seen == codes


# -- store and driver -----------------------------------------------------------

def store_path(store: str | os.PathLike, n: int) -> Path:
    return Path(store) / f"census_n{n:02d}.json"


def save_entries(store, n: int, entries: list[CensusEntry]) -> Path:
    path = store_path(store, n)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {
        "format": "knotforge-census",
        "version": STORE_VERSION,
        "n": n,
        "entries": [e.to_json() for e in entries],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data), encoding="utf-8")
    tmp.replace(path)
    return path


def load_entries(store, n: int) -> list[CensusEntry] | None:
    path = store_path(store, n)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None
    if data.get("format") != "knotforge-census" or data.get("version") != STORE_VERSION or data.get("n") != n:
        return None
    return [CensusEntry.from_json(x) for x in data["entries"]]


def census_entries(n: int, store=None, cap: int = DEFAULT_CAP, unsafe_cap: bool = False) -> list[CensusEntry]:
    if store is not None:
        cached = load_entries(store, n)
        if cached is not None:
            return cached
    diagrams = generate_alternating(n, cap=cap, unsafe_cap=unsafe_cap)
    engine = LambdaEngine()
    entries = [make_entry(d, engine) for d in diagrams]
    if store is not None:
        save_entries(store, n, entries)
    return entries


@dataclass
class CensusResult:
    counts: dict[int, int]
    classes: dict[int, list[CensusClass]]
    report: TaitReport | None = None

    def table(self) -> str:
        ns = sorted(self.counts)
        return f"{ns[0]}..{ns[-1]}: " + " ".join(str(self.counts[n]) for n in ns)


def run_census(
    n_max: int,
    n_min: int = 3,
    fold_mirrors: bool = True,
    tait: bool = False,
    store=None,
    cap: int = DEFAULT_CAP,
    unsafe_cap: bool = False,
) -> CensusResult:
    if n_max > cap and not unsafe_cap:
        raise CapExceeded(f"n = {n_max} exceeds the census cap {cap}; pass unsafe_cap to override")
    classes = {}
    counts = {}
    for n in range(n_min, n_max + 1):
        entries = census_entries(n, store, cap, unsafe_cap)
        classes[n] = dedupe(entries, fold_mirrors)
        counts[n] = len(classes[n])
    report = check_tait(classes, fold_mirrors) if tait else None
    return CensusResult(counts, classes, report)
