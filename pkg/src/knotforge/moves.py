"""Reidemeister moves, flypes, nugatory crossings and a greedy simplifier.

Sites are found from faces: monogons (R1), bigons whose two crossings share
an over strand (R2), triangles with one strand over both others (R3).  A
flype site is a crossing next to a 2-tangle, i.e. a crossing set cut off by
exactly four edges, two of which meet the crossing.  Increasing moves are
listed with ``direction="increase"``: an R1 kink on any edge, or an R2
finger pushing one edge across another edge of the same face.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .diagram import Diagram, _UnionFind, flipped, reorient
from .errors import KnotforgeError, NonRealizable, StaleSite

R1, R2, R3, FLYPE = "R1", "R2", "R3", "FLYPE"
KINDS = (R1, R2, R3, FLYPE)


@dataclass(frozen=True)
class MoveSite:
    kind: str
    direction: str
    crossings: tuple[int, ...]
    data: tuple = ()
    source: tuple = field(default=(), compare=False, repr=False)

    def describe(self) -> str:
        xs = ",".join(str(i) for i in self.crossings)
        return f"{self.kind} {self.direction} crossings=[{xs}] data={list(self.data)}"


def _key(d: Diagram) -> tuple:
    return (d.crossings, d.free_loops)


# -- site search ------------------------------------------------------------

def find_moves(d: Diagram, kind: str, direction: str = "reduce") -> list[MoveSite]:
    """Every applicable site of one kind."""
    kind = kind.upper()
    if kind not in KINDS:
        raise KnotforgeError(f"unknown move kind {kind!r}")
    if direction not in ("reduce", "increase"):
        raise KnotforgeError(f"unknown direction {direction!r}")
    src = _key(d)
    if kind == R1:
        sites = _r1_sites(d) if direction == "reduce" else _r1_add_sites(d)
    elif kind == R2:
        sites = _r2_sites(d) if direction == "reduce" else _r2_add_sites(d)
    elif kind == R3:
        sites = _r3_sites(d)
    else:
        sites = _flype_sites(d)
    return [MoveSite(s.kind, s.direction, s.crossings, s.data, src) for s in sites]


def find_all_moves(d: Diagram, increase: bool = False) -> list[MoveSite]:
    out = []
    for kind in KINDS:
        out.extend(find_moves(d, kind))
    if increase:
        out.extend(find_moves(d, R1, "increase"))
        out.extend(find_moves(d, R2, "increase"))
    return out


def _r1_sites(d: Diagram) -> list[MoveSite]:
    out = []
    seen = set()
    for face in d._dart_faces:
        if len(face) == 1:
            i, p = face[0]
            if i not in seen:
                seen.add(i)
                out.append(MoveSite(R1, "reduce", (i,), (p,)))
    return out


def _bigon_strand(d: Diagram, face) -> tuple | None:
    (i, p), (j, q) = face
    if i == j:
        return None
    # edge at (i, p) reaches (j, q-1); it is the same strand at both
    if p % 2 != (q - 1) % 2:
        return None
    return (i, p, j, q)


def _r2_sites(d: Diagram) -> list[MoveSite]:
    out = []
    seen = set()
    for face in d._dart_faces:
        if len(face) != 2:
            continue
        st = _bigon_strand(d, face)
        if st is None:
            continue
        i, p, j, q = st
        pair = frozenset((i, j))
        if pair in seen:
            continue
        seen.add(pair)
        out.append(MoveSite(R2, "reduce", (i, j), (p, q)))
    return out


def _r3_sites(d: Diagram) -> list[MoveSite]:
    out = []
    seen = set()
    for face in d._dart_faces:
        if len(face) != 3:
            continue
        cs = [i for i, _ in face]
        if len(set(cs)) != 3:
            continue
        # side k is the edge leaving face[k] along slot p, ending at face[k+1] slot p'-1
        overs = []
        for k in range(3):
            i, p = face[k]
            j, q = face[(k + 1) % 3]
            overs.append((p % 2 == 1, (q - 1) % 2 == 1))
        if not any(a and b for a, b in overs) and not any(not a and not b for a, b in overs):
            continue
        key = frozenset(face)
        if key in seen:
            continue
        seen.add(key)
        out.append(MoveSite(R3, "reduce", tuple(cs), tuple(face)))
    return out


def _r1_add_sites(d: Diagram) -> list[MoveSite]:
    out = []
    for e in d.edges:
        for v in range(4):
            out.append(MoveSite(R1, "increase", (), (e, v)))
    if d.free_loops:
        for v in range(4):
            out.append(MoveSite(R1, "increase", (), (None, v)))
    return out


def _r2_add_sites(d: Diagram) -> list[MoveSite]:
    out = []
    for face in d._dart_faces:
        for a in face:
            for b in face:
                if a == b:
                    continue
                ea = d.crossings[a[0]][a[1]]
                eb = d.crossings[b[0]][b[1]]
                if ea == eb:
                    continue
                for over in (True, False):
                    out.append(MoveSite(R2, "increase", (a[0], b[0]), (a, b, over)))
    return out


# -- application -----------------------------------------------------------

def apply_move(d: Diagram, site: MoveSite) -> Diagram:
    if site.source and site.source != _key(d):
        raise StaleSite("site was found on a different diagram")
    if site.kind == R1:
        return _r1_apply(d, site) if site.direction == "reduce" else _r1_add(d, site)
    if site.kind == R2:
        return _r2_apply(d, site) if site.direction == "reduce" else _r2_add(d, site)
    if site.kind == R3:
        return _r3_apply(d, site)
    if site.kind == FLYPE:
        return _flype_apply(d, site)
    raise KnotforgeError(f"unknown move kind {site.kind!r}")


def _drop(d: Diagram, remove: Sequence[int], unions: Sequence[tuple[int, int]]) -> Diagram:
    """Delete crossings and merge edge labels; merged edges left without any
    crossing become free loops."""
    uf = _UnionFind()
    for a, b in unions:
        uf.union(a, b)
    gone = set(remove)
    xs = []
    present = set()
    for k, x in enumerate(d.crossings):
        if k in gone:
            continue
        t = [uf.find(e) for e in x.edges]
        present.update(t)
        xs.append((*t, x.sign))
    roots = {uf.find(e) for pair in unions for e in pair}
    loops = len(roots - present)
    return Diagram(xs, d.free_loops + loops, check=False)


def _r1_apply(d: Diagram, site: MoveSite) -> Diagram:
    (i,) = site.crossings
    (p,) = site.data
    x = d.crossings[i]
    # loop edge occupies slots p-1 and p
    e1, e2 = x[(p + 1) % 4], x[(p + 2) % 4]
    return _drop(d, [i], [(e1, e2)])


def _r2_apply(d: Diagram, site: MoveSite) -> Diagram:
    i, j = site.crossings
    p, q = site.data
    xi, xj = d.crossings[i], d.crossings[j]
    return _drop(
        d,
        [i, j],
        [(xi[(p + 2) % 4], xj[(q + 1) % 4]), (xj[(q + 2) % 4], xi[(p + 1) % 4])],
    )


def _r3_apply(d: Diagram, site: MoveSite) -> Diagram:
    face = site.data
    xs = [list(x) for x in d.crossings]
    for k in range(3):
        i, p = face[k]
        j, q = face[(k + 1) % 3]
        # strand side from P=i (slot p) to Q=j (slot q-1)
        sp_in, sq_in = p, (q - 1) % 4
        sp_out, sq_out = (p + 2) % 4, (q + 1) % 4
        x_i, x_j = d.crossings[i], d.crossings[j]
        m, op, oq = x_i[sp_in], x_i[sp_out], x_j[sq_out]
        xs[i][sp_in] = oq
        xs[i][sp_out] = m
        xs[j][sq_in] = op
        xs[j][sq_out] = m
    return Diagram(xs, d.free_loops, check=False)


def _fresh(d: Diagram) -> int:
    return max(d.ends, default=0) + 1


def _r1_add(d: Diagram, site: MoveSite) -> Diagram:
    e, v = site.data
    m = _fresh(d)
    xs = [list(x) for x in d.crossings]
    loops = d.free_loops
    if e is None:
        loops -= 1
        e1 = e2 = m + 1
    else:
        j, q = d.head[e]
        e1, e2 = e, m + 1
        xs[j][q] = e2
    ell = m
    kink = [
        (e1, ell, ell, e2, -1),
        (e1, e2, ell, ell, 1),
        (ell, ell, e2, e1, 1),
        (ell, e1, e2, ell, -1),
    ][v]
    xs.append(list(kink))
    return Diagram(xs, loops, check=False)


def _r2_add(d: Diagram, site: MoveSite) -> Diagram:
    (i, p), (k, r), over = site.data
    e = d.crossings[i][p]
    f = d.crossings[k][r]
    m = _fresh(d)
    g, e2, h, f2 = m, m + 1, m + 2, m + 3
    e1, f1 = e, f
    ej, eq = d.other_end(i, p)
    fl, fs = d.other_end(k, r)
    pd = [list(x.edges) for x in d.crossings]
    pd[ej][eq] = e2
    pd[fl][fs] = f2
    X = [e1, f2, g, h]
    Y = [e2, h, g, f1]
    if over:
        X = X[1:] + X[:1]
        Y = Y[1:] + Y[:1]
    nx, ny = len(pd), len(pd) + 1
    pd.append(X)
    pd.append(Y)
    slot = {(nx, s): lab for s, lab in enumerate(X)}
    slot.update({(ny, s): lab for s, lab in enumerate(Y)})

    def at(c, lab):
        return next(s for s in range(4) if slot[(c, s)] == lab)

    hints = {}
    for lab, (a, b) in d.ends.items():
        if lab not in (e, f):
            hints[lab] = d.head[lab]
    # e runs (i,p) -> X -> Y -> (ej,eq) when its orientation follows the dart
    if d.head[e] == (ej, eq):
        hints[e1], hints[g], hints[e2] = (nx, at(nx, e1)), (ny, at(ny, g)), (ej, eq)
    else:
        hints[e2], hints[g], hints[e1] = (ny, at(ny, e2)), (nx, at(nx, g)), (i, p)
    if d.head[f] == (fl, fs):
        hints[f1], hints[h], hints[f2] = (ny, at(ny, f1)), (nx, at(nx, h)), (fl, fs)
    else:
        hints[f2], hints[h], hints[f1] = (nx, at(nx, f2)), (ny, at(ny, h)), (k, r)
    return reorient(pd, d.free_loops, hints=hints)


# -- flypes -----------------------------------------------------------------

def _flype_sites(d: Diagram, max_crossings: int = 12) -> list[MoveSite]:
    n = len(d.crossings)
    if n < 3 or n > max_crossings:
        return []
    out = []
    seen = set()
    for c in range(n):
        others = [k for k in range(n) if k != c]
        for p in range(4):
            x = d.crossings[c]
            l, u = x[p], x[(p + 1) % 4]
            if l == u or len({x[0], x[1], x[2], x[3]}) < 4:
                continue
            (tl, _), (tu, _) = d.other_end(c, p), d.other_end(c, (p + 1) % 4)
            if tl == c or tu == c:
                continue
            for S in _four_cuts(d, c, tl, tu, others):
                key = (c, p, S)
                if key in seen:
                    continue
                seen.add(key)
                site = MoveSite(FLYPE, "reduce", (c,) + S, (p,))
                try:
                    _flype_apply(d, site, check=True)
                except (NonRealizable, _NotASite):
                    continue
                out.append(site)
    return out


def _four_cuts(d: Diagram, c: int, tl: int, tu: int, others: list[int]) -> Iterator[tuple[int, ...]]:
    """Crossing sets containing both neighbours, avoiding c, with exactly four
    boundary edges, connected, leaving a nonempty connected remainder."""
    n = len(d.crossings)
    nbr = [[] for _ in range(n)]
    for (i, _), (j, _) in d.ends.values():
        nbr[i].append(j)
        nbr[j].append(i)
    rest = [k for k in others if k not in (tl, tu)]
    base = {tl, tu}
    m = len(rest)
    for mask in range(1 << m):
        S = set(base)
        for b in range(m):
            if mask >> b & 1:
                S.add(rest[b])
        if len(S) >= n - 1:
            continue
        boundary = 0
        for (i, _), (j, _) in d.ends.values():
            if (i in S) != (j in S):
                boundary += 1
                if boundary > 4:
                    break
        if boundary != 4:
            continue
        if not _connected(S, nbr) or not _connected(set(range(n)) - S - {c}, nbr):
            continue
        yield tuple(sorted(S))


def _connected(S: set, nbr) -> bool:
    if not S:
        return False
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in nbr[v]:
            if w in S and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(S)


class _NotASite(Exception):
    pass


def _flype_apply(d: Diagram, site: MoveSite, check: bool = True) -> Diagram:
    c = site.crossings[0]
    S = set(site.crossings[1:])
    (p,) = site.data
    x = d.crossings[c]
    l, u = x[p], x[(p + 1) % 4]
    x1, x2 = x[(p + 2) % 4], x[(p + 3) % 4]
    t_l = d.other_end(c, p)
    t_u = d.other_end(c, (p + 1) % 4)
    ports = []
    for lab, (a, b) in d.ends.items():
        if (a[0] in S) != (b[0] in S):
            ports.append(lab)
    if len(ports) != 4 or l not in ports or u not in ports:
        raise _NotASite()
    # walk the face above c backwards from the dart leaving c at slot p+2;
    # the first port after u is the upper right port r1
    dart = (c, (p + 2) % 4)
    r1 = None
    for _ in range(4 * len(d.crossings)):
        j, r = dart
        dart = d.other_end(j, (r - 1) % 4)
        if dart[0] == c:
            break
        lab = d.crossings[dart[0]][dart[1]]
        if lab in ports and lab != u:
            r1 = lab
            break
    if r1 is None or r1 == l:
        raise _NotASite()
    (r2,) = [q for q in ports if q not in (l, u, r1)]
    if any(e[0] == c for q in (r1, r2) for e in d.ends[q]):
        raise _NotASite()
    t_r1 = next(e for e in d.ends[r1] if e[0] in S)
    t_r2 = next(e for e in d.ends[r2] if e[0] in S)
    m = _fresh(d)
    n1, n2 = m, m + 1
    pd = [list(y.edges) for y in d.crossings]
    pd[t_l[0]][t_l[1]] = x1
    pd[t_u[0]][t_u[1]] = x2
    pd[t_r1[0]][t_r1[1]] = n1
    pd[t_r2[0]][t_r2[1]] = n2
    new_x = [0, 0, 0, 0]
    new_x[p] = r2
    new_x[(p + 1) % 4] = r1
    new_x[(p + 2) % 4] = n2
    new_x[(p + 3) % 4] = n1
    out = []
    hints = {}
    for k, y in enumerate(pd):
        if k == c:
            continue
        s = d.crossings[k].sign
        if k in S:
            # half turn of the tangle about an in-plane axis
            y = list(flipped((*y, s))[:4])
        for hs in ((0, 3) if s > 0 else (0, 1)):
            hints.setdefault(y[hs], (len(out), hs))
        out.append(y)
    out.append(new_x)
    res = reorient(out, d.free_loops, hints=hints)
    if check:
        res.check_planar()
    return res


# -- structure --------------------------------------------------------------

def is_nugatory(d: Diagram, i: int) -> bool:
    """A crossing touching one face at two corners: a cut vertex of the diagram."""
    fod = d.face_of_dart
    faces = [fod[(i, p)] for p in range(4)]
    return len(set(faces)) < 4


def nugatory_crossings(d: Diagram) -> list[int]:
    return [i for i in range(len(d.crossings)) if is_nugatory(d, i)]


def is_reduced(d: Diagram) -> bool:
    return not nugatory_crossings(d)


def mirror(d: Diagram) -> Diagram:
    return d.mirror()


def reverse(d: Diagram) -> Diagram:
    return d.reverse()


def connected_sum(d1: Diagram, d2: Diagram, edge1: int | None = None, edge2: int | None = None) -> Diagram:
    """Splice two diagrams along one edge of each, respecting orientations."""
    if not d1.crossings:
        return Diagram(d2.crossings, d2.free_loops + d1.free_loops - 1)
    if not d2.crossings:
        return Diagram(d1.crossings, d1.free_loops + d2.free_loops - 1)
    e1 = min(d1.ends) if edge1 is None else edge1
    e2 = min(d2.ends) if edge2 is None else edge2
    if e1 not in d1.ends or e2 not in d2.ends:
        raise KnotforgeError("connected_sum edge not in diagram")
    off = max(d1.ends)
    xs1 = [list(x) for x in d1.crossings]
    xs2 = [[v + off for v in x.edges] + [x.sign] for x in d2.crossings]
    h1, hs1 = d1.head[e1]
    h2, hs2 = d2.head[e2]
    xs1[h1][hs1] = e2 + off
    xs2[h2][hs2] = e1
    return Diagram(xs1 + xs2, d1.free_loops + d2.free_loops)


def simplify(d: Diagram) -> Diagram:
    """Greedy R1/R2 reduction to a fixed point."""
    while True:
        sites = _r1_sites(d)
        if not sites:
            sites = _r2_sites(d)
        if not sites:
            return d
        d = apply_move(d, sites[0])


def simplify_tracked(d: Diagram) -> tuple[Diagram, int]:
    """Simplify and report the writhe removed along the way."""
    w0 = d.writhe()
    s = simplify(d)
    return s, w0 - s.writhe()
