"""Oriented link diagrams in planar-diagram (PD) form.

Each crossing is a 4-tuple of edge labels listed counterclockwise starting at
the incoming under-edge, so the under strand runs slot 0 -> slot 2 and the
over strand occupies slots 1 and 3.  The crossing sign is +1 when the over
strand runs slot 3 -> slot 1 and -1 when it runs 1 -> 3::

            c                      c
            ^                      ^
       d ---|--> b  (+1)      d <--|--- b  (-1)
            |                      |
            a                      a

The ccw order of slots is the rotation system of the underlying 4-valent
plane graph; faces are traced from it and every diagram is checked to embed
in the sphere (V - E + F = 2 on each connected piece).

Smoothing convention: the A-smoothing joins slots {0,1} and {2,3}, the
B-smoothing joins {1,2} and {3,0}.  The corners between slots 1|2 and 3|0
are the A-regions (the regions swept when the over strand turns
counterclockwise).  For a positive kink the A-smoothing yields two loops, so
the kink contributes -A^3 to the bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import DisconnectedDiagram, InconsistentOrientation, MalformedCode

A_SMOOTHING = ((0, 1), (2, 3))
B_SMOOTHING = ((1, 2), (3, 0))


class Crossing(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    sign: int

    @property
    def edges(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def in_slots(self) -> tuple[int, int]:
        return (0, 3) if self.sign > 0 else (0, 1)

    def out_slots(self) -> tuple[int, int]:
        return (2, 1) if self.sign > 0 else (2, 3)

    def is_in(self, slot: int) -> bool:
        return slot == 0 or slot == (3 if self.sign > 0 else 1)


def switched(x: Sequence[int]) -> tuple:
    """Crossing change, keeping orientation."""
    a, b, c, d, s = x
    return (d, a, b, c, -1) if s > 0 else (b, c, d, a, 1)


def reversed_crossing(x: Sequence[int]) -> tuple:
    a, b, c, d, s = x
    return (c, d, a, b, s)


def flipped(x: Sequence[int]) -> tuple:
    """Image under a half turn of 3-space about an axis in the projection plane.

    The plane's orientation reverses and over/under swap, so the diagram
    still represents the same oriented link; signs are preserved.
    """
    a, b, c, d, s = x
    return (d, c, b, a, s) if s > 0 else (b, a, d, c, s)


@dataclass(frozen=True)
class Face:
    darts: tuple[tuple[int, int], ...]
    edges: tuple[int, ...]
    color: str = ""

    @property
    def corners(self) -> tuple[tuple[int, int], ...]:
        """(crossing, k) pairs: the corner between slots k-1 and k."""
        return self.darts

    def __len__(self) -> int:
        return len(self.darts)


class Diagram:
    """Immutable oriented link diagram.

    ``crossings`` holds :class:`Crossing` tuples; ``free_loops`` counts
    crossing-free circles.  Derived data (edge ends, components, faces) is
    computed lazily and cached.
    """

    __slots__ = ("crossings", "free_loops", "__dict__")

    def __init__(self, crossings: Iterable[Sequence[int]] = (), free_loops: int = 0, *, check: bool = True):
        self.crossings = tuple(Crossing(*map(int, x)) for x in crossings)
        self.free_loops = int(free_loops)
        if check:
            self.validate()

    # -- construction helpers ------------------------------------------
    @classmethod
    def unknot(cls) -> "Diagram":
        return cls((), 1)

    @classmethod
    def unlink(cls, k: int) -> "Diagram":
        return cls((), k)

    @classmethod
    def from_pd(cls, pd: Iterable[Sequence[int]], signs: Sequence[int] | None = None, free_loops: int = 0) -> "Diagram":
        """Build from PD 4-tuples, inferring over-strand directions when ``signs`` is omitted."""
        pd = [tuple(int(v) for v in x) for x in pd]
        for x in pd:
            if len(x) != 4:
                raise MalformedCode(f"PD crossing {x} does not have 4 entries")
        _check_labels(pd)
        if signs is None:
            signs = infer_signs(pd)
        if len(signs) != len(pd):
            raise MalformedCode("sign list length does not match crossings")
        return cls([(*x, s) for x, s in zip(pd, signs)], free_loops)

    def validate(self) -> None:
        pd = [x.edges for x in self.crossings]
        for x in self.crossings:
            if x.sign not in (1, -1):
                raise MalformedCode(f"crossing sign must be +1 or -1, got {x.sign}")
        _check_labels(pd)
        if self.free_loops < 0:
            raise MalformedCode("negative free loop count")
        if not self.crossings and not self.free_loops:
            raise MalformedCode("empty diagram")
        for label, ((i, p), (j, q)) in self.ends.items():
            hi = self.crossings[i].is_in(p)
            hj = self.crossings[j].is_in(q)
            if hi == hj:
                raise InconsistentOrientation(f"edge {label} has two {'heads' if hi else 'tails'}")
        self.check_planar()

    def check_planar(self) -> None:
        from .errors import NonRealizable

        n_faces = len(self._dart_faces)
        pieces = len(self.crossing_pieces)
        expected = 2 * len(self.crossings) - len(self.crossings) + 2 * pieces
        if n_faces != expected:
            raise NonRealizable(
                f"rotation system is not spherical: F={n_faces}, expected {expected}"
            )

    # -- basic data ------------------------------------------------------
    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def pd(self) -> list[tuple[int, int, int, int]]:
        return [x.edges for x in self.crossings]

    @property
    def signs(self) -> list[int]:
        return [x.sign for x in self.crossings]

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.crossings == other.crossings and self.free_loops == other.free_loops

    def __hash__(self):
        return hash((self.crossings, self.free_loops))

    def __repr__(self):
        return f"Diagram({[tuple(x) for x in self.crossings]!r}, free_loops={self.free_loops})"

    def __str__(self):
        from .codes import emit_pd

        return emit_pd(self)

    @cached_property
    def ends(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        found: dict[int, list] = {}
        for i, x in enumerate(self.crossings):
            for p, e in enumerate(x.edges):
                found.setdefault(e, []).append((i, p))
        return {e: (v[0], v[1]) for e, v in found.items()}

    @cached_property
    def head(self) -> dict[int, tuple[int, int]]:
        """Edge label -> (crossing, slot) where the edge ends."""
        out = {}
        for e, (u, v) in self.ends.items():
            out[e] = u if self.crossings[u[0]].is_in(u[1]) else v
        return out

    @cached_property
    def tail(self) -> dict[int, tuple[int, int]]:
        out = {}
        for e, (u, v) in self.ends.items():
            out[e] = v if self.crossings[u[0]].is_in(u[1]) else u
        return out

    def other_end(self, i: int, p: int) -> tuple[int, int]:
        u, v = self.ends[self.crossings[i][p]]
        return v if u == (i, p) else u

    def next_edge(self, e: int) -> int:
        i, p = self.head[e]
        return self.crossings[i][(p + 2) % 4]

    @property
    def edges(self) -> list[int]:
        return sorted(self.ends)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edge labels of each crossed component in traversal order, each starting
        at its lowest label; components ordered by that label.  Free loops are
        not listed."""
        seen = set()
        comps = []
        for e in sorted(self.ends):
            if e in seen:
                continue
            path = []
            x = e
            while x not in seen:
                seen.add(x)
                path.append(x)
                x = self.next_edge(x)
            comps.append(tuple(path))
        return tuple(comps)

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {e: k for k, comp in enumerate(self.components) for e in comp}

    @property
    def num_components(self) -> int:
        return len(self.components) + self.free_loops

    def strand_components(self, i: int) -> tuple[int, int]:
        """(under component, over component) at crossing ``i``."""
        x = self.crossings[i]
        return self.component_of[x.a], self.component_of[x.b]

    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    def is_knot(self) -> bool:
        return self.num_components == 1

    # -- alternation -----------------------------------------------------
    def passes(self, comp: Sequence[int]) -> list[tuple[int, bool]]:
        """(crossing, is_over) at the head of each edge of a component."""
        out = []
        for e in comp:
            i, p = self.head[e]
            out.append((i, p != 0))
        return out

    def is_alternating(self) -> bool:
        for comp in self.components:
            ps = [o for _, o in self.passes(comp)]
            if any(ps[k] == ps[k - 1] for k in range(len(ps))):
                return False
        return True

    # -- connectivity ----------------------------------------------------
    @cached_property
    def crossing_pieces(self) -> tuple[tuple[int, ...], ...]:
        """Crossing indices of each connected piece of the 4-valent graph."""
        n = len(self.crossings)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (i, _), (j, _) in self.ends.values():
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return tuple(tuple(g) for g in sorted(groups.values()))

    def num_pieces(self) -> int:
        return len(self.crossing_pieces) + self.free_loops

    def is_connected(self) -> bool:
        return self.num_pieces() == 1

    def is_split_diagram(self) -> bool:
        return self.num_pieces() > 1

    def sub_diagram(self, crossings: Iterable[int]) -> "Diagram":
        return Diagram([self.crossings[i] for i in crossings], 0, check=False)

    def pieces(self) -> list["Diagram"]:
        out = [self.sub_diagram(g) for g in self.crossing_pieces]
        out.extend(Diagram.unknot() for _ in range(self.free_loops))
        return out

    # -- faces -----------------------------------------------------------
    @cached_property
    def _dart_faces(self) -> list[list[tuple[int, int]]]:
        seen = set()
        faces = []
        for i in range(len(self.crossings)):
            for p in range(4):
                if (i, p) in seen:
                    continue
                orbit = []
                d = (i, p)
                while d not in seen:
                    seen.add(d)
                    orbit.append(d)
                    j, q = self.other_end(*d)
                    d = (j, (q + 1) % 4)
                faces.append(orbit)
        return faces

    @cached_property
    def face_of_dart(self) -> dict[tuple[int, int], int]:
        return {d: k for k, f in enumerate(self._dart_faces) for d in f}

    def faces(self) -> list[Face]:
        """Faces of a connected diagram with a checkerboard coloring.

        A dart ``(i, p)`` leaves crossing ``i`` along slot ``p`` with the face on
        its right; it also names the corner between slots p-1 and p.  White is
        the color of the A-regions of crossing 0.
        """
        if not self.is_connected():
            raise DisconnectedDiagram("checkerboard faces need a connected diagram; use pieces()")
        if not self.crossings:
            return [Face((), (), "white"), Face((), (), "black")]
        colors = self.face_colors()
        return [
            Face(tuple(f), tuple(self.crossings[i][p] for i, p in f), colors[k])
            for k, f in enumerate(self._dart_faces)
        ]

    def face_colors(self) -> list[str]:
        raw = self._dart_faces
        fod = self.face_of_dart
        col: dict[int, int] = {}
        for piece in self.crossing_pieces:
            start = fod[(piece[0], 0)]
            col[start] = 0
            stack = [start]
            while stack:
                f = stack.pop()
                for d in raw[f]:
                    g = fod[self.other_end(*d)]
                    if g not in col:
                        col[g] = 1 - col[f]
                        stack.append(g)
                    elif col[g] == col[f]:
                        raise InconsistentOrientation("faces are not 2-colorable")
        return ["white" if col[k] == 0 else "black" for k in range(len(raw))]

    def num_faces(self) -> int:
        return len(self._dart_faces) + 2 * self.free_loops

    # -- transformations -------------------------------------------------
    def mirror(self) -> "Diagram":
        return Diagram([switched(x) for x in self.crossings], self.free_loops, check=False)

    def reverse(self) -> "Diagram":
        return Diagram([reversed_crossing(x) for x in self.crossings], self.free_loops, check=False)

    def flip(self) -> "Diagram":
        return Diagram([flipped(x) for x in self.crossings], self.free_loops, check=False)

    def switch(self, i: int) -> "Diagram":
        xs = list(self.crossings)
        xs[i] = switched(xs[i])
        return Diagram(xs, self.free_loops, check=False)

    def reverse_component(self, k: int) -> "Diagram":
        """Reverse the orientation of one crossed component."""
        comp = set(self.components[k])
        pd = [list(x.edges) for x in self.crossings]
        return reorient(pd, self.free_loops, hints=self._hints(), flip_components={min(comp)})

    def _hints(self) -> dict[int, tuple[int, int]]:
        return dict(self.head)

    def smooth(self, i: int, pairing: Sequence[tuple[int, int]]) -> "Diagram":
        """Remove crossing ``i`` joining its slots per ``pairing``.

        Orientation of the remaining crossings is kept where it stays
        coherent; components made incoherent are re-oriented.
        """
        x = self.crossings[i]
        uf = _UnionFind()
        for p, q in pairing:
            uf.union(x[p], x[q])
        rest = [self.crossings[j] for j in range(len(self.crossings)) if j != i]
        present = set()
        pd = []
        for y in rest:
            t = [uf.find(e) for e in y.edges]
            present.update(t)
            pd.append(t)
        loops = {uf.find(e) for e in x.edges} - present
        hints = {}
        for j, y in enumerate(rest):
            # map old head slots onto relabeled edges of the remaining crossings
            for p in y.in_slots():
                hints[(j, p)] = True
        return reorient(pd, self.free_loops + len(loops), in_slots=hints)

    def oriented_smoothing(self, i: int) -> "Diagram":
        x = self.crossings[i]
        pairing = ((0, 1), (3, 2)) if x.sign > 0 else ((0, 3), (1, 2))
        uf = _UnionFind()
        for p, q in pairing:
            uf.union(x[p], x[q])
        present = set()
        xs = []
        for j, y in enumerate(self.crossings):
            if j == i:
                continue
            t = tuple(uf.find(e) for e in y.edges)
            present.update(t)
            xs.append((*t, y.sign))
        loops = {uf.find(e) for e in x.edges} - present
        return Diagram(xs, self.free_loops + len(loops), check=False)

    def relabeled(self) -> "Diagram":
        """Edge labels renumbered 1..2n along components."""
        mapping = {}
        for comp in self.components:
            for e in comp:
                mapping[e] = len(mapping) + 1
        return Diagram(
            [(*(mapping[e] for e in x.edges), x.sign) for x in self.crossings],
            self.free_loops,
            check=False,
        )


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _check_labels(pd: Sequence[Sequence[int]]) -> None:
    count: dict[int, int] = {}
    for x in pd:
        for e in x:
            count[e] = count.get(e, 0) + 1
    bad = [e for e, c in count.items() if c != 2]
    if bad:
        raise MalformedCode(f"edge labels {sorted(bad)} do not occur exactly twice")


def _label_rule_positive(x: Sequence[int]) -> bool:
    """Knot Atlas rule for an over strand with no other cue: it runs d -> b
    when b = d + 1 or when d > b + 1 (the wrap-around edge)."""
    _, b, _, d = x[:4]
    return b == d + 1 or d - b > 1


def infer_signs(pd: Sequence[Sequence[int]]) -> list[int]:
    """Propagate edge directions from the under strands to the over strands.

    Components that never pass under anything get their direction from the
    label rule at their lowest crossing.
    """
    n = len(pd)
    ends: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(pd):
        for p, e in enumerate(x):
            ends.setdefault(e, []).append((i, p))
    sign: list[int | None] = [None] * n

    def is_head(i, p):
        if p == 0:
            return True
        if p == 2:
            return False
        if sign[i] is None:
            return None
        return p == (3 if sign[i] > 0 else 1)

    def force(j, q, head: bool):
        # slot q (1 or 3) of crossing j is a head iff `head`
        want = 1 if (q == 3) == head else -1
        if sign[j] is None:
            sign[j] = want
            return True
        if sign[j] != want:
            raise InconsistentOrientation(f"crossing {j} receives both over directions")
        return False

    def propagate():
        changed = True
        while changed:
            changed = False
            for e, ((i, p), (j, q)) in ends.items():
                hi, hj = is_head(i, p), is_head(j, q)
                if hi is not None and hj is not None:
                    if hi == hj:
                        raise InconsistentOrientation(f"edge {e} has inconsistent direction")
                elif hi is not None:
                    changed |= force(j, q, not hi)
                elif hj is not None:
                    changed |= force(i, p, not hj)

    propagate()
    while None in sign:
        i = sign.index(None)
        sign[i] = 1 if _label_rule_positive(pd[i]) else -1
        propagate()
    return [int(s) for s in sign]


def reorient(
    pd: Sequence[Sequence[int]],
    free_loops: int = 0,
    *,
    in_slots: dict[tuple[int, int], bool] | None = None,
    hints: dict | None = None,
    flip_components: set | None = None,
) -> Diagram:
    """Orient an unoriented PD (slots 0/2 under) and rotate tuples into convention.

    Each component takes the direction suggested by the first slot on it found
    in ``in_slots`` (``(crossing, slot)`` marked as an incoming slot); without
    a hint, the lowest-labelled edge points toward its lower (crossing, slot)
    end.  ``hints`` maps edge label -> head (crossing, slot).
    """
    pd = [list(x) for x in pd]
    ends: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(pd):
        for p, e in enumerate(x):
            ends.setdefault(e, []).append((i, p))
    for e, v in ends.items():
        if len(v) != 2:
            raise MalformedCode(f"edge {e} occurs {len(v)} times")
    in_slots = in_slots or {}
    head_of: dict[int, tuple[int, int]] = {}
    seen = set()
    for e0 in sorted(ends):
        if e0 in seen:
            continue
        # walk the unoriented component from e0 in a fixed direction
        u, v = sorted(ends[e0])
        walk = []  # (edge, head slot)
        e, h = e0, u
        while True:
            walk.append((e, h))
            seen.add(e)
            i, p = h
            e2 = pd[i][(p + 2) % 4]
            a, b = ends[e2]
            h2 = b if a == (i, (p + 2) % 4) else a
            e, h = e2, h2
            if e == e0:
                break
        forward = None
        if hints:
            for e, h in walk:
                if e in hints:
                    forward = hints[e] == h
                    break
        if forward is None:
            for e, h in walk:
                tail = ends[e][0] if ends[e][1] == h else ends[e][1]
                if h in in_slots:
                    forward = True
                    break
                if tail in in_slots:
                    forward = False
                    break
        if forward is None:
            forward = True
        if flip_components and e0 in flip_components:
            forward = not forward
        for e, h in walk:
            if forward:
                head_of[e] = h
            else:
                a, b = ends[e]
                head_of[e] = a if b == h else b
    heads = set(head_of.values())
    xs = []
    for i, x in enumerate(pd):
        if (i, 0) not in heads:
            x = x[2:] + x[:2]
            over_in = 1 if (i, 3) in heads else 3
        else:
            over_in = 3 if (i, 3) in heads else 1
        xs.append((*x, 1 if over_in == 3 else -1))
    return Diagram(xs, free_loops, check=False)


# -- canonical codes ------------------------------------------------------

CanonicalCode = tuple  # (tuple of piece codes, free_loops)


def _traverse_label(xs: Sequence[tuple], start: int) -> tuple:
    """Relabel one connected piece by traversal from edge ``start``."""
    head = {}
    for i, x in enumerate(xs):
        head[x[0]] = (i, 0)
        head[x[3] if x[4] > 0 else x[1]] = (i, 1 if x[4] < 0 else 3)
    new: dict[int, int] = {}
    order: list[int] = []
    e = start
    k = 0
    while True:
        while e not in new:
            k += 1
            new[e] = k
            order.append(e)
            i, p = head[e]
            e = xs[i][(p + 2) % 4]
        # next component: first unlabelled in-edge at a crossing reached so far
        nxt = None
        for f in order:
            i, p = head[f]
            x = xs[i]
            q = (3 if x[4] > 0 else 1) if p == 0 else 0
            g = x[q]
            if g not in new:
                nxt = g
                break
        if nxt is None:
            break
        e = nxt
    return tuple(sorted((new[x[0]], new[x[1]], new[x[2]], new[x[3]], x[4]) for x in xs))


def piece_code(xs: Sequence[tuple]) -> tuple:
    """Minimal relabelled code of a connected piece over basepoints, global
    orientation reversal and the sphere flip."""
    best = None
    variants = [list(xs)]
    variants.append([reversed_crossing(x) for x in xs])
    fl = [flipped(x) for x in xs]
    variants.append(fl)
    variants.append([reversed_crossing(x) for x in fl])
    for var in variants:
        for x in var:
            code = _traverse_label(var, x[0])
            if best is None or code < best:
                best = code
            # every edge is the incoming under-edge of some crossing or an over-in edge
            e = x[3] if x[4] > 0 else x[1]
            code = _traverse_label(var, e)
            if code < best:
                best = code
    return best


def canonical_code(d: Diagram) -> CanonicalCode:
    """Key equal for diagrams differing by relabelling, basepoints, global
    orientation reversal or the sphere flip."""
    pieces = []
    for g in d.crossing_pieces:
        pieces.append(piece_code([d.crossings[i] for i in g]))
    pieces.sort()
    return (tuple(pieces), d.free_loops)


def diagram_from_code(code: CanonicalCode) -> Diagram:
    pieces, loops = code
    xs = []
    offset = 0
    for piece in pieces:
        top = 0
        for x in piece:
            xs.append((x[0] + offset, x[1] + offset, x[2] + offset, x[3] + offset, x[4]))
            top = max(top, *x[:4])
        offset += top
    return Diagram(xs, loops)


def canonical(d: Diagram) -> Diagram:
    return diagram_from_code(canonical_code(d))


def diagram_faces(d: Diagram) -> list[Face]:
    return d.faces()
