"""Linking numbers, the Gauss linking integral, Tait graphs and chromatic
polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .diagram import Diagram
from .errors import CurvesTooClose, DisconnectedDiagram, KnotforgeError, MalformedCode, SameComponent
from .poly import LaurentPoly

# -- combinatorial linking number ----------------------------------------------


def linking_number(d: Diagram, i: int = 0, j: int = 1) -> int:
    """Sum of crossing signs where component i passes under component j."""
    if i == j:
        raise SameComponent("linking number needs two different components")
    k = len(d.components)
    if not (0 <= i < k and 0 <= j < k):
        # free loops are unlinked from everything
        if max(i, j) < d.num_components:
            return 0
        raise KnotforgeError(f"component index out of range (diagram has {d.num_components})")
    total = 0
    for x in d.crossings:
        under = d.component_of[x.a]
        over = d.component_of[x.b]
        if under == i and over == j:
            total += x.sign
    return total


def linking_matrix(d: Diagram) -> list[list[int]]:
    k = len(d.components)
    return [[0 if a == b else linking_number(d, a, b) for b in range(k)] for a in range(k)]


# -- polygonal curves -------------------------------------------------------------


@dataclass(frozen=True)
class PolyCurve3:
    """Closed polygon in space; the last vertex joins the first."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise MalformedCode("curve vertices must be 3-vectors")
        if len(pts) < 3:
            raise MalformedCode("a closed polygon needs at least 3 vertices")
        gaps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if np.any(gaps < 1e-12):
            raise MalformedCode("curve has repeated consecutive vertices")
        object.__setattr__(self, "points", pts)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points, np.roll(self.points, -1, axis=0)

    def perturbed(self, rng: np.random.Generator, scale: float) -> "PolyCurve3":
        return PolyCurve3(self.points + rng.normal(scale=scale, size=self.points.shape))


def read_curves(path) -> list[PolyCurve3]:
    """``x y z`` per line; blank lines separate components; ``#`` comments."""
    return parse_curves(Path(path).read_text(encoding="utf-8"))


def parse_curves(text: str) -> list[PolyCurve3]:
    curves, cur = [], []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            if cur:
                curves.append(PolyCurve3(np.array(cur)))
                cur = []
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedCode(f"expected 'x y z', got {line!r}")
        cur.append([float(v) for v in parts])
    if cur:
        curves.append(PolyCurve3(np.array(cur)))
    return curves


def format_curves(curves: Sequence[PolyCurve3]) -> str:
    blocks = []
    for c in curves:
        blocks.append("\n".join(" ".join(f"{v:.9g}" for v in p) for p in c.points))
    return "\n\n".join(blocks) + "\n"


def _segment_distances(a0, a1, b0, b1) -> np.ndarray:
    """Pairwise minimum distances between segments a0a1 (rows) and b0b1 (cols)."""
    d1 = (a1 - a0)[:, None, :]
    d2 = (b1 - b0)[None, :, :]
    r = a0[:, None, :] - b0[None, :, :]
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-15, np.clip((b * f - c * e) / denom, 0, 1), 0.0)
        t = (b * s + f) / e
        t = np.clip(t, 0, 1)
        s = np.clip((b * t - c) / a, 0, 1)
    p = a0[:, None, :] + s[..., None] * d1
    q = b0[None, :, :] + t[..., None] * d2
    return np.linalg.norm(p - q, axis=-1)


def min_distance(c1: PolyCurve3, c2: PolyCurve3) -> float:
    a0, a1 = c1.segments()
    b0, b1 = c2.segments()
    return float(_segment_distances(a0, a1, b0, b1).min())


def _unit(v):
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / np.where(n == 0, 1, n)


def gauss_integral(c1: PolyCurve3, c2: PolyCurve3, tol: float = 1e-9) -> float:
    """Linking integral as a sum of exact solid angles over segment pairs."""
    if min_distance(c1, c2) <= tol:
        raise CurvesTooClose("curves meet or come closer than the tolerance")
    p1, p2 = c1.segments()
    p3, p4 = c2.segments()
    p1, p2 = p1[:, None, :], p2[:, None, :]
    p3, p4 = p3[None, :, :], p4[None, :, :]
    r13, r14, r23, r24 = p3 - p1, p4 - p1, p3 - p2, p4 - p2
    n1 = _unit(np.cross(r13, r14))
    n2 = _unit(np.cross(r14, r24))
    n3 = _unit(np.cross(r24, r23))
    n4 = _unit(np.cross(r23, r13))

    def asin(u, v):
        return np.arcsin(np.clip(np.sum(u * v, axis=-1), -1.0, 1.0))

    omega = asin(n1, n2) + asin(n2, n3) + asin(n3, n4) + asin(n4, n1)
    sign = np.sign(np.sum(np.cross(p4 - p3, p2 - p1) * r13, axis=-1))
    return float(np.sum(omega * sign) / (4 * np.pi))


def projected_linking_number(c1: PolyCurve3, c2: PolyCurve3) -> int:
    """Linking number read off the projection to the xy-plane: signed count
    of crossings where c1 passes under c2."""
    a0, a1 = c1.segments()
    b0, b1 = c2.segments()
    total = 0
    for i in range(len(a0)):
        p, r = a0[i], a1[i] - a0[i]
        for j in range(len(b0)):
            q, s = b0[j], b1[j] - b0[j]
            den = r[0] * s[1] - r[1] * s[0]
            if abs(den) < 1e-15:
                continue
            qp = q - p
            t = (qp[0] * s[1] - qp[1] * s[0]) / den
            u = (qp[0] * r[1] - qp[1] * r[0]) / den
            if not (0 <= t < 1 and 0 <= u < 1):
                continue
            z1 = p[2] + t * r[2]
            z2 = q[2] + u * s[2]
            if z1 < z2:
                # c2 over c1; right-handed (positive) when over x under points up
                total += 1 if (s[0] * r[1] - s[1] * r[0]) > 0 else -1
    return total


def diagram_from_curves(curves: Sequence[PolyCurve3]) -> Diagram:
    """Oriented diagram of the projection to the xy-plane; assumes the
    projection is generic (transverse double points away from vertices)."""
    segs = []  # (component, index, p, r)
    for k, c in enumerate(curves):
        a0, a1 = c.segments()
        segs.extend((k, i, a0[i], a1[i] - a0[i]) for i in range(len(a0)))
    hits = []  # (under-seg, t, over-seg, u)
    for x in range(len(segs)):
        kx, ix, p, r = segs[x]
        for y in range(x + 1, len(segs)):
            ky, iy, q, s = segs[y]
            if kx == ky and (abs(ix - iy) <= 1 or abs(ix - iy) == len(curves[kx].points) - 1):
                continue
            den = r[0] * s[1] - r[1] * s[0]
            if abs(den) < 1e-15:
                continue
            qp = q - p
            t = (qp[0] * s[1] - qp[1] * s[0]) / den
            u = (qp[0] * r[1] - qp[1] * r[0]) / den
            if not (0 <= t < 1 and 0 <= u < 1):
                continue
            if p[2] + t * r[2] < q[2] + u * s[2]:
                hits.append((x, t, y, u))
            else:
                hits.append((y, u, x, t))
    if not hits:
        return Diagram.unlink(len(curves))
    # passages along each component, in order of travel
    passages: dict[int, list] = {}
    for h, (us, ut, os_, ot) in enumerate(hits):
        passages.setdefault(segs[us][0], []).append(((segs[us][1], ut), h, "u"))
        passages.setdefault(segs[os_][0], []).append(((segs[os_][1], ot), h, "o"))
    slot_in: dict[tuple, int] = {}
    slot_out: dict[tuple, int] = {}
    label = 1
    for k in sorted(passages):
        ps = sorted(passages[k])
        m = len(ps)
        for n, (_, h, role) in enumerate(ps):
            slot_out[(h, role)] = label + n
            slot_in[(h, role)] = label + (n - 1) % m
        label += m
    xs, signs = [], []
    for h, (us, _, os_, _) in enumerate(hits):
        r, s = segs[us][3], segs[os_][3]
        a, c = slot_in[(h, "u")], slot_out[(h, "u")]
        oi, oo = slot_in[(h, "o")], slot_out[(h, "o")]
        # slot 1 is a quarter turn counterclockwise from the incoming under-end
        ccw = r[0] * s[1] - r[1] * s[0] < 0
        xs.append((a, oo, c, oi) if ccw else (a, oi, c, oo))
        signs.append(1 if ccw else -1)
    free = len(curves) - len(passages)
    return Diagram.from_pd(xs, signs, free)


# -- Tait graph ---------------------------------------------------------------------


@dataclass(frozen=True)
class TaitGraph:
    """Vertices are faces of one colour; each crossing joins the two faces of
    that colour at its corners.  An edge is +1 when that colour fills the
    A-regions of the crossing."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    color: str

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def simple_edges(self) -> list[tuple[int, int]]:
        idx = {v: k for k, v in enumerate(self.vertices)}
        return [(idx[u], idx[v]) for u, v, _ in self.edges]

    def to_json(self) -> dict:
        return {
            "color": self.color,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
        }


def tait_graph(d: Diagram, color: str = "white") -> TaitGraph:
    if color not in ("white", "black"):
        raise KnotforgeError("color must be 'white' or 'black'")
    if not d.is_connected():
        raise DisconnectedDiagram("Tait graphs need a connected diagram")
    if not d.crossings:
        return TaitGraph((0,), (), color)
    cols = d.face_colors()
    fod = d.face_of_dart
    verts = sorted(k for k, c in enumerate(cols) if c == color)
    edges = []
    for i in range(len(d.crossings)):
        # dart (i, k) names the corner between slots k-1 and k; corners 0 and 2 are A-regions
        fa, fb = fod[(i, 0)], fod[(i, 2)]
        if cols[fa] == color:
            edges.append((fa, fb, 1))
        else:
            edges.append((fod[(i, 1)], fod[(i, 3)], -1))
    return TaitGraph(tuple(verts), tuple(edges), color)


# -- chromatic polynomial ------------------------------------------------------------


_K = LaurentPoly.var("k")


def _graph_key(n: int, edges: Iterable[tuple[int, int]]) -> tuple:
    """Relabel vertices by first appearance in the sorted edge list; isolated
    vertices are counted, not named."""
    es = sorted(tuple(sorted(e)) for e in edges)
    label: dict[int, int] = {}
    for u, v in es:
        for w in (u, v):
            if w not in label:
                label[w] = len(label)
    ren = tuple(sorted({tuple(sorted((label[u], label[v]))) for u, v in es}))
    return n, ren


@lru_cache(maxsize=200_000)
def _chromatic(key: tuple) -> LaurentPoly:
    n, edges = key
    if any(u == v for u, v in edges):
        return LaurentPoly.const(0)
    if not edges:
        return _K ** n
    # delete and contract the last edge; parallel edges were already merged
    (u, v), rest = edges[-1], edges[:-1]
    deleted = _chromatic(_graph_key(n, rest))
    merged = [(u if a == v else a, u if b == v else b) for a, b in rest]
    contracted = _chromatic(_graph_key(n - 1, merged))
    return deleted - contracted


def chromatic_polynomial(g) -> LaurentPoly:
    """Chromatic polynomial in ``k`` by deletion and contraction.

    Accepts a :class:`TaitGraph` or a pair ``(num_vertices, edges)`` with
    vertices numbered from 0.
    """
    if isinstance(g, TaitGraph):
        n, edges = g.num_vertices, g.simple_edges()
    else:
        n, edges = g
    edges = [tuple(e[:2]) for e in edges]
    if any(u == v for u, v in edges):
        return LaurentPoly.const(0)
    return _chromatic(_graph_key(n, edges))


def count_colorings(n: int, edges: Sequence[tuple[int, int]], k: int) -> int:
    """Brute-force number of proper k-colourings."""
    from itertools import product

    count = 0
    for col in product(range(k), repeat=n):
        if all(col[u] != col[v] for u, v in edges):
            count += 1
    return count
