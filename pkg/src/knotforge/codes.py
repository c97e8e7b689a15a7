"""Text and JSON formats for diagrams, and planar realization of Gauss codes.

One diagram per line::

    PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]
    DT[4 6 2]
    GAUSS[O1+ U2+ O3+ U1+ O2+ U3+]

``PD[]`` is the unknot; ``Loop`` entries in a PD list are free circles.  An
optional fifth entry ``X(a,b,c,d,+1)`` pins the over-strand direction when
the labels do not determine it.  Gauss tokens are ``O``/``U``, the crossing
id and an optional sign; components are separated by ``|``.  Without signs
the planar embedding is searched for.  DT entries pair the odd labels
1, 3, 5, ... with the listed even labels; a positive entry means the strand
passes under at the odd label.
"""

from __future__ import annotations

import json
import re
from typing import Sequence

from .diagram import Diagram, infer_signs
from .errors import MalformedCode, NonRealizable

_PD_RE = re.compile(r"^\s*PD\s*\[(.*)\]\s*$", re.S)
_X_RE = re.compile(r"X\s*[\(\[]([^\)\]]*)[\)\]]")
_DT_RE = re.compile(r"^\s*DT\s*\[(.*)\]\s*$", re.S)
_GAUSS_RE = re.compile(r"^\s*GAUSS\s*\[(.*)\]\s*$", re.S)
_TOKEN_RE = re.compile(r"^([OU])(\d+)([+-]?)$")


def parse(code: str) -> Diagram:
    """Parse one diagram from any supported text format."""
    text = code.strip()
    if _PD_RE.match(text):
        return parse_pd(text)
    if _DT_RE.match(text):
        return parse_dt(text)
    if _GAUSS_RE.match(text):
        return parse_gauss(text)
    if text.startswith("{"):
        return from_json(json.loads(text))
    raise MalformedCode(f"unrecognised diagram code: {text[:40]!r}")


def parse_pd(text: str) -> Diagram:
    m = _PD_RE.match(text)
    if not m:
        raise MalformedCode("PD code must look like PD[X(a,b,c,d), ...]")
    body = m.group(1).strip()
    if not body:
        return Diagram.unknot()
    loops = len(re.findall(r"\bLoop\b", body))
    rest = re.sub(r"\bLoop\b(\s*\(\s*\))?", "", body)
    xs = []
    fixed = []
    for item in _X_RE.findall(rest):
        parts = [p for p in re.split(r"[\s,]+", item.strip()) if p]
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise MalformedCode(f"non-integer entry in X({item})") from exc
        if len(vals) not in (4, 5):
            raise MalformedCode(f"X({item}) needs 4 labels (optionally a sign)")
        xs.append(vals[:4])
        fixed.append(vals[4] if len(vals) == 5 else None)
    leftover = _X_RE.sub("", rest).replace(",", "").strip()
    if leftover:
        raise MalformedCode(f"unexpected text in PD code: {leftover!r}")
    if not xs:
        return Diagram.unlink(max(loops, 1))
    if all(s is None for s in fixed):
        return Diagram.from_pd(xs, None, loops)
    signs = infer_signs_with(xs, fixed)
    return Diagram.from_pd(xs, signs, loops)


def infer_signs_with(xs, fixed):
    """Sign inference honouring explicit signs: pinned crossings seed the propagation."""
    from .diagram import _check_labels

    _check_labels(xs)
    pinned = {i: s for i, s in enumerate(fixed) if s is not None}
    for s in pinned.values():
        if s not in (1, -1):
            raise MalformedCode("explicit crossing sign must be +1 or -1")
    # encode pins by building an oriented seed and re-running propagation
    signs = _propagate_from(xs, pinned)
    return signs


def _propagate_from(xs, pinned):
    from .errors import InconsistentOrientation

    n = len(xs)
    ends: dict[int, list] = {}
    for i, x in enumerate(xs):
        for p, e in enumerate(x):
            ends.setdefault(e, []).append((i, p))
    sign = [pinned.get(i) for i in range(n)]

    def is_head(i, p):
        if p == 0:
            return True
        if p == 2:
            return False
        if sign[i] is None:
            return None
        return p == (3 if sign[i] > 0 else 1)

    changed = True
    while changed:
        changed = False
        for e, ((i, p), (j, q)) in ends.items():
            hi, hj = is_head(i, p), is_head(j, q)
            if hi is not None and hj is not None:
                if hi == hj:
                    raise InconsistentOrientation(f"edge {e} has inconsistent direction")
                continue
            if hi is None and hj is None:
                continue
            k, r, head = (j, q, not hi) if hi is not None else (i, p, not hj)
            want = 1 if (r == 3) == head else -1
            sign[k] = want
            changed = True
    if None in sign:
        rest = infer_signs(xs)
        sign = [s if s is not None else r for s, r in zip(sign, rest)]
    return sign


def emit_pd(d: Diagram) -> str:
    """PD text; signs are appended only where label order would mislead."""
    if not d.crossings:
        return "PD[]" if d.free_loops == 1 else "PD[" + ", ".join(["Loop"] * d.free_loops) + "]"
    inferred = None
    try:
        inferred = infer_signs(d.pd)
    except Exception:
        pass
    items = []
    for k, x in enumerate(d.crossings):
        body = ",".join(str(v) for v in x.edges)
        if inferred is None or inferred != d.signs:
            body += f",{x.sign:+d}"
        items.append(f"X({body})")
    items.extend(["Loop"] * d.free_loops)
    return "PD[" + ", ".join(items) + "]"


# -- JSON -------------------------------------------------------------------

def to_json(d: Diagram) -> dict:
    return {
        "crossings": [
            {"id": i, "incident": list(x.edges), "sign": x.sign}
            for i, x in enumerate(d.crossings)
        ],
        "free_loops": d.free_loops,
        "writhe": d.writhe(),
        "components": [list(c) for c in d.components],
    }


def from_json(data: dict) -> Diagram:
    try:
        xs = [(*c["incident"], c["sign"]) for c in data["crossings"]]
        return Diagram(xs, data.get("free_loops", 0))
    except (KeyError, TypeError) as exc:
        raise MalformedCode(f"bad diagram JSON: {exc}") from exc


# -- Gauss codes --------------------------------------------------------------

def _gauss_tokens(text: str) -> list[list[tuple[str, int, int | None]]]:
    m = _GAUSS_RE.match(text)
    body = m.group(1) if m else text
    comps = []
    for chunk in body.split("|"):
        toks = []
        for tok in re.split(r"[\s,]+", chunk.strip()):
            if not tok:
                continue
            mt = _TOKEN_RE.match(tok)
            if not mt:
                raise MalformedCode(f"bad Gauss token {tok!r}")
            s = {"+": 1, "-": -1, "": None}[mt.group(3)]
            toks.append((mt.group(1), int(mt.group(2)), s))
        if toks:
            comps.append(toks)
    return comps


def parse_gauss(text: str) -> Diagram:
    comps = _gauss_tokens(text)
    if not comps:
        return Diagram.unknot()
    return realize_gauss(comps)


def _occurrences(comps):
    occ: dict[int, list] = {}
    for ci, comp in enumerate(comps):
        for k, (ou, x, s) in enumerate(comp):
            occ.setdefault(x, []).append((ci, k, ou, s))
    for x, v in occ.items():
        if len(v) != 2 or {v[0][2], v[1][2]} != {"O", "U"}:
            raise MalformedCode(f"crossing {x} must appear once over and once under")
        s0, s1 = v[0][3], v[1][3]
        if s0 is not None and s1 is not None and s0 != s1:
            raise MalformedCode(f"crossing {x} carries conflicting signs")
    return occ


def _segment_labels(comps):
    """Label of the segment leaving each occurrence; in-label is the previous one."""
    out_label = {}
    base = 1
    for ci, comp in enumerate(comps):
        for k in range(len(comp)):
            out_label[(ci, k)] = base + k
        base += len(comp)
    in_label = {}
    for ci, comp in enumerate(comps):
        m = len(comp)
        for k in range(m):
            in_label[(ci, k)] = out_label[(ci, (k - 1) % m)]
    return in_label, out_label


def _gauss_pd(comps, occ, signs: dict[int, int]) -> list[tuple]:
    in_label, out_label = _segment_labels(comps)
    xs = []
    for x in sorted(occ):
        (u,) = [o for o in occ[x] if o[2] == "U"]
        (o,) = [o for o in occ[x] if o[2] == "O"]
        ui, uo = in_label[u[:2]], out_label[u[:2]]
        oi, oo = in_label[o[:2]], out_label[o[:2]]
        s = signs[x]
        xs.append((ui, oo, uo, oi, 1) if s > 0 else (ui, oi, uo, oo, -1))
    return xs


def realize_gauss(comps) -> Diagram:
    """Planar diagram for a Gauss code; unsigned crossings are resolved by search."""
    occ = _occurrences(comps)
    given = {}
    for x, v in occ.items():
        s = v[0][3] if v[0][3] is not None else v[1][3]
        if s is not None:
            given[x] = s
    signs = find_embedding(comps, occ, given)
    if signs is None:
        raise NonRealizable("Gauss code has no planar realization")
    return Diagram(_gauss_pd(comps, occ, signs))


def _count_faces(rot: dict, twin: dict) -> int:
    """Faces of a rotation system; isolated vertices count one face each."""
    nxt = {}
    for v, hs in rot.items():
        k = len(hs)
        for idx, h in enumerate(hs):
            nxt[h] = hs[(idx + 1) % k]
    seen = set()
    faces = 0
    for h in twin:
        if h in seen:
            continue
        faces += 1
        while h not in seen:
            seen.add(h)
            h = nxt[twin[h]]
    faces += sum(1 for hs in rot.values() if not hs)
    return faces


def _partial_euler_ok(comps, occ, signs, upto) -> bool:
    """Check the drawing of the first ``upto`` occurrences embeds in the sphere.

    Occurrences are numbered along the concatenated components; an edge is
    drawn once both of its ends are.
    """
    order = [(ci, k) for ci, comp in enumerate(comps) for k in range(len(comp))]
    drawn = set(order[:upto])
    edges = []  # (tail occurrence, head occurrence, label)
    for ci, comp in enumerate(comps):
        m = len(comp)
        for k in range(m):
            a, b = (ci, k), (ci, (k + 1) % m)
            if a in drawn and b in drawn:
                edges.append((a, b, (ci, k)))
    vert_of = {}
    for x, v in occ.items():
        for (ci, k, ou, _) in v:
            vert_of[(ci, k)] = x
    rot: dict = {}
    twin = {}
    present = {}
    for a, b, seg in edges:
        twin[("o", seg)] = ("i", seg)
        twin[("i", seg)] = ("o", seg)
        present[("o", seg)] = a
        present[("i", seg)] = b
    by_occ: dict = {}
    for h, oc in present.items():
        by_occ.setdefault(oc, {})["in" if h[0] == "i" else "out"] = h
    verts = set()
    for x, v in occ.items():
        ocs = [(o[0], o[1]) for o in v if (o[0], o[1]) in drawn]
        if not ocs:
            continue
        verts.add(x)
        if len(ocs) == 2 and x in signs:
            (u,) = [o for o in v if o[2] == "U"]
            (o,) = [o for o in v if o[2] == "O"]
            hu = by_occ.get(u[:2], {})
            ho = by_occ.get(o[:2], {})
            if signs[x] > 0:
                cyc = [hu.get("in"), ho.get("out"), hu.get("out"), ho.get("in")]
            else:
                cyc = [hu.get("in"), ho.get("in"), hu.get("out"), ho.get("out")]
        else:
            cyc = []
            for oc in ocs:
                h = by_occ.get(oc, {})
                cyc += [h.get("in"), h.get("out")]
        rot[x] = [h for h in cyc if h is not None]
    V = len(verts)
    E = len(edges)
    F = _count_faces(rot, twin)
    # connected components of the drawing
    parent = {x: x for x in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in edges:
        ra, rb = find(vert_of[a]), find(vert_of[b])
        if ra != rb:
            parent[ra] = rb
    C = len({find(x) for x in verts})
    # faces are traced piece by piece, so each planar piece contributes 2
    return V - E + F == 2 * C


def find_embedding(comps, occ, given: dict[int, int] | None = None) -> dict[int, int] | None:
    """Depth-first search for crossing signs giving a spherical embedding.

    A sign is chosen when a crossing's second occurrence is drawn and the
    partial drawing is checked with Euler's formula, so dead branches are cut
    early.  +1 is tried before -1.
    """
    given = dict(given or {})
    order = [(ci, k) for ci, comp in enumerate(comps) for k in range(len(comp))]
    index = {oc: n for n, oc in enumerate(order)}
    events = []  # (position in order, crossing) at second occurrences
    for x, v in occ.items():
        pos = max(index[(o[0], o[1])] for o in v)
        events.append((pos, x))
    events.sort()
    total = len(order)
    signs: dict[int, int] = {}

    def dfs(k):
        if k == len(events):
            return _partial_euler_ok(comps, occ, signs, total)
        pos, x = events[k]
        choices = [given[x]] if x in given else [1, -1]
        for s in choices:
            signs[x] = s
            if _partial_euler_ok(comps, occ, signs, pos + 1) and dfs(k + 1):
                return True
            del signs[x]
        return False

    if dfs(0):
        return dict(signs)
    return None


# -- DT codes ---------------------------------------------------------------

def dt_to_gauss(dt: Sequence[int]) -> list[list[tuple[str, int, None]]]:
    n = len(dt)
    evens = [abs(v) for v in dt]
    if sorted(evens) != list(range(2, 2 * n + 1, 2)):
        raise MalformedCode(f"DT code must be a permutation of 2..{2 * n} (up to sign)")
    seq = [None] * (2 * n)
    for i, v in enumerate(dt):
        odd = 2 * i + 1
        even = abs(v)
        under_at_odd = v > 0
        seq[odd - 1] = ("U" if under_at_odd else "O", i + 1, None)
        seq[even - 1] = ("O" if under_at_odd else "U", i + 1, None)
    return [seq]


def parse_dt(text: str) -> Diagram:
    m = _DT_RE.match(text)
    body = m.group(1) if m else text
    try:
        vals = [int(v) for v in re.split(r"[\s,]+", body.strip()) if v]
    except ValueError as exc:
        raise MalformedCode(f"bad DT code {text!r}") from exc
    if not vals:
        return Diagram.unknot()
    if any(v % 2 for v in vals):
        raise MalformedCode("DT entries must be even")
    return realize_gauss(dt_to_gauss(vals))


def emit_gauss(d: Diagram) -> str:
    """Gauss code with explicit signs, components separated by ``|``."""
    comps = []
    for comp in d.components:
        toks = []
        for e in comp:
            i, p = d.head[e]
            toks.append(f"{'U' if p == 0 else 'O'}{i + 1}{'+' if d.crossings[i].sign > 0 else '-'}")
        comps.append(" ".join(toks))
    if d.free_loops:
        raise MalformedCode("Gauss codes cannot express free loops")
    return "GAUSS[" + " | ".join(comps) + "]"


def read_diagram_file(path) -> list[Diagram]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(parse(line))
    return out
