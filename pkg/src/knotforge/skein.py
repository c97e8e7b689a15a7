"""Skein recursion for the Conway, Jones and HOMFLY polynomials and for the
Kauffman polynomial Lambda.

Oriented invariants satisfy  alpha_+ X(L+) + alpha_- X(L-) = beta X(L0)  with
X(unknot) = 1.  Each node

1. strips kinks and removable bigons (R1/R2 leave ambient invariants alone),
2. splits off distant pieces:  X(D1 u D2) = delta X(D1) X(D2),
3. looks up the canonical code in the memo table,
4. walks the components from their lowest labels; a crossing first reached
   on the under strand is "bad".  Without bad crossings the diagram is a
   stacked unlink with value delta^(c-1).  Otherwise the first bad crossing
   is switched and smoothed and the relation solved for X(D).

Switching a bad crossing lowers the bad count, smoothing lowers the crossing
count, so every branch terminates.

Unlink values follow from the relation at a one-kink circle: L+ and L- are
both the unknot and L0 is the 2-unlink, so delta = (alpha_+ + alpha_-)/beta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import A_SMOOTHING, B_SMOOTHING, Diagram, canonical_code
from .errors import RecursionBudgetExceeded
from .moves import simplify
from .poly import I, LaurentPoly

DEFAULT_BUDGET = 10**7

_S = LaurentPoly.var("t", Fraction(1, 2))
_SI = LaurentPoly.var("t", Fraction(-1, 2))
_ONE = LaurentPoly.const(1)
_ZERO = LaurentPoly.const(0)


@dataclass(frozen=True)
class SkeinRelation:
    name: str
    alpha_plus: LaurentPoly
    alpha_minus: LaurentPoly
    beta: LaurentPoly

    @property
    def delta(self) -> LaurentPoly:
        return (self.alpha_plus + self.alpha_minus) / self.beta if self.beta else _ZERO


CONWAY = SkeinRelation("conway", _ONE, -_ONE, _S - _SI)
JONES = SkeinRelation("jones", LaurentPoly.var("t", -1), -LaurentPoly.var("t"), _S - _SI)
HOMFLY = SkeinRelation("homfly", LaurentPoly.var("a"), LaurentPoly.var("a", -1), LaurentPoly.var("z"))


def first_bad_crossing(d: Diagram) -> int | None:
    """First crossing met on its under strand, walking components in order."""
    seen = set()
    for comp in d.components:
        for e in comp:
            i, p = d.head[e]
            if i in seen:
                continue
            seen.add(i)
            if p == 0:
                return i
    return None


@dataclass
class SkeinTriple:
    site: int
    plus: Diagram
    minus: Diagram
    zero: Diagram


def skein_triple(d: Diagram, i: int) -> SkeinTriple:
    s = d.crossings[i].sign
    other = d.switch(i)
    plus, minus = (d, other) if s > 0 else (other, d)
    return SkeinTriple(i, plus, minus, d.oriented_smoothing(i))


@dataclass
class _Engine:
    budget: int | None = None
    memo: bool = True
    trace: list | None = None
    nodes: int = 0
    cache: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.budget is None:
            self.budget = DEFAULT_BUDGET

    def _tick(self, depth: int, text: str):
        self.nodes += 1
        if self.nodes > self.budget:
            raise RecursionBudgetExceeded(f"skein recursion exceeded {self.budget} nodes")
        if self.trace is not None:
            self.trace.append("  " * depth + text)


@dataclass
class SkeinEngine(_Engine):
    relation: SkeinRelation = HOMFLY

    def value(self, d: Diagram, depth: int = 0) -> LaurentPoly:
        self._tick(depth, f"{len(d)} crossings: {d}")
        d = simplify(d)
        rel = self.relation
        delta = rel.delta
        k = d.num_pieces()
        if k > 1:
            if not delta:
                return _ZERO
            out = delta ** (k - 1)
            for g in d.crossing_pieces:
                out = out * self.value(d.sub_diagram(g), depth + 1)
            return out
        if not d.crossings:
            return _ONE
        key = canonical_code(d) if self.memo else None
        if key is not None and key in self.cache:
            if self.trace is not None:
                self.trace.append("  " * (depth + 1) + "(memo)")
            return self.cache[key]
        i = first_bad_crossing(d)
        if i is None:
            c = len(d.components)
            res = delta ** (c - 1) if c > 1 else _ONE
        else:
            s = d.crossings[i].sign
            x0 = self.value(d.oriented_smoothing(i), depth + 1)
            xs = self.value(d.switch(i), depth + 1)
            if s > 0:
                res = (rel.beta * x0 - rel.alpha_minus * xs) / rel.alpha_plus
            else:
                res = (rel.beta * x0 - rel.alpha_plus * xs) / rel.alpha_minus
        if key is not None:
            self.cache[key] = res
        return res


_LAMBDA_MU = LaurentPoly.monomial(1, a=1, z=-1) + LaurentPoly.monomial(1, a=-1, z=-1) - 1
_Z = LaurentPoly.var("z")


@dataclass
class LambdaEngine(_Engine):
    """Lambda(D+) + Lambda(D-) = z (Lambda(D0) + Lambda(Dinf)), a kink contributes a^(+-1)."""

    def value(self, d: Diagram, depth: int = 0) -> LaurentPoly:
        self._tick(depth, f"{len(d)} crossings: {d}")
        s = simplify(d)
        shift = d.writhe() - s.writhe()
        curl = LaurentPoly.var("a", shift) if shift else _ONE
        d = s
        k = d.num_pieces()
        if k > 1:
            out = curl * _LAMBDA_MU ** (k - 1)
            for g in d.crossing_pieces:
                out = out * self.value(d.sub_diagram(g), depth + 1)
            return out
        if not d.crossings:
            return curl
        key = canonical_code(d) if self.memo else None
        if key is not None and key in self.cache:
            return curl * self.cache[key]
        i = first_bad_crossing(d)
        if i is None:
            c = len(d.components)
            res = LaurentPoly.var("a", d.writhe()) * _LAMBDA_MU ** (c - 1)
        else:
            res = -self.value(d.switch(i), depth + 1) + _Z * (
                self.value(d.smooth(i, A_SMOOTHING), depth + 1)
                + self.value(d.smooth(i, B_SMOOTHING), depth + 1)
            )
        if key is not None:
            self.cache[key] = res
        return curl * res


_SHARED: dict[str, dict] = {}


def _engine(rel: SkeinRelation, budget, engine, trace, memo=True) -> SkeinEngine:
    if engine is not None:
        return engine
    cache = _SHARED.setdefault(rel.name, {}) if memo and trace is None else {}
    return SkeinEngine(budget=budget, memo=memo, trace=trace, cache=cache, relation=rel)


def clear_cache() -> None:
    _SHARED.clear()


def conway(d: Diagram, budget: int | None = None, engine=None, trace: list | None = None) -> LaurentPoly:
    return _engine(CONWAY, budget, engine, trace).value(d)


def jones_skein(d: Diagram, budget: int | None = None, engine=None, trace: list | None = None) -> LaurentPoly:
    return _engine(JONES, budget, engine, trace).value(d)


def homfly(d: Diagram, budget: int | None = None, engine=None, trace: list | None = None) -> LaurentPoly:
    return _engine(HOMFLY, budget, engine, trace).value(d)


def _sub_z() -> LaurentPoly:
    return (_S - _SI) * I


def specialize_to_conway(p: LaurentPoly) -> LaurentPoly:
    """P(a = i, z = i(t^1/2 - t^-1/2))."""
    return p.substitute({"a": I, "z": _sub_z()}).real()


def specialize_to_jones(p: LaurentPoly) -> LaurentPoly:
    """P(a = i t^-1, z = i(t^1/2 - t^-1/2))."""
    return p.substitute({"a": LaurentPoly.var("t", -1, I), "z": _sub_z()}).real()


def value_at_minus_one(p: LaurentPoly):
    """Exact value at t = -1, with t^(1/2) = i."""
    return p.substitute({"t": -1}).constant()


def determinant(d: Diagram, budget: int | None = None) -> int:
    """|V(-1)|, computed from the bracket state sum."""
    from .bracket import jones_via_bracket

    return _abs_exact(value_at_minus_one(jones_via_bracket(d)))


def _abs_exact(v) -> int:
    from .poly import Gaussian

    if isinstance(v, Gaussian):
        if v.re and v.im:
            raise ValueError(f"value {v} is not a real or imaginary integer")
        return abs(v.re) + abs(v.im)
    return abs(int(v))
