"""Exact sparse Laurent polynomials with integer or Gaussian-integer coefficients.

Exponents are rationals with denominator dividing 4 (``t^(1/2)``, ``t^(-1/4)``);
internally every exponent is stored multiplied by :data:`SCALE` so all the
arithmetic stays in Python integers.  Variables are identified by name and
operands over different variable sets are embedded into their union.

>>> t = LaurentPoly.var("t")
>>> s = LaurentPoly.var("t", Fraction(1, 2))
>>> str((s - s.inverse()) ** 2)
't - 2 + t^-1'
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping, Union

from .errors import HalfPowerUnresolvable, NonLaurentResult, ResidualImaginaryPart

SCALE = 4


class Gaussian:
    """Gaussian integer ``re + im*i``.  Products with a zero imaginary part
    collapse back to plain ``int`` through :func:`_norm`."""

    __slots__ = ("re", "im")

    def __init__(self, re: int, im: int = 0):
        self.re = int(re)
        self.im = int(im)

    @staticmethod
    def _parts(x):
        if isinstance(x, Gaussian):
            return x.re, x.im
        return int(x), 0

    def __add__(self, other):
        if not isinstance(other, (int, Gaussian)):
            return NotImplemented
        a, b = self._parts(other)
        return _norm(Gaussian(self.re + a, self.im + b))

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, (int, Gaussian)):
            return NotImplemented
        a, b = self._parts(other)
        return _norm(Gaussian(self.re - a, self.im - b))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if not isinstance(other, (int, Gaussian)):
            return NotImplemented
        a, b = self._parts(other)
        return _norm(Gaussian(self.re * a - self.im * b, self.re * b + self.im * a))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out: Coeff = 1
        base: Coeff = self
        if n < 0:
            base = _unit_inverse(self)
            n = -n
        for _ in range(n):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, (Gaussian, int)):
            return self._parts(other) == (self.re, self.im)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re or self.im)

    def __abs__(self):
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        if not self.re:
            return "i" if self.im == 1 else ("-i" if self.im == -1 else f"{self.im}i")
        sign = "+" if self.im > 0 else "-"
        im = abs(self.im)
        return f"({self.re}{sign}{'' if im == 1 else im}i)"


Coeff = Union[int, Gaussian]
I = Gaussian(0, 1)


def _norm(c):
    if isinstance(c, Gaussian) and c.im == 0:
        return c.re
    return c


def _unit_inverse(c: Coeff) -> Coeff:
    if c == 1 or c == -1:
        return _norm(c)
    if isinstance(c, Gaussian) and c.re == 0 and c.im in (1, -1):
        return Gaussian(0, -c.im)
    raise NonLaurentResult(f"coefficient {c} is not a unit")


def _exact_quotient(a: Coeff, b: Coeff) -> Coeff:
    """a / b in Z[i], raising when the quotient is not a Gaussian integer."""
    ar, ai = Gaussian._parts(a)
    br, bi = Gaussian._parts(b)
    n = br * br + bi * bi
    qr, rr = divmod(ar * br + ai * bi, n)
    qi, ri = divmod(ai * br - ar * bi, n)
    if rr or ri:
        raise NonLaurentResult(f"{a} is not divisible by {b}")
    return _norm(Gaussian(qr, qi))


def _iroot(c: int, r: int):
    if c < 0:
        return None
    x = round(c ** (1.0 / r))
    for y in (x - 1, x, x + 1):
        if y >= 0 and y**r == c:
            return y
    return None


def _coeff_root(c: Coeff, r: int) -> Coeff:
    # principal root; sqrt(-1) is fixed as +i
    if isinstance(c, int):
        y = _iroot(c, r)
        if y is not None:
            return y
        if r == 2:
            y = _iroot(-c, 2)
            if y is not None:
                return Gaussian(0, y)
    raise HalfPowerUnresolvable(f"no exact {r}-th root of coefficient {c}")


def _scaled(e) -> int:
    f = Fraction(e)
    v = f * SCALE
    if v.denominator != 1:
        raise ValueError(f"exponent {e} is not a multiple of 1/{SCALE}")
    return int(v)


def _public(e: int):
    f = Fraction(e, SCALE)
    return int(f) if f.denominator == 1 else f


class LaurentPoly:
    """Immutable sparse Laurent polynomial.

    ``variables`` is the sorted tuple of variable names that actually occur;
    ``terms`` maps a tuple of scaled exponents (one per variable) to a nonzero
    coefficient.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Coeff] | None = None, variables: Iterable[str] = ()):
        variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            c = _norm(c)
            if c:
                if len(exps) != len(variables):
                    raise ValueError("exponent vector length does not match variables")
                clean[tuple(exps)] = c
        self.variables, self.terms = _prune(variables, clean)
        self._hash = None

    # -- constructors --------------------------------------------------
    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.variables, obj.terms = _prune(variables, terms)
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Coeff) -> "LaurentPoly":
        c = _norm(c)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def var(cls, name: str, power=1, coeff: Coeff = 1) -> "LaurentPoly":
        return cls._raw((name,), {(_scaled(power),): coeff})

    @classmethod
    def monomial(cls, coeff: Coeff = 1, **powers) -> "LaurentPoly":
        names = tuple(sorted(powers))
        return cls._raw(names, {tuple(_scaled(powers[n]) for n in names): coeff} if coeff else {})

    @classmethod
    def from_terms(cls, variables: Iterable[str], terms: Iterable[tuple[Iterable, Coeff]]) -> "LaurentPoly":
        """Build from public (rational) exponents: ``from_terms(["t"], [((1,), 1), ((3,), 1)])``."""
        variables = tuple(variables)
        acc: dict = {}
        for exps, c in terms:
            key = tuple(_scaled(e) for e in exps)
            acc[key] = acc.get(key, 0) + c
        return cls(acc, variables)

    # -- helpers ---------------------------------------------------------
    def _embed(self, names: tuple) -> dict:
        if names == self.variables:
            return self.terms
        pos = [names.index(v) for v in self.variables]
        out = {}
        k = len(names)
        for exps, c in self.terms.items():
            e = [0] * k
            for p, x in zip(pos, exps):
                e[p] = x
            out[tuple(e)] = c
        return out

    def _aligned(self, other: "LaurentPoly"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        names = tuple(sorted(set(self.variables) | set(other.variables)))
        return names, self._embed(names), other._embed(names)

    @staticmethod
    def _lift(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Gaussian)):
            return LaurentPoly.const(x)
        return NotImplemented

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        names, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            v = _norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(names, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        names, a, b = self._aligned(other)
        out: dict = {}
        if len(names) == 1:
            for (x,), c in a.items():
                for (y,), d in b.items():
                    k = (x + y,)
                    out[k] = out.get(k, 0) + c * d
        else:
            for x, c in a.items():
                for y, d in b.items():
                    k = tuple(i + j for i, j in zip(x, y))
                    out[k] = out.get(k, 0) + c * d
        return LaurentPoly._raw(names, {k: v for k, v in ((k, _norm(v)) for k, v in out.items()) if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial with unit coefficient."""
        if not self.is_monomial():
            raise NonLaurentResult(f"{self} is not invertible in the Laurent ring")
        (e, c), = self.terms.items()
        return LaurentPoly._raw(self.variables, {tuple(-x for x in e): _unit_inverse(c)})

    def __truediv__(self, other):
        return self.exact_div(self._lift(other))

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; long division for univariate divisors that are not monomials."""
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_monomial():
            (e, c), = other.terms.items()
            if c in (1, -1) or (isinstance(c, Gaussian) and not c.re and abs(c.im) == 1):
                return self * other.inverse()
            shifted = self * LaurentPoly._raw(other.variables, {tuple(-x for x in e): 1})
            return LaurentPoly._raw(
                shifted.variables, {k: _exact_quotient(v, c) for k, v in shifted.terms.items()}
            )
        if len(other.variables) != 1 or not set(self.variables) <= set(other.variables):
            raise NonLaurentResult("exact division implemented for univariate divisors only")
        (name,) = other.variables
        num = {e[0] if e else 0: c for e, c in self.terms.items()}
        den = {e[0]: c for e, c in other.terms.items()}
        dtop = max(den)
        dlow = min(den)
        quot: dict = {}
        while num:
            top = max(num)
            q = _exact_quotient(num[top], den[dtop])
            shift = top - dtop
            quot[(shift,)] = q
            for k, c in den.items():
                v = _norm(num.get(k + shift, 0) - q * c)
                if v:
                    num[k + shift] = v
                else:
                    num.pop(k + shift, None)
            if num and max(num) - min(num) < dtop - dlow:
                raise NonLaurentResult(f"{self} is not divisible by {other}")
        return LaurentPoly._raw((name,), quot)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.variables

    def constant(self) -> Coeff:
        """The value of a constant polynomial."""
        if self.variables:
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), 0)

    def exponents(self, var: str) -> list:
        """Sorted distinct public exponents of ``var``."""
        if var not in self.variables:
            return [0] if self.terms else []
        i = self.variables.index(var)
        return [_public(x) for x in sorted({e[i] for e in self.terms})]

    def span(self, var: str):
        ex = self.exponents(var)
        return ex[-1] - ex[0] if ex else 0

    def coefficients(self) -> dict:
        """``{tuple of public exponents: coeff}``."""
        return {tuple(_public(x) for x in e): c for e, c in self.terms.items()}

    def is_real(self) -> bool:
        return all(not isinstance(c, Gaussian) for c in self.terms.values())

    def real(self) -> "LaurentPoly":
        """Return self, raising :class:`ResidualImaginaryPart` if any coefficient is non-real."""
        if not self.is_real():
            raise ResidualImaginaryPart(f"imaginary part does not cancel in {self}")
        return self

    # -- substitutions ---------------------------------------------------
    def mirror_image(self, var: str) -> "LaurentPoly":
        """Apply ``var -> var^-1``."""
        if var not in self.variables:
            return self
        i = self.variables.index(var)
        return LaurentPoly._raw(
            self.variables,
            {e[:i] + (-e[i],) + e[i + 1:]: c for e, c in self.terms.items()},
        )

    def substitute(self, bindings: Mapping[str, "LaurentPoly | Coeff"]) -> "LaurentPoly":
        """Ring-homomorphic image under ``var -> value``.

        Fractional powers need a monomial value whose coefficient has an exact
        root (``sqrt(-1) = i``); negative powers of non-monomial values are
        cleared by an exact division at the end.
        """
        binds = {k: self._lift(v) for k, v in bindings.items() if k in self.variables}
        if not binds:
            return self
        idx = {v: i for i, v in enumerate(self.variables)}
        clear: dict[str, int] = {}
        for v, q in binds.items():
            if q.is_monomial():
                continue
            low = min(e[idx[v]] for e in self.terms)
            if any(e[idx[v]] % SCALE for e in self.terms):
                raise HalfPowerUnresolvable(f"fractional power of non-monomial value for {v}")
            if low < 0:
                clear[v] = -low
        free = [v for v in self.variables if v not in binds]
        fpos = [idx[v] for v in free]
        cache: dict = {}
        total = LaurentPoly.const(0)
        for e, c in self.terms.items():
            term = LaurentPoly.const(c)
            for v, q in binds.items():
                x = e[idx[v]] + clear.get(v, 0)
                if x:
                    key = (v, x)
                    if key not in cache:
                        cache[key] = _power(q, x)
                    term = term * cache[key]
            if free:
                term = term * LaurentPoly._raw(tuple(free), {tuple(e[p] for p in fpos): 1})
            total = total + term
        for v, m in clear.items():
            total = total.exact_div(binds[v] ** (m // SCALE))
        return total

    def evaluate(self, bindings: Mapping[str, "LaurentPoly | Coeff"]) -> Coeff:
        return self.substitute(bindings).constant()

    # -- rendering -------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(_fmt_power(v, x) for v, x in zip(self.variables, exps) if x)
            if isinstance(c, Gaussian):
                body = str(c) + ("*" + mono if mono else "")
                sign = "+"
            else:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                if not mono:
                    body = str(a)
                elif a == 1:
                    body = mono
                else:
                    body = f"{a}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def to_json(self) -> list:
        out = []
        for exps, c in self.sorted_terms():
            coeff = [c.re, c.im] if isinstance(c, Gaussian) else c
            out.append({
                "exponents": {v: _json_exp(x) for v, x in zip(self.variables, exps) if x},
                "coeff": coeff,
            })
        return out

    @classmethod
    def from_json(cls, data: list) -> "LaurentPoly":
        names = sorted({v for term in data for v in term["exponents"]})
        terms = []
        for term in data:
            c = term["coeff"]
            if isinstance(c, list):
                c = _norm(Gaussian(*c))
            terms.append(([Fraction(term["exponents"].get(v, 0)) for v in names], c))
        return cls.from_terms(names, terms)


def _json_exp(x: int):
    p = _public(x)
    return p if isinstance(p, int) else str(p)


def _fmt_power(v: str, x: int) -> str:
    p = _public(x)
    if p == 1:
        return v
    if isinstance(p, Fraction):
        return f"{v}^({p})"
    return f"{v}^{p}"


def _prune(variables: tuple, terms: dict):
    if not variables:
        return variables, terms
    used = [i for i in range(len(variables)) if any(e[i] for e in terms)]
    if len(used) == len(variables):
        if list(variables) == sorted(variables):
            return variables, terms
    names = [variables[i] for i in used]
    order = sorted(range(len(names)), key=lambda k: names[k])
    sel = [used[k] for k in order]
    out: dict = {}
    for e, c in terms.items():
        k = tuple(e[i] for i in sel)
        out[k] = _norm(out.get(k, 0) + c)
    return tuple(names[k] for k in order), {k: c for k, c in out.items() if c}


def _power(q: LaurentPoly, x: int) -> LaurentPoly:
    """q ** (x / SCALE)."""
    if x % SCALE == 0:
        return q ** (x // SCALE)
    if not q.is_monomial():
        raise HalfPowerUnresolvable(f"fractional power of non-monomial {q}")
    g = gcd(x, SCALE)
    p, r = x // g, SCALE // g
    (e, c), = q.terms.items()
    root_exps = []
    for y in e:
        if (y * p) % r:
            raise HalfPowerUnresolvable(f"{q} has no exact {r}-th root")
        root_exps.append(y * p // r)
    root_c = _coeff_root(c, r)
    coeff = root_c ** p if p >= 0 else _unit_inverse(root_c) ** (-p)
    return LaurentPoly._raw(q.variables, {tuple(root_exps): coeff})


def var(name: str, power=1) -> LaurentPoly:
    return LaurentPoly.var(name, power)


def const(c: Coeff) -> LaurentPoly:
    return LaurentPoly.const(c)


ZERO = LaurentPoly.const(0)
ONE = LaurentPoly.const(1)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def substitute(p: LaurentPoly, bindings) -> LaurentPoly:
    return p.substitute(bindings)


def mirror_image(p: LaurentPoly, var: str) -> LaurentPoly:
    return p.mirror_image(var)


def parse_exponent(text: str) -> Rational:
    return Fraction(text)
