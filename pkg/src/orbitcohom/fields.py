"""Exact coefficient arithmetic: GF(2), the rationals, and polynomials in
symbolic extension constants (alpha, beta, gamma, ...).

No floating point anywhere.  GF(2) elements are the ints 0/1, rational
elements are `fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class Field:
    """One of the two coefficient fields the engine works over."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        if name not in ("Z2", "Q"):
            raise ValueError(f"unsupported field {name!r}")
        self.name = name

    # -- element arithmetic ------------------------------------------
    @property
    def zero(self):
        return 0 if self.name == "Z2" else Fraction(0)

    @property
    def one(self):
        return 1 if self.name == "Z2" else Fraction(1)

    def coerce(self, x):
        if self.name == "Z2":
            return int(x) % 2
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % 2 if self.name == "Z2" else a + b

    def mul(self, a, b):
        return (a * b) % 2 if self.name == "Z2" else a * b

    def neg(self, a):
        return a % 2 if self.name == "Z2" else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 if self.name == "Z2" else Fraction(1) / a

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(("Field", self.name))


F2 = Field("Z2")
QQ = Field("Q")

_FIELDS = {"Z2": F2, "z2": F2, "Q": QQ, "q": QQ}


def field_by_name(name: str) -> Field:
    try:
        return _FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown field name {name!r}") from None


# Parameter monomial: sorted tuple of (name, exponent>0) pairs; () is 1.
ParamMono = tuple


def _mono_mul(a: ParamMono, b: ParamMono) -> ParamMono:
    exps: dict[str, int] = {}
    for name, e in a:
        exps[name] = exps.get(name, 0) + e
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


@dataclass(frozen=True)
class ParamPoly:
    """Polynomial in named parameters with coefficients in `field`.

    `terms` is a sorted tuple of (ParamMono, coeff) with nonzero coeffs;
    the empty tuple is the zero polynomial.
    """

    field: Field
    terms: tuple

    # -- constructors -------------------------------------------------
    @staticmethod
    def const(field: Field, c) -> "ParamPoly":
        c = field.coerce(c)
        return ParamPoly(field, ((tuple(), c),) if c != field.zero else tuple())

    @staticmethod
    def param(field: Field, name: str) -> "ParamPoly":
        return ParamPoly(field, (((((name, 1),)), field.one),))

    @staticmethod
    def zero(field: Field) -> "ParamPoly":
        return ParamPoly(field, tuple())

    @staticmethod
    def one(field: Field) -> "ParamPoly":
        return ParamPoly.const(field, 1)

    # -- queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == tuple() for m, _ in self.terms)

    def constant_value(self):
        if not self.terms:
            return self.field.zero
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms[0][1]

    def params(self) -> set:
        out = set()
        for mono, _ in self.terms:
            for name, _e in mono:
                out.add(name)
        return out

    # -- arithmetic ------------------------------------------------------
    def _from_dict(self, d: dict) -> "ParamPoly":
        items = tuple(sorted((m, c) for m, c in d.items() if c != self.field.zero))
        return ParamPoly(self.field, items)

    def add(self, other: "ParamPoly") -> "ParamPoly":
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = self.field.add(d.get(m, self.field.zero), c)
        return self._from_dict(d)

    def neg(self) -> "ParamPoly":
        return ParamPoly(self.field, tuple((m, self.field.neg(c)) for m, c in self.terms))

    def mul(self, other: "ParamPoly") -> "ParamPoly":
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = self.field.add(d.get(m, self.field.zero), self.field.mul(c1, c2))
        return self._from_dict(d)

    def scale(self, c) -> "ParamPoly":
        c = self.field.coerce(c)
        return self.mul(ParamPoly.const(self.field, c))

    def evaluate(self, assignment: dict):
        """Evaluate at a parameter assignment; returns a field element."""
        total = self.field.zero
        for mono, c in self.terms:
            v = c
            for name, e in mono:
                if name not in assignment:
                    raise KeyError(f"unassigned parameter {name!r}")
                a = self.field.coerce(assignment[name])
                for _ in range(e):
                    v = self.field.mul(v, a)
            total = self.field.add(total, v)
        return total

    # -- rendering --------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            factors = []
            if mono == tuple():
                factors.append(str(c))
            else:
                if c != self.field.one:
                    factors.append(str(c))
                for name, e in mono:
                    factors.append(name if e == 1 else f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


def param_samples(field: Field, params: list[str], exhaustive: bool = False) -> list[dict]:
    """Parameter assignments for dimension-stability checks.

    Over Z2 the full {0,1}^p grid (always exhaustive, it is tiny).  Over Q
    the default is a small spanning sample; `exhaustive` takes the full
    {0, 1, -1, 2}^p grid.
    """
    if not params:
        return [{}]
    params = sorted(params)
    if field.name == "Z2":
        from itertools import product

        return [dict(zip(params, vals)) for vals in product((0, 1), repeat=len(params))]
    if exhaustive:
        from itertools import product

        vals = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2)]
        return [dict(zip(params, v)) for v in product(vals, repeat=len(params))]
    samples = [dict.fromkeys(params, Fraction(0)), dict.fromkeys(params, Fraction(1))]
    for i, p in enumerate(params):
        s = dict.fromkeys(params, Fraction(1))
        s[p] = Fraction(-1) if i % 2 == 0 else Fraction(2)
        samples.append(s)
    return samples
