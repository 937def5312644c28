"""Finitely presented graded commutative algebras over Z2 or Q.

A presentation here is always of the restricted shape the classification
produces: at most two generators u, v with relations of the forms

    u^a = 0,   v*u^b = c*u^e,   v^2 = alpha*u^s + beta*u^t*v

so that normal-form monomials are u^i and u^i*v.  Relations are stored as
rewrite rules oriented by a degree-then-(v-exponent) monomial order; with
this shape the rewriting is confluent and terminating, which the test
suite checks against an independent brute-force oracle.

Coefficients may be symbolic (ParamPoly); dimension queries sample the
parameters and refuse presentations whose dimensions depend on them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .fields import Field, ParamPoly, field_by_name, param_samples

REWRITE_BUDGET = 10_000


class NonTerminating(Exception):
    """Rewriting exceeded its step budget (malformed relation set)."""


class ParamDependent(Exception):
    """Two parameter instantiations disagree on a dimension profile."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


# A monomial is an exponent tuple aligned with the generator list.
Mono = tuple


@dataclass(frozen=True)
class Relation:
    """Oriented rewrite rule: `lead` rewrites to the combination `rhs`.

    `rhs` is a tuple of (coefficient, monomial) pairs, homogeneous of the
    same degree as the lead.
    """

    lead: Mono
    rhs: tuple


@dataclass(frozen=True)
class GradedDims:
    """A cohomology profile: degree -> dimension, zero above `truncation`.

    Equality and hashing ignore the truncation so profiles produced by
    engines with different windows compare by content.
    """

    dims: tuple  # sorted tuple of (degree, dim) with dim > 0
    truncation: int

    @staticmethod
    def from_dict(d: dict, truncation: int) -> "GradedDims":
        items = tuple(sorted((int(k), int(v)) for k, v in d.items() if int(v) != 0))
        for deg, dim in items:
            if deg < 0 or dim < 0:
                raise ValueError(f"bad profile entry {deg}:{dim}")
        return GradedDims(items, truncation)

    def dim(self, degree: int) -> int:
        for d, v in self.dims:
            if d == degree:
                return v
        return 0

    def as_dict(self) -> dict:
        return {d: v for d, v in self.dims}

    def top_degree(self) -> int:
        return self.dims[-1][0] if self.dims else 0

    def __eq__(self, other):
        return isinstance(other, GradedDims) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    def __str__(self):
        return "{" + ", ".join(f"{d}:{v}" for d, v in self.dims) + "}"


@dataclass(frozen=True)
class Presentation:
    field: Field
    generators: tuple  # tuple[Generator, ...]
    relations: tuple  # tuple[Relation, ...]
    truncation: int
    conditions: tuple = ()

    def gen_index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(f"no generator named {name!r}")

    def mono_degree(self, mono: Mono) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def params(self) -> list:
        names: set = set()
        for rel in self.relations:
            for coeff, _m in rel.rhs:
                names |= coeff.params()
        return sorted(names)

    def __str__(self):
        return presentation_text(self)


def _mono_key(pres: Presentation, mono: Mono):
    # Degree first, then prefer higher exponents of later generators (v
    # beats u), so v^2 > v*u^k > u^s within one degree.
    return (pres.mono_degree(mono),) + tuple(reversed(mono))


def make_presentation(field, generators, relations, truncation, conditions=()) -> Presentation:
    """Validate, orient, and normalize a presentation.

    `generators`: iterable of (name, degree) or Generator.
    `relations`: iterable of Relation or polynomial strings (see
    `parse_relation`); each must be homogeneous with a monic lead.
    """
    if isinstance(field, str):
        field = field_by_name(field)
    gens = tuple(g if isinstance(g, Generator) else Generator(g[0], int(g[1])) for g in generators)
    if not 1 <= len(gens) <= 2:
        raise ValueError("presentations here have one or two generators")
    names = [g.name for g in gens]
    if len(set(names)) != len(names):
        raise ValueError("generator names must be unique")
    for g in gens:
        if g.degree < 1:
            raise ValueError(f"generator {g.name} must have positive degree")

    proto = Presentation(field, gens, tuple(), truncation, tuple(conditions))
    rels = []
    for rel in relations:
        if isinstance(rel, str):
            rel = parse_relation(proto, rel)
        rels.append(rel)

    # Validate: monic lead, homogeneous, within truncation, lead maximal,
    # and no lead divisible by another lead (redundant or inconsistent).
    for rel in rels:
        lead_deg = proto.mono_degree(rel.lead)
        if lead_deg > truncation:
            raise ValueError(f"relation lead exceeds truncation: {rel}")
        for coeff, mono in rel.rhs:
            if proto.mono_degree(mono) != lead_deg:
                raise ValueError(f"inhomogeneous relation: {rel}")
            if _mono_key(proto, mono) >= _mono_key(proto, rel.lead):
                raise ValueError(f"relation lead is not maximal: {rel}")
    for a in rels:
        for b in rels:
            if a is not b and _divides(a.lead, b.lead):
                raise ValueError(f"lead {b.lead} is divisible by lead {a.lead}")

    rels.sort(key=lambda r: _mono_key(proto, r.lead))
    # Normalize each rhs against the other rules so stored rules have
    # fully reduced right-hand sides.  (A homogeneous rhs monomial can
    # never be divisible by the rule's own lead, so self-reduction cannot
    # occur.)
    final = []
    for i, rel in enumerate(rels):
        others = rels[:i] + rels[i + 1 :]
        tmp = Presentation(field, gens, tuple(others), truncation, tuple(conditions))
        rhs = _reduce(tmp, {m: c for c, m in rel.rhs})
        final.append(Relation(rel.lead, _sorted_terms(tmp, rhs)))
    return Presentation(field, gens, tuple(final), truncation, tuple(conditions))


def _sorted_terms(pres: Presentation, combo: dict) -> tuple:
    items = [(c, m) for m, c in combo.items() if not c.is_zero()]
    items.sort(key=lambda t: _mono_key(pres, t[1]), reverse=True)
    return tuple(items)


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

def _divides(lead: Mono, mono: Mono) -> bool:
    return all(l <= m for l, m in zip(lead, mono))


def _reduce(pres: Presentation, combo: dict) -> dict:
    """Rewrite a linear combination {mono: ParamPoly} to normal form."""
    field = pres.field
    steps = 0
    while True:
        target = None
        rule = None
        # deterministic strategy: reduce the largest reducible monomial
        for mono in sorted(combo, key=lambda m: _mono_key(pres, m), reverse=True):
            if combo[mono].is_zero():
                continue
            for rel in pres.relations:
                if _divides(rel.lead, mono):
                    target, rule = mono, rel
                    break
            if rule is not None:
                break
        if rule is None:
            return {m: c for m, c in combo.items() if not c.is_zero()}
        steps += 1
        if steps > REWRITE_BUDGET:
            raise NonTerminating(f"rewriting exceeded {REWRITE_BUDGET} steps")
        coeff = combo.pop(target)
        quotient = tuple(m - l for m, l in zip(target, rule.lead))
        for rc, rm in rule.rhs:
            new_mono = tuple(q + r for q, r in zip(quotient, rm))
            add = coeff.mul(rc)
            combo[new_mono] = combo.get(new_mono, ParamPoly.zero(field)).add(add)


def parse_word(pres: Presentation, word) -> Mono:
    """A monomial: exponent tuple, sequence of generator names, or a string
    like "v*u^2"."""
    ngen = len(pres.generators)
    if isinstance(word, tuple) and all(isinstance(x, int) for x in word):
        if len(word) != ngen:
            raise ValueError("exponent tuple has wrong length")
        return word
    exps = [0] * ngen
    if isinstance(word, str):
        if word.strip() == "1":
            return tuple(exps)
        for factor in word.split("*"):
            factor = factor.strip()
            if "^" in factor:
                name, e = factor.split("^")
                exps[pres.gen_index(name.strip())] += int(e)
            else:
                exps[pres.gen_index(factor)] += 1
        return tuple(exps)
    for name in word:
        exps[pres.gen_index(name)] += 1
    return tuple(exps)


def normal_form(pres: Presentation, word) -> dict:
    """Normal form of a monomial word: {monomial: ParamPoly coefficient}."""
    mono = parse_word(pres, word)
    if pres.mono_degree(mono) > pres.truncation:
        raise ValueError("monomial degree exceeds presentation truncation")
    return _reduce(pres, {mono: ParamPoly.one(pres.field)})


def normal_form_str(pres: Presentation, word) -> str:
    return combo_text(pres, normal_form(pres, word))


def standard_monomials(pres: Presentation):
    """All normal-form monomials of degree <= truncation, sorted."""
    bounds = []
    for i, g in enumerate(pres.generators):
        bound = pres.truncation // g.degree
        for rel in pres.relations:
            if all(e == 0 for j, e in enumerate(rel.lead) if j != i) and rel.lead[i] > 0:
                bound = min(bound, rel.lead[i] - 1)
        bounds.append(bound)
    leads = [rel.lead for rel in pres.relations]

    def boxes(i):
        if i == len(bounds):
            yield tuple()
            return
        for e in range(bounds[i] + 1):
            for rest in boxes(i + 1):
                yield (e,) + rest

    out = []
    for mono in boxes(0):
        if pres.mono_degree(mono) > pres.truncation:
            continue
        if any(_divides(l, mono) for l in leads):
            continue
        out.append(mono)
    out.sort(key=lambda m: _mono_key(pres, m))
    return out


def _instantiate(pres: Presentation, assignment: dict) -> Presentation:
    """Substitute numeric values for parameters."""
    rels = []
    for rel in pres.relations:
        rhs = []
        for coeff, mono in rel.rhs:
            v = coeff.evaluate(assignment)
            if v != pres.field.zero:
                rhs.append((ParamPoly.const(pres.field, v), mono))
        rels.append(Relation(rel.lead, tuple(rhs)))
    return Presentation(pres.field, pres.generators, tuple(rels), pres.truncation, pres.conditions)


def overlap_defects(pres: Presentation) -> list:
    """S-pair defects: for every pair of relations whose leads overlap, the
    (normal-form) difference of the two reduction paths of the lcm.

    A nonzero defect means the rewriting system is not confluent, i.e. the
    presented family has hidden relations and the standard-monomial count
    overstates the dimensions.  Disjoint-support leads are skipped (their
    S-pairs reduce automatically for monic commutative rules).
    """
    defects = []
    rels = pres.relations
    for i in range(len(rels)):
        for j in range(i + 1, len(rels)):
            a, b = rels[i], rels[j]
            if not any(x > 0 and y > 0 for x, y in zip(a.lead, b.lead)):
                continue
            lcm = tuple(max(x, y) for x, y in zip(a.lead, b.lead))
            if pres.mono_degree(lcm) > pres.truncation:
                continue
            diff: dict = {}
            for rel, sign in ((a, 1), (b, -1)):
                quot = tuple(l - r for l, r in zip(lcm, rel.lead))
                start = {
                    tuple(q + m for q, m in zip(quot, mono)): coeff.scale(sign)
                    for coeff, mono in rel.rhs
                }
                for mono, coeff in _reduce(pres, start).items():
                    diff[mono] = diff.get(mono, ParamPoly.zero(pres.field)).add(coeff)
            diff = _reduce(pres, diff)
            if diff:
                defects.append(((a.lead, b.lead), diff))
    return defects


def poincare(pres: Presentation, check_params: bool = True) -> GradedDims:
    """Dimension profile of the quotient algebra up to the truncation.

    With `check_params` the overlap defects are evaluated at sampled
    parameter values; an instantiation with a nonzero defect presents a
    smaller ring than the monomial count claims, so the family's
    dimensions are parameter-dependent and ParamDependent is raised.
    """
    counts: dict = {}
    for mono in standard_monomials(pres):
        deg = pres.mono_degree(mono)
        counts[deg] = counts.get(deg, 0) + 1
    profile = GradedDims.from_dict(counts, pres.truncation)
    if check_params:
        defects = overlap_defects(pres)
        if defects:
            names = pres.params()
            for assignment in param_samples(pres.field, names):
                for (leads, diff) in defects:
                    for mono, coeff in diff.items():
                        if coeff.evaluate(assignment) != pres.field.zero:
                            raise ParamDependent(
                                f"overlap of leads {leads} fails to resolve at "
                                f"{assignment or 'constant coefficients'}"
                            )
    return profile


def nilpotency_index(pres: Presentation, gen) -> int:
    """Largest k with g^k != 0 in the quotient (0 if g itself reduces to 0).

    Symbolic coefficients are allowed as long as the answer does not
    depend on them; otherwise ParamDependent is raised.
    """
    name = gen.name if isinstance(gen, Generator) else str(gen)
    idx = pres.gen_index(name)
    gdeg = pres.generators[idx].degree
    gmono = tuple(1 if i == idx else 0 for i in range(len(pres.generators)))

    names = pres.params()
    samples = param_samples(pres.field, names) if names else [{}]
    results = []
    for assignment in samples:
        inst = _instantiate(pres, assignment) if assignment else pres
        k = 0
        combo = {tuple([0] * len(pres.generators)): ParamPoly.one(pres.field)}
        while (k + 1) * gdeg <= pres.truncation:
            nxt: dict = {}
            for mono, coeff in combo.items():
                lifted = tuple(e + g for e, g in zip(mono, gmono))
                nxt[lifted] = nxt.get(lifted, ParamPoly.zero(pres.field)).add(coeff)
            combo = _reduce(inst, nxt)
            if not combo:
                break
            k += 1
        else:
            if combo:
                raise ValueError("generator is not nilpotent within the truncation")
        results.append(k)
    if len(set(results)) > 1:
        raise ParamDependent(f"nilpotency of {name} depends on parameters: {sorted(set(results))}")
    return results[0]


# ---------------------------------------------------------------------------
# canonical text form and JSON round-trip
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z_0-9]*|\d+/\d+|\d+|\^|\*|\+|-")


def _coeff_text(coeff: ParamPoly) -> str:
    s = str(coeff)
    return f"({s})" if " + " in s else s


def _mono_text(pres: Presentation, mono: Mono) -> str:
    # later generators first, so monomials read v*u^k as in the source rings
    factors = []
    for g, e in reversed(list(zip(pres.generators, mono))):
        if e == 1:
            factors.append(g.name)
        elif e > 1:
            factors.append(f"{g.name}^{e}")
    return "*".join(factors) if factors else "1"


def combo_text(pres: Presentation, combo: dict) -> str:
    terms = _sorted_terms(pres, dict(combo))
    if not terms:
        return "0"
    parts = []
    for coeff, mono in terms:
        mono_s = _mono_text(pres, mono)
        if coeff.is_constant() and coeff.constant_value() == pres.field.one:
            parts.append(mono_s)
        elif mono_s == "1":
            parts.append(_coeff_text(coeff))
        else:
            parts.append(f"{_coeff_text(coeff)}*{mono_s}")
    return " + ".join(parts)


def relation_text(pres: Presentation, rel: Relation) -> str:
    """Relation as one polynomial (= 0), lead first, then the moved rhs
    terms in descending monomial order, one textual term per parameter
    monomial so the grammar never needs parentheses."""
    parts = [_mono_text(pres, rel.lead)]
    for coeff, mono in rel.rhs:
        mono_s = _mono_text(pres, mono)
        for pmono, c in coeff.neg().terms:  # lead - rhs = 0
            sign = "+"
            if pres.field.name == "Q" and c < 0:
                sign, c = "-", -c
            factors = []
            if c != pres.field.one:
                factors.append(str(c))
            factors.extend(name if e == 1 else f"{name}^{e}" for name, e in pmono)
            if mono_s != "1":
                factors.append(mono_s)
            if not factors:
                factors.append("1")
            parts.append(f"{sign} {'*'.join(factors)}")
    return " ".join(parts)


def parse_relation(pres: Presentation, text: str) -> Relation:
    """Parse a polynomial string into an oriented relation.

    Grammar: terms joined by top-level + or -; each term is an optional
    coefficient (integer, p/q, or parameter product) times a monomial in
    the generators, e.g. "v^2 + alpha*v*u + beta*u^2".
    """
    field = pres.field
    tokens = _TOKEN.findall(text.replace("(", " ").replace(")", " "))
    if not tokens:
        raise ValueError(f"empty relation {text!r}")
    gen_names = {g.name for g in pres.generators}

    terms = []
    sign = 1
    cur: list = []

    def flush():
        nonlocal cur, sign
        if not cur:
            return
        coeff = ParamPoly.const(field, sign)
        exps = [0] * len(pres.generators)
        i = 0
        while i < len(cur):
            tok = cur[i]
            power = 1
            if i + 1 < len(cur) and cur[i + 1] == "^":
                if i + 2 >= len(cur):
                    raise ValueError("dangling '^' in relation")
                power = int(cur[i + 2])
                i += 2
            if tok in gen_names:
                exps[pres.gen_index(tok)] += power
            elif re.fullmatch(r"\d+(/\d+)?", tok):
                base = ParamPoly.const(field, Fraction(tok))
                for _ in range(power):
                    coeff = coeff.mul(base)
            else:
                base = ParamPoly.param(field, tok)
                for _ in range(power):
                    coeff = coeff.mul(base)
            i += 1
        terms.append((coeff, tuple(exps)))
        cur = []
        sign = 1

    for tok in tokens:
        if tok == "+":
            flush()
        elif tok == "-":
            flush()
            sign = -sign
        elif tok == "*":
            continue
        else:
            cur.append(tok)
    flush()

    combo: dict = {}
    for coeff, mono in terms:
        combo[mono] = combo.get(mono, ParamPoly.zero(field)).add(coeff)
    combo = {m: c for m, c in combo.items() if not c.is_zero()}
    if not combo:
        raise ValueError(f"relation {text!r} is identically zero")
    lead = max(combo, key=lambda m: _mono_key(pres, m))
    lead_coeff = combo.pop(lead)
    if not (lead_coeff.is_constant() and lead_coeff.constant_value() == field.one):
        raise ValueError(f"relation lead must be monic: {text!r}")
    rhs = {m: c.neg() for m, c in combo.items()}
    return Relation(lead, _sorted_terms(pres, rhs))


def presentation_text(pres: Presentation) -> str:
    """Paper-style rendering: F[u,v]/<relations>."""
    gens = ",".join(g.name for g in pres.generators)
    rels = ", ".join(relation_text(pres, r) for r in pres.relations)
    degs = ", ".join(f"deg {g.name}={g.degree}" for g in pres.generators)
    return f"{pres.field.name}[{gens}]/<{rels}>  ({degs})"


def to_json_dict(pres: Presentation) -> dict:
    return {
        "field": pres.field.name,
        "generators": [{"name": g.name, "degree": g.degree} for g in pres.generators],
        "relations": [relation_text(pres, r) for r in pres.relations],
        "conditions": list(pres.conditions),
        "truncation": pres.truncation,
    }


def presentation_from_json(data: dict) -> Presentation:
    return make_presentation(
        field_by_name(data["field"]),
        [(g["name"], g["degree"]) for g in data["generators"]],
        list(data["relations"]),
        int(data["truncation"]),
        tuple(data.get("conditions", ())),
    )
