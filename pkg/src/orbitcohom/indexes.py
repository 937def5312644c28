"""Index, co-index, and cohomology-index calculators.

For G = S^d (d = 1 or 3) acting freely, the index of X is the largest k
admitting an equivariant map S^((d+1)k+d) -> X, the co-index the least k
admitting one the other way, and the cohomology index the nilpotency
degree of the characteristic class u in H^(d+1)(X/G; Z2).  The engine
reports ind/co-ind as bounds (exhibited maps from below, the cohomology
index from above) and pins exact values only where the bounds meet;
the empty space carries index -1 by convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graded import Presentation, nilpotency_index


class BadDimension(Exception):
    """Sphere dimension incompatible with the standard free action."""


class MonotonicityError(Exception):
    """A recorded equivariant map would decrease no index it may decrease."""


@dataclass(frozen=True)
class StandardSphere:
    d: int
    total_dim: int

    def __post_init__(self):
        if self.d not in (1, 3):
            raise ValueError("d must be 1 or 3")
        if (self.total_dim - self.d) % (self.d + 1) != 0 or self.total_dim < self.d:
            raise BadDimension(
                f"S^{self.total_dim} carries no standard free S^{self.d} action; "
                f"need dimension {self.d} mod {self.d + 1}"
            )


@dataclass(frozen=True)
class ProductSpheres:
    d: int
    n: int
    m: int
    field_name: str = "Z2"


@dataclass(frozen=True)
class OrbitPresentation:
    presentation: Presentation
    char_class: str = "u"


@dataclass(frozen=True)
class IndexReport:
    cohom_index: int
    ind_upper: int
    ind_lower: int | None = None
    coind_lower: int | None = None
    justification: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.ind_lower is not None and self.ind_lower > self.ind_upper:
            raise MonotonicityError(
                f"exhibited map gives index >= {self.ind_lower}, but the "
                f"cohomology index caps it at {self.ind_upper}"
            )

    def pinned_index(self) -> int | None:
        if self.ind_lower is not None and self.ind_lower == self.ind_upper:
            return self.ind_lower
        return None

    def to_json_dict(self) -> dict:
        return {
            "cohom_index": self.cohom_index,
            "ind_upper": self.ind_upper,
            "ind_lower": self.ind_lower,
            "ind": self.pinned_index(),
            "coind_lower": self.coind_lower,
            "justification": [list(j) for j in self.justification],
        }


def ind_standard_sphere(d: int, total_dim: int) -> int:
    """ind of S^((d+1)n+d) under coordinatewise multiplication is n; the
    co-index takes the same value."""
    sphere = StandardSphere(d, total_dim)
    return (sphere.total_dim - d) // (d + 1)


def coind_standard_sphere(d: int, total_dim: int) -> int:
    return ind_standard_sphere(d, total_dim)


def cohom_index_by_family(d: int, n: int, m: int) -> dict:
    """Cohomology indexes of free S^d actions on mod-2 S^n x S^m spaces,
    keyed by the classification family realizing each value."""
    from .classify import classify_orbit  # local import; classify depends on us

    out = {}
    for fam in classify_orbit(d, n, m, "Z2"):
        out[fam.source_case] = nilpotency_index(fam.presentation, "u")
    return out


def cohom_index(space) -> int | frozenset:
    """Cohomology index of a space descriptor.

    StandardSphere -> the exact value n.  OrbitPresentation -> nilpotency
    of the named characteristic class.  ProductSpheres -> the set of
    values over all classification families applicable to (n, m, d); an
    empty set means no free action exists.
    """
    if isinstance(space, StandardSphere):
        return ind_standard_sphere(space.d, space.total_dim)
    if isinstance(space, OrbitPresentation):
        return nilpotency_index(space.presentation, space.char_class)
    if isinstance(space, ProductSpheres):
        if space.field_name not in ("Z2", "z2"):
            raise ValueError("the cohomology index is a mod-2 invariant here")
        return frozenset(cohom_index_by_family(space.d, space.n, space.m).values())
    raise TypeError(f"unknown space descriptor {space!r}")


def borsuk_ulam_forbidden(d: int, k: int, cohom_index_value: int) -> bool:
    """True when no equivariant map S^((d+1)k+d) -> X can exist, i.e. when
    k exceeds the mod-2 cohomology index of X."""
    if cohom_index_value < 0:
        raise ValueError("cohomology index must be nonnegative")
    if d not in (1, 3):
        raise ValueError("d must be 1 or 3")
    return k > cohom_index_value


def coind_join_bound(a: int, b: int) -> int:
    """co-ind(X * Y) <= co-ind X + co-ind Y + 1 (-1 encodes the empty
    space, whose join bound degenerates to the other factor)."""
    if a < -1 or b < -1:
        raise ValueError("co-index values are >= -1")
    return a + b + 1


def check_equivariant_map(source: IndexReport, target: IndexReport) -> None:
    """An equivariant map X -> Y forces ind X <= ind Y; refuse linked
    reports that contradict it at their certain values."""
    if source.ind_lower is not None and source.ind_lower > target.ind_upper:
        raise MonotonicityError(
            f"source index is at least {source.ind_lower} but target index "
            f"is at most {target.ind_upper}; no equivariant map can exist"
        )


def standard_sphere_report(d: int, total_dim: int) -> IndexReport:
    n = ind_standard_sphere(d, total_dim)
    return IndexReport(
        cohom_index=n,
        ind_upper=n,
        ind_lower=n,
        coind_lower=n,
        justification=(
            (n, "standard action: equivariant inclusions give ind >= n"),
            (n, "no equivariant map from a larger standard sphere"),
            (n, "orbit space is a projective space; u^n != 0, u^(n+1) = 0"),
        ),
    )


def diagonal_product_report(d: int, a: int, m: int) -> IndexReport:
    """X = S^((d+1)a+d) x S^m with the action on the first factor: the
    section x -> (x, y0) gives ind >= a, the orbit ring FP^a x S^m gives
    cohom-index a, so the index is pinned at a."""
    from .graded import make_presentation

    if a < 0 or m < 1:
        raise ValueError("need a >= 0 and m >= 1")
    step = d + 1
    orbit = make_presentation(
        "Z2",
        [("u", step), ("v", m)],
        [f"u^{a + 1}", "v^2"],
        max((a + 1) * step, 2 * m),
    )
    upper = nilpotency_index(orbit, "u")
    return IndexReport(
        cohom_index=upper,
        ind_upper=upper,
        ind_lower=a,
        coind_lower=None,
        justification=(
            (a, "equivariant section of the first factor gives ind >= a"),
            (upper, "cohomology index of the orbit ring F P^a x S^m"),
        ),
    )
