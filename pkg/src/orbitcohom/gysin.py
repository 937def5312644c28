"""Dimension chase through the Gysin sequence of S^d -> X -> X/G.

For X with the mod-2 cohomology of S^n x S^m the orbit-space cohomology is
carried by two "lines" of classes: the tower u^j of powers of the
characteristic class u (degree d+1), and the multiples v*u^j of a class v
pulled back from a fiber generator in degree nu (= n or m).  The chase
enumerates where each line dies and which degree carries v, then checks
every exactness identity of the long exact sequence

    ... -> H^i(X) -> H^{i-d}(X/G) -(cup u)-> H^{i+1}(X/G) -> H^{i+1}(X) -> ...

plus the boundary facts that the projection is an isomorphism below
degree d and that H^*(X/G) vanishes above degree n+m.  Branch points land
exactly where the fiber cohomology is nonzero (degrees n and m); every
surviving scenario records its branch choices and the resulting profile.

The image of the projection cannot be nontrivial in both degrees n and m
(the product of preimages would survive above the vanishing line), and at
n = m its rank is at most one; both constraints are enforced structurally
by allowing a single v-line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graded import GradedDims

P_TRIVIAL = "p*-trivial"
P_NONTRIVIAL = "p*-nontrivial"
P_RANK_ONE = "p*-rank-one"

_KIND_ORDER = {P_TRIVIAL: 0, P_NONTRIVIAL: 1, P_RANK_ONE: 2}


@dataclass(frozen=True)
class FiberProfile:
    d: int
    n: int
    m: int
    field: str = "Z2"

    def __post_init__(self):
        if self.d not in (1, 3):
            raise ValueError("d must be 1 or 3")
        if not 1 <= self.n <= self.m:
            raise ValueError("need 1 <= n <= m")

    def total_dims(self) -> GradedDims:
        n, m = self.n, self.m
        if n == m:
            return GradedDims.from_dict({0: 1, n: 2, 2 * n: 1}, 2 * n)
        return GradedDims.from_dict({0: 1, n: 1, m: 1, n + m: 1}, n + m)


@dataclass(frozen=True)
class BranchChoice:
    degree: int
    kind: str


@dataclass(frozen=True)
class ChaseState:
    """One enumerated scenario before feasibility checking: the unknown
    orbit dimensions q_i (index = degree), and the branch record that
    produced them."""

    q: tuple  # q[i] = candidate dim H^i(X/G), 0 <= i <= n+m
    branches: tuple  # tuple[BranchChoice, ...]

    def q_dim(self, i: int) -> int:
        return self.q[i] if 0 <= i < len(self.q) else 0


@dataclass(frozen=True)
class ChaseSolution:
    scenario: tuple  # tuple[BranchChoice, ...]
    profile: GradedDims
    u_power_zero: int  # u^a = 0, u^(a-1) != 0
    v_degree: int | None  # degree of the projected-nontrivial class v
    v_u_power_zero: int | None  # v*u^b = 0, v*u^(b-1) != 0

    def branch_key(self):
        return tuple((c.degree, _KIND_ORDER[c.kind]) for c in self.scenario)


def congruence_precheck(d: int, n: int, m: int) -> bool:
    """Necessary congruences for a free action to exist: one of n, m, m-n
    is congruent to d mod (d+1).  Necessary only; the chase itself decides
    feasibility."""
    if d not in (1, 3) or not 1 <= n <= m:
        raise ValueError("need d in {1,3} and 1 <= n <= m")
    step = d + 1
    return (n - d) % step == 0 or (m - d) % step == 0 or (m - n - d) % step == 0


# ---------------------------------------------------------------------------
# the long exact sequence walk
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RankStep:
    kind: str  # "p*", "rho", "cup"
    source: tuple  # ("q"|"h", degree)
    target: tuple
    rank: int


def _chain(d: int, top: int):
    """Node/edge layout of the Gysin sequence, starting 0 -> H^d(X/G)."""
    nodes = [("q", d)]
    edges = []
    for i in range(d, top + 1):
        edges.append("p*")
        nodes.append(("h", i))
        edges.append("rho")
        nodes.append(("q", i - d))
        edges.append("cup")
        nodes.append(("q", i + 1))
    return nodes, edges


def walk_ranks(d: int, h_dim, q_dim, top: int):
    """Propagate exactness through the sequence.

    `h_dim`/`q_dim` map a degree to a dimension.  Returns the list of
    RankSteps, or None if some rank would be negative (infeasible dims).
    Ranks in a long exact sequence are forced: rank(out) = dim - rank(in).
    """
    nodes, edges = _chain(d, top)
    steps = []
    in_rank = 0
    for idx, kind in enumerate(edges):
        src = nodes[idx]
        tgt = nodes[idx + 1]
        dim = h_dim(src[1]) if src[0] == "h" else q_dim(src[1])
        out = dim - in_rank
        if out < 0:
            return None
        steps.append(RankStep(kind, src, tgt, out))
        in_rank = out
    if in_rank != 0:
        return None
    return steps


# ---------------------------------------------------------------------------
# scenario enumeration
# ---------------------------------------------------------------------------

def _line(start: int, step: int, count: int):
    return frozenset(start + step * k for k in range(count))


def _check_scenario(fp: FiberProfile, a: int, nu, b):
    """Check one (u-line death, v origin, v-line death) assignment against
    every exactness constraint.  Returns the ChaseSolution or None."""
    d, n, m = fp.d, fp.n, fp.m
    step = d + 1
    h = fp.total_dims().as_dict()
    u_line = _line(0, step, a)
    v_line = _line(nu, step, b) if nu is not None else frozenset()

    def q_dim(i):
        if i < 0:
            return 0
        return (i in u_line) + (i in v_line)

    def h_dim(i):
        return h.get(i, 0)

    # projection is an isomorphism below the fiber dimension
    for j in range(d):
        if q_dim(j) != h_dim(j):
            return None

    top = n + m + d + 2
    steps = walk_ranks(d, h_dim, q_dim, top)
    if steps is None:
        return None

    for s in steps:
        if s.kind == "cup":
            j = s.source[1]
            expected = int(j in u_line and j + step in u_line) + int(
                j in v_line and j + step in v_line
            )
            if s.rank != expected:
                return None
        elif s.kind == "p*" and s.source[0] == "q":
            # p* kills u-powers and v*u^(>=1); only v itself survives it
            if s.rank != (1 if s.source[1] == nu else 0):
                return None

    if n == m:
        scenario = (BranchChoice(n, P_RANK_ONE if nu == n else P_TRIVIAL),)
    else:
        scenario = (
            BranchChoice(n, P_NONTRIVIAL if nu == n else P_TRIVIAL),
            BranchChoice(m, P_NONTRIVIAL if nu == m else P_TRIVIAL),
        )
    state = ChaseState(tuple(q_dim(i) for i in range(n + m + 1)), scenario)
    profile = {i: v for i, v in enumerate(state.q) if v}
    return ChaseSolution(
        scenario=scenario,
        profile=GradedDims.from_dict(profile, n + m),
        u_power_zero=a,
        v_degree=nu,
        v_u_power_zero=b,
    )


def chase(fp: FiberProfile) -> list:
    """All feasible orbit-space dimension profiles with their branch data.

    Returns [] when no scenario is consistent (no free action can exist
    with this fiber profile).  Deterministic: sorted by branch vector,
    then by the line-death data that distinguishes sub-branches sharing a
    profile.
    """
    if fp.field not in ("Z2", "z2"):
        raise ValueError("the Gysin chase runs over Z2 only")
    d, n, m = fp.d, fp.n, fp.m
    step = d + 1
    a_max = (n + m) // step + 1
    solutions = []
    nus = (None, n) if n == m else (None, n, m)
    for nu in nus:
        if nu is None:
            b_range = [None]
        else:
            b_range = range(1, (n + m - nu) // step + 2)
        for a in range(1, a_max + 1):
            for b in b_range:
                sol = _check_scenario(fp, a, nu, b)
                if sol is not None:
                    solutions.append(sol)
    solutions.sort(key=lambda s: (s.branch_key(), s.u_power_zero, s.v_u_power_zero or 0))
    return solutions


def exactness_audit(fp: FiberProfile, sol: ChaseSolution) -> list:
    """Re-walk the full sequence for a solution, checking kernel = image at
    every node (dim = rank in + rank out with all ranks admissible).
    Raises AssertionError on any violation; returns the rank steps."""
    d, n, m = fp.d, fp.n, fp.m
    step = d + 1
    h = fp.total_dims().as_dict()
    q = sol.profile.as_dict()

    def q_dim(i):
        return q.get(i, 0)

    def h_dim(i):
        return h.get(i, 0)

    top = n + m + d + 2
    steps = walk_ranks(d, h_dim, q_dim, top)
    assert steps is not None, "rank propagation failed on a reported solution"
    # dim = rank(in) + rank(out) at every node, and ranks fit both sides
    in_rank = 0
    for s in steps:
        dim_src = h_dim(s.source[1]) if s.source[0] == "h" else q_dim(s.source[1])
        dim_tgt = h_dim(s.target[1]) if s.target[0] == "h" else q_dim(s.target[1])
        assert dim_src == in_rank + s.rank, f"exactness violated at {s.source}"
        assert 0 <= s.rank <= dim_tgt, f"rank exceeds target at {s}"
        in_rank = s.rank
    # vanishing: nothing at or above n+m-(d-1)
    for i, dim in q.items():
        assert dim == 0 or i < n + m - (d - 1), f"vanishing violated in degree {i}"
    # not both branch degrees can carry a nontrivial projection image
    nontrivial = [c for c in sol.scenario if c.kind != P_TRIVIAL]
    assert len(nontrivial) <= 1, "projection nontrivial at both fiber degrees"
    return steps


def solutions_to_json(fp: FiberProfile, solutions) -> list:
    out = []
    for sol in solutions:
        out.append(
            {
                "branches": [{"degree": c.degree, "kind": c.kind} for c in sol.scenario],
                "profile": {str(k): v for k, v in sol.profile.as_dict().items()},
                "relations": {
                    "u_power_zero": sol.u_power_zero,
                    "v_degree": sol.v_degree,
                    "v_u_power_zero": sol.v_u_power_zero,
                },
            }
        )
    return out
