"""Gysin chase: spec examples, exactness audit, and structural invariants."""

from __future__ import annotations

import pytest

from orbitcohom.graded import GradedDims
from orbitcohom.gysin import (
    P_NONTRIVIAL,
    P_RANK_ONE,
    P_TRIVIAL,
    BranchChoice,
    FiberProfile,
    chase,
    congruence_precheck,
    exactness_audit,
)

GRID = 14


def profile(d):
    return GradedDims.from_dict(d, max(d) if d else 0)


def test_chase_s3_5_7():
    sols = chase(FiberProfile(3, 5, 7))
    assert len(sols) == 1
    assert sols[0].profile == profile({0: 1, 4: 1, 5: 1, 9: 1})
    assert sols[0].scenario == (
        BranchChoice(5, P_NONTRIVIAL),
        BranchChoice(7, P_TRIVIAL),
    )


def test_chase_s3_1_2_empty():
    assert chase(FiberProfile(3, 1, 2)) == []


def test_chase_circle_on_torus():
    sols = chase(FiberProfile(1, 1, 1))
    assert len(sols) == 1
    assert sols[0].profile == profile({0: 1, 1: 1})
    assert sols[0].scenario == (BranchChoice(1, P_RANK_ONE),)


def test_chase_s3_4_7_two_subbranches():
    # the degree-7 vanishing forces one of v*u^((m-n+1)/4) or u^((m+1)/4)
    # to die; both sub-branches are consistent and share one profile
    sols = chase(FiberProfile(3, 4, 7))
    assert len(sols) == 2
    assert {s.profile for s in sols} == {profile({0: 1, 4: 2, 8: 1})}
    assert {(s.u_power_zero, s.v_u_power_zero) for s in sols} == {(2, 2), (3, 1)}


def test_chase_requires_mod2():
    with pytest.raises(ValueError):
        chase(FiberProfile(3, 2, 5, field="Q"))


def test_congruence_examples():
    assert congruence_precheck(3, 5, 7) is True
    assert congruence_precheck(3, 1, 2) is False
    assert congruence_precheck(1, 2, 4) is False


def test_congruence_necessary_on_grid():
    # precheck false => chase empty (it is necessary, not sufficient)
    for d in (1, 3):
        for n in range(1, GRID + 1):
            for m in range(n, GRID + 1):
                if not congruence_precheck(d, n, m):
                    assert chase(FiberProfile(d, n, m)) == [], (d, n, m)


def test_congruence_not_sufficient():
    # d = 3, n = 1 (mod 4), m = 0 (mod 4): m - n = 3 (mod 4) passes the
    # precheck, yet the chase is empty (the documented exception family)
    assert congruence_precheck(3, 1, 4) is True
    assert chase(FiberProfile(3, 1, 4)) == []
    assert congruence_precheck(3, 5, 8) is True
    assert chase(FiberProfile(3, 5, 8)) == []


def test_exactness_audit_full_grid():
    for d in (1, 3):
        for n in range(1, GRID + 1):
            for m in range(n, GRID + 1):
                fp = FiberProfile(d, n, m)
                for sol in chase(fp):
                    exactness_audit(fp, sol)


def test_vanishing_range_on_grid():
    for d in (1, 3):
        for n in range(1, GRID + 1):
            for m in range(n, GRID + 1):
                for sol in chase(FiberProfile(d, n, m)):
                    for deg, dim in sol.profile.as_dict().items():
                        assert dim == 0 or deg < n + m - (d - 1), (d, n, m, deg)


def test_never_nontrivial_at_both_degrees():
    for d in (1, 3):
        for n in range(1, GRID + 1):
            for m in range(n, GRID + 1):
                for sol in chase(FiberProfile(d, n, m)):
                    nontrivial = [c for c in sol.scenario if c.kind != P_TRIVIAL]
                    assert len(nontrivial) <= 1


def test_determinism_and_sorting():
    for d, n, m in [(3, 4, 7), (1, 2, 3), (3, 3, 7), (1, 1, 2)]:
        a = chase(FiberProfile(d, n, m))
        b = chase(FiberProfile(d, n, m))
        assert a == b
        keys = [s.branch_key() for s in a]
        assert keys == sorted(keys)


def test_close_degree_coincidences():
    # m = n+1, n+2, n+3 merge segments of the sequence; the engine derives
    # the same groups the generic case produces (no special-casing)
    sols = chase(FiberProfile(3, 5, 7))  # m = n + 2
    assert sols[0].profile == profile({0: 1, 4: 1, 5: 1, 9: 1})
    sols = chase(FiberProfile(3, 6, 7))  # m = n + 1
    assert [s.profile for s in sols] == [profile({0: 1, 4: 1, 6: 1, 10: 1})]
    sols = chase(FiberProfile(3, 2, 5))  # m = n + 3
    assert [s.profile for s in sols] == [profile({0: 1, 2: 1, 4: 1})]
