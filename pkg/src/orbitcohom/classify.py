"""Orbit-space classification: match engine-feasible profiles to the
ring-presentation families of the three classification theorems.

A family template carries the printed congruence conditions and relation
shapes; classify_orbit instantiates every applicable template at (n, m)
and keeps those whose dimension profile the engines actually realize
(the Gysin chase over Z2, the Borel spectral sequence over Q).  When the
same instantiated ring arises from two cases (only at n = m) the copy the
source's n = m analysis realizes is kept.

The fixture tables under fixtures/ transcribe the printed statements,
the per-case expected rows, and the full congruence-pattern grids; the
verify harness replays them against classify_orbit.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources

from .graded import GradedDims, Presentation, make_presentation, poincare
from .gysin import FiberProfile, chase
from .spectral import feasible_einf


class UnsupportedCombination(Exception):
    """Rational coefficients are only classified for S^3 actions."""


@dataclass(frozen=True)
class FamilyTemplate:
    theorem: str  # "mod2-s3" | "mod2-s1" | "rational-s3"
    case: str  # "i" | "ii" | "iii"
    d: int
    congruence: str

    def applies(self, n: int, m: int) -> bool:
        raise NotImplementedError

    def instantiate(self, n: int, m: int) -> Presentation:
        raise NotImplementedError


@dataclass(frozen=True)
class RingFamily:
    source_case: str
    theorem: str
    congruence: str
    presentation: Presentation
    profile: GradedDims

    def to_json_dict(self) -> dict:
        from .graded import to_json_dict

        return {
            "case": self.source_case,
            "theorem": self.theorem,
            "congruence": self.congruence,
            "presentation": to_json_dict(self.presentation),
            "profile": {str(k): v for k, v in self.profile.as_dict().items()},
        }


def _mk(field_name, step, n, rels, deg_v, trunc, conds):
    return make_presentation(
        field_name, [("u", step), ("v", deg_v)], rels, trunc, tuple(conds)
    )


class _Mod2CaseI(FamilyTemplate):
    def applies(self, n, m):
        step = self.d + 1
        return (m + 1) % step == 0

    def instantiate(self, n, m):
        step = self.d + 1
        a = (m + 1) // step
        rel = "v^2"
        conds = []
        if step == 4:
            if n % 4 == 0 and n < m:
                rel += f" + alpha*v*u^{n // 4}"
            if n % 2 == 0 and m > 2 * n:
                rel += f" + beta*u^{n // 2}"
            conds = ["beta = 0 if m < 2n", "alpha = beta = 0 if n odd"]
        else:
            if m > 2 * n:
                rel += f" + alpha*u^{n}"
            if n % 2 == 0 and n < m:
                rel += f" + beta*v*u^{n // 2}"
            conds = ["alpha = 0 if m <= 2n", "beta = 0 if n odd"]
        return _mk("Z2", step, n, [f"u^{a}", rel], n, n + m, conds)


class _Mod2CaseII(FamilyTemplate):
    def applies(self, n, m):
        step = self.d + 1
        return (m - n + 1) % step == 0 and (n + m + 1) % step == 0

    def instantiate(self, n, m):
        step = self.d + 1
        a = (n + m + 1) // step
        b = (m - n + 1) // step
        rel = "v^2"
        conds = []
        if step == 4:
            if n % 4 == 0 and m > 2 * n:
                rel += f" + alpha*v*u^{n // 4}"
            rel += f" + beta*u^{n // 2}"  # n is even whenever this case applies
            conds = ["alpha = 0 if m < 2n"]
        else:
            rel += f" + alpha*u^{n}"
            if n % 2 == 0 and m > 2 * n:
                rel += f" + beta*v*u^{n // 2}"
            conds = ["beta = 0 if m < 2n or m even"]
        return _mk("Z2", step, n, [f"u^{a}", f"v*u^{b}", rel], n, n + m + 1, conds)


class _Mod2CaseIII(FamilyTemplate):
    def applies(self, n, m):
        step = self.d + 1
        return (n + 1) % step == 0

    def instantiate(self, n, m):
        step = self.d + 1
        a = (n + 1) // step
        conds = []
        if step == 4:
            conds = [
                "statement prints deg u = 2; the characteristic class of an "
                "S^3 bundle has degree 4 (erratum)"
            ]
        return _mk("Z2", step, n, [f"u^{a}", "v^2"], m, 2 * m, conds)


class _RationalCaseI(FamilyTemplate):
    def applies(self, n, m):
        return (n + 1) % 4 == 0

    def instantiate(self, n, m):
        a = (n + 1) // 4
        return _mk("Q", 4, n, [f"u^{a}", "v^2"], m, 2 * m, [])


class _RationalCaseII(FamilyTemplate):
    def applies(self, n, m):
        return (m - n + 1) % 4 == 0 and (n + m + 1) % 4 == 0

    def instantiate(self, n, m):
        a = (n + m + 1) // 4
        b = (m - n + 1) // 4
        vu = f"v*u^{b}"
        if n % 4 == 0 and m > 2 * n:
            vu += f" - alpha*u^{(m + 1) // 4}"
        sq = f"v^2 - beta*u^{n // 2}"
        if n % 4 == 0 and m > 2 * n:
            sq += f" - gamma*u^{n // 4}*v"
        conds = ["alpha = 0 if m < 2n or n = 2 (mod 4)", "gamma = 0 if n != 0 (mod 4)"]
        return _mk("Q", 4, n, [f"u^{a}", vu, sq], n, n + m + 1, conds)


class _RationalCaseIII(FamilyTemplate):
    def applies(self, n, m):
        return (m + 1) % 4 == 0

    def instantiate(self, n, m):
        a = (m + 1) // 4
        sq = "v^2"
        if n % 4 == 2 and m > 2 * n:
            sq += f" - alpha*u^{n // 2}"
        if n % 4 == 0:
            sq += f" - beta*u^{n // 4}*v"
        conds = [
            "beta = 0 if n != 0 (mod 4)",
            "alpha = 0 if n != 2 (mod 4) or 2n >= m",
        ]
        return _mk("Q", 4, n, [f"u^{a}", sq], n, n + m, conds)


_TEMPLATES = {
    ("Z2", 3): [
        _Mod2CaseI("mod2-s3", "i", 3, "m = 3 (mod 4)"),
        _Mod2CaseII("mod2-s3", "ii", 3, "m - n = 3 (mod 4), n even"),
        _Mod2CaseIII("mod2-s3", "iii", 3, "n = 3 (mod 4)"),
    ],
    ("Z2", 1): [
        _Mod2CaseI("mod2-s1", "i", 1, "m odd"),
        _Mod2CaseII("mod2-s1", "ii", 1, "m - n odd"),
        _Mod2CaseIII("mod2-s1", "iii", 1, "n odd"),
    ],
    ("Q", 3): [
        _RationalCaseI("rational-s3", "i", 3, "n = 3 (mod 4)"),
        _RationalCaseII("rational-s3", "ii", 3, "m - n = 3 (mod 4), n even"),
        _RationalCaseIII("rational-s3", "iii", 3, "m = 3 (mod 4)"),
    ],
}

# at n = m cases (i) and (iii) instantiate the same ring; keep the copy the
# n = m analysis of each source realizes
_DEDUPE_PREFERENCE = {
    "mod2-s3": {"iii": 0, "i": 1, "ii": 2},
    "mod2-s1": {"iii": 0, "i": 1, "ii": 2},
    "rational-s3": {"i": 0, "iii": 1, "ii": 2},
}


def engine_profiles(d: int, n: int, m: int, field_name: str) -> set:
    """The set of feasible orbit profiles the matching engine produces."""
    if field_name == "Z2":
        return {sol.profile for sol in chase(FiberProfile(d, n, m))}
    return {e.total for e in feasible_einf(d, n, m, "Q")}


def classify_orbit(d: int, n: int, m: int, field_name) -> list:
    """Ring-presentation families realizable as H*(X/G) for a free S^d
    action on X with the (field) cohomology of S^n x S^m."""
    name = {"z2": "Z2", "Z2": "Z2", "q": "Q", "Q": "Q"}.get(str(field_name))
    if name is None:
        raise ValueError(f"unknown coefficient field {field_name!r}")
    if d not in (1, 3):
        raise ValueError("d must be 1 or 3")
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    if name == "Q" and d == 1:
        raise UnsupportedCombination(
            "rational coefficients are classified for S^3 actions only"
        )

    profiles = engine_profiles(d, n, m, name)
    if not profiles:
        return []
    found = []
    for tpl in _TEMPLATES[(name, d)]:
        if not tpl.applies(n, m):
            continue
        pres = tpl.instantiate(n, m)
        prof = poincare(pres)
        if prof in profiles:
            found.append(
                RingFamily(tpl.case, tpl.theorem, tpl.congruence, pres, prof)
            )

    # dedupe identical instantiations (n = m collisions); the key ignores
    # the condition annotations, which differ per statement text
    from .graded import to_json_dict

    by_pres: dict = {}
    for fam in found:
        blob = to_json_dict(fam.presentation)
        blob.pop("conditions", None)
        key = json.dumps(blob, sort_keys=True)
        pref = _DEDUPE_PREFERENCE[fam.theorem][fam.source_case]
        if key not in by_pres or _DEDUPE_PREFERENCE[fam.theorem][by_pres[key].source_case] > pref:
            by_pres[key] = fam
    out = list(by_pres.values())
    out.sort(key=lambda f: f.source_case)
    return out


# ---------------------------------------------------------------------------
# fixture corpus and the verify harness
# ---------------------------------------------------------------------------

FIXTURE_ENV = "ORBITCOHOM_FIXTURES"
_FIXTURE_FILES = ("mod2_s3.json", "mod2_s1.json", "rational_s3.json", "examples.json")


class FixtureTable(dict):
    """A theorem's transcription: family statements as printed (including
    their flagged errata), the congruence-pattern grid, and concrete
    expected rows.  Plain dict access plus named views."""

    @property
    def families(self):
        return self.get("families", [])

    @property
    def rows(self):
        return self.get("rows", [])

    @property
    def grid_expectations(self):
        return self.get("grid_expectations", [])


def load_fixtures() -> dict:
    """Fixture tables, one file per theorem plus the worked examples.
    The directory can be overridden with the ORBITCOHOM_FIXTURES variable."""
    override = os.environ.get(FIXTURE_ENV)
    tables = {}
    for fname in _FIXTURE_FILES:
        if override:
            with open(os.path.join(override, fname), "r", encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            data = json.loads(
                resources.files("orbitcohom.fixtures").joinpath(fname).read_text("utf-8")
            )
        tables[data["table"]] = FixtureTable(data)
    return tables


def _profile_from_json(d: dict | None):
    if d is None:
        return None
    return GradedDims.from_dict({int(k): v for k, v in d.items()}, 0)


def pattern_expectation(table: dict, n: int, m: int) -> list:
    step = table["d"] + 1
    for row in table["grid_expectations"]:
        if row["n_mod"] == n % step and row["m_mod"] == m % step and row["equal"] == (n == m):
            return row["cases"]
    raise KeyError(f"no grid expectation for ({n}, {m}) in {table['table']}")


@dataclass
class VerifyReport:
    rows: list = field(default_factory=list)

    def add(self, input_desc, expected, actual, status, notes=""):
        self.rows.append(
            {
                "input": input_desc,
                "expected": expected,
                "actual": actual,
                "pass": status in ("pass", "flagged"),
                "status": status,
                "notes": notes,
            }
        )

    @property
    def ok(self) -> bool:
        return all(r["pass"] for r in self.rows)

    def counts(self) -> dict:
        out = {"pass": 0, "flagged": 0, "fail": 0}
        for r in self.rows:
            out[r["status"]] += 1
        return out

    def to_json_dict(self) -> dict:
        return {"schema_version": 1, "ok": self.ok, "counts": self.counts(), "rows": self.rows}

    def render_text(self) -> str:
        lines = []
        for r in self.rows:
            tag = {"pass": "ok  ", "flagged": "FLAG", "fail": "FAIL"}[r["status"]]
            line = f"[{tag}] {r['input']}: expected {r['expected']}, got {r['actual']}"
            if r["notes"]:
                line += f"  ({r['notes']})"
            lines.append(line)
        c = self.counts()
        lines.append(
            f"{len(self.rows)} rows: {c['pass']} pass, {c['flagged']} flagged, {c['fail']} fail"
        )
        return "\n".join(lines)


def _check_theorem_row(report, table, row):
    d = table["d"]
    coeff = table["coeff"]
    n, m = row["n"], row["m"]
    desc = f"{table['table']} ({n},{m})"
    fams = classify_orbit(d, n, m, coeff)
    got_cases = [f.source_case for f in fams]
    expected_cases = row["expect_cases"]
    notes = row.get("notes", "")
    if got_cases != expected_cases:
        status = "flagged" if row.get("flag_on_mismatch") else "fail"
        report.add(desc, expected_cases, got_cases, status, notes)
        return
    expected_profiles = [_profile_from_json(p) for p in row.get("expect_profiles", [])]
    if expected_profiles:
        got_profiles = [f.profile for f in fams]
        if got_profiles != expected_profiles:
            report.add(
                desc,
                [str(p) for p in expected_profiles],
                [str(p) for p in got_profiles],
                "flagged" if row.get("flag_on_mismatch") else "fail",
                notes,
            )
            return
    report.add(desc, expected_cases, got_cases, "flagged" if row.get("erratum") else "pass", notes)


def _check_grid(report, table, grid_max):
    d = table["d"]
    coeff = table["coeff"]
    mismatches = []
    for n in range(1, grid_max + 1):
        for m in range(n, grid_max + 1):
            expected = pattern_expectation(table, n, m)
            got = [f.source_case for f in classify_orbit(d, n, m, coeff)]
            if got != expected:
                mismatches.append((n, m, expected, got))
    desc = f"{table['table']} grid 1..{grid_max}"
    if mismatches:
        report.add(desc, "pattern table", f"{len(mismatches)} mismatches: {mismatches[:5]}", "fail")
    else:
        report.add(desc, "pattern table", "exact match", "pass")


def _product_profile(step: int, a: int, m: int) -> GradedDims:
    """Additive profile of FP^a x S^m."""
    dims: dict = {}
    for i in range(a + 1):
        for extra in (0, m):
            deg = i * step + extra
            dims[deg] = dims.get(deg, 0) + 1
    return GradedDims.from_dict(dims, a * step + m)


def _check_example_51(report, row):
    from .indexes import diagonal_product_report

    d, a, m = row["d"], row["a"], row["m"]
    sphere_dim = (d + 1) * a + d
    n_, m_ = sorted((sphere_dim, m))
    desc = f"example-5.1 d={d} a={a} m={m} -> ({n_},{m_})"
    fams = classify_orbit(d, n_, m_, "Z2")
    want = _product_profile(d + 1, a, m)
    hit = [f for f in fams if f.profile == want]
    if not hit:
        report.add(desc, str(want), [str(f.profile) for f in fams], "fail")
        return
    rep = diagonal_product_report(d, a, m)
    if rep.pinned_index() != a or rep.cohom_index != a:
        report.add(desc, f"ind = cohom-index = {a}", rep.to_json_dict(), "fail")
        return
    report.add(desc, f"family with FP^{a} x S^{m} profile; ind pinned at {a}",
               [f.source_case for f in hit], "pass")


def _check_example_52(report, row):
    mm = row["m"]
    desc = f"example-5.2 m={mm} (lens quotients of S^1 x S^{2 * mm + 1})"
    fams = classify_orbit(1, 1, 2 * mm + 1, "Z2")
    profiles = {f.profile for f in fams}
    sphere = GradedDims.from_dict({0: 1, 2 * mm + 1: 1}, 2 * mm + 1)
    full = GradedDims.from_dict({i: 1 for i in range(2 * mm + 2)}, 2 * mm + 1)
    missing = []
    if sphere not in profiles:
        missing.append("S^{2m+1} (odd multiplier)")
    if full not in profiles:
        missing.append("RP^{2m+1} / S^1 x CP^m (even multipliers)")
    if missing:
        report.add(desc, "all three lens profiles", f"missing {missing}", "fail")
    else:
        report.add(desc, "all three lens profiles", "matched", "pass")


def verify_fixtures(grid_max: int | None = 20) -> VerifyReport:
    """Replay the fixture corpus (and optionally the full congruence grid)
    against classify_orbit.  Failure shows up as report rows, not errors."""
    tables = load_fixtures()
    report = VerifyReport()
    for key in ("mod2-s3", "mod2-s1", "rational-s3"):
        table = tables[key]
        for row in table["rows"]:
            _check_theorem_row(report, table, row)
        if grid_max:
            cap = min(grid_max, 16) if table["coeff"] == "Q" else grid_max
            _check_grid(report, table, cap)
    for row in tables["examples"]["example_5_1"]:
        _check_example_51(report, row)
    for row in tables["examples"]["example_5_2"]:
        _check_example_52(report, row)
    return report
