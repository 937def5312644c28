"""The spectral sequence of the Borel fibration X -> X_G -> B_G.

The base has polynomial cohomology on one class t of degree d+1, the
fiber has the profile of S^n x S^m with generators x, y and product xy,
so the second page is the tensor bigraded module with entries at
(k, l), k a multiple of d+1 and l in {0, n, m, n+m}.  The only possible
nonzero differentials are transgression-like:

    x  -> c * t^((n+1)/(d+1))   on page n+1,
    y  -> c * t^((m+1)/(d+1))   on page m+1,
    y  -> c * t^((m-n+1)/(d+1)) x   on page m-n+1,
    xy -> c * t^((n+m+1)/(d+1)) once both factors are gone,

with the action on t-multiples and on xy forced by t-linearity and the
Leibniz rule.  Coefficients stay symbolic nonzero scalars: only the
zero/nonzero pattern (and, for the double transgression at n = m, the
rank of the coefficient pair) can affect dimensions, which the engine
confirms by running every choice at several exact coefficient samples.

Pages are computed with exact linear algebra on a window wide enough
that every reported entry has all of its differentials inside the
window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .fields import Field, field_by_name
from .graded import GradedDims, Presentation, make_presentation


class InfeasibleChoice(Exception):
    """A differential pattern leaves classes above total degree n+m."""

    def __init__(self, degree: int, message: str | None = None):
        super().__init__(message or f"freeness fails first in total degree {degree}")
        self.degree = degree


@dataclass(frozen=True)
class BiGradedPage:
    r: int
    d: int
    n: int
    m: int
    field_name: str
    max_k: int
    entries: tuple  # sorted tuple of ((k, l), (label, ...)) with labels "t^e*x" style


@dataclass(frozen=True)
class DifferentialChoice:
    """Transgression pattern: pages where x and y support a differential
    (None = permanent cocycle), whether y maps to the x-row rather than
    the base row, and the page of the free transgression of xy once its
    factors are gone (None = bound by the Leibniz rule or surviving)."""

    x_page: int | None
    y_page: int | None
    y_to_x: bool
    xy_page: int | None

    def describe(self, d: int) -> str:
        step = d + 1
        bits = []
        if self.x_page:
            bits.append(f"d_{self.x_page}(x) = c*t^{self.x_page // step}")
        if self.y_page:
            tgt = f"t^{self.y_page // step}*x" if self.y_to_x else f"t^{self.y_page // step}"
            bits.append(f"d_{self.y_page}(y) = c*{tgt}")
        if self.xy_page:
            bits.append(f"d_{self.xy_page}(xy) = c*t^{self.xy_page // step}")
        return "; ".join(bits) if bits else "no nonzero differential"


@dataclass(frozen=True)
class EInfData:
    page: BiGradedPage
    total: GradedDims
    permanent_cocycles: tuple  # ((k, l, label), ...)
    choice: DifferentialChoice


def _fiber_rows(n: int, m: int) -> dict:
    """fiber degree l -> ordered basis labels."""
    if n == m:
        return {0: ("1",), n: ("x", "y"), 2 * n: ("xy",)}
    return {0: ("1",), n: ("x",), m: ("y",), n + m: ("xy",)}


def build_e2(d: int, n: int, m: int, field) -> BiGradedPage:
    """Second page of the Borel spectral sequence, k <= n+m+d+1."""
    if d not in (1, 3):
        raise ValueError("d must be 1 or 3")
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    field = field if isinstance(field, Field) else field_by_name(field)
    step = d + 1
    max_k = n + m + d + 1
    rows = _fiber_rows(n, m)
    entries = []
    for e in range(max_k // step + 1):
        k = e * step
        for l, labels in rows.items():
            entries.append(((k, l), tuple(_label(e, b) for b in labels)))
    return BiGradedPage(2, d, n, m, field.name, max_k, tuple(sorted(entries)))


def _label(e: int, fiber: str) -> str:
    if e == 0:
        return fiber
    t = "t" if e == 1 else f"t^{e}"
    return t if fiber == "1" else f"{t}*{fiber}"


# ---------------------------------------------------------------------------
# admissible differential patterns
# ---------------------------------------------------------------------------

def enumerate_differentials(page: BiGradedPage) -> list:
    """Every pattern passing the local constraints: bidegree/divisibility,
    d o d = 0 and t-linearity (y can hit the x-row only while that row is
    wholly intact, so x must then survive), and over Q the square
    obstruction d(y^2) = 2c t^s xy != 0 that forces m odd and n even.
    The all-zero pattern is omitted; global freeness is left to
    run_to_einf."""
    d, n, m = page.d, page.n, page.m
    step = d + 1
    rational = page.field_name == "Q"

    x_opts = [None]
    if (n + 1) % step == 0:
        x_opts.append(n + 1)

    def y_opts(x_page):
        opts = [(None, False)]
        if (m + 1) % step == 0:
            opts.append((m + 1, False))
        if n < m and (m - n + 1) % step == 0 and x_page is None:
            if not rational or (m % 2 == 1 and n % 2 == 0):
                opts.append((m - n + 1, True))
        return opts

    choices = []
    for xp in x_opts:
        for yp, to_x in y_opts(xp):
            death = _leibniz_death_page(n, m, xp, yp, to_x)
            if death is not None:
                xy_opts = [None]
            elif xp is None and yp is None:
                xy_opts = [None]  # Leibniz binds xy forever
            else:
                xy_opts = [None]
                if (n + m + 1) % step == 0:
                    xy_opts.append(n + m + 1)
            for xyp in xy_opts:
                if xp is None and yp is None and xyp is None:
                    continue
                choices.append(DifferentialChoice(xp, yp, to_x, xyp))
    return choices


def _leibniz_death_page(n, m, x_page, y_page, y_to_x):
    """First page where the induced differential on xy is nonzero, or None."""
    for p in sorted({q for q in (x_page, y_page) if q is not None}):
        terms = _xy_leibniz_terms(n, m, x_page, y_page, y_to_x, p, Fraction(1), Fraction(1), QSIGNS=True)
        if terms:
            return p
    return None


def _xy_leibniz_terms(n, m, x_page, y_page, y_to_x, p, cx, cy, QSIGNS):
    """d_p(xy) = d_p(x)*y +- x*d_p(y) evaluated in the fiber algebra.
    Returns [(target fiber label, coefficient)]."""
    terms = []
    y_alive = y_page is None or y_page >= p
    x_alive = x_page is None or x_page >= p
    if x_page == p and y_alive:
        terms.append(("y", cx))  # (t^s * 1) * y
    if y_page == p and x_alive:
        if y_to_x:
            pass  # x * (t^s * x) = 0 since x^2 = 0
        else:
            sign = Fraction(-1) ** (n % 2) if QSIGNS else Fraction(1)
            terms.append(("x", sign * cy))  # (-1)^n x * (t^s * 1)
    return terms


# ---------------------------------------------------------------------------
# page-by-page computation
# ---------------------------------------------------------------------------

class _PageState:
    """Exact bookkeeping of one page: at each (e, l) a list of surviving
    representative vectors (coordinates in the E2 basis of the position)
    and the accumulated boundary vectors modded out."""

    def __init__(self, field: Field, rows: dict, e_max: int):
        self.field = field
        self.rows = rows
        self.e_max = e_max
        self.reps = {}
        self.killed = {}
        for e in range(e_max + 1):
            for l, labels in rows.items():
                dim = len(labels)
                self.reps[(e, l)] = [
                    tuple(field.one if i == j else field.zero for j in range(dim))
                    for i in range(dim)
                ]
                self.killed[(e, l)] = []

    def dim(self, pos) -> int:
        return len(self.reps.get(pos, ()))

    def turn(self, fiber_map: dict, shift: int):
        """Apply one differential: fiber_map maps a source fiber label to
        [(target fiber label, coeff)], t-exponents shift by `shift`.
        Returns the kill events [(src_pos, tgt_pos, rank)]."""
        field = self.field
        events = []
        new_reps = {}
        incoming: dict = {}
        for (e, l), reps in self.reps.items():
            if not reps:
                continue
            src_labels = self.rows[l]
            if not any(lab in fiber_map for lab in src_labels):
                continue
            tgt = self._target(e + shift, l, fiber_map, src_labels)
            if tgt is None:
                continue
            tgt_pos, images = tgt(reps)
            if tgt_pos[0] > self.e_max:
                continue  # outside the window; harmless for reported entries
            killed_rref, killed_piv = linalg.rref(field, self.killed[tgt_pos])
            reduced = [linalg.reduce_mod_span(field, w, killed_rref, killed_piv) for w in images]
            kernel = linalg.left_kernel(field, reduced)
            rank = len(reps) - len(kernel)
            if rank:
                events.append(((e, l), tgt_pos, rank))
                incoming.setdefault(tgt_pos, []).extend(
                    w for w in reduced if any(c != field.zero for c in w)
                )
                new_reps[(e, l)] = [
                    _combine(field, combo, reps) for combo in kernel
                ]
        for pos, reps in new_reps.items():
            self.reps[pos] = reps
        for pos, images in incoming.items():
            self.killed[pos].extend(images)
            self.reps[pos] = linalg.independent_mod(field, self.reps[pos], self.killed[pos])
        return events

    def _target(self, e_tgt, l_src, fiber_map, src_labels):
        # all mapped labels in one source row land in one target row
        tgt_rows = set()
        for lab in src_labels:
            for tl, _c in fiber_map.get(lab, ()):  # target fiber labels
                tgt_rows.add(_row_of_label(self.rows, tl))
        tgt_rows.discard(None)
        if not tgt_rows:
            return None
        assert len(tgt_rows) == 1, "differential targets split across rows"
        l_tgt = tgt_rows.pop()
        tgt_pos = (e_tgt, l_tgt)
        tgt_labels = self.rows[l_tgt]

        def images(reps):
            out = []
            for vec in reps:
                w = [self.field.zero] * len(tgt_labels)
                for coord, lab in zip(vec, src_labels):
                    if coord == self.field.zero:
                        continue
                    for tl, c in fiber_map.get(lab, ()):  # label-level rule
                        j = tgt_labels.index(tl)
                        w[j] = self.field.add(w[j], self.field.mul(coord, self.field.coerce(c)))
                out.append(tuple(w))
            return tgt_pos, out

        return images


def _row_of_label(rows, label):
    for l, labels in rows.items():
        if label in labels:
            return l
    return None


def _combine(field, combo, reps):
    out = [field.zero] * len(reps[0])
    for c, vec in zip(combo, reps):
        if c == field.zero:
            continue
        out = [field.add(o, field.mul(c, v)) for o, v in zip(out, vec)]
    return tuple(out)


@dataclass
class PageTurn:
    r: int
    dims_before: dict  # (k, l) -> dim, within the exact window
    events: list  # [(src (k,l), tgt (k,l), rank)]


@dataclass
class PageRun:
    d: int
    n: int
    m: int
    field_name: str
    choice: DifferentialChoice
    history: list  # [PageTurn]
    final_dims: dict  # (k, l) -> dim, k <= report window
    totals: dict  # total degree -> dim, over the report window

    def first_freeness_failure(self):
        bad = [j for j, v in self.totals.items() if v and j > self.n + self.m]
        return min(bad) if bad else None


def _coefficient_samples(field: Field, n: int, m: int):
    if field.name == "Z2":
        return [(1, 1, 1)]
    samples = [(Fraction(1), Fraction(1), Fraction(1)), (Fraction(2), Fraction(3), Fraction(1))]
    if n == m:
        samples.append((Fraction(1), Fraction(-2), Fraction(1)))
    return samples


def run_pages(page: BiGradedPage, choice: DifferentialChoice, coeffs=None) -> PageRun:
    """Run the sequence to its last possible differential with exact linear
    algebra; entries with k <= n+m+d+1 are exact."""
    d, n, m = page.d, page.n, page.m
    field = field_by_name(page.field_name)
    step = d + 1
    rows = _fiber_rows(n, m)
    e_report = page.max_k // step
    shift_max = (n + m + 1) // step + 1
    state = _PageState(field, rows, e_report + shift_max + 1)
    cx, cy, cz = coeffs or _coefficient_samples(field, n, m)[0]

    history = []
    for r in range(2, n + m + 2):
        if r % step != 0:
            continue
        fiber_map = {}
        if choice.x_page == r:
            fiber_map["x"] = [("1", cx)]
        if choice.y_page == r:
            fiber_map["y"] = [("x", cy)] if choice.y_to_x else [("1", cy)]
        xy_terms = _xy_leibniz_terms(
            n, m, choice.x_page, choice.y_page, choice.y_to_x, r, cx, cy,
            QSIGNS=field.name == "Q",
        )
        if choice.xy_page == r:
            xy_terms = [("1", cz)]
        if xy_terms:
            fiber_map["xy"] = [(tl, field.coerce(c)) for tl, c in xy_terms]
        if not fiber_map:
            continue
        dims_before = {
            (e * step, l): state.dim((e, l))
            for e in range(e_report + 1)
            for l in rows
        }
        events = state.turn(fiber_map, r // step)
        history.append(
            PageTurn(
                r,
                dims_before,
                [((s[0] * step, s[1]), (t[0] * step, t[1]), rank) for s, t, rank in events],
            )
        )

    final_dims = {
        (e * step, l): state.dim((e, l)) for e in range(e_report + 1) for l in rows
    }
    totals: dict = {}
    for (k, l), dim in final_dims.items():
        if dim:
            totals[k + l] = totals.get(k + l, 0) + dim
    run = PageRun(d, n, m, page.field_name, choice, history, final_dims, totals)
    run._state = state  # noqa: SLF001 - internal handle for label extraction
    return run


def run_to_einf(page: BiGradedPage, choice: DifferentialChoice) -> EInfData:
    """Run all pages and package the limit; raises InfeasibleChoice when a
    class survives above total degree n+m.  The dimension profile is
    verified to be independent of the sampled differential coefficients."""
    d, n, m = page.d, page.n, page.m
    field = field_by_name(page.field_name)
    samples = _coefficient_samples(field, n, m)
    runs = [run_pages(page, choice, coeffs=s) for s in samples]
    base = runs[0]
    for other in runs[1:]:
        if other.totals != base.totals:
            raise AssertionError(
                "differential coefficients changed the dimension profile; "
                "only the zero pattern may matter"
            )
    bad = base.first_freeness_failure()
    if bad is not None:
        raise InfeasibleChoice(bad)

    step = d + 1
    rows = _fiber_rows(n, m)
    state = base._state
    entries = []
    cocycles = []
    double = n == m and choice.x_page is not None and choice.y_page is not None
    for e in range(page.max_k // step + 1):
        for l, labels in rows.items():
            reps = state.reps.get((e, l), ())
            if not reps:
                continue
            rendered = tuple(_render_rep(e, labels, vec, field, double) for vec in reps)
            entries.append(((e * step, l), rendered))
            if e == 0 and l > 0 or (e == 1 and l == 0):
                for lab in rendered:
                    cocycles.append((e * step, l, lab))
    total = GradedDims.from_dict({j: v for j, v in base.totals.items() if j <= n + m}, n + m)
    einf_page = BiGradedPage(
        n + m + 2, d, n, m, page.field_name, page.max_k, tuple(sorted(entries))
    )
    return EInfData(einf_page, total, tuple(cocycles), choice)


def _render_rep(e, labels, vec, field, double):
    nonzero = [(lab, c) for lab, c in zip(labels, vec) if c != field.zero]
    if len(nonzero) == 1:
        return _label(e, nonzero[0][0])
    # the n = m double transgression leaves the combination c*y - d*x
    if double:
        return _label(e, "c*y - d*x")
    return _label(e, " + ".join(f"{c}*{lab}" for lab, c in nonzero))


def feasible_einf(d: int, n: int, m: int, field) -> list:
    """E-infinity data of every admissible pattern that respects freeness."""
    page = build_e2(d, n, m, field)
    out = []
    for choice in enumerate_differentials(page):
        try:
            out.append(run_to_einf(page, choice))
        except InfeasibleChoice:
            continue
    return out


# ---------------------------------------------------------------------------
# ring reconstruction from the limit page
# ---------------------------------------------------------------------------

def ring_candidates(einf: EInfData) -> list:
    """Presentations on u (image of t, degree d+1) and v (lift of the
    surviving fiber class) read off the limit page: the u-tower and
    v-row deaths give the monomial relations, and v^2 is expressed with
    symbolic parameters on exactly the monomials supported in its degree,
    with conditions recording the parameters forced to zero by absent
    support."""
    page = einf.page
    d, n, m = page.d, page.n, page.m
    step = d + 1
    field = field_by_name(page.field_name)
    alive = {pos for pos, labels in page.entries if labels}

    def u_alive(e):
        return (e * step, 0) in alive

    a = 1
    while u_alive(a):
        a += 1

    v_rows = sorted({l for (k, l) in alive if k == 0 and l > 0})
    assert len(v_rows) == 1, f"expected a single surviving fiber row, got {v_rows}"
    l_v = v_rows[0]

    b = 1
    while (b * step, l_v) in alive:
        b += 1

    mod2 = field.name == "Z2"
    relations = [f"u^{a}"]
    conditions = []
    minus = "+" if mod2 else "-"
    if b < a:
        tgt, rem = divmod(l_v + b * step, step)
        if rem == 0 and tgt < a:
            relations.append(f"v*u^{b} {minus} alpha*u^{tgt}")
            conditions.append("alpha is an undetermined field constant")
        else:
            relations.append(f"v*u^{b}")

    # v^2 lands in degree 2*l_v; candidate support: u^(2 l_v / step) and
    # u^(l_v / step) * v when those classes survive
    sq = 2 * l_v
    pw_name, mixed_name = ("beta", "gamma") if not mod2 else ("beta", "alpha")
    terms = []
    e_pw, rem_pw = divmod(sq, step)
    if rem_pw == 0 and e_pw < a:
        terms.append(f"{pw_name}*u^{e_pw}")
    else:
        conditions.append(f"{pw_name} = 0 (no class u^({sq}/{step}) at E-infinity)")
    e_mx, rem_mx = divmod(l_v, step)
    if rem_mx == 0 and e_mx >= 1 and e_mx < b and e_mx < a:
        terms.append(f"{mixed_name}*u^{e_mx}*v")
    else:
        conditions.append(f"{mixed_name} = 0 (no class u^({l_v}/{step})*v at E-infinity)")
    rel = "v^2"
    for t in terms:
        rel += f" {minus} {t}"
    relations.append(rel)

    truncation = max(n + m, a * step, sq, l_v + b * step)
    pres = make_presentation(
        field,
        [("u", step), ("v", l_v)],
        relations,
        truncation,
        tuple(conditions),
    )
    return [pres]
