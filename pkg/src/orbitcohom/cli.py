"""Command-line front end: chase, ss, index, classify, verify.

Every subcommand renders text by default and machine-readable JSON with
--format json (schema_version 1); exit status is 0 on success, 1 when
verify finds failures, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classify import UnsupportedCombination, classify_orbit, verify_fixtures
from .graded import presentation_from_json, presentation_text, to_json_dict as _pres_json
from .gysin import FiberProfile, chase, congruence_precheck, solutions_to_json
from .indexes import (
    BadDimension,
    OrbitPresentation,
    cohom_index,
    cohom_index_by_family,
    standard_sphere_report,
)
from .spectral import (
    InfeasibleChoice,
    build_e2,
    enumerate_differentials,
    ring_candidates,
    run_to_einf,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        out = json.dumps(payload, indent=2)
    else:
        out = text
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _cmd_chase(args) -> int:
    fp = FiberProfile(args.d, args.n, args.m)
    sols = chase(fp)
    payload = {
        "input": {"d": args.d, "n": args.n, "m": args.m, "coeff": "z2"},
        "congruence_precheck": congruence_precheck(args.d, args.n, args.m),
        "solutions": solutions_to_json(fp, sols),
    }
    if not sols:
        text = (
            f"no consistent profile: no free S^{args.d} action with the mod-2 "
            f"cohomology of S^{args.n} x S^{args.m}"
        )
    else:
        lines = [f"{len(sols)} consistent scenario(s) for S^{args.d} on S^{args.n} x S^{args.m}:"]
        for i, s in enumerate(sols, 1):
            branches = ", ".join(f"deg {c.degree}: {c.kind}" for c in s.scenario)
            lines.append(f"  [{i}] {branches}")
            lines.append(f"      profile {s.profile}")
            vu = f", v*u^{s.v_u_power_zero} = 0" if s.v_u_power_zero is not None else ""
            lines.append(
                f"      u^{s.u_power_zero} = 0, deg v = {s.v_degree}{vu}"
            )
        text = "\n".join(lines)
    _emit(args, payload, text)
    return 0


def _cmd_ss(args) -> int:
    field = {"z2": "Z2", "q": "Q"}[args.coeff]
    page = build_e2(args.d, args.n, args.m, field)
    choices = enumerate_differentials(page)
    results = []
    for choice in choices:
        entry = {
            "differentials": choice.describe(args.d),
            "x_page": choice.x_page,
            "y_page": choice.y_page,
            "y_to_x": choice.y_to_x,
            "xy_page": choice.xy_page,
        }
        try:
            einf = run_to_einf(page, choice)
            rings = ring_candidates(einf)
            entry["feasible"] = True
            entry["total"] = {str(k): v for k, v in einf.total.as_dict().items()}
            entry["rings"] = [presentation_text(p) for p in rings]
            entry["presentations"] = [_pres_json(p) for p in rings]
        except InfeasibleChoice as exc:
            entry["feasible"] = False
            entry["freeness_fails_in_degree"] = exc.degree
        results.append(entry)
    payload = {
        "input": {"d": args.d, "n": args.n, "m": args.m, "coeff": args.coeff},
        "choices": results,
    }
    lines = [
        f"{len(results)} differential pattern(s) on E_2 for S^{args.d}, "
        f"fiber S^{args.n} x S^{args.m}, {field}:"
    ]
    for entry in results:
        if entry["feasible"]:
            lines.append(f"  feasible   {entry['differentials']}")
            lines.append(f"             total {entry['total']}")
            for ring in entry["rings"]:
                lines.append(f"             ring  {ring}")
        else:
            lines.append(
                f"  infeasible {entry['differentials']} "
                f"(classes survive in degree {entry['freeness_fails_in_degree']})"
            )
    if not results:
        lines.append("  none: no admissible nonzero differential exists")
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_index(args) -> int:
    if args.space == "sphere":
        if args.dim is None:
            raise UsageError("--space sphere requires --dim")
        report = standard_sphere_report(args.d, args.dim)
        n = report.pinned_index()
        text = (
            f"S^{args.dim} with the standard free S^{args.d} action: "
            f"ind = co-ind = cohom-index = {n}"
        )
        _emit(args, {"space": "sphere", "report": report.to_json_dict()}, text)
        return 0
    if args.space == "product":
        if args.n is None or args.m is None:
            raise UsageError("--space product requires --n and --m")
        by_family = cohom_index_by_family(args.d, args.n, args.m)
        values = sorted(set(by_family.values()))
        payload = {
            "space": "product",
            "cohom_index_by_family": by_family,
            "cohom_index_values": values,
        }
        if not by_family:
            text = (
                f"no free S^{args.d} action exists on a mod-2 "
                f"S^{args.n} x S^{args.m}; no index to report"
            )
        else:
            parts = ", ".join(f"case ({c}): {v}" for c, v in sorted(by_family.items()))
            text = (
                f"cohom-index of free S^{args.d} actions on mod-2 "
                f"S^{args.n} x S^{args.m}: {parts}\n"
                f"equivariant maps from S^((d+1)k+d) are impossible for "
                f"k > cohom-index in each case"
            )
        _emit(args, payload, text)
        return 0
    # presentation-file
    if not args.file:
        raise UsageError("--space presentation-file requires --file")
    with open(args.file, "r", encoding="utf-8") as fh:
        pres = presentation_from_json(json.load(fh))
    value = cohom_index(OrbitPresentation(pres, args.generator))
    text = f"cohom-index from {presentation_text(pres)} at generator {args.generator}: {value}"
    _emit(args, {"space": "presentation-file", "cohom_index": value}, text)
    return 0


def _cmd_classify(args) -> int:
    field = {"z2": "Z2", "q": "Q"}[args.coeff]
    fams = classify_orbit(args.d, args.n, args.m, field)
    payload = {
        "input": {"d": args.d, "n": args.n, "m": args.m, "coeff": args.coeff},
        "families": [f.to_json_dict() for f in fams],
    }
    if not fams:
        text = (
            f"no free S^{args.d} action: empty classification at "
            f"(n, m) = ({args.n}, {args.m}) over {field}"
        )
    else:
        lines = [
            f"H*(X/G) for free S^{args.d} on X ~ S^{args.n} x S^{args.m} ({field}): "
            f"{len(fams)} family(ies)"
        ]
        for f in fams:
            lines.append(f"  case ({f.source_case})  [{f.congruence}]")
            lines.append(f"    {presentation_text(f.presentation)}")
            for cond in f.presentation.conditions:
                lines.append(f"      where {cond}")
            lines.append(f"    profile {f.profile}")
        text = "\n".join(lines)
    _emit(args, payload, text)
    return 0


def _cmd_verify(args) -> int:
    report = verify_fixtures(grid_max=args.grid_max)
    _emit(args, report.to_json_dict(), report.render_text())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitcohom",
        description=(
            "Orbit-space cohomology of free S^1/S^3 actions on cohomology "
            "products of spheres: Gysin chase, Borel spectral sequence, "
            "classification tables, and equivariant index bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_nm=True):
        p.add_argument("--d", type=int, choices=(1, 3), required=True)
        if need_nm:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--m", type=int, required=True)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", help="write the rendering to a file")

    p = sub.add_parser("chase", help="Gysin-sequence dimension chase (mod 2)")
    common(p)
    p.set_defaults(func=_cmd_chase)

    p = sub.add_parser("ss", help="Borel spectral sequence differential patterns")
    common(p)
    p.add_argument("--coeff", choices=("z2", "q"), default="z2")
    p.set_defaults(func=_cmd_ss)

    p = sub.add_parser("index", help="index / co-index / cohomology index")
    p.add_argument("--space", choices=("sphere", "product", "presentation-file"), required=True)
    p.add_argument("--d", type=int, choices=(1, 3), default=3)
    p.add_argument("--dim", type=int, help="total dimension of the standard sphere")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--file", help="JSON presentation file")
    p.add_argument("--generator", default="u", help="characteristic class generator name")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("classify", help="orbit-space ring classification")
    common(p)
    p.add_argument("--coeff", choices=("z2", "q"), default="z2")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", help="replay the fixture corpus")
    p.add_argument("--grid-max", type=int, default=20)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and getattr(args, "m", None) is not None:
        if not 1 <= args.n <= args.m:
            parser.exit(2, "error: need 1 <= n <= m\n")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"error: {exc}\n")
    except (BadDimension, UnsupportedCombination, ValueError, OSError) as exc:
        parser.exit(2, f"error: {exc}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
