"""Command-line front end: ``orbit-site build|cohomology|verify|picard``.

Exit codes: 0 success, 1 usage or parse error, 2 guard exceeded or empty
category, 3 a check failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import report
from .abelian import format_invariants
from .battery import Case, battery_cases, parse_battery
from .cohomology import category_cohomology
from .errors import CheckFailure, EmptyCategory, GuardExceeded, OrbitSiteError
from .fincat import dumps, fincat_from_dict
from .orbit import orbit_category, orbit_from_dict, orbit_to_dict
from .picard import sylow_trivial_group
from .presheaves import AbPresheaf, presheaf_from_dict
from .resolution import ext_over_category, z_constant
from .verify import SUITES, run_suite

EXIT_USAGE, EXIT_GUARD, EXIT_CHECK = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_coefficients(text: str) -> list[int]:
    """'Z/2', 'Z/2 + Z/3', 'Z', 'Z/1', '0' -> invariant list for a constant presheaf."""
    out = []
    t = text.strip()
    if t in ("0", ""):
        return []
    for part in re.split(r"\s*(?:\+|x|,)\s*", t):
        m = re.fullmatch(r"Z(?:/(\d+))?", part.strip())
        if not m:
            raise UsageError(f"cannot parse coefficient group {text!r}")
        out.append(int(m.group(1)) if m.group(1) is not None else 0)
    return out


def _load_category(path: str):
    with open(path) as fh:
        d = json.load(fh)
    if "group" in d:
        return orbit_from_dict(d)
    return fincat_from_dict(d)


def _emit(rep: dict, out: str | None, as_json: bool):
    report.validate(rep)
    text = report.dumps(rep)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    if as_json:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------

def cmd_build(args) -> int:
    C = orbit_category(args.group, args.p, args.variant)
    text = dumps(orbit_to_dict(C))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(f"{C.nobj} objects, {C.nmor} morphisms")
    return 0


def cmd_cohomology(args) -> int:
    if args.cat:
        C = _load_category(args.cat)
        inputs = {"cat": args.cat}
    elif args.group:
        C = orbit_category(args.group, args.p, args.variant)
        inputs = {"group": args.group, "p": args.p, "variant": args.variant}
    else:
        raise UsageError("give --cat or --group")
    if args.coeff_file:
        with open(args.coeff_file) as fh:
            M = presheaf_from_dict(C, json.load(fh))
        inputs["coeff_file"] = args.coeff_file
    else:
        M = AbPresheaf.constant(C, parse_coefficients(args.coeff))
        inputs["coeff"] = args.coeff
    if args.degree < 0:
        raise UsageError("--degree must be nonnegative")
    engines = {}
    if args.engine in ("bar", "both"):
        engines["bar"] = category_cohomology(C, M, args.degree).invariants
    if args.engine in ("ext", "both"):
        # H^i(C, M) = Ext^i(Z, M) over the category algebra
        engines["ext"] = ext_over_category(z_constant(C), M, args.degree)[args.degree].invariants
    rep = report.cohomology_report(inputs, args.degree, engines, timestamp=not args.no_timestamp)
    for k, v in engines.items():
        print(f"H^{args.degree} [{k}] = {format_invariants(v)}")
    if len(engines) > 1:
        print(f"agree={'true' if rep['agree'] else 'false'}")
    _emit(rep, args.out, args.json)
    if not rep["agree"]:
        print(json.dumps({"witness": engines}), file=sys.stderr)
        return EXIT_CHECK
    return 0


def _cases(args) -> list[Case]:
    if args.battery:
        return parse_battery(args.battery)
    if args.group:
        if args.p is None or args.q is None:
            raise UsageError("--group needs --p and --q")
        return [Case(args.group, args.p, args.q)]
    return battery_cases()


def cmd_verify(args) -> int:
    cases = _cases(args)
    checks = run_suite(args.suite, cases, jobs=args.jobs)
    rep = report.verify_report(args.suite, checks, timestamp=not args.no_timestamp)
    for c in checks:
        if not args.quiet or c["status"] != "passed":
            print(f"{c['status'].upper():8s} {c['id']}  ({c['runtime_ms']:.0f} ms)")
    s = rep["summary"]
    print(f"{s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped of {s['total']}")
    _emit(rep, args.out, args.json)
    failed = [c for c in checks if c["status"] == "failed"]
    for c in failed:
        print(json.dumps({"id": c["id"], "witness": c["witness"]}, sort_keys=True), file=sys.stderr)
    return EXIT_CHECK if failed else 0


def cmd_picard(args) -> int:
    paths = tuple(p.strip() for p in args.paths.split(",") if p.strip())
    bad = set(paths) - {"bar", "cech_ext", "bruteforce"}
    if bad:
        raise UsageError(f"unknown paths {sorted(bad)}")
    r = sylow_trivial_group(args.group, args.p, args.q, paths)
    rep = report.picard_report(r, timestamp=not args.no_timestamp)
    print(f"group {r['group']}  p={r['p']}  q={r['q']}")
    for k, v in r["paths"].items():
        print(f"  {k:10s} {format_invariants(v)}")
    for n in r["notices"]:
        print(f"  note: {n}")
    print(f"  agree={'true' if r['agree'] else 'false'}  character image order={r['character_image_order']}")
    _emit(rep, args.out, args.json)
    if not r["agree"]:
        print(json.dumps({"witness": r["paths"]}), file=sys.stderr)
        return EXIT_CHECK
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orbit-site", description="Orbit-category sites, their cohomology and Picard groups.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common_out(sp):
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--json", action="store_true", help="print the JSON report to stdout")
        sp.add_argument("--no-timestamp", action="store_true", help="omit the timestamp (byte-identical reports)")

    b = sub.add_parser("build", help="build an orbit category and write its JSON codec")
    b.add_argument("--group", required=True)
    b.add_argument("--p", type=int)
    b.add_argument("--variant", default="all", choices=["all", "p-subgroups", "p-nontrivial", "p-coprime-index"])
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("cohomology", help="H^i of a category with coefficients")
    c.add_argument("--cat", help="category JSON file")
    c.add_argument("--group")
    c.add_argument("--p", type=int)
    c.add_argument("--variant", default="p-nontrivial")
    c.add_argument("--coeff", default="Z", help="constant coefficients such as 'Z/2' or 'Z/2 + Z/3'")
    c.add_argument("--coeff-file", help="presheaf JSON file")
    c.add_argument("--degree", type=int, default=1)
    c.add_argument("--engine", choices=["bar", "ext", "both"], default="bar")
    common_out(c)
    c.set_defaults(func=cmd_cohomology)

    v = sub.add_parser("verify", help="run a verification suite over the battery")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--group")
    v.add_argument("--p", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--battery", help="e.g. 'S3:3:3,4,5;A4:2:4'")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--quiet", action="store_true", help="only list checks that did not pass")
    common_out(v)
    v.set_defaults(func=cmd_verify)

    pc = sub.add_parser("picard", help="the Sylow-trivial group by several paths")
    pc.add_argument("--group", required=True)
    pc.add_argument("--p", type=int, required=True)
    pc.add_argument("--q", type=int, required=True)
    pc.add_argument("--paths", default="bar,cech_ext,bruteforce")
    common_out(pc)
    pc.set_defaults(func=cmd_picard)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GuardExceeded, EmptyCategory) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_GUARD
    except CheckFailure as e:
        print(f"CheckFailure: {e}", file=sys.stderr)
        if e.witness is not None:
            print(json.dumps({"witness": e.witness}, default=str), file=sys.stderr)
        return EXIT_CHECK
    except (UsageError, OrbitSiteError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
