"""Command-line entry point: ``twovalued <command> ...``.

Exit codes: 0 all checks hold, 1 a property is violated, 2 bad input,
3 the instance exceeds an enumeration bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report as rp
from .committees import enumerate_committees, format_committee
from .decompose import decompose
from .dominance import is_compatible
from .errors import DomainError, NotCSPError, ParseError, ResourceBoundError
from .orders import Universe, enumerate_weak_orders, format_order
from .profiles import get_domain, format_profile_inline, parse_profile, parse_profile_inline
from .psi import evaluate_psi, example_dia_spec, format_psi, parse_psi, psi_table
from .report import RunReport, serialize_witness
from .scf import (
    ScfTable,
    anti_rule,
    example_dia,
    format_scf,
    is_csp,
    is_essentially_based_and_monotonic,
    parse_scf,
)
from .verify import two_valued_population, verify_theorems

ENUMERATE_CSP_PROFILES = 13


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit(args, report: RunReport) -> int:
    if args.machine:
        print(report.to_json(args.timing))
    else:
        print(report.to_text(args.timing))
    return report.exit_code


def _pair(f: ScfTable, labels: list[str] | None) -> tuple[int, int]:
    if labels:
        try:
            a, b = (f.universe.index(x) for x in labels)
        except DomainError as exc:
            raise ParseError(f"--pair: {exc}") from None
        return a, b
    rng = sorted(f.range())
    if len(rng) != 2:
        raise DomainError(f"range has {len(rng)} alternatives; give --pair for a two-valued check")
    return rng[0], rng[1]


def _instance(f: ScfTable, pair=None) -> dict:
    out = {"voters": f.domain.n_voters, "alternatives": f.domain.n_alternatives}
    if pair is not None:
        out["pair"] = " ".join(f.universe.label(x) for x in pair)
    return out


# --- commands ------------------------------------------------------------


def cmd_enumerate(args) -> int:
    report = RunReport(f"enumerate {args.what}")
    lines: list[str] = []
    if args.what == "orders":
        u = Universe.of_size(args.alternatives)
        orders = enumerate_weak_orders(args.alternatives, strict=args.strict)
        lines = [f"{i}: {format_order(w, u)}" for i, w in enumerate(orders)]
        report.instance = {"alternatives": args.alternatives, "domain": "strict" if args.strict else "weak"}
        report.counts["orders"] = len(orders)
    elif args.what == "profiles":
        u = Universe.of_size(args.alternatives)
        dom = get_domain(args.alternatives, args.voters, args.strict)
        lines = [f"P#{i}: {format_profile_inline(P, u)}" for i, P in enumerate(dom)]
        report.instance = {"voters": args.voters, "alternatives": args.alternatives, "domain": "strict" if args.strict else "weak"}
        report.counts["profiles"] = dom.size
    elif args.what == "committees":
        committees = enumerate_committees(range(args.voters))
        lines = [format_committee(F) for F in committees]
        report.instance = {"voters": args.voters}
        report.counts["committees"] = len(committees)
    else:
        dom = get_domain(args.alternatives, args.voters)
        if dom.size > ENUMERATE_CSP_PROFILES:
            raise ResourceBoundError(
                f"enumerate csp scans 2**{dom.size} tables; the bound is {ENUMERATE_CSP_PROFILES} profiles"
            )
        tables, _ = two_valued_population(args.voters, args.alternatives, 0, 0)
        u = Universe.of_size(args.alternatives)
        found = [f for f in tables if is_csp(f)]
        lines = [" ".join(u.label(int(x)) for x in f.values) for f in found]
        report.instance = {"voters": args.voters, "alternatives": args.alternatives, "pair": "a b"}
        report.counts["profiles"] = dom.size
        report.counts["tables scanned"] = len(tables)
        report.counts["CSP found"] = len(found)
    if args.machine:
        data = report.to_dict(args.timing)
        data["items"] = lines
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(lines))
        print(f"# {', '.join(f'{k}: {v}' for k, v in report.counts.items())}")
    return rp.EXIT_OK


def cmd_check_csp(args) -> int:
    f = parse_scf(_read(args.file))
    res = is_csp(f)
    report = RunReport("check-csp", _instance(f), {"profiles": f.domain.size})
    report.add("coalitionally strategy-proof", res.holds)
    report.witnesses = serialize_witness(res.witness, f.universe)
    return _emit(args, report)


def cmd_check_compat(args) -> int:
    f = parse_scf(_read(args.file))
    a, b = _pair(f, args.pair)
    res = is_compatible(f, a, b)
    report = RunReport("check-compat", _instance(f, (a, b)), {"profiles": f.domain.size})
    report.add("compatible with dominance", res.holds)
    report.witnesses = serialize_witness(res.witness, f.universe)
    return _emit(args, report)


def cmd_check_bbm(args) -> int:
    f = parse_scf(_read(args.file))
    a, b = _pair(f, args.pair)
    res = is_essentially_based_and_monotonic(f, a, b)
    report = RunReport("check-bbm", _instance(f, (a, b)), {"profiles": f.domain.size})
    report.add("(1') and (2')", res.holds)
    report.witnesses = serialize_witness(res.witness, f.universe)
    return _emit(args, report)


def _decompose_args(args):
    f = parse_scf(_read(args.file))
    a, b = _pair(f, args.pair)
    pi = None
    if args.pi:
        pi = parse_profile(_read(args.pi), f.universe, f.domain.n_voters)
    return f, a, b, pi


def _not_csp(args, command: str, f: ScfTable, exc: NotCSPError) -> int:
    report = RunReport(command, _instance(f))
    report.add("input is CSP", False, str(exc))
    if isinstance(exc.witness, dict):
        report.witnesses = serialize_witness(exc.witness, f.universe)
    return _emit(args, report)


def cmd_decompose(args) -> int:
    f, a, b, pi = _decompose_args(args)
    try:
        spec = decompose(f, a, b, pi)
    except NotCSPError as exc:
        return _not_csp(args, "decompose", f, exc)
    _write(args.output, format_psi(spec))
    if args.output not in (None, "-"):
        report = RunReport("decompose", _instance(f, (a, b)), {"profiles": f.domain.size, "entries": spec.beta})
        report.instance["default"] = f.universe.label(spec.default)
        return _emit(args, report)
    return rp.EXIT_OK


def cmd_roundtrip(args) -> int:
    f, a, b, pi = _decompose_args(args)
    try:
        spec = decompose(f, a, b, pi)
    except NotCSPError as exc:
        return _not_csp(args, "roundtrip", f, exc)
    rebuilt = psi_table(spec)
    mismatches = int((rebuilt.values != f.values).sum())
    report = RunReport(
        "roundtrip",
        _instance(f, (a, b)),
        {"profiles": f.domain.size, "entries": spec.beta, "mismatches": mismatches},
    )
    report.instance["default"] = f.universe.label(spec.default)
    report.add("psi representation reproduces the table", mismatches == 0)
    return _emit(args, report)


def cmd_eval_psi(args) -> int:
    spec = parse_psi(_read(args.spec))
    source = args.profile
    if Path(source).is_file():
        P = parse_profile(_read(source), spec.universe, spec.n_voters)
    else:
        P = parse_profile_inline(source, spec.universe)
    if P.n_voters != spec.n_voters or P.n_alternatives != len(spec.universe):
        raise DomainError("the profile does not match the psi spec's society and universe")
    print(spec.universe.label(evaluate_psi(P, spec)))
    return rp.EXIT_OK


def cmd_psi_to_table(args) -> int:
    spec = parse_psi(_read(args.spec))
    _write(args.output, format_scf(psi_table(spec)))
    return rp.EXIT_OK


def cmd_verify(args) -> int:
    report = verify_theorems(args.voters, args.alternatives, args.seed, args.samples, args.psi_specs)
    return _emit(args, report)


def cmd_fixture(args) -> int:
    if args.name == "dia":
        text = format_scf(example_dia())
    elif args.name == "anti":
        text = format_scf(anti_rule())
    else:
        text = format_psi(example_dia_spec())
    _write(args.output, text)
    return rp.EXIT_OK


# --- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="print a JSON report")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    parser = argparse.ArgumentParser(prog="twovalued", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list orders, profiles, committees or CSP tables")
    p.add_argument("what", choices=("orders", "profiles", "committees", "csp"))
    p.add_argument("--voters", type=int, default=2)
    p.add_argument("--alternatives", type=int, default=2)
    p.add_argument("--strict", action="store_true", help="strict orders only")
    p.set_defaults(run=cmd_enumerate)

    for name, fn, text in (
        ("check-csp", cmd_check_csp, "search for a manipulating coalition"),
        ("check-compat", cmd_check_compat, "test compatibility with dominance"),
        ("check-bbm", cmd_check_bbm, "test conditions (1') and (2')"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        if name != "check-csp":
            p.add_argument("--pair", nargs=2, metavar=("A", "B"))
        p.set_defaults(run=fn)

    for name, fn in (("decompose", cmd_decompose), ("roundtrip", cmd_roundtrip)):
        p = sub.add_parser(name, parents=[common], help=f"{name} a two-valued CSP table")
        p.add_argument("file")
        p.add_argument("--pi", help="profile file with the unanimous-indifference profile to start from")
        p.add_argument("--pair", nargs=2, metavar=("A", "B"))
        if name == "decompose":
            p.add_argument("-o", "--output", help="spec file to write (default stdout)")
        p.set_defaults(run=fn)

    p = sub.add_parser("eval-psi", parents=[common], help="evaluate a psi spec on one profile")
    p.add_argument("spec")
    p.add_argument("profile", help="profile file or inline '(a>b, a~b)'")
    p.set_defaults(run=cmd_eval_psi)

    p = sub.add_parser("psi-to-table", parents=[common], help="tabulate a psi spec")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_psi_to_table)

    p = sub.add_parser("verify-theorems", parents=[common], help="run every check on one instance")
    p.add_argument("--voters", type=int, required=True)
    p.add_argument("--alternatives", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200, help="tables drawn in sampled mode")
    p.add_argument("--psi-specs", type=int, default=200, help="random psi specs checked for CSP")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("fixture", parents=[common], help="write a shipped example")
    p.add_argument("name", choices=("dia", "anti", "dia-spec"))
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_fixture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ResourceBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return rp.EXIT_RESOURCE
    except (ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return rp.EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
