"""Command-line front end.

Eight verbs drive the pipelines: compile, verify-section, verify-integral,
search, independence, fiber-degree, report, simulate.  Every verb reads a
problem file, prints either a text or a JSON report, and exits 0 on a
positive answer, 1 on a checked-but-negative answer, 2 on usage or parse
errors.  Output is deterministic: no timestamps, no randomness.
"""

import argparse
import json
import sys as _sys

from .algebra import _integer_normalize
from .dvariety import build_system, verify_section
from .errors import (
    DuplicateVariable,
    DvarkitError,
    ExpressionSyntaxError,
    UnknownVariable,
)
from .integrals import (
    generic_fiber_degree,
    independence_test,
    integrability_report,
    level_set_dimension,
    search_polynomial_integrals,
    search_rational_integrals,
    verify_first_integral,
)
from .numeric import check_constancy, integrate_flow
from .parsing import (
    parse_expression,
    parse_polynomial,
    parse_problem_file,
    rewrite_derivative_powers,
)

SCHEMA_VERSION = 1

# errors in the input text itself exit 2; everything the toolkit checked
# and rejected exits 1
_USAGE_ERRORS = (ExpressionSyntaxError, UnknownVariable, DuplicateVariable)


def _build_parser():
    top = argparse.ArgumentParser(
        prog="dvarkit",
        description="compile algebraic ODEs to D-varieties, hunt rational "
        "first integrals, and classify degree-bounded integrability",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    def verb(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("input", help="problem file (.dv)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    verb("compile", "build the D-variety and print its presentation")
    verb("verify-section", "check the shifted-tangent condition on every generator")

    p = verb("verify-integral", "check that expressions are first integrals")
    p.add_argument("--h", action="append", required=True, metavar="EXPR",
                   help="candidate integral (repeatable)")

    p = verb("search", "linear-algebra search for first integrals")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--denominator", metavar="EXPR",
                   help="fix the denominator; omit for polynomial search")

    p = verb("independence", "Jacobian-criterion independence of integrals")
    p.add_argument("--h", action="append", required=True, metavar="EXPR")

    p = verb("fiber-degree", "points of V above a generic value of the integrals")
    p.add_argument("--h", action="append", required=True, metavar="EXPR")
    p.add_argument("--level-set-dimension", action="store_true",
                   help="also report the generic level-set dimension")

    p = verb("report", "full degree-bounded integrability verdict")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--denominator", action="append", default=[], metavar="EXPR")

    p = verb("simulate", "fixed-step numeric trajectory")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--init", required=True, metavar="V1,V2,...",
                   help="initial state, aux coordinates first then fiber")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV")
    p.add_argument("--check-integrals", action="store_true",
                   help="check constancy of the file's declared integrals")
    p.add_argument("--tol", type=float, default=1e-6)
    return top


def _load(path):
    try:
        with open(path) as f:
            text = f.read()
    except OSError as exc:
        raise ExpressionSyntaxError(f"cannot read {path}: {exc}")
    spec = parse_problem_file(text)
    return spec, build_system(spec)


def _parse_h(texts, sys_):
    return [parse_expression(rewrite_derivative_powers(s), sys_.registry) for s in texts]


def _system_doc(sys_):
    return {
        "variables": list(sys_.registry.names),
        "roles": list(sys_.registry.roles),
        "ideal": [str(g) for g in sys_.ideal.generators],
        "section": {n: str(s) for n, s in sorted(sys_.section.items())},
        "excluded_locus": [str(p) for p in sys_.excluded_locus],
        "dimension_of_v": sys_.dimension_of_v(),
    }


def _independence_doc(rep):
    return {
        "rank_all": rep.rank_all,
        "rank_v": rep.rank_v,
        "independent": rep.independent,
        "w_independent": rep.w_independent,
    }


def _emit(doc, fmt, lines):
    """JSON prints the document; text prints the prepared lines."""
    if fmt == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# verb bodies: each returns (exit status, json doc, text lines)
# ---------------------------------------------------------------------------


def _cmd_compile(args):
    _, sys_ = _load(args.input)
    doc = _system_doc(sys_)
    lines = ["variables: " + ", ".join(doc["variables"])]
    lines += ["ideal generator: " + g for g in doc["ideal"]] or ["ideal: (0)"]
    lines += [f"section {n}' = {s}" for n, s in doc["section"].items()]
    if doc["excluded_locus"]:
        lines.append("excluded locus: " + "; ".join(doc["excluded_locus"]))
    lines.append(f"dimension of V: {doc['dimension_of_v']}")
    return 0, doc, lines


def _cmd_verify_section(args):
    _, sys_ = _load(args.input)
    rep = verify_section(sys_)
    doc = {
        "passed": rep.passed,
        "residuals": [{"generator": str(g), "residual": str(r)} for g, r in rep.residuals],
    }
    lines = [
        f"generator {e['generator']}: residual {e['residual']}" for e in doc["residuals"]
    ]
    lines.append("section verified" if rep.passed else "section FAILED")
    return (0 if rep.passed else 1), doc, lines


def _cmd_verify_integral(args):
    _, sys_ = _load(args.input)
    results = [verify_first_integral(h, sys_) for h in _parse_h(args.h, sys_)]
    doc = {
        "integrals": [
            {
                "h": str(fi.h),
                "verified": fi.verified,
                "residual": "0" if fi.verified else str(fi.residual),
                "excluded_locus": [str(p) for p in fi.excluded_locus],
            }
            for fi in results
        ],
        "all_verified": all(fi.verified for fi in results),
    }
    lines = [
        f"h = {e['h']}: " + ("verified, residual 0" if e["verified"]
                             else f"NOT an integral, residual {e['residual']}")
        for e in doc["integrals"]
    ]
    return (0 if doc["all_verified"] else 1), doc, lines


def _cmd_search(args):
    if args.degree < 0:
        raise ExpressionSyntaxError("--degree must be nonnegative")
    _, sys_ = _load(args.input)
    if args.denominator is None:
        found = search_polynomial_integrals(sys_, args.degree)
    else:
        Q = parse_polynomial(rewrite_derivative_powers(args.denominator), sys_.registry)
        found = search_rational_integrals(sys_, Q, args.degree)
    doc = {
        "degree": args.degree,
        "denominator": args.denominator,
        "integrals": [str(fi.h) for fi in found],
    }
    lines = [f"integral: {s}" for s in doc["integrals"]] or [
        f"no first integrals at degree {args.degree}"
    ]
    return (0 if found else 1), doc, lines


def _cmd_independence(args):
    _, sys_ = _load(args.input)
    rep = independence_test(_parse_h(args.h, sys_), sys_)
    doc = _independence_doc(rep)
    doc["h"] = list(args.h)
    lines = [
        f"rank over all directions: {rep.rank_all}",
        f"rank over V-directions:   {rep.rank_v}",
        f"independent: {rep.independent}",
        f"W-independent: {rep.w_independent}",
    ]
    return (0 if rep.independent else 1), doc, lines


def _cmd_fiber_degree(args):
    _, sys_ = _load(args.input)
    hs = [verify_first_integral(h, sys_) for h in _parse_h(args.h, sys_)]
    bad = [fi for fi in hs if not fi.verified]
    if bad:
        doc = {"error": f"{bad[0].h} is not a first integral"}
        return 1, doc, [doc["error"]]
    deg = generic_fiber_degree(hs, sys_)
    doc = {"h": [str(fi.h) for fi in hs], "fiber_degree": deg}
    lines = [f"generic fiber degree: {deg}"]
    if args.level_set_dimension:
        doc["level_set_dimension"] = level_set_dimension(hs, sys_)
        lines.append(f"level-set dimension: {doc['level_set_dimension']}")
    return 0, doc, lines


def _cmd_report(args):
    spec, sys_ = _load(args.input)
    dens = [
        parse_polynomial(rewrite_derivative_powers(s), sys_.registry)
        for s in args.denominator
    ]
    rep = integrability_report(
        sys_, args.degree, user_integrals=spec.candidate_integrals, denominators=dens
    )
    doc = {
        "degree_bound": rep.degree_bound,
        "n": rep.n,
        "integrals": [str(fi.h) for fi in rep.integrals],
        "independence": _independence_doc(rep.independence),
        "fiber_degree": rep.fiber_degree,
        "verdict": rep.verdict,
        "excluded_locus": sorted(
            {str(_integer_normalize(p)) for fi in rep.integrals for p in fi.excluded_locus}
            | {str(_integer_normalize(p)) for p in sys_.excluded_locus}
        ),
    }
    lines = [f"dimension of V: {rep.n}"]
    lines += [f"integral: {s}" for s in doc["integrals"]]
    lines.append(f"W-independent integrals found: {len(rep.integrals)}")
    if rep.fiber_degree is not None:
        lines.append(f"generic fiber degree: {rep.fiber_degree}")
    if doc["excluded_locus"]:
        lines.append("excluded locus: " + "; ".join(doc["excluded_locus"]))
    lines.append(f"verdict: {rep.verdict}")
    ok = rep.verdict in ("internal", "almost_internal")
    return (0 if ok else 1), doc, lines


def _cmd_simulate(args):
    spec, sys_ = _load(args.input)
    try:
        init = [float(x) for x in args.init.split(",") if x.strip()]
    except ValueError:
        raise ExpressionSyntaxError(f"--init {args.init!r} is not a comma list of numbers")
    traj = integrate_flow(sys_, (args.t0, init), args.t_end, args.step)
    tf, vf = traj.samples[-1]
    doc = {
        "t0": args.t0,
        "t_end": tf,
        "step": traj.step,
        "samples": len(traj),
        "state_names": traj.state_names,
        "final_state": [f"{x:.17g}" for x in vf],
    }
    lines = [
        "state order: " + ", ".join(traj.state_names),
        f"integrated {len(traj) - 1} steps of {traj.step:g} to t = {tf:g}",
        "final state: " + ", ".join(f"{x:.17g}" for x in vf),
    ]
    if args.csv:
        with open(args.csv, "w") as f:
            f.write(traj.to_csv())
        doc["csv"] = args.csv
        lines.append(f"wrote {args.csv}")
    status = 0
    if args.check_integrals:
        checks = []
        for h in spec.candidate_integrals:
            h = h.relabel(sys_.registry)
            value, drift, ok = check_constancy(h, traj, args.tol)
            checks.append({"h": str(h), "value": value, "max_drift": drift, "passed": ok})
            lines.append(
                f"h = {h}: value {value:.12g}, drift {drift:.3e}, "
                + ("ok" if ok else "DRIFTED")
            )
            if not ok:
                status = 1
        doc["constancy_checks"] = checks
        if not checks:
            lines.append("no declared integrals to check")
    return status, doc, lines


_COMMANDS = {
    "compile": _cmd_compile,
    "verify-section": _cmd_verify_section,
    "verify-integral": _cmd_verify_integral,
    "search": _cmd_search,
    "independence": _cmd_independence,
    "fiber-degree": _cmd_fiber_degree,
    "report": _cmd_report,
    "simulate": _cmd_simulate,
}


def execute_command(argv):
    """Run one verb; returns the exit status after printing the report."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        status, doc, lines = _COMMANDS[args.verb](args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except DvarkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 1
    doc = {"schema": SCHEMA_VERSION, "verb": args.verb, "status": status, **doc}
    _emit(doc, args.format, lines)
    return status


def main():
    raise SystemExit(execute_command(_sys.argv[1:]))


if __name__ == "__main__":
    main()
