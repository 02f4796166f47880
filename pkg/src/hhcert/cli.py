"""Command-line front end.

Subcommands:

* ``chain``      evaluate one inequality chain (classical | dm | t1)
* ``certify``    estimate the strong log-convexity modulus on an interval
* ``theorem2``   check the product-integral bound (corrected / printed / both)
* ``sweep``      run a randomized family sweep and aggregate verdicts
* ``integrate``  raw adaptive quadrature of an expression
* ``maxc``       largest modulus for which the strengthened chain holds

Exit codes: 0 all checks hold, 1 at least one inequality violation was
found (still a successful run), 2 usage/parse/domain errors (message on
stderr).  ``--json`` emits the canonical report (17-significant-digit
numbers, fixed key order); ``--csv`` emits one row per chain term or per
sweep case/kind.  Output is byte-identical across identical invocations.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import List, Optional

from . import __version__, chains, harness
from .certify import NotPositiveError, estimate_modulus
from .expr import DomainError, EvaluationError, ParseError, parse
from .quadrature import IntegrandError, integrate
from .report import dumps_canonical, format_float

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhcert",
        description="Certify strong log-convexity and verify Hermite-Hadamard-type chains.",
    )
    parser.add_argument("--version", action="version", version=f"hhcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_c=False, with_tol=True):
        p.add_argument("--f", required=True, metavar="EXPR", help="function of x, e.g. 'exp(x^2)'")
        p.add_argument("--a", required=True, type=float)
        p.add_argument("--b", required=True, type=float)
        if with_c:
            p.add_argument("--c", type=float, default=0.0, help="strong log-convexity modulus")
        if with_tol:
            p.add_argument("--tol", type=float, default=chains.DEFAULT_TOL)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="emit the canonical JSON report")
        fmt.add_argument("--csv", action="store_true", help="emit CSV rows")

    p_chain = sub.add_parser("chain", help="evaluate one inequality chain")
    add_common(p_chain, with_c=True)
    p_chain.add_argument("--which", required=True, choices=("classical", "dm", "t1"))

    p_certify = sub.add_parser("certify", help="estimate the modulus of strong log-convexity")
    add_common(p_certify, with_tol=False)
    p_certify.add_argument("--grid", type=int, default=64)
    p_certify.add_argument("--refine", type=int, default=3)

    p_t2 = sub.add_parser("theorem2", help="check the product-integral bound")
    add_common(p_t2, with_c=True)
    p_t2.add_argument("--form", choices=("corrected", "printed", "both"), default="corrected")

    p_sweep = sub.add_parser("sweep", help="randomized family sweep")
    p_sweep.add_argument("--families", required=True, help="comma-separated family names")
    p_sweep.add_argument("--cases", required=True, type=int)
    p_sweep.add_argument("--seed", required=True, type=int)
    p_sweep.add_argument("--tol", type=float, default=chains.DEFAULT_TOL)
    p_sweep.add_argument("--out", metavar="PATH", help="also write the JSON report to PATH")
    fmt = p_sweep.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")

    p_int = sub.add_parser("integrate", help="adaptive quadrature of an expression")
    add_common(p_int)

    p_maxc = sub.add_parser("maxc", help="largest feasible modulus for the strengthened chain")
    add_common(p_maxc, with_tol=False)

    return parser


# --------------------------------------------------------------------------
# Report builders (dicts in canonical key order)
# --------------------------------------------------------------------------

def _chain_violations(rep: chains.ChainReport):
    out = []
    for i, margin in enumerate(rep.margins):
        if margin < -rep.tol:
            out.append(
                {
                    "term_pair": [rep.terms[i][0], rep.terms[i + 1][0]],
                    "margin": margin,
                }
            )
    return out


def _chain_report_dict(args, rep: chains.ChainReport):
    return {
        "command": "chain",
        "version": __version__,
        "inputs": {
            "f": args.f,
            "a": args.a,
            "b": args.b,
            "c": rep.c,
            "tol": args.tol,
            "which": args.which,
        },
        "outputs": {
            "terms": [[name, value] for name, value in rep.terms],
            "margins": list(rep.margins),
            "holds": rep.holds,
            "min_margin": rep.min_margin,
            "margin_tol": rep.tol,
        },
        "violations": _chain_violations(rep),
    }


def _theorem2_report_dict(args, rep: chains.Theorem2Report, form: str):
    violations = []
    if not rep.holds_corrected:
        violations.append(
            {
                "term_pair": ["mean_product_integral", "rhs_corrected"],
                "margin": rep.margin_corrected,
            }
        )
    return {
        "command": "theorem2",
        "version": __version__,
        "inputs": {
            "f": args.f,
            "a": args.a,
            "b": args.b,
            "c": rep.c,
            "tol": args.tol,
            "form": form,
        },
        "outputs": {
            "lhs": rep.lhs,
            "rhs_corrected": rep.rhs_corrected,
            "rhs_as_printed": rep.rhs_as_printed,
            "holds_corrected": rep.holds_corrected,
            "holds_as_printed": rep.holds_as_printed,
            "printed_applicable": rep.printed_applicable,
            "bracket_value": rep.bracket_value,
            "k": rep.k,
            "margin_corrected": rep.margin_corrected,
            "margin_as_printed": rep.margin_as_printed,
            "margin_tol": rep.tol,
        },
        "violations": violations,
    }


def _sweep_report_dict(args, rep: harness.SweepReport):
    def entry(v: harness.SweepViolation):
        return {
            "case_index": v.case_index,
            "family": v.case.family,
            "f": v.case.function_text,
            "a": v.case.a,
            "b": v.case.b,
            "kind": v.kind,
            "min_margin": v.min_margin,
            "term_pair": list(v.witness),
        }

    return {
        "command": "sweep",
        "version": __version__,
        "inputs": {
            "families": list(rep.families),
            "cases": rep.cases_run,
            "seed": rep.seed,
            "tol": args.tol,
        },
        "outputs": {
            "cases_run": rep.cases_run,
            "holds": dict(rep.holds),
            "violated": dict(rep.violated),
            "not_applicable": dict(rep.not_applicable),
        },
        "violations": [entry(v) for v in rep.violations],
        "as_printed_failures": [entry(v) for v in rep.as_printed_failures],
    }


# --------------------------------------------------------------------------
# Emitters
# --------------------------------------------------------------------------

def _emit_json(doc) -> None:
    sys.stdout.write(dumps_canonical(doc) + "\n")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def _emit_chain_csv(rep: chains.ChainReport) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["term_index", "term_name", "value", "margin_to_next"])
    for i, (name, value) in enumerate(rep.terms):
        margin = rep.margins[i] if i < len(rep.margins) else None
        writer.writerow([i, name, _fmt(value), _fmt(margin)])


def _emit_chain_human(rep: chains.ChainReport) -> None:
    print(f"function : {rep.function_text}")
    print(f"interval : [{rep.a:g}, {rep.b:g}]   c = {rep.c:g}")
    width = max(len(name) for name, _ in rep.terms)
    for i, (name, value) in enumerate(rep.terms):
        margin = f"   margin {rep.margins[i]: .12g}" if i < len(rep.margins) else ""
        print(f"  {name:<{width}} = {value:.15g}{margin}")
    verdict = "holds" if rep.holds else "VIOLATED"
    print(f"chain {verdict}: min margin {rep.min_margin:.12g} (tol {rep.tol:.3g})")


def _interval_args(args):
    if not args.a < args.b:
        raise ValueError(f"need a < b, got a={args.a!r}, b={args.b!r}")


# --------------------------------------------------------------------------
# Subcommand drivers; each returns the exit code
# --------------------------------------------------------------------------

def _run_chain(args) -> int:
    _interval_args(args)
    f = parse(args.f)
    if args.which == "classical":
        rep = chains.classical_hh_terms(f, args.a, args.b, args.tol)
    elif args.which == "dm":
        rep = chains.dragomir_mond_chain(f, args.a, args.b, args.tol)
    else:
        rep = chains.theorem1_chain(f, args.a, args.b, args.c, args.tol)
    doc = _chain_report_dict(args, rep)
    if args.json:
        _emit_json(doc)
    elif args.csv:
        _emit_chain_csv(rep)
    else:
        _emit_chain_human(rep)
    return 0 if rep.holds else 1


def _run_certify(args) -> int:
    _interval_args(args)
    f = parse(args.f)
    cert = estimate_modulus(f, args.a, args.b, args.grid, args.refine)
    doc = {
        "command": "certify",
        "version": __version__,
        "inputs": {
            "f": args.f,
            "a": args.a,
            "b": args.b,
            "grid": args.grid,
            "refine": args.refine,
        },
        "outputs": {
            "c_star": cert.c_star,
            "witness": list(cert.witness),
            "grid_size": cert.grid_size,
            "refinement_rounds": cert.refinement_rounds,
            "status": cert.status.value,
        },
        "violations": [],
    }
    if args.json:
        _emit_json(doc)
    elif args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerow(["c_star", _fmt(cert.c_star)])
        writer.writerow(["witness_x", _fmt(cert.witness[0])])
        writer.writerow(["witness_y", _fmt(cert.witness[1])])
        writer.writerow(["witness_lam", _fmt(cert.witness[2])])
        writer.writerow(["grid_size", cert.grid_size])
        writer.writerow(["refinement_rounds", cert.refinement_rounds])
        writer.writerow(["status", cert.status.value])
    else:
        print(f"function : {args.f}")
        print(f"interval : [{args.a:g}, {args.b:g}]")
        print(f"c_star   : {cert.c_star:.15g}")
        x, y, lam = cert.witness
        print(f"witness  : x={x:.12g}  y={y:.12g}  lam={lam:.12g}")
        print(f"status   : {cert.status.value} (grid {cert.grid_size}, {cert.refinement_rounds} refinement rounds)")
    return 0


def _run_theorem2(args) -> int:
    _interval_args(args)
    f = parse(args.f)
    form = {"corrected": "corrected", "printed": "as_printed", "both": "both"}[args.form]
    rep = chains.theorem2_bound(f, args.a, args.b, args.c, args.tol, form=form)
    doc = _theorem2_report_dict(args, rep, form)
    if args.json:
        _emit_json(doc)
    elif args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in doc["outputs"].items():
            writer.writerow([key, _fmt(value)])
    else:
        print(f"function : {rep.function_text}")
        print(f"interval : [{rep.a:g}, {rep.b:g}]   c = {rep.c:g}")
        print(f"lhs  (mean product integral) = {rep.lhs:.15g}")
        print(f"rhs  (corrected)             = {rep.rhs_corrected:.15g}   margin {rep.margin_corrected:.12g}")
        if rep.rhs_as_printed is not None:
            print(f"rhs  (as printed)            = {rep.rhs_as_printed:.15g}   margin {rep.margin_as_printed:.12g}")
        elif form in ("as_printed", "both"):
            print("rhs  (as printed)            : not applicable (needs f(b)-f(a) > 0 and != 1)")
        verdict = "holds" if rep.holds_corrected else "VIOLATED"
        print(f"corrected bound {verdict} (tol {rep.tol:.3g})")
    return 0 if rep.holds_corrected else 1


def _run_sweep(args) -> int:
    families = tuple(name.strip() for name in args.families.split(",") if name.strip())
    results = harness.sweep_results(args.cases, families, seed=args.seed, tol=args.tol)
    rep = harness.aggregate_results(results, families, args.seed)
    doc = _sweep_report_dict(args, rep)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(dumps_canonical(doc) + "\n")
    if args.json:
        _emit_json(doc)
    elif args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(
            ["case_index", "family", "a", "b", "c", "chain_kind", "holds", "min_margin"]
        )
        for index, result in enumerate(results):
            for kind in harness.CHAIN_KINDS:
                outcome = result.outcomes[kind]
                holds = {"holds": "true", "violated": "false", "not_applicable": "na"}[outcome]
                writer.writerow(
                    [
                        index,
                        result.case.family,
                        format_float(result.case.a),
                        format_float(result.case.b),
                        _fmt(result.c),
                        kind,
                        holds,
                        _fmt(result.min_margins[kind]),
                    ]
                )
    else:
        print(f"sweep    : {rep.cases_run} cases, families {', '.join(rep.families)}, seed {rep.seed}")
        for kind in harness.CHAIN_KINDS:
            print(
                f"  {kind:<22} holds {rep.holds[kind]:>5}   violated {rep.violated[kind]:>3}"
                f"   not_applicable {rep.not_applicable[kind]:>3}"
            )
        for v in rep.violations:
            print(
                f"  VIOLATION case {v.case_index} [{v.case.family}] {v.case.function_text}"
                f" on [{v.case.a:g}, {v.case.b:g}]: {v.kind} margin {v.min_margin:.6g}"
                f" at {v.witness[0]} -> {v.witness[1]}"
            )
        if rep.as_printed_failures:
            print(
                f"  note: {len(rep.as_printed_failures)} as-printed product-bound failures"
                " (documented typeset discrepancy; not counted as violations)"
            )
    return 0 if not rep.violations else 1


def _run_integrate(args) -> int:
    _interval_args(args)
    f = parse(args.f)
    try:
        res = integrate(f.eval_array, args.a, args.b, args.tol)
    except IntegrandError as exc:
        f(exc.x)  # surface the precise domain error
        raise
    doc = {
        "command": "integrate",
        "version": __version__,
        "inputs": {"f": args.f, "a": args.a, "b": args.b, "tol": args.tol},
        "outputs": {
            "value": res.value,
            "error_estimate": res.error_estimate,
            "evaluations": res.evaluations,
            "converged": res.converged,
        },
        "violations": [],
    }
    if args.json:
        _emit_json(doc)
    elif args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in doc["outputs"].items():
            writer.writerow([key, _fmt(value)])
    else:
        print(f"integral of {args.f} over [{args.a:g}, {args.b:g}]")
        print(f"value          = {res.value:.15g}")
        print(f"error_estimate = {res.error_estimate:.3g}")
        print(f"evaluations    = {res.evaluations}")
        print(f"converged      = {res.converged}")
    return 0


def _run_maxc(args) -> int:
    _interval_args(args)
    f = parse(args.f)
    value = chains.max_feasible_c(f, args.a, args.b)
    doc = {
        "command": "maxc",
        "version": __version__,
        "inputs": {"f": args.f, "a": args.a, "b": args.b},
        "outputs": {"max_c": value},
        "violations": [],
    }
    if args.json:
        _emit_json(doc)
    elif args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerow(["max_c", _fmt(value)])
    else:
        print(f"max feasible c for {args.f} on [{args.a:g}, {args.b:g}]: {value:.15g}")
    return 0


_DRIVERS = {
    "chain": _run_chain,
    "certify": _run_certify,
    "theorem2": _run_theorem2,
    "sweep": _run_sweep,
    "integrate": _run_integrate,
    "maxc": _run_maxc,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    try:
        return _DRIVERS[args.command](args)
    except (
        ParseError,
        DomainError,
        EvaluationError,
        NotPositiveError,
        chains.NotLogConvexError,
        IntegrandError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
