"""Command-line driver.

Subcommands:
    verify <suite>   run a named verification suite
    bracket          structure constants and bracket cross-checks for a group
    vanest           integrate a form and check d2 f0 and L(f) = omega
    period           period of a form over the fundamental torus cycle
    catalog          list addressable groups, forms, cocycles, lattices
    eval             evaluate an s-expression program (optionally its tangent)

Exit status is nonzero iff any check fails; configuration errors exit
with status 2 before any computation.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .catalog import catalog_listing, get_group, get_omega
from .liegroup import (
    bracket_conjugation,
    bracket_delta,
    oracle_bracket,
    structure_constants,
)
from .program import format_program, parse_program, tangent
from .report import Report, residual_check
from .suites import SUITE_NAMES, run_suite
from .vanest import (
    check_d2,
    fundamental_cycle,
    period,
    square_rule,
    triangle_rule,
    vanest_cocycle,
)


def _emit(report: Report, args, extra: dict | None = None) -> int:
    if args.format == "json":
        payload = report.to_dict()
        if extra:
            payload.update(extra)
        text = json.dumps(payload, indent=2)
    else:
        text = report.to_text()
        if extra:
            text += "\n" + "\n".join(f"  {k}: {v}" for k, v in extra.items())
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed, degree=args.degree)
    return _emit(report, args)


def _cmd_bracket(args) -> int:
    G = get_group(args.group)
    rng = np.random.default_rng(args.seed)
    conj = G.conjugation()
    gap_dc, gap_oracle = 0.0, 0.0
    for _ in range(args.samples):
        v = rng.uniform(-1, 1, G.dim) * G.sample_radius
        w = rng.uniform(-1, 1, G.dim) * G.sample_radius
        bd = bracket_delta(G, v, w)
        bc = bracket_conjugation(G, v, w, conj=conj)
        gap_dc = max(gap_dc, float(np.max(np.abs(bd - bc))))
        if G.oracle is not None:
            ob = oracle_bracket(G, v, w)
            gap_oracle = max(gap_oracle, float(np.max(np.abs(bd - ob))))
    data = structure_constants(G)
    checks = [
        residual_check(f"bracket-{G.name}-delta-vs-conjugation",
                       "the two bracket constructions agree", gap_dc, 1e-10),
        residual_check(f"bracket-{G.name}-jacobi",
                       "Jacobi identity of the derived bracket",
                       data.jacobi_residual(), 1e-8),
    ]
    if G.oracle is not None:
        checks.append(residual_check(
            f"bracket-{G.name}-vs-matrix-oracle",
            "chart bracket equals the matrix commutator", gap_oracle, 1e-9))
    report = Report("bracket", args.seed, tuple(checks))
    return _emit(report, args,
                 {"structure_constants": data.structure.tolist()})


def _cmd_vanest(args) -> int:
    G = get_group(args.group)
    omega = get_omega(args.omega, G)
    rule = triangle_rule(args.degree)
    tol_d2 = args.tol if args.tol else (
        1e-12 if args.group.startswith(("rn:", "torus")) else 1e-8)
    gap_d2 = check_d2(G, omega, rule, np.inf)
    f = vanest_cocycle(G, omega, rule)
    from .cocycle import differentiate_cocycle
    gap_l = float(np.max(np.abs(differentiate_cocycle(f).tensor
                                - omega.tensor)))
    report = Report("vanest", args.seed, (
        residual_check("vanest-d2",
                       "mixed second derivative of f0 equals omega/2",
                       gap_d2, tol_d2),
        residual_check("vanest-differentiation",
                       "L of the integrated cocycle returns omega",
                       gap_l, args.tol if args.tol else 1e-7),
    ))
    return _emit(report, args)


def _cmd_period(args) -> int:
    G = get_group(args.group)
    omega = get_omega(args.omega, G)
    p = period(G, omega, fundamental_cycle(G.dim), square_rule(args.degree))
    report = Report("period", args.seed, ())
    return _emit(report, args, {"period": p.tolist()})


def _cmd_catalog(args) -> int:
    listing = catalog_listing()
    if args.format == "json":
        print(json.dumps(listing, indent=2))
    else:
        for kind, names in listing.items():
            print(f"{kind}: {', '.join(names)}")
    return 0


def _cmd_eval(args) -> int:
    p = parse_program(args.program)
    for _ in range(args.tangent):
        p = tangent(p)
    xs = [float(v) for v in args.inputs.split(",")] if args.inputs else []
    out = p.eval_array(xs)
    if args.format == "json":
        print(json.dumps({"program": args.program,
                          "tangent_order": args.tangent,
                          "inputs": xs, "outputs": out.tolist()}))
    else:
        print(" ".join(repr(float(v)) for v in out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tangentkit",
        description="verification suites for tangent-category calculus "
                    "on charted groups")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", default=None)
        p.add_argument("--degree", type=int, default=7)

    pv = sub.add_parser("verify", help="run a named suite")
    pv.add_argument("suite", choices=SUITE_NAMES)
    common(pv)
    pv.set_defaults(fn=_cmd_verify)

    pb = sub.add_parser("bracket", help="brackets of a catalog group")
    pb.add_argument("--group", required=True)
    pb.add_argument("--samples", type=int, default=100)
    common(pb)
    pb.set_defaults(fn=_cmd_bracket)

    pn = sub.add_parser("vanest", help="simplex integration checks")
    pn.add_argument("--group", required=True)
    pn.add_argument("--omega", required=True)
    pn.add_argument("--tol", type=float, default=None)
    common(pn)
    pn.set_defaults(fn=_cmd_vanest)

    pp = sub.add_parser("period", help="period over the fundamental cycle")
    pp.add_argument("--group", required=True)
    pp.add_argument("--omega", required=True)
    common(pp)
    pp.set_defaults(fn=_cmd_period)

    pc = sub.add_parser("catalog", help="list addressable names")
    pc.add_argument("--format", choices=("text", "json"), default="text")
    pc.set_defaults(fn=_cmd_catalog)

    pe = sub.add_parser("eval", help="evaluate an s-expression program")
    pe.add_argument("--program", required=True)
    pe.add_argument("--inputs", default="")
    pe.add_argument("--tangent", type=int, default=0,
                    help="apply the tangent functor this many times")
    pe.add_argument("--format", choices=("text", "json"), default="text")
    pe.set_defaults(fn=_cmd_eval)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
