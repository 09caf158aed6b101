"""Command line front end: ``bkernel {kernelize,verify-equivalence,solve-exact}``.

Exit codes: 0 success, 1 counterexample found, 2 bad arguments or invalid
local solution, 3 unparsable input, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import bkg
from .dtmwc import DtmwcInstance, kernelize_dtmwc
from .errors import BudgetExceeded, ParameterError, ParseError, PreconditionError, ValidationError
from .oct import OctInstance, kernelize_oct
from .oracle.equivalence import PartnerFamily, check_gluing_equivalence
from .oracle.exact import solve_exact
from .smwc import SmwcInstance, kernelize_smwc
from .vc_oct import VcInstance, kernelize_vc_oct

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INVALID, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3, 4
PROBLEM_CHOICES = ("smwc", "dtmwc", "oct", "vc-oct")
AUTO_SOLUTION_BUDGET = 20


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_bkg(path: str):
    try:
        return bkg.read(path)
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from exc
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc.strerror}") from exc


def read_solution(path: str) -> frozenset[int]:
    """Whitespace-separated vertex IDs; ``#`` starts a comment."""
    ids = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        for tok in line.split("#", 1)[0].split():
            try:
                ids.append(int(tok))
            except ValueError as exc:
                raise _Exit(EXIT_PARSE, f"{path}:{lineno}: bad vertex id {tok!r}") from exc
    return frozenset(ids)


def _auto_solution(problem: str, abg) -> frozenset[int]:
    n = len(abg.graph.vertices)
    if n > AUTO_SOLUTION_BUDGET:
        raise _Exit(EXIT_BUDGET, f"--auto-solution refuses {n} vertices (limit {AUTO_SOLUTION_BUDGET}); pass --solution")
    if problem in ("oct", "vc-oct"):
        sol = solve_exact("oct", abg.graph)
    elif problem == "dtmwc":
        sol = solve_exact("dtmwc", abg)
    else:
        sol = solve_exact("smwc", abg, s=max(1, len(abg.terminals)))
    return frozenset(sol.witness)


def _stem(path: str) -> Path:
    p = Path(path)
    return p.with_name(p.name[: -len(".bkg")] if p.name.endswith(".bkg") else p.name)


def cmd_kernelize(args) -> int:
    if args.problem == "smwc" and args.s is None:
        raise _Exit(EXIT_INVALID, "smwc needs --s")
    if args.solution is None and not args.auto_solution:
        raise _Exit(EXIT_INVALID, "pass --solution FILE or --auto-solution")
    abg = _read_bkg(args.input)
    if args.problem in ("smwc", "dtmwc") and abg.arity == 0:
        abg = abg.replace(annotations=(("terminals", frozenset()),))
    sol = read_solution(args.solution) if args.solution else _auto_solution(args.problem, abg)
    try:
        if args.problem == "smwc":
            res = kernelize_smwc(SmwcInstance(abg, args.s, sol), seed=args.seed, cover_mode=args.cover_mode)
        elif args.problem == "dtmwc":
            res = kernelize_dtmwc(DtmwcInstance(abg, sol), seed=args.seed)
        elif args.problem == "oct":
            res = kernelize_oct(OctInstance(abg, sol), seed=args.seed, cover_mode=args.cover_mode)
        else:
            res = kernelize_vc_oct(VcInstance(abg, sol), seed=args.seed, cover_mode=args.cover_mode)
    except ValidationError as exc:
        raise _Exit(EXIT_INVALID, f"invalid local solution: {exc}") from exc
    stem = _stem(args.input)
    out = Path(args.out) if args.out else stem.with_name(stem.name + ".kernel.bkg")
    rep = Path(args.report) if args.report else stem.with_name(stem.name + ".report.json")
    bkg.write(res.reduced, out)
    rep.write_text(res.report_json())
    print(f"kernel: {len(abg.graph.vertices)} -> {len(res.reduced.graph.vertices)} vertices, delta {res.delta}; wrote {out} and {rep}")
    return EXIT_OK


def _problem_for_oracle(p: str) -> str:
    return "vc" if p == "vc-oct" else p


def cmd_verify(args) -> int:
    problem = _problem_for_oracle(args.problem)
    if problem == "smwc" and args.s is None:
        raise _Exit(EXIT_INVALID, "smwc needs --s")
    before, after = _read_bkg(args.before), _read_bkg(args.after)
    if args.samples is not None:
        fam = PartnerFamily(before.boundary, args.glue_extra, args.policy, "sampled", args.samples, args.seed)
    else:
        fam = PartnerFamily(before.boundary, args.glue_extra, args.policy, "exhaustive")
    try:
        rep = check_gluing_equivalence(problem, before, after, args.delta, fam, s=args.s)
    except PreconditionError as exc:
        raise _Exit(EXIT_INVALID, str(exc)) from exc
    body = rep.as_dict()
    body.update(schema=1, problem=args.problem, delta=args.delta, mode=fam.mode, glue_extra=args.glue_extra, policy=fam.policy_for(problem))
    text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    print(f"{'equivalent' if rep.passed else 'counterexample found'} after {rep.checked} partner(s) [{rep.engine}]")
    if not rep.passed:
        sys.stdout.write(rep.counterexample["partner_bkg"])
        print(f"# OPT(before+H) = {rep.counterexample['opt_before']}, OPT(after+H) = {rep.counterexample['opt_after']}")
    return EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE


def cmd_solve(args) -> int:
    problem = _problem_for_oracle(args.problem)
    if problem == "smwc" and args.s is None:
        raise _Exit(EXIT_INVALID, "smwc needs --s")
    abg = _read_bkg(args.input)
    sol = solve_exact(problem, abg, s=args.s)
    value = "inf" if sol.value == math.inf else int(sol.value)
    print(json.dumps({"problem": args.problem, "value": value, "witness": sorted(sol.witness)}, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bkernel", description="Boundaried kernelization toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernelize", help="reduce a boundaried graph")
    k.add_argument("--problem", required=True, choices=PROBLEM_CHOICES)
    k.add_argument("--input", required=True)
    k.add_argument("--s", type=int)
    sol = k.add_mutually_exclusive_group()
    sol.add_argument("--solution", help="file with the local solution's vertex IDs")
    sol.add_argument("--auto-solution", action="store_true", help="compute a local solution exactly (small inputs only)")
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--out")
    k.add_argument("--report")
    k.add_argument("--cover-mode", choices=("oracle", "matroid"), default="oracle")
    k.set_defaults(func=cmd_kernelize)

    v = sub.add_parser("verify-equivalence", help="check OPT(before+H) = OPT(after+H) + delta over partners H")
    v.add_argument("--problem", required=True, choices=PROBLEM_CHOICES)
    v.add_argument("--before", required=True)
    v.add_argument("--after", required=True)
    v.add_argument("--delta", type=int, default=0)
    v.add_argument("--s", type=int)
    v.add_argument("--glue-extra", type=int, default=3)
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="all partners (default)")
    mode.add_argument("--samples", type=int, help="random partners instead of all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--policy", choices=("default", "none", "interior", "any"), default="default")
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve-exact", help="exact optimum of a small instance")
    s.add_argument("--problem", required=True, choices=PROBLEM_CHOICES)
    s.add_argument("--input", required=True)
    s.add_argument("--s", type=int)
    s.set_defaults(func=cmd_solve)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"bkernel: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"bkernel: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParameterError, PreconditionError) as exc:
        print(f"bkernel: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
