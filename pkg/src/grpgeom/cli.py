"""Command-line front end.

Exit codes: 0 completed, 1 input error, 2 internal consistency violation,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .gcoeff import GTarget, corollary2_check, corollary3_check
from .geometry import (AlgebraicSet, EquationSystem, GeometryError, SystemFormatError, closure,
                       parse_equation, parse_system, solve)
from .groups import FiniteGroup, GroupError, build_group, parse_table
from .radical import (DEFAULT_BUDGET, Verdict, Witness, check_verdict, corollary1_check, decompose,
                      endo_invariance_sampled, full_invariance_exact, theorem2_report)
from .scan import scan_catalog
from .words import WordContext, WordError

SCHEMA = "grpgeom.report/1"
EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT, EXIT_BUDGET = 0, 1, 2, 3
COMMANDS = ("solve", "closure", "analyze", "decompose", "identities", "gcheck", "scan")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1), not consistency violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="grpgeom", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", action="append", default=[],
                   help="builder descriptor, e.g. symmetric(3); repeatable for scan")
    p.add_argument("--table", help="explicit Cayley table file")
    p.add_argument("--vars", type=int, help="number of variables n")
    p.add_argument("--eq", action="append", default=[], help="equation 'w' or 'u = v'; repeatable")
    p.add_argument("--system", help="system file")
    p.add_argument("--coefficients", action="store_true", help="allow constants g<idx>")
    p.add_argument("--target-power", type=int, default=1, help="G-group H = G^k for gcheck")
    p.add_argument("--maxlen", type=int, default=None, help="word length bound for sweeps")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200, help="random subsets per group in scan")
    p.add_argument("--point", action="append", default=[],
                   help="closure of raw points instead of a system, e.g. --point 1,0")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    return p


def _load_group(args) -> FiniteGroup:
    if args.table:
        try:
            return parse_table(Path(args.table).read_text())
        except OSError as exc:
            raise InputError(f"{args.table}: {exc.strerror}") from None
        except GroupError as exc:
            raise InputError(f"{args.table}: {exc}") from None
    if len(args.group) != 1:
        raise InputError("give exactly one --group (or --table)")
    return build_group(args.group[0])


def _load_system(args, G: FiniteGroup) -> EquationSystem:
    constants = G if args.coefficients else None
    if args.system:
        try:
            text = Path(args.system).read_text()
        except OSError as exc:
            raise InputError(f"{args.system}: {exc.strerror}") from None
        try:
            S = parse_system(text, constants=G)
        except (SystemFormatError, WordError) as exc:
            raise InputError(f"{args.system}: {exc}") from None
        if args.vars is not None and args.vars != S.ctx.nvars:
            raise InputError(f"{args.system}: declares {S.ctx.nvars} variables, --vars says {args.vars}")
        ctx = S.ctx
        eqs = list(S)
    else:
        if args.vars is None:
            raise InputError("--vars is required without --system")
        ctx = WordContext(args.vars, constants)
        eqs = []
    for i, text in enumerate(args.eq, start=1):
        try:
            eqs.append(parse_equation(text, ctx))
        except WordError as exc:
            raise InputError(f"--eq #{i} {text!r}: {exc}") from None
    return EquationSystem(ctx, eqs)


def _guard(G: FiniteGroup, n: int, budget: int) -> None:
    if G.order ** n > budget:
        raise _Budget(f"|G|^n = {G.order}^{n} exceeds budget {budget}")


class _Budget(Exception):
    pass


def _clean(obj):
    """JSON-ready copy: drop private keys, render verdicts and witnesses."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _set_report(E: AlgebraicSet) -> dict:
    return {"count": len(E), "tuples": [list(t) for t in E.tuples], "names": E.format_points()}


def cmd_solve(args) -> tuple[dict, int]:
    G = _load_group(args)
    S = _load_system(args, G)
    _guard(G, S.ctx.nvars, args.budget)
    V = solve(G, S)
    return {"group": G.label, "vars": S.ctx.nvars, "solutions": _set_report(V)}, EXIT_OK


def cmd_closure(args) -> tuple[dict, int]:
    G = _load_group(args)
    if args.point:
        if args.vars is None:
            raise InputError("--vars is required with --point")
        try:
            pts = [[int(v) for v in p.split(",")] for p in args.point]
        except ValueError:
            raise InputError("--point takes comma-separated element indices") from None
        if any(len(p) != args.vars for p in pts):
            raise InputError(f"every --point needs {args.vars} entries")
        ctx = WordContext(args.vars, G if args.coefficients else None)
        E = AlgebraicSet(G, args.vars, pts)
    else:
        S = _load_system(args, G)
        ctx = S.ctx
        _guard(G, ctx.nvars, args.budget)
        E = solve(G, S)
    _guard(G, ctx.nvars, args.budget)
    cl, closed = closure(G, E, ctx)
    return {"group": G.label, "vars": ctx.nvars, "input": _set_report(E),
            "closure": _set_report(cl), "is_algebraic": closed}, EXIT_OK


def _verdict_label(v: Verdict) -> str:
    return {"yes": "fully characteristic", "no": "not fully characteristic",
            "budget": "budget exceeded"}[v.outcome]


def _coefficient_free(args, S: EquationSystem) -> None:
    if S.ctx.coefficients:
        raise InputError(f"{args.command} works without coefficients; use gcheck")


def cmd_decompose(args) -> tuple[dict, int]:
    G = _load_group(args)
    S = _load_system(args, G)
    _coefficient_free(args, S)
    _guard(G, S.ctx.nvars, args.budget)
    V = solve(G, S)
    v = decompose(G, V, strict=False)
    ok = check_verdict(G, V, v)
    report = {"group": G.label, "vars": S.ctx.nvars, "points": len(V),
              "result": _verdict_label(v), "decompose": v.as_dict(G), "certified": ok}
    return report, EXIT_OK if ok else EXIT_INCONSISTENT


def cmd_analyze(args) -> tuple[dict, int]:
    G = _load_group(args)
    S = _load_system(args, G)
    _coefficient_free(args, S)
    _guard(G, S.ctx.nvars, args.budget)
    maxlen = 2 if args.maxlen is None else args.maxlen
    t0 = time.perf_counter()
    V = solve(G, S)
    dec = decompose(G, V, strict=False)
    exact = full_invariance_exact(G, V, budget=args.budget)
    sampled = endo_invariance_sampled(G, V, maxlen)
    t2 = theorem2_report(G, V)
    char = t2["_verdicts"][0]
    problems = []
    for name, v in (("decompose", dec), ("exact", exact), ("sampled", sampled), ("characteristic", char)):
        if not check_verdict(G, V, v):
            problems.append(f"{name} certificate does not verify")
    if exact.outcome != "budget" and exact.outcome != dec.outcome:
        problems.append("decompose and exact oracle disagree")
    if dec.yes and not sampled.yes:
        problems.append("decomposable set fails the sampled endomorphism check")
    if exact.yes and not char.yes:
        problems.append("fully invariant radical is not characteristic")
    if not t2["consistent"]:
        problems.append("characteristic radical under the commutator hypothesis is not fully characteristic")
    report = {
        "group": G.label, "vars": S.ctx.nvars, "points": len(V),
        "result": _verdict_label(dec),
        "decompose": dec.as_dict(G), "exact": exact.as_dict(G),
        "sampled": dict(sampled.as_dict(G), maxlen=maxlen),
        "characteristic": char.as_dict(G), "theorem2": t2,
        "consistent": not problems, "problems": problems,
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
    if problems:
        return report, EXIT_INCONSISTENT
    return report, EXIT_BUDGET if exact.outcome == "budget" else EXIT_OK


def cmd_identities(args) -> tuple[dict, int]:
    G = _load_group(args)
    S = _load_system(args, G)
    _coefficient_free(args, S)
    _guard(G, S.ctx.nvars, args.budget)
    maxlen = 4 if args.maxlen is None else args.maxlen
    rep = corollary1_check(G, S, maxlen)
    report = {"group": G.label, "vars": S.ctx.nvars, "maxlen": maxlen, **rep}
    return report, EXIT_INCONSISTENT if rep["discrepancies"] else EXIT_OK


def _render_witness(rep: dict, G: FiniteGroup) -> dict:
    w = rep.get("witness")
    if isinstance(w, Witness):
        rep["witness"] = w.as_dict(G)
    return rep


def cmd_gcheck(args) -> tuple[dict, int]:
    G = _load_group(args)
    if not args.coefficients and args.system:
        try:
            args.coefficients = "coefficients" in Path(args.system).read_text()
        except OSError as exc:
            raise InputError(f"{args.system}: {exc.strerror}") from None
    if not args.coefficients:
        raise InputError("gcheck needs --coefficients (or a coefficient system file)")
    S = _load_system(args, G)
    maxlen = 2 if args.maxlen is None else args.maxlen
    H = GTarget(G, args.target_power)
    report = {"group": G.label, "vars": S.ctx.nvars, "target_power": args.target_power}
    status = []
    if args.target_power == 1:
        _guard(G, S.ctx.nvars, args.budget)
        c2 = _render_witness(corollary2_check(G, S, args.budget), G)
        report["corollary2"] = c2
        status.append(c2["status"])
    c3 = _render_witness(corollary3_check(G, H, S, maxlen, args.budget), H.group)
    report["corollary3"] = c3
    status.append(c3["status"])
    if "violation" in status:
        return report, EXIT_INCONSISTENT
    if "budget" in status:
        return report, EXIT_BUDGET
    return report, EXIT_OK


def cmd_scan(args) -> tuple[dict, int]:
    if args.table:
        raise InputError("scan takes builder descriptors via --group")
    n = 1 if args.vars is None else args.vars
    for spec in args.group:
        build_group(spec)
    table = scan_catalog(args.group, n, samples=args.samples, seed=args.seed,
                         jobs=max(1, args.jobs), budget=args.budget)
    if table["flagged"]:
        return table, EXIT_INCONSISTENT
    return table, EXIT_BUDGET if table["truncated"] else EXIT_OK


HANDLERS = {
    "solve": cmd_solve, "closure": cmd_closure, "analyze": cmd_analyze, "decompose": cmd_decompose,
    "identities": cmd_identities, "gcheck": cmd_gcheck, "scan": cmd_scan,
}


def render_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(render_text(item, indent + 1))
                lines.append(f"{pad}  --")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        report, code = HANDLERS[args.command](args)
    except _Budget as exc:
        report, code = {"error": str(exc), "truncated": True}, EXIT_BUDGET
    except (InputError, GroupError, WordError, SystemFormatError, GeometryError) as exc:
        print(f"grpgeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = _clean({"schema": SCHEMA if args.command != "scan" else report.get("schema"),
                     "command": args.command, **report})
    if args.format == "structured":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        out.write(render_text(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
