"""Command-line front end.

Exit status: 0 on success, 1 when a machine check fails (or the jury audit
finds a discrepancy), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from constlab.beliefs import Belief, IIDParameter, iid, lexicographic, parse_rational
from constlab.errors import ConstlabError, ParameterError
from constlab.scf import SCF, NamedSCF, materialize, vector_from_string, vector_to_string


def parse_range(text: str) -> list[Fraction]:
    """``start:stop:step`` (stop included) or a comma list, as exact rationals."""
    text = text.strip()
    if ":" not in text:
        return [parse_rational(part) for part in text.split(",") if part.strip()]
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"range {text!r} must look like start:stop:step")
    start, stop, step = (parse_rational(x) for x in parts)
    if step <= 0:
        raise ParameterError("range step must be positive")
    out, x = [], start
    while x <= stop:
        out.append(x)
        x += step
    return out


def parse_float_range(text: str) -> list[float]:
    return [float(x) for x in parse_range(text)]


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_lex_order(path: str, n: int) -> list[int]:
    """One vector per whitespace-separated token, e.g. ``100 010 ... 000 111``."""
    tokens = _read(path).split()
    for t in tokens:
        if len(t) != n:
            raise ParameterError(f"vector {t!r} in {path} has wrong length for n={n}")
    return [vector_from_string(t) for t in tokens]


def belief_from_args(args) -> Belief:
    chosen = [x for x in (args.iid, args.belief_file, args.lex_order_file) if x is not None]
    if len(chosen) != 1:
        raise ParameterError("give exactly one of --iid, --belief-file, --lex-order-file")
    if args.iid is not None:
        return iid(IIDParameter(args.iid), args.n)
    if args.belief_file is not None:
        try:
            F = Belief.from_json(_read(args.belief_file))
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, ConstlabError):
                raise
            raise ParameterError(f"malformed belief file {args.belief_file}: {exc}") from None
        if F.n != args.n:
            raise ParameterError(f"belief file is for n={F.n}, but --n is {args.n}")
        return F
    return lexicographic(read_lex_order(args.lex_order_file, args.n), args.n, strict=args.strict)


def parse_scf(text: str, n: int | None) -> SCF:
    """Canonical ``n=3;table=e8`` or a named rule such as ``simple-majority``."""
    if text.startswith("n="):
        return SCF.from_canonical(text)
    if n is None:
        raise ParameterError("--n is required with a named SCF")
    try:
        spec = NamedSCF.parse(text)
    except ValueError as exc:
        if isinstance(exc, ConstlabError):
            raise
        raise ParameterError(f"cannot parse SCF {text!r}: {exc}") from None
    return materialize(spec, n)


def _universe(name: str, n: int):
    from constlab.stability import all_universe, thresholds_universe

    if name == "all":
        return all_universe(n)
    if name == "thresholds":
        return thresholds_universe(n)
    raise ParameterError(f"unknown universe {name!r} (use all or thresholds)")


# --- commands --------------------------------------------------------------------


def cmd_verify(args) -> int:
    from constlab.verify import run_suite

    checks = run_suite(args.suite, args.n, args.jury_n)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


def cmd_classify(args) -> int:
    from constlab.stability import stability_report
    from constlab.stability.report import dumps

    F = belief_from_args(args)
    universe = _universe(args.universe, args.n)
    candidates = universe.scfs(allow_large=args.allow_large)
    report = stability_report(candidates, F, args.tie, universe, args.allow_large)
    _write(args.out, dumps(report))
    return 0


def cmd_refute(args) -> int:
    from constlab.stability import check_witness, pessimistic_refute

    f = parse_scf(args.scf, args.n)
    universe = _universe(args.universe, f.n)
    verdict = pessimistic_refute(f, args.tie, args.budget, universe)
    out = {
        "scf": f.canonical(),
        "tie_break": args.tie,
        "support_budget": args.budget,
        "universe": universe.label(),
        "verdict": verdict.label,
        "witness": None,
    }
    if verdict.witness is not None:
        w = verdict.witness
        out["witness"] = {
            "f_prime": w.f_prime.canonical(),
            "c": vector_to_string(w.c, f.n),
            "belief": w.belief.to_json(),
            "rechecked": check_witness(f, w.belief, args.tie, w),
        }
    _write(args.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_graph(args) -> int:
    from constlab.stability import transition_graph

    if args.universe == "thresholds" and args.iid is not None:
        belief = IIDParameter(args.iid)
    else:
        belief = belief_from_args(args)
    G = transition_graph(args.n, belief, args.tie, args.universe)
    _write(args.out, G.to_dot() if args.format == "dot" else G.dumps_json() + "\n")
    return 0


def cmd_jury_grid(args) -> int:
    from constlab import jury

    lambdas, ps = jury.paper_grid()
    if args.lambdas:
        lambdas = parse_float_range(args.lambdas)
    if args.ps:
        ps = parse_float_range(args.ps)
    cells = jury.stable_grid(lambdas, ps, args.n, args.eps, args.tie_credit)
    _write(args.out, jury.grid_csv(cells))
    if args.svg:
        from constlab.jury_plots import plot_stable_grid

        plot_stable_grid(cells, args.svg)
    bad = [c for c in cells if c.discrepancies]
    for c in bad:
        print(f"discrepancy: lambda={c.lam:g} p={c.p:g}: {c.discrepancies} sizes where "
              "right-maximal and halving-safe disagree with the full check", file=sys.stderr)
    return 1 if bad else 0


def cmd_jury_dynamics(args) -> int:
    from constlab import jury

    runs = [jury.dynamics(jury.JuryConfig(args.n, lam, args.p, args.eps, args.tie_credit))
            for lam in parse_float_range(args.lam)]
    if len(runs) == 1:
        text = jury.dynamics_json(runs[0])
    else:
        text = json.dumps([d.to_json() for d in runs], indent=2, sort_keys=True) + "\n"
    _write(args.out, text)
    if args.svg:
        from constlab.jury_plots import plot_dynamics

        plot_dynamics(runs, args.svg)
    return 0


# --- parser ----------------------------------------------------------------------


def _add_belief(p) -> None:
    p.add_argument("--iid", help="i.i.d. belief parameter p, e.g. 1/2")
    p.add_argument("--belief-file", help="JSON pmf file {\"n\": 3, \"pmf\": {\"101\": \"1/2\", ...}}")
    p.add_argument("--lex-order-file", help="file listing all 2^n vectors in lexicographic order")
    p.add_argument("--strict", action="store_true",
                   help="with --lex-order-file: halve the last weight so no two vectors tie")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="constlab", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, help="worker threads (overrides CONSTLAB_THREADS)")
    parser.add_argument("--seed", type=int, default=0,
                        help="accepted for reproducible runs; every search here is a fixed enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-theorems", help="run the machine-checked theorem suites")
    p.add_argument("--suite", default="all",
                   choices=["all", "opt", "pess", "iid", "appendix", "equilibrium", "scf", "jury"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--jury-n", type=int, default=500)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="JSON stability report for every SCF in a universe")
    p.add_argument("--n", type=int, required=True)
    _add_belief(p)
    p.add_argument("--tie", default="arbitrary", choices=["arbitrary", "sqb"])
    p.add_argument("--universe", default="all", choices=["all", "thresholds"])
    p.add_argument("--allow-large", action="store_true", help="permit n=4 in the full universe")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("refute", help="pessimistic refutation search for one SCF")
    p.add_argument("--scf", required=True, help="canonical form or a named rule")
    p.add_argument("--n", type=int)
    p.add_argument("--tie", default="sqb", choices=["arbitrary", "sqb"])
    p.add_argument("--budget", type=int, default=3, help="largest belief support to try")
    p.add_argument("--universe", default="all", choices=["all", "thresholds"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("graph", help="transition graph as DOT or JSON")
    p.add_argument("--n", type=int, required=True)
    _add_belief(p)
    p.add_argument("--tie", default="arbitrary", choices=["arbitrary", "sqb"])
    p.add_argument("--universe", default="all", choices=["all", "thresholds"])
    p.add_argument("--format", default="dot", choices=["dot", "json"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("jury-grid", help="stable oligarchy sizes over a (lambda, p) grid, as CSV")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--lambdas", help="start:stop:step or comma list (default 0.1:0.9:0.1)")
    p.add_argument("--ps", help="start:stop:step or comma list (default 0.6:0.95:0.05)")
    p.add_argument("--eps", type=float, default=1e-12)
    p.add_argument("--tie-credit", action="store_true", help="count a tied vote as half correct")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_jury_grid)

    p = sub.add_parser("jury-dynamics", help="reachable stable sizes from every starting size")
    p.add_argument("--lambda", dest="lam", required=True, help="value, comma list or range")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--eps", type=float, default=1e-12)
    p.add_argument("--tie-credit", action="store_true")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_jury_dynamics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be at least 1")
        os.environ["CONSTLAB_THREADS"] = str(args.threads)
    try:
        return args.func(args)
    except ConstlabError as exc:
        print(f"constlab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
