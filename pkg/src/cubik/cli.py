"""Command-line entry point.

Exit codes: 0 success or valid, 1 invalid solution (or an inexact
certificate), 2 usage or input error, 3 internal limit hit.
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import replace

from . import bounds
from .bench import SUITES, run_suite
from .classify import classify_items
from .geometry import CubikError, LimitExceeded, Params, validate_packing
from .instances import FAMILIES, gen_hardness, gen_random, oracle_exact
from .io import ParseError, instance_to_dict, parse_instance, parse_solution, solution_to_dict, write_instance
from .strategies import STRATEGIES, PortfolioConfig, portfolio_solve
from .svg import render_svg

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    """Write ``text`` to ``path`` in one step (stdout for None or "-")."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".cubik-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load_instance(path):
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from None
    # A solution file carrying its instance is accepted too.
    if isinstance(data, dict) and "instance" in data and "items" not in data:
        data = data["instance"]
    return parse_instance(json.dumps(data))


def _container_dict(c):
    return {"kind": c.kind, "axis": c.axis, "origin": list(c.origin), "dims": list(c.dims), "eps": c.eps}


def cmd_generate(args):
    if args.family == "hardness":
        if args.m is None:
            raise UsageError("--family hardness needs --m")
        inst = gen_hardness(args.m)
    else:
        if args.n is None:
            raise UsageError(f"--family {args.family} needs --n")
        params = {"eps": args.eps, "profit": args.profit, "rotation": args.rotation, "side": args.side}
        if args.mu is not None:
            params["mu"] = args.mu
        inst = gen_random(args.family, args.n, args.seed, params)
    _write(args.output, write_instance(inst))
    return EXIT_OK


def cmd_solve(args):
    inst = _load_instance(args.input)
    if args.eps is not None or args.mu is not None:
        eps = args.eps if args.eps is not None else inst.params.eps
        mu = args.mu if args.mu is not None else inst.params.mu
        inst = replace(inst, params=Params(eps, mu))
    names = None
    if args.strategies:
        names = tuple(s.strip() for s in args.strategies.split(",") if s.strip())
        unknown = [s for s in names if s not in STRATEGIES]
        if unknown:
            raise UsageError(f"unknown strategies: {', '.join(unknown)}; known: {', '.join(STRATEGIES)}")
    cfg = PortfolioConfig(strategies=names, gap=args.gap, threads=args.threads)
    rep = portfolio_solve(inst, cfg, report=True)
    sol = rep.solution
    res = rep.results.get(sol.provenance)
    conts = res.containers if res is not None else []
    data = solution_to_dict(sol)
    data["containers"] = [_container_dict(c) for c in conts]
    data["strategies"] = {name: msg for name, msg in sorted(rep.failures.items())}
    data["instance"] = instance_to_dict(inst)
    _write(args.output, json.dumps(data, indent=1) + "\n")
    if args.svg:
        _write(args.svg, render_svg(inst, sol, conts))
    ok = validate_packing(inst.knapsack, sol, inst.items, inst.allow_rotation).ok
    print(f"profit {sol.profit} from {sol.provenance} ({len(sol.placements)} items)", file=sys.stderr)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_validate(args):
    sol_text = _read(args.solution)
    sol = parse_solution(sol_text)
    if args.input:
        inst = _load_instance(args.input)
    else:
        data = json.loads(sol_text)
        if "instance" not in data:
            raise UsageError("solution has no embedded instance; pass -i")
        inst = parse_instance(json.dumps(data["instance"]))
    try:
        rep = validate_packing(inst.knapsack, sol, inst.items, inst.allow_rotation)
    except KeyError as exc:
        print(f"invalid: unknown item {exc}")
        return EXIT_INVALID
    for v in rep.violations:
        print(v)
    print("valid" if rep.ok else "invalid", f"profit {sol.profit}")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_classify(args):
    inst = _load_instance(args.input)
    mu = args.mu if args.mu is not None else inst.params.mu_value
    cls = classify_items(inst.items, mu, inst.side)
    _write(args.output, json.dumps(cls.to_dict(), indent=1) + "\n")
    return EXIT_OK


def cmd_oracle(args):
    inst = _load_instance(args.input)
    profit, sol = oracle_exact(inst, limit=args.limit)
    print(f"optimum {profit}")
    if args.output:
        data = solution_to_dict(sol)
        data["instance"] = instance_to_dict(inst)
        _write(args.output, json.dumps(data, indent=1) + "\n")
    return EXIT_OK


def cmd_bound(args):
    try:
        raw = json.loads(_read(args.profile))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.profile}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError("profile must be a JSON object")
    prof = bounds.ProfitProfile.from_dict(raw)
    cert = bounds.certify(prof, args.variant)
    out = {
        "variant": cert.variant,
        "case": cert.case,
        "bounds": {k: str(v) for k, v in bounds.lower_bound_formulas(prof).items()},
        "case_bounds": sorted(cert.bounds),
        "ratio": str(cert.ratio),
        "claimed": str(cert.constant),
        "claim_holds": cert.claim_holds,
    }
    _write(args.output, json.dumps(out, indent=1) + "\n")
    return EXIT_OK


def cmd_certify(args):
    ok = True
    print(f"{'variant':<22} {'case':>7} {'ratio':>8} {'expected':>9}  status")
    for variant, prof, expected in bounds.tight_instances():
        cert = bounds.certify(prof, variant)
        good = cert.ratio == expected and cert.claim_holds
        ok &= good
        print(f"{variant:<22} {cert.case:>7} {str(cert.ratio):>8} {str(expected):>9}  {'exact' if good else 'MISMATCH'}")
    feasible, obj = bounds.verify_dual_certificate()
    good = feasible and obj == bounds.F(1, 4)
    ok &= good
    print(f"dual certificate: feasible={feasible} objective={str(obj)}  {'exact' if good else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_bench(args):
    print(run_suite(args.suite, args.seed))
    if args.svg:
        if not (args.input and args.solution):
            raise UsageError("--svg needs -i instance and -s solution")
        inst = _load_instance(args.input)
        sol = parse_solution(_read(args.solution))
        _write(args.svg, render_svg(inst, sol))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="cubik", description="Container packing for 3D knapsack.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated instance")
    g.add_argument("--family", required=True,
                   help=f"hardness, {', '.join(FAMILIES[:-1])} or lemma-feasible:<lemma>")
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--m", type=int)
    g.add_argument("--mu", type=float)
    g.add_argument("--eps", type=float, default=0.1)
    g.add_argument("--side", type=float, default=1.0)
    g.add_argument("--profit", choices=("random", "unit", "volume"), default="random")
    g.add_argument("--rotation", action="store_true")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="run the strategy portfolio")
    s.add_argument("-i", "--input", required=True, help="instance file or - for stdin")
    s.add_argument("--strategies", help=f"comma list from: {', '.join(STRATEGIES)}")
    s.add_argument("--gap", action="store_true", help="also repack each layout by GAP")
    s.add_argument("--eps", type=float)
    s.add_argument("--mu", type=float)
    s.add_argument("--threads", type=int)
    s.add_argument("--svg")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="check a solution")
    v.add_argument("-i", "--input")
    v.add_argument("-s", "--solution", required=True)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("classify", help="print the item classes")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("--mu", type=float)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_classify)

    o = sub.add_parser("oracle", help="exact optimum of a tiny instance")
    o.add_argument("-i", "--input", required=True)
    o.add_argument("--limit", type=int, default=8)
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bound", help="lower bounds and ratio of a profit profile")
    b.add_argument("--profile", required=True)
    b.add_argument("--variant", required=True, choices=bounds.VARIANTS)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("certify", help="ratio table and dual certificate")
    t.set_defaults(func=cmd_certify)

    k = sub.add_parser("bench", help="runtime and profit tables")
    k.add_argument("--suite", choices=SUITES, default="kernels")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--svg")
    k.add_argument("-i", "--input")
    k.add_argument("-s", "--solution")
    k.set_defaults(func=cmd_bench)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except LimitExceeded as exc:
        print(f"cubik: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UsageError, ParseError, CubikError, ValueError) as exc:
        print(f"cubik: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
