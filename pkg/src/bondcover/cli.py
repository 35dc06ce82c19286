"""Command-line interface: ``bondc <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bench import BenchConfig, bench
from .detect import find_theta_model, verify_cover
from .driver import SolveConfig, solve
from .errors import BudgetExceededError, ValidationError
from .exact import DEFAULT_BUDGET, exact_cover
from .instance import GENERATORS, format_weight, planted_instance, read_instance, serialize_instance, generate
from .structure import Clusters, LargeOutgrowth, SmallModel, StructureParams, structure


def _num(w: Fraction) -> dict:
    return {"exact": format_weight(w), "decimal": float(w)}


def _ids(vs) -> list:
    return sorted(vs)


def _add_params(p):
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--model-bound", type=int)


def cmd_solve(args) -> int:
    g = read_instance(args.file)
    cfg = SolveConfig(args.c, args.t, args.k, args.r, args.model_bound, args.reverse_delete, args.budget)
    res = solve(g, cfg)
    report = {
        "solution": _ids(res.cover),
        "weight": _num(res.weight),
        "realized_alpha": _num(res.realized_alpha),
        "iterations": len(res.trace.events),
        "events": res.trace.summary(),
    }
    if args.oracle:
        _, opt = exact_cover(g, args.c, args.budget)
        report["opt"] = _num(opt)
        report["ratio"] = _num(res.weight / opt if opt else Fraction(1))
    print(json.dumps(report, indent=2))
    return 0


def cmd_exact(args) -> int:
    g = read_instance(args.file)
    S, w = exact_cover(g, args.c, args.budget)
    print(json.dumps({"solution": _ids(S), "weight": _num(w)}, indent=2))
    return 0


def cmd_verify(args) -> int:
    g = read_instance(args.file)
    try:
        S = [int(x) for x in args.solution.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(f"bad solution list {args.solution!r}")
    missing = [v for v in S if v not in g]
    if missing:
        raise ValidationError(f"unknown vertices {missing}")
    ok = verify_cover(g, args.c, S)
    print(json.dumps({"valid": ok, "weight": _num(g.total_weight(set(S)))}))
    return 0 if ok else 1


def _model_json(m):
    return {"x": _ids(m.x_side), "y": _ids(m.y_side), "size": len(m)}


def cmd_detect(args) -> int:
    g = read_instance(args.file)
    m = find_theta_model(g, args.c)
    print(json.dumps({"theta_free": m is None, "model": None if m is None else _model_json(m)}))
    return 0


def cmd_structure(args) -> int:
    g = read_instance(args.file)
    params = StructureParams.default(args.c, args.t, args.k, args.r, args.model_bound)
    out = structure(g, args.c, params, args.budget)
    if isinstance(out, LargeOutgrowth):
        og = out.outgrowth
        data = {"outcome": "outgrowth", "component": _ids(og.component), "anchors": list(og.anchors)}
    elif isinstance(out, SmallModel):
        data = {"outcome": "model", "source": out.source, **_model_json(out.model)}
    elif isinstance(out, Clusters):
        data = {"outcome": "clusters", "capacity": out.clusters.capacity,
                "clusters": [_ids(C) for C in out.clusters.clusters]}
    else:
        data = {"outcome": "theta_free"}
    print(json.dumps(data))
    return 0


def cmd_gen(args) -> int:
    comments = [f"order {args.c}", f"generator {args.model} seed {args.seed}"]
    if args.model == "gnp":
        g = generate("gnp", args.seed, n=args.n, p=args.p, c=args.c, max_weight=args.max_weight)
    elif args.model == "planted":
        g, P = planted_instance(args.n, args.c, args.models, args.planted, args.seed, args.max_weight)
        comments.append("planted " + " ".join(map(str, sorted(P))))
    else:
        g = generate("gadget-chain", args.seed, anchors=args.anchors, blob=args.blob, c=args.c,
                     chords=args.chords, max_weight=args.max_weight)
    text = serialize_instance(g, comments)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    cfg = BenchConfig(args.c, args.oracle_limit, args.budget, not args.no_timing)
    text = bench(args.corpus, cfg, args.workers)
    with open(args.csv, "w") as fh:
        fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bondc", description="Weighted c-bond cover tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_, needs_file=True):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        if name not in ("gen", "bench"):
            p.add_argument("-c", type=int, required=True)
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        if needs_file:
            p.add_argument("file")
        return p

    p = command("solve", cmd_solve, "approximate cover via peeling")
    _add_params(p)
    p.add_argument("--reverse-delete", action="store_true")
    p.add_argument("--oracle", action="store_true", help="also compute the optimum")
    command("exact", cmd_exact, "exact minimum-weight cover")
    p = command("verify", cmd_verify, "check that a vertex set is a cover")
    p.add_argument("--solution", required=True, help="comma or space separated ids")
    command("detect", cmd_detect, "find a theta_c model")
    p = command("structure", cmd_structure, "run one structure step")
    _add_params(p)

    p = command("gen", cmd_gen, "generate an instance", needs_file=False)
    p.add_argument("--model", choices=GENERATORS, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-c", type=int, default=2)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--models", type=int, default=5)
    p.add_argument("--planted", type=int, default=2)
    p.add_argument("--anchors", type=int, default=3)
    p.add_argument("--blob", type=int, default=3)
    p.add_argument("--chords", type=int, default=1)
    p.add_argument("--max-weight", type=int, default=5)
    p.add_argument("-o", "--output")

    p = command("bench", cmd_bench, "solve a corpus and write CSV", needs_file=False)
    p.add_argument("--corpus", required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("-c", type=int, default=2, help="order for files without an 'order' comment")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--oracle-limit", type=int, default=14)
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--no-timing", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, BudgetExceededError, OSError) as exc:
        print(f"bondc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
