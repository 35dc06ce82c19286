"""Benchmark harness: solve every instance of a corpus directory, write CSV."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .driver import SolveConfig, solve
from .errors import BudgetExceededError
from .exact import exact_cover
from .instance import format_weight, instance_order, parse_instance

COLUMNS = [
    "instance", "n", "m", "c", "weight", "weight_decimal", "opt", "ratio", "ratio_decimal",
    "realized_alpha", "iterations", "millis",
]


@dataclass(frozen=True)
class BenchConfig:
    c: int = 2
    oracle_limit: int = 14
    budget: int = 10**6
    timing: bool = True
    reverse_delete: bool = False


def corpus_files(corpus) -> list[str]:
    names = sorted(f for f in os.listdir(corpus) if f.endswith((".bond", ".txt")))
    return [os.path.join(corpus, f) for f in names]


def bench_one(path: str, cfg: BenchConfig) -> dict:
    with open(path) as fh:
        text = fh.read()
    g = parse_instance(text)
    c = instance_order(text) or cfg.c
    start = time.perf_counter()
    res = solve(g, SolveConfig(c, reverse_delete=cfg.reverse_delete, budget=cfg.budget))
    millis = (time.perf_counter() - start) * 1000
    row = {
        "instance": os.path.basename(path),
        "n": len(g),
        "m": sum(1 for _ in g.edges()),
        "c": c,
        "weight": format_weight(res.weight),
        "weight_decimal": f"{float(res.weight):.6g}",
        "opt": "",
        "ratio": "",
        "ratio_decimal": "",
        "realized_alpha": format_weight(res.realized_alpha),
        "iterations": len(res.trace.events),
        "millis": f"{millis:.1f}" if cfg.timing else "",
    }
    if len(g) <= cfg.oracle_limit:
        try:
            _, opt = exact_cover(g, c, cfg.budget)
        except BudgetExceededError:
            opt = None
        if opt is not None:
            row["opt"] = format_weight(opt)
            ratio = res.weight / opt if opt else Fraction(1)
            row["ratio"] = format_weight(ratio)
            row["ratio_decimal"] = f"{float(ratio):.6g}"
    return row


def _run(args):
    return bench_one(*args)


def bench(corpus, cfg: BenchConfig, workers: int = 1) -> str:
    """CSV text with one row per instance, in file-name order."""
    files = corpus_files(corpus)
    jobs = [(f, cfg) for f in files]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run, jobs))
    else:
        rows = [_run(j) for j in jobs]
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()
