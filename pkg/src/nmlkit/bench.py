"""Benchmark runner: timed rows over instance families, emitted as CSV.

Columns: family,param,n_vertices,width,method,wall_ms,verdict.  Rows that hit
a resource cap are recorded with verdict ``resource-limit`` and the run
continues.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Optional

from .errors import ResourceLimitError
from .families import PseudoCliqueSpec, gen_pseudo_clique
from .formula import Var, limp, sat_bruteforce
from .structures import Graph
from .treewidth import exact_treewidth, heuristic_decomposition, width
from .twdp import build_constraint_graph, dp_sat

CSV_FIELDS = ("family", "param", "n_vertices", "width", "method", "wall_ms", "verdict")


@dataclass
class BenchRow:
    family: str
    param: int
    n_vertices: int
    width: Optional[int]
    method: str
    wall_ms: float
    verdict: str

    def as_record(self) -> dict:
        return {
            "family": self.family,
            "param": self.param,
            "n_vertices": self.n_vertices,
            "width": "" if self.width is None else self.width,
            "method": self.method,
            "wall_ms": f"{self.wall_ms:.2f}",
            "verdict": self.verdict,
        }


def _chain(m: int) -> list:
    return [Var("x1")] + [limp(Var(f"x{i}"), Var(f"x{i+1}")) for i in range(1, m)]


def run_bench(family: str, sizes: list[int], method: str = "dp", seed: int = 1) -> list[BenchRow]:
    rows = []
    for size in sizes:
        if family == "chain":
            gamma = _chain(size)
            cg = build_constraint_graph(gamma)
            n_vertices = cg.graph.n
            td = heuristic_decomposition(cg.graph, "min_fill")
            w = width(td)
            t0 = time.perf_counter()
            try:
                if method == "dp":
                    verdict = "sat" if dp_sat(gamma, td) else "unsat"
                elif method == "brute":
                    verdict = "sat" if sat_bruteforce(gamma) is not None else "unsat"
                else:
                    raise ValueError(f"unknown method {method!r} for chain")
            except ResourceLimitError:
                verdict = "resource-limit"
            ms = (time.perf_counter() - t0) * 1000
            rows.append(BenchRow("chain", size, n_vertices, w, method, ms, verdict))
        elif family == "pseudo-clique":
            g = gen_pseudo_clique(PseudoCliqueSpec(size, 2))
            t0 = time.perf_counter()
            try:
                w, _ = exact_treewidth(g)
                verdict = "ok"
            except ResourceLimitError:
                w = None
                verdict = "resource-limit"
            ms = (time.perf_counter() - t0) * 1000
            rows.append(BenchRow("pseudo-clique", size, g.n, w, "exact", ms, verdict))
        elif family == "brute-sat":
            gamma = _chain(size)
            t0 = time.perf_counter()
            try:
                verdict = "sat" if sat_bruteforce(gamma) is not None else "unsat"
            except ResourceLimitError:
                verdict = "resource-limit"
            ms = (time.perf_counter() - t0) * 1000
            rows.append(BenchRow("brute-sat", size, size, None, "brute", ms, verdict))
        else:
            raise ValueError(f"unknown family {family!r}")
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_record())
    return buf.getvalue()
