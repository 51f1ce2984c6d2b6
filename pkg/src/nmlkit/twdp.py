"""Dynamic programming over nice tree decompositions for satisfiability and
implication, plus the pluggable entailment oracle used by the default-logic
and autoepistemic solvers.

The DP runs on the *constraint graph* of a formula set: one vertex per
distinct subterm, with a clique over every operator node and its arguments.
Each clique carries the local truth-functional constraint, so it sits inside
some bag of any valid decomposition and can be checked at a single introduce
node.  Belief subformulas are opaque leaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import ResourceLimitError
from .formula import (
    App,
    Believes,
    Const,
    Formula,
    Var,
    apply_connective,
    lnot,
    sat_bruteforce,
    subformulae,
)
from .limits import Limits, get_limits
from .structures import Graph, make_graph
from .treewidth import (
    NiceTreeDecomposition,
    TreeDecomposition,
    heuristic_decomposition,
    make_nice,
    width,
)

# ("op", vertex, connective, child vertices) or ("unit", vertex, value)
Constraint = Union[tuple[str, int, str, tuple[int, ...]], tuple[str, int, bool]]


@dataclass(frozen=True)
class ConstraintGraph:
    graph: Graph
    constraints: tuple[Constraint, ...]
    vertex_of: dict[Formula, int]


def build_constraint_graph(gamma: Iterable[Formula]) -> ConstraintGraph:
    """Subterm graph of a formula set with local constraints: operator nodes
    are pinned to their connective's truth table, constants to their value,
    and the set's formulas to true."""
    roots = list(gamma)
    subs = subformulae(roots)
    vertex_of = {f: i for i, f in enumerate(subs, start=1)}
    edges: set[tuple[int, int]] = set()
    constraints: list[Constraint] = []
    for f in subs:
        v = vertex_of[f]
        if isinstance(f, App):
            kids = tuple(vertex_of[a] for a in f.args)
            constraints.append(("op", v, f.op, kids))
            scope = {v, *kids}
            for a in scope:
                for b in scope:
                    if a < b:
                        edges.add((a, b))
        elif isinstance(f, Const):
            constraints.append(("unit", v, f.value))
    for f in roots:
        constraints.append(("unit", vertex_of[f], True))
    graph = make_graph(len(subs), edges)
    return ConstraintGraph(graph, tuple(constraints), vertex_of)


def _check(constraint: Constraint, value_of) -> bool:
    if constraint[0] == "unit":
        return value_of(constraint[1]) == constraint[2]
    _, v, op, kids = constraint
    return value_of(v) == apply_connective(op, tuple(value_of(k) for k in kids))


def dp_sat(
    gamma: Iterable[Formula],
    td: Optional[TreeDecomposition] = None,
    *,
    limits: Limits | None = None,
) -> bool:
    """Satisfiability of a formula set by DP over a nice decomposition of its
    constraint graph.  Tracks, per bag, the labelings extendable below; unit
    constraints force the set's formulas true."""
    cg = build_constraint_graph(gamma)
    if td is None:
        td = heuristic_decomposition(cg.graph, "min_fill")
    cap = get_limits(limits).dp_width
    w = width(td)
    if w > cap:
        raise ResourceLimitError(f"decomposition width {w} exceeds the DP cap of {cap}")
    nice = make_nice(td)
    return _run_dp(cg, nice)


def _run_dp(cg: ConstraintGraph, nice: NiceTreeDecomposition) -> bool:
    by_vertex: dict[int, list[int]] = {}
    scopes: list[frozenset[int]] = []
    for ci, c in enumerate(cg.constraints):
        scope = frozenset({c[1], *c[3]}) if c[0] == "op" else frozenset({c[1]})
        scopes.append(scope)
        for v in scope:
            by_vertex.setdefault(v, []).append(ci)

    order = nice.postorder()
    # assign each constraint to one introduce node whose bag covers its scope
    assigned: dict[int, list[int]] = {}
    done: set[int] = set()
    for node in order:
        kind, v = nice.node_kind(node)
        if kind != "introduce":
            continue
        bag = nice.bags[node]
        for ci in by_vertex.get(v, ()):
            if ci not in done and scopes[ci] <= bag:
                assigned.setdefault(node, []).append(ci)
                done.add(ci)
    if len(done) != len(cg.constraints):
        raise AssertionError("some local constraint fits no bag; decomposition invalid")

    tables: dict[int, set[int]] = {}
    bag_order: dict[int, tuple[int, ...]] = {
        node: tuple(sorted(nice.bags[node])) for node in order
    }
    for node in order:
        kind, v = nice.node_kind(node)
        kids = nice.children.get(node, ())
        if kind == "leaf":
            tables[node] = {0}
            continue
        if kind == "join":
            left = tables.pop(kids[0])
            right = tables.pop(kids[1])
            tables[node] = left & right
            continue
        (child,) = kids
        child_masks = tables.pop(child)
        here = bag_order[node]
        if kind == "forget":
            pos = bag_order[child].index(v)
            low = (1 << pos) - 1
            tables[node] = {(m & low) | ((m >> (pos + 1)) << pos) for m in child_masks}
            continue
        # introduce
        pos = here.index(v)
        low = (1 << pos) - 1
        checks = assigned.get(node, ())
        pos_of = {u: i for i, u in enumerate(here)}
        new_masks: set[int] = set()
        for m in child_masks:
            expanded = (m & low) | ((m >> pos) << (pos + 1))
            for bit in (0, 1):
                cand = expanded | (bit << pos)
                ok = True
                for ci in checks:
                    value_of = lambda u: bool((cand >> pos_of[u]) & 1)  # noqa: E731
                    if not _check(cg.constraints[ci], value_of):
                        ok = False
                        break
                if ok:
                    new_masks.add(cand)
        tables[node] = new_masks
    return bool(tables[nice.root])


def dp_implication(
    f: Iterable[Formula],
    g: Iterable[Formula],
    *,
    limits: Limits | None = None,
) -> bool:
    """Premises entail conclusions iff each premises+negated-conclusion set is
    unsatisfiable; each run decomposes independently."""
    premises = list(f)
    return all(
        not dp_sat(premises + [lnot(c)], limits=limits) for c in g
    )


# ---------------------------------------------------------------------------
# Entailment oracles
# ---------------------------------------------------------------------------


class EntailmentOracle:
    """Answers satisfiability and entailment queries; ``kind`` selects the
    truth-table or the decomposition-based back end, which agree wherever
    both run."""

    def __init__(self, kind: str, limits: Limits | None = None):
        if kind not in ("brute", "twdp"):
            raise ValueError(f"unknown oracle kind {kind!r}")
        self.kind = kind
        self.limits = limits
        self._cache: dict = {}

    def satisfiable(self, formulas: Iterable[Formula]) -> bool:
        key = ("sat", frozenset(formulas))
        hit = self._cache.get(key)
        if hit is None:
            if self.kind == "brute":
                hit = sat_bruteforce(key[1], limits=self.limits) is not None
            else:
                hit = dp_sat(key[1], limits=self.limits)
            self._cache[key] = hit
        return hit

    def entails(self, premises: Iterable[Formula], conclusion: Formula) -> bool:
        return not self.satisfiable(tuple(premises) + (lnot(conclusion),))

    def __repr__(self) -> str:
        return f"EntailmentOracle({self.kind!r})"


def entailment_oracle(kind: str = "twdp", limits: Limits | None = None) -> EntailmentOracle:
    return EntailmentOracle(kind, limits)
