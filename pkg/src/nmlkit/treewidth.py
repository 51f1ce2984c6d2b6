"""Tree decompositions: validation, width, heuristic and exact computation,
nice form, pseudo-clique theory, and PACE-style .td I/O.

The exact algorithm is a branch-and-bound over elimination orderings with
standard safe reductions (simplicial vertices always, almost-simplicial
vertices up to a certified lower bound) applied first; the vertex cap applies
to the reduced core, which is what actually gets searched.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import ParseError, ResourceLimitError
from .limits import Limits, get_limits
from .structures import Graph, make_graph


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags keyed by id plus tree edges between bag ids."""

    bags: dict[int, frozenset[int]]
    edges: frozenset[tuple[int, int]]

    def bag_ids(self) -> list[int]:
        return sorted(self.bags)

    def neighbors(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {b: set() for b in self.bags}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class NiceTreeDecomposition(TreeDecomposition):
    """Rooted decomposition where every node is a leaf (empty bag), an
    introduce, a forget, or a join with two equal-bag children."""

    root: int = 0
    children: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def node_kind(self, bid: int) -> tuple[str, Optional[int]]:
        kids = self.children.get(bid, ())
        if not kids:
            return ("leaf", None)
        if len(kids) == 2:
            return ("join", None)
        (child,) = kids
        here, below = self.bags[bid], self.bags[child]
        if len(here) == len(below) + 1:
            (v,) = here - below
            return ("introduce", v)
        (v,) = below - here
        return ("forget", v)

    def postorder(self) -> list[int]:
        order: list[int] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(self.children.get(node, ()))
        order.reverse()
        return order


def width(td: TreeDecomposition) -> int:
    """Largest bag size minus one."""
    if not td.bags:
        raise ValueError("decomposition has no bags")
    return max(len(b) for b in td.bags.values()) - 1


def _tree_violations(td: TreeDecomposition) -> list[str]:
    problems = []
    ids = set(td.bags)
    for u, v in td.edges:
        if u not in ids or v not in ids:
            problems.append(f"(tree) edge ({u},{v}) references a missing bag")
            return problems
    if len(td.edges) != max(len(ids) - 1, 0):
        problems.append(
            f"(tree) {len(ids)} bags need {max(len(ids) - 1, 0)} tree edges, found {len(td.edges)}"
        )
        return problems
    if ids:
        adj = td.neighbors()
        seen = {next(iter(sorted(ids)))}
        frontier = list(seen)
        while frontier:
            nxt = frontier.pop()
            for other in adj[nxt]:
                if other not in seen:
                    seen.add(other)
                    frontier.append(other)
        if seen != ids:
            missing = sorted(ids - seen)[0]
            problems.append(f"(tree) bag {missing} is disconnected from the rest")
    return problems


def validate_decomposition(g: Graph, td: TreeDecomposition) -> list[str]:
    """Empty list iff ``td`` is a valid tree decomposition of ``g``; otherwise
    one entry per violated condition with a witness."""
    for bid, bag in td.bags.items():
        for v in bag:
            if not (1 <= v <= g.n):
                raise ValueError(f"bag {bid} references vertex {v} outside the graph")
    problems = _tree_violations(td)
    if problems:
        return problems
    covered: set[int] = set()
    for bag in td.bags.values():
        covered |= bag
    for v in g.vertices:
        if v not in covered:
            problems.append(f"(i) vertex {v} appears in no bag")
    for u, v in sorted(g.edges):
        if not any(u in bag and v in bag for bag in td.bags.values()):
            problems.append(f"(ii) edge ({u},{v}) is contained in no bag")
    adj = td.neighbors()
    for v in g.vertices:
        holding = [b for b, bag in sorted(td.bags.items()) if v in bag]
        if len(holding) <= 1:
            continue
        seen = {holding[0]}
        frontier = [holding[0]]
        holding_set = set(holding)
        while frontier:
            b = frontier.pop()
            for other in adj[b]:
                if other in holding_set and other not in seen:
                    seen.add(other)
                    frontier.append(other)
        if seen != holding_set:
            stray = sorted(holding_set - seen)[0]
            problems.append(
                f"(iii) bags {holding[0]} and {stray} both hold vertex {v} but are not connected through it"
            )
    return problems


# ---------------------------------------------------------------------------
# Elimination orderings
# ---------------------------------------------------------------------------


def _fill_count(adj: dict[int, set[int]], v: int) -> int:
    nbrs = sorted(adj[v])
    count = 0
    for i, a in enumerate(nbrs):
        adj_a = adj[a]
        for b in nbrs[i + 1:]:
            if b not in adj_a:
                count += 1
    return count


def _eliminate(adj: dict[int, set[int]], v: int) -> list[tuple[int, int]]:
    """Remove v, turning its neighborhood into a clique; returns added edges."""
    nbrs = sorted(adj[v])
    added = []
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            if b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
                added.append((a, b))
    for a in nbrs:
        adj[a].discard(v)
    del adj[v]
    return added


def elimination_order(g: Graph, method: str) -> list[int]:
    """Greedy elimination ordering; ties broken by smallest vertex id."""
    if method not in ("min_degree", "min_fill"):
        raise ValueError(f"unknown method {method!r}")
    adj = g.adjacency()
    keyf: Callable[[int], int]
    if method == "min_degree":
        keyf = lambda v: len(adj[v])  # noqa: E731
    else:
        keyf = lambda v: _fill_count(adj, v)  # noqa: E731
    current = {v: keyf(v) for v in adj}
    heap = [(k, v) for v, k in current.items()]
    heapq.heapify(heap)
    order = []
    while heap:
        k, v = heapq.heappop(heap)
        if v not in adj or current[v] != k:
            continue
        order.append(v)
        nbrs = set(adj[v])
        added = _eliminate(adj, v)
        del current[v]
        touched = set(nbrs)
        if method == "min_fill":
            for a, b in added:
                touched |= adj[a] & adj[b]
        for w in touched:
            if w in adj:
                k2 = keyf(w)
                if current[w] != k2:
                    current[w] = k2
                    heapq.heappush(heap, (k2, w))
    return order


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """The tree decomposition induced by an elimination ordering: one bag per
    vertex (its closed neighborhood at elimination time), each attached to the
    bag of its first subsequently eliminated neighbor."""
    if g.n == 0:
        return TreeDecomposition({1: frozenset()}, frozenset())
    if sorted(order) != list(g.vertices):
        raise ValueError("order must enumerate every vertex exactly once")
    adj = g.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    bag_of: dict[int, int] = {}
    bags: dict[int, frozenset[int]] = {}
    edges: set[tuple[int, int]] = set()
    parent_vertex: dict[int, Optional[int]] = {}
    for v in order:
        bid = len(bags) + 1
        bag_of[v] = bid
        bags[bid] = frozenset(adj[v] | {v})
        nbrs = adj[v]
        parent_vertex[v] = min(nbrs, key=pos.__getitem__) if nbrs else None
        _eliminate(adj, v)
    for i, v in enumerate(order):
        pv = parent_vertex[v]
        if pv is None:
            if i + 1 < len(order):
                pv = order[i + 1]
            else:
                continue
        a, b = bag_of[v], bag_of[pv]
        edges.add((min(a, b), max(a, b)))
    return TreeDecomposition(bags, frozenset(edges))


def heuristic_decomposition(g: Graph, method: str = "min_fill") -> TreeDecomposition:
    return decomposition_from_order(g, elimination_order(g, method))


# ---------------------------------------------------------------------------
# Exact treewidth
# ---------------------------------------------------------------------------


def _mmd_lower_bound(adj: dict[int, set[int]]) -> int:
    """Minor-min-width: repeatedly merge a minimum-degree vertex into its
    least-connected neighbor; the largest minimum degree seen is a lower
    bound on treewidth."""
    adj = {v: set(ns) for v, ns in adj.items()}
    best = 0
    while adj:
        v = min(adj, key=lambda u: (len(adj[u]), u))
        d = len(adj[v])
        best = max(best, d)
        if d == 0:
            del adj[v]
            continue
        u = min(adj[v], key=lambda w: (len(adj[w] & adj[v]), w))
        for w in adj[v]:
            if w != u:
                adj[u].add(w)
                adj[w].add(u)
            adj[w].discard(v)
        adj[u].discard(u)
        del adj[v]
    return best


def _is_clique(adj: dict[int, set[int]], verts: Iterable[int]) -> bool:
    vs = list(verts)
    for i, a in enumerate(vs):
        adj_a = adj[a]
        for b in vs[i + 1:]:
            if b not in adj_a:
                return False
    return True


def _reduce(adj: dict[int, set[int]], lb: int) -> tuple[list[int], int, int]:
    """Apply simplicial / almost-simplicial eliminations until none apply.
    Returns (eliminated order, width forced so far, updated lower bound)."""
    order: list[int] = []
    forced = 0
    changed = True
    while changed and adj:
        changed = False
        for v in sorted(adj):
            nbrs = adj[v]
            d = len(nbrs)
            if _is_clique(adj, nbrs):
                forced = max(forced, d)
                lb = max(lb, d)
                _eliminate(adj, v)
                order.append(v)
                changed = True
                break
            if d <= lb and any(
                _is_clique(adj, nbrs - {u}) for u in sorted(nbrs)
            ):
                forced = max(forced, d)
                _eliminate(adj, v)
                order.append(v)
                changed = True
                break
    return order, forced, lb


def exact_treewidth(
    g: Graph, upper_hint: Optional[int] = None, *, limits: Limits | None = None
) -> tuple[int, TreeDecomposition]:
    """Minimum width over all decompositions, with an elimination-ordering
    witness.  ``upper_hint``, when given, must be a valid upper bound (it
    prunes the search).  The core left after safe reductions must fit the
    configured vertex cap."""
    if g.n == 0:
        return -1, TreeDecomposition({1: frozenset()}, frozenset())
    adj = g.adjacency()
    lb = _mmd_lower_bound(adj)
    prefix, forced, lb = _reduce(adj, lb)
    cap = get_limits(limits).exact_tw_core
    if len(adj) > cap:
        raise ResourceLimitError(
            f"exact treewidth core has {len(adj)} vertices, cap is {cap}"
        )

    if adj:
        heur_order, heur_width = _greedy_order(adj)
        prune_cap = (upper_hint + 1) if upper_hint is not None else (1 << 30)
        best_width, best_order = _branch_and_bound(adj, heur_width, heur_order, prune_cap)
        answer = max(forced, best_width)
        full_order = prefix + best_order
    else:
        answer = forced
        full_order = prefix
    td = decomposition_from_order(g, full_order)
    return answer, td


def _greedy_order(adj: dict[int, set[int]]) -> tuple[list[int], int]:
    work = {v: set(ns) for v, ns in adj.items()}
    order = []
    wid = 0
    while work:
        v = min(work, key=lambda u: (_fill_count(work, u), u))
        wid = max(wid, len(work[v]))
        _eliminate(work, v)
        order.append(v)
    return order, wid


def _branch_and_bound(
    adj: dict[int, set[int]], best_width: int, best_order: list[int], prune_cap: int
) -> tuple[int, list[int]]:
    """DFS over elimination orderings of the core with reduction and
    lower-bound pruning.  Deterministic: candidates scanned in vertex order.
    ``prune_cap`` (a promised upper bound plus one) only prunes; the returned
    width is always the width of the returned ordering."""
    best = [best_width, list(best_order)]

    def dfs(work: dict[int, set[int]], current: int, order: list[int]) -> None:
        bound = min(best[0], prune_cap)
        if current >= bound:
            return
        if not work:
            best[0] = current
            best[1] = list(order)
            return
        sub_lb = _mmd_lower_bound(work)
        if max(current, sub_lb) >= bound:
            return
        # current width and the minor bound both lower-bound every completion
        # of this branch, which is what the almost-simplicial rule needs
        reduced, forced_here, _ = _reduce(work, max(current, sub_lb))
        current = max(current, forced_here)
        if current >= bound:
            return
        if not work:
            best[0] = current
            best[1] = list(order) + reduced
            return
        for v in sorted(work):
            if len(work[v]) >= min(best[0], prune_cap):
                continue
            child = {u: set(ns) for u, ns in work.items()}
            d = len(child[v])
            _eliminate(child, v)
            dfs(child, max(current, d), order + reduced + [v])

    dfs({v: set(ns) for v, ns in adj.items()}, 0, [])
    return best[0], best[1]


# ---------------------------------------------------------------------------
# Nice decompositions
# ---------------------------------------------------------------------------


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Rooted nice form of a valid decomposition: leaves are empty bags,
    every other node introduces one vertex, forgets one vertex, or joins two
    children with identical bags.  Width is preserved; the root keeps the
    original root bag."""
    problems = _tree_violations(td)
    if problems:
        raise ValueError("invalid decomposition: " + problems[0])
    if not td.bags:
        raise ValueError("decomposition has no bags")
    root_old = min(td.bags)
    adj = td.neighbors()

    bags: dict[int, frozenset[int]] = {}
    children: dict[int, tuple[int, ...]] = {}
    counter = [0]

    def new_node(bag: frozenset[int], kids: tuple[int, ...]) -> int:
        counter[0] += 1
        bags[counter[0]] = bag
        children[counter[0]] = kids
        return counter[0]

    def chain(from_id: int, from_bag: frozenset[int], to_bag: frozenset[int]) -> int:
        node, bag = from_id, from_bag
        for v in sorted(from_bag - to_bag):
            bag = bag - {v}
            node = new_node(bag, (node,))
        for v in sorted(to_bag - bag):
            bag = bag | {v}
            node = new_node(bag, (node,))
        return node

    def leaf_chain(to_bag: frozenset[int]) -> int:
        node = new_node(frozenset(), ())
        return chain(node, frozenset(), to_bag)

    # iterative post-order over the original tree
    parent = {root_old: None}
    dfs_order = [root_old]
    stack = [root_old]
    while stack:
        b = stack.pop()
        for other in sorted(adj[b]):
            if other != parent[b]:
                parent[other] = b
                dfs_order.append(other)
                stack.append(other)
    built: dict[int, int] = {}
    for old in reversed(dfs_order):
        bag = td.bags[old]
        kids_old = [c for c in sorted(adj[old]) if parent.get(c) == old]
        if not kids_old:
            built[old] = leaf_chain(bag)
            continue
        adapted = [chain(built[c], td.bags[c], bag) for c in kids_old]
        node = adapted[0]
        for other in adapted[1:]:
            node = new_node(bag, (node, other))
        built[old] = node

    root = built[root_old]
    edges = frozenset(
        (min(p, c), max(p, c)) for p, kids in children.items() for c in kids
    )
    return NiceTreeDecomposition(bags, edges, root, children)


# ---------------------------------------------------------------------------
# Pseudo-cliques
# ---------------------------------------------------------------------------


def pseudo_clique_paths(
    g: Graph, mains: set[int]
) -> Optional[dict[tuple[int, int], list[int]]]:
    """Decompose ``g`` into main-pair paths, or None if it is not a
    pseudo-clique on ``mains``.

    Every pair of mains must be joined by exactly one route: a direct edge
    (empty path) or a path of fresh degree-2 edge-nodes; no other edges and
    no other vertices may exist.  Paths of distinct pairs are disjoint.
    """
    if not mains <= set(g.vertices):
        raise ValueError("mains must be vertices of the graph")
    adj = g.adjacency()
    others = [v for v in g.vertices if v not in mains]
    if any(len(adj[v]) != 2 for v in others):
        return None
    paths: dict[tuple[int, int], list[int]] = {}
    assigned: set[int] = set()
    for v in others:
        if v in assigned:
            continue
        ends = []
        segment = [v]
        for direction in sorted(adj[v]):
            prev, node = v, direction
            while node not in mains:
                if node in mains or len(adj[node]) != 2 or node in segment:
                    return None
                segment.append(node)
                nxt = [w for w in adj[node] if w != prev]
                if len(nxt) != 1:
                    return None
                prev, node = node, nxt[0]
            ends.append((node, prev))
        if len(ends) != 2:
            return None
        (u, _), (w, _) = ends
        if u == w or u not in mains or w not in mains:
            return None
        # orient the path from the smaller main to the larger
        lo, hi = (u, w) if u < w else (w, u)
        ordered = _trace_path(adj, lo, hi, set(segment))
        if ordered is None:
            return None
        key = (lo, hi)
        if key in paths:
            return None
        paths[key] = ordered
        assigned |= set(ordered)
    if assigned != set(others):
        return None
    main_list = sorted(mains)
    direct = set()
    for u, v in g.edges:
        if u in mains and v in mains:
            direct.add((u, v))
    expected_edges = len(direct)
    for i, u in enumerate(main_list):
        for v in main_list[i + 1:]:
            has_path = (u, v) in paths
            has_edge = (u, v) in direct
            if has_path == has_edge:  # exactly one route per pair
                return None
            if not has_path:
                paths[(u, v)] = []
    expected_edges += sum(len(p) + 1 for p in paths.values() if p)
    if expected_edges != len(g.edges):
        return None
    return paths


def _trace_path(adj, start_main, end_main, segment: set[int]) -> Optional[list[int]]:
    entry = [w for w in adj[start_main] if w in segment]
    if not entry:
        return None
    prev, node = start_main, min(entry)
    ordered = []
    while node != end_main:
        if node not in segment:
            return None
        ordered.append(node)
        nxt = [w for w in adj[node] if w != prev]
        if len(nxt) != 1:
            return None
        prev, node = node, nxt[0]
    return ordered if set(ordered) == segment else None


def is_pseudo_clique(g: Graph, mains: set[int]) -> bool:
    return pseudo_clique_paths(g, set(mains)) is not None


def _graph_mains(g: Graph) -> set[int]:
    if not g.labels:
        raise ValueError("graph carries no main/edge labels")
    return {v for v, lab in g.labels.items() if lab == "main"}


def normalize_pseudo(g: Graph, td: TreeDecomposition) -> TreeDecomposition:
    """Rewrite a decomposition of a labeled pseudo-clique so that edge-nodes
    live only in dedicated small bags.

    Per main pair (lexicographic order): every occurrence of the pair's
    edge-nodes is replaced by the larger main, then a chain of bags
    {i,d1,j}, {d1,d2,j}, ..., {d(k-1),dk,j} is attached to the first bag
    (smallest id) that contains the smaller main after replacement.  The
    result is valid, never wider than the input, and keeps edge-nodes in
    bags of size at most 3.
    """
    mains = _graph_mains(g)
    paths = pseudo_clique_paths(g, mains)
    if paths is None:
        raise ValueError("graph is not a pseudo-clique on its labeled mains")
    problems = validate_decomposition(g, td)
    if problems:
        raise ValueError("invalid decomposition: " + problems[0])
    bags = dict(td.bags)
    edges = set(td.edges)
    next_id = max(bags) + 1
    for (i, j), path in sorted(paths.items()):
        if not path:
            continue
        path_set = set(path)
        touched = [b for b in sorted(bags) if bags[b] & path_set]
        for b in touched:
            bags[b] = (bags[b] - path_set) | {j}
        anchor = next(b for b in sorted(bags) if i in bags[b] and j in bags[b])
        chain_bags = [frozenset({i, path[0], j})]
        for prev, here in zip(path, path[1:]):
            chain_bags.append(frozenset({prev, here, j}))
        attach = anchor
        for bag in chain_bags:
            bags[next_id] = bag
            edges.add((min(attach, next_id), max(attach, next_id)))
            attach = next_id
            next_id += 1
    return TreeDecomposition(bags, frozenset(edges))


def _max_clique(adj: dict[int, set[int]]) -> list[int]:
    """Bron-Kerbosch with pivoting; deterministic, returns one maximum clique."""
    best: list[int] = []

    def expand(r: list[int], p: set[int], x: set[int]) -> None:
        nonlocal best
        if not p and not x:
            if len(r) > len(best):
                best = list(r)
            return
        if len(r) + len(p) <= len(best):
            return
        pivot = max(sorted(p | x), key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand([], set(adj), set())
    return best


def pseudo_clique_lower_bound(g: Graph, *, limits: Limits | None = None) -> int:
    """Size of the largest clique obtainable by suppressing degree-2 vertices
    (so treewidth is at least the result minus one).

    Suppression replaces a degree-2 vertex by an edge between its neighbors,
    iterated to a fixpoint with duplicate edges and loops discarded; each
    surviving edge therefore stands for an internally disjoint path, which is
    verified before the clique is certified.
    """
    cap = get_limits(limits).clique_vertices
    if g.n > cap:
        raise ResourceLimitError(f"{g.n} vertices exceed the clique-search cap of {cap}")
    if g.n == 0:
        return 0
    adj = g.adjacency()
    route: dict[tuple[int, int], list[int]] = {
        (u, v): [] for u, v in g.edges
    }
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if len(adj[v]) != 2:
                continue
            a, b = sorted(adj[v])
            key_a = (min(a, v), max(a, v))
            key_b = (min(b, v), max(b, v))
            new_key = (min(a, b), max(a, b))
            path = route.pop(key_a) + [v] + route.pop(key_b)
            adj[a].discard(v)
            adj[b].discard(v)
            del adj[v]
            if a != b and b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
                route[new_key] = path
            changed = True
            break
    clique = _max_clique(adj) if adj else []
    # soundness check: the paths realizing the clique edges must be
    # internally disjoint (they are by construction; verified defensively)
    used: set[int] = set()
    for i, a in enumerate(clique):
        for b in clique[i + 1:]:
            path = route.get((min(a, b), max(a, b)), [])
            if used & set(path):
                return max(2, len(_largest_verified(adj, route, clique)))
            used |= set(path)
    return len(clique)


def _largest_verified(adj, route, clique) -> list[int]:  # pragma: no cover - defensive
    for drop in sorted(clique):
        reduced = [v for v in clique if v != drop]
        used: set[int] = set()
        ok = True
        for i, a in enumerate(reduced):
            for b in reduced[i + 1:]:
                path = route.get((min(a, b), max(a, b)), [])
                if used & set(path):
                    ok = False
                    break
                used |= set(path)
            if not ok:
                break
        if ok:
            return reduced
    return clique[:2]


# ---------------------------------------------------------------------------
# PACE-style .td I/O
# ---------------------------------------------------------------------------


def emit_td(td: TreeDecomposition, n_vertices: int) -> str:
    """Canonical .td text: bags sorted by id with ascending vertices, then
    sorted tree edges."""
    max_bag = max((len(b) for b in td.bags.values()), default=0)
    lines = [f"s td {len(td.bags)} {max_bag} {n_vertices}"]
    for bid in sorted(td.bags):
        verts = " ".join(str(v) for v in sorted(td.bags[bid]))
        lines.append(f"b {bid} {verts}".rstrip())
    lines.extend(f"{u} {v}" for u, v in sorted(td.edges))
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """Parse .td text; returns the decomposition and the declared vertex count."""
    bags: dict[int, frozenset[int]] = {}
    edges: set[tuple[int, int]] = set()
    declared_n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(f"malformed solution line: {line!r}", line=lineno)
            if declared_n is not None:
                raise ParseError("duplicate solution line", line=lineno)
            declared_n = int(parts[4])
        elif parts[0] == "b":
            if declared_n is None:
                raise ParseError("bag line before solution line", line=lineno)
            bid = int(parts[1])
            if bid in bags:
                raise ParseError(f"duplicate bag id {bid}", line=lineno)
            bags[bid] = frozenset(int(v) for v in parts[2:])
        else:
            if declared_n is None:
                raise ParseError("edge line before solution line", line=lineno)
            if len(parts) != 2:
                raise ParseError(f"malformed tree-edge line: {line!r}", line=lineno)
            u, v = int(parts[0]), int(parts[1])
            edges.add((min(u, v), max(u, v)))
    if declared_n is None:
        raise ParseError("missing 's td' line")
    return TreeDecomposition(bags, frozenset(edges)), declared_n
