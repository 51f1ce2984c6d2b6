"""Monadic second-order logic over finite relational structures.

Two evaluators share the same semantics:

* ``eval_mso`` is the production model checker.  It grounds first-order
  quantifier blocks through the structure's relation tuples and decides
  second-order quantifiers by branching on set membership lazily under
  three-valued (Kleene) logic, so only memberships that actually influence
  the verdict are ever split on.  A step budget guards against blow-ups.
* ``eval_mso_bruteforce`` enumerates everything.  It is the independent
  oracle the production evaluator is swept against in the tests.

First-order variables are lowercase identifiers bound to universe elements;
set variables are uppercase identifiers bound to subsets.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .errors import ResourceLimitError
from .limits import Limits, get_limits
from .structures import RelationalStructure


class MsoFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class RelAtom(MsoFormula):
    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Eq(MsoFormula):
    left: str
    right: str


@dataclass(frozen=True, slots=True)
class SetAtom(MsoFormula):
    svar: str
    var: str


@dataclass(frozen=True, slots=True)
class Truth(MsoFormula):
    value: bool


@dataclass(frozen=True, slots=True)
class Not(MsoFormula):
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class And(MsoFormula):
    parts: tuple[MsoFormula, ...]


@dataclass(frozen=True, slots=True)
class Or(MsoFormula):
    parts: tuple[MsoFormula, ...]


@dataclass(frozen=True, slots=True)
class Imp(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class Iff(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class Xor(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class ExistsFO(MsoFormula):
    var: str
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class ForallFO(MsoFormula):
    var: str
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class ExistsSO(MsoFormula):
    svar: str
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class ForallSO(MsoFormula):
    svar: str
    body: MsoFormula


TOP = Truth(True)
BOTTOM = Truth(False)


def conj(parts: Iterable[MsoFormula]) -> MsoFormula:
    parts = tuple(p for p in parts if p != TOP)
    if any(p == BOTTOM for p in parts):
        return BOTTOM
    if not parts:
        return TOP
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[MsoFormula]) -> MsoFormula:
    parts = tuple(p for p in parts if p != BOTTOM)
    if any(p == TOP for p in parts):
        return TOP
    if not parts:
        return BOTTOM
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


# ---------------------------------------------------------------------------
# Free variables
# ---------------------------------------------------------------------------

_FREE_CACHE: dict[int, tuple[frozenset[str], frozenset[str], MsoFormula]] = {}


def free_vars(phi: MsoFormula) -> tuple[frozenset[str], frozenset[str]]:
    """(first-order, set) free variables of ``phi``."""
    cached = _FREE_CACHE.get(id(phi))
    if cached is not None and cached[2] is phi:
        return cached[0], cached[1]
    if isinstance(phi, RelAtom):
        fo, so = frozenset(phi.args), frozenset()
    elif isinstance(phi, Eq):
        fo, so = frozenset((phi.left, phi.right)), frozenset()
    elif isinstance(phi, SetAtom):
        fo, so = frozenset((phi.var,)), frozenset((phi.svar,))
    elif isinstance(phi, Truth):
        fo, so = frozenset(), frozenset()
    elif isinstance(phi, Not):
        fo, so = free_vars(phi.body)
    elif isinstance(phi, (And, Or)):
        fo, so = frozenset(), frozenset()
        for p in phi.parts:
            f2, s2 = free_vars(p)
            fo |= f2
            so |= s2
    elif isinstance(phi, (Imp, Iff, Xor)):
        f1, s1 = free_vars(phi.left)
        f2, s2 = free_vars(phi.right)
        fo, so = f1 | f2, s1 | s2
    elif isinstance(phi, (ExistsFO, ForallFO)):
        fo, so = free_vars(phi.body)
        fo = fo - {phi.var}
    elif isinstance(phi, (ExistsSO, ForallSO)):
        fo, so = free_vars(phi.body)
        so = so - {phi.svar}
    else:  # pragma: no cover
        raise TypeError(f"unknown node {phi!r}")
    _FREE_CACHE[id(phi)] = (fo, so, phi)
    return fo, so


# ---------------------------------------------------------------------------
# Serialization (goldens and debugging)
# ---------------------------------------------------------------------------


def to_text(phi: MsoFormula) -> str:
    if isinstance(phi, RelAtom):
        return f"{phi.rel}({', '.join(phi.args)})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, SetAtom):
        return f"{phi.var} in {phi.svar}"
    if isinstance(phi, Truth):
        return "T" if phi.value else "F"
    if isinstance(phi, Not):
        return f"~{_paren(phi.body)}"
    if isinstance(phi, And):
        return "(" + " & ".join(to_text(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "(" + " | ".join(to_text(p) for p in phi.parts) + ")"
    if isinstance(phi, Imp):
        return f"({to_text(phi.left)} -> {to_text(phi.right)})"
    if isinstance(phi, Iff):
        return f"({to_text(phi.left)} <-> {to_text(phi.right)})"
    if isinstance(phi, Xor):
        return f"({to_text(phi.left)} ^ {to_text(phi.right)})"
    if isinstance(phi, ExistsFO):
        return f"(E {phi.var}. {to_text(phi.body)})"
    if isinstance(phi, ForallFO):
        return f"(A {phi.var}. {to_text(phi.body)})"
    if isinstance(phi, ExistsSO):
        return f"(E {phi.svar}. {to_text(phi.body)})"
    if isinstance(phi, ForallSO):
        return f"(A {phi.svar}. {to_text(phi.body)})"
    raise TypeError(f"unknown node {phi!r}")


def _paren(phi: MsoFormula) -> str:
    text = to_text(phi)
    if isinstance(phi, (RelAtom, SetAtom, Truth, Not)):
        return text
    return text if text.startswith("(") else f"({text})"


# ---------------------------------------------------------------------------
# Preprocessing (semantics-preserving; applied once per formula)
# ---------------------------------------------------------------------------

_MINISCOPE_CACHE: dict[MsoFormula, MsoFormula] = {}


def _collect_names(phi: MsoFormula, out: set[str]) -> None:
    if isinstance(phi, RelAtom):
        out.update(phi.args)
    elif isinstance(phi, Eq):
        out.update((phi.left, phi.right))
    elif isinstance(phi, SetAtom):
        out.update((phi.svar, phi.var))
    elif isinstance(phi, Not):
        _collect_names(phi.body, out)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            _collect_names(p, out)
    elif isinstance(phi, (Imp, Iff, Xor)):
        _collect_names(phi.left, out)
        _collect_names(phi.right, out)
    elif isinstance(phi, (ExistsFO, ForallFO, ExistsSO, ForallSO)):
        out.add(phi.var if isinstance(phi, (ExistsFO, ForallFO)) else phi.svar)
        _collect_names(phi.body, out)


def _standardize(phi: MsoFormula) -> MsoFormula:
    """Alpha-rename bound variables apart (free variables keep their names).
    Evaluation assumes no shadowing; builders are free to reuse names."""
    used: set[str] = set()
    _collect_names(phi, used)
    counter: dict[str, int] = {}

    def fresh(name: str) -> str:
        if name not in counter:
            counter[name] = 1
            return name
        while True:
            counter[name] += 1
            candidate = f"{name}_{counter[name]}"
            if candidate not in used:
                used.add(candidate)
                return candidate

    def walk(node: MsoFormula, fo: dict[str, str], so: dict[str, str]) -> MsoFormula:
        if isinstance(node, RelAtom):
            return RelAtom(node.rel, tuple(fo.get(a, a) for a in node.args))
        if isinstance(node, Eq):
            return Eq(fo.get(node.left, node.left), fo.get(node.right, node.right))
        if isinstance(node, SetAtom):
            return SetAtom(so.get(node.svar, node.svar), fo.get(node.var, node.var))
        if isinstance(node, Truth):
            return node
        if isinstance(node, Not):
            return Not(walk(node.body, fo, so))
        if isinstance(node, And):
            return And(tuple(walk(p, fo, so) for p in node.parts))
        if isinstance(node, Or):
            return Or(tuple(walk(p, fo, so) for p in node.parts))
        if isinstance(node, (Imp, Iff, Xor)):
            return type(node)(walk(node.left, fo, so), walk(node.right, fo, so))
        if isinstance(node, (ExistsFO, ForallFO)):
            new = fresh(node.var)
            return type(node)(new, walk(node.body, {**fo, node.var: new}, so))
        if isinstance(node, (ExistsSO, ForallSO)):
            new = fresh(node.svar)
            return type(node)(new, walk(node.body, fo, {**so, node.svar: new}))
        raise TypeError(f"unknown node {node!r}")  # pragma: no cover

    return walk(phi, {}, {})


def _miniscope(phi: MsoFormula) -> MsoFormula:
    """Push quantifiers toward the atoms they govern.

    Uses only classical equivalences (distribution over & / |, vacuous-
    quantifier elimination, and hoisting a quantifier out of an implication
    side it does not occur in), so the result is logically equivalent.
    """
    if isinstance(phi, Not):
        return Not(_miniscope(phi.body))
    if isinstance(phi, And):
        parts = []
        for p in phi.parts:
            q = _miniscope(p)
            parts.extend(q.parts if isinstance(q, And) else (q,))
        return conj(parts)
    if isinstance(phi, Or):
        parts = []
        for p in phi.parts:
            q = _miniscope(p)
            parts.extend(q.parts if isinstance(q, Or) else (q,))
        return disj(parts)
    if isinstance(phi, Imp):
        return Imp(_miniscope(phi.left), _miniscope(phi.right))
    if isinstance(phi, Iff):
        return Iff(_miniscope(phi.left), _miniscope(phi.right))
    if isinstance(phi, Xor):
        return Xor(_miniscope(phi.left), _miniscope(phi.right))
    if isinstance(phi, ExistsSO):
        body = _miniscope(phi.body)
        if phi.svar not in free_vars(body)[1]:
            return body
        if isinstance(body, And):
            with_v = [p for p in body.parts if phi.svar in free_vars(p)[1]]
            without = [p for p in body.parts if phi.svar not in free_vars(p)[1]]
            if without:
                return conj(without + [ExistsSO(phi.svar, conj(with_v))])
        return ExistsSO(phi.svar, body)
    if isinstance(phi, ForallSO):
        body = _miniscope(phi.body)
        if phi.svar not in free_vars(body)[1]:
            return body
        if isinstance(body, And):
            return conj(
                [
                    ForallSO(phi.svar, p) if phi.svar in free_vars(p)[1] else p
                    for p in body.parts
                ]
            )
        return ForallSO(phi.svar, body)
    if isinstance(phi, (ExistsFO, ForallFO)):
        v = phi.var
        body = _miniscope(phi.body)
        if v not in free_vars(body)[0]:
            return body
        forall = isinstance(phi, ForallFO)
        if forall and isinstance(body, And):
            with_v = [p for p in body.parts if v in free_vars(p)[0]]
            without = [p for p in body.parts if v not in free_vars(p)[0]]
            if without:
                return conj(without + [_miniscope(ForallFO(v, conj(with_v)))])
            if len(with_v) > 1:
                return conj([_miniscope(ForallFO(v, p)) for p in with_v])
        if not forall and isinstance(body, Or):
            with_v = [p for p in body.parts if v in free_vars(p)[0]]
            without = [p for p in body.parts if v not in free_vars(p)[0]]
            if without:
                return disj(without + [_miniscope(ExistsFO(v, disj(with_v)))])
            if len(with_v) > 1:
                return disj([_miniscope(ExistsFO(v, p)) for p in with_v])
        if forall and isinstance(body, Imp):
            if v not in free_vars(body.right)[0]:
                return Imp(_miniscope(ExistsFO(v, body.left)), body.right)
            if v not in free_vars(body.left)[0]:
                return Imp(body.left, _miniscope(ForallFO(v, body.right)))
        return ForallFO(v, body) if forall else ExistsFO(v, body)
    return phi


def _miniscoped(phi: MsoFormula) -> MsoFormula:
    cached = _MINISCOPE_CACHE.get(phi)
    if cached is None:
        cached = _miniscope(_standardize(phi))
        if len(_MINISCOPE_CACHE) > 4096:
            _MINISCOPE_CACHE.clear()
        _MINISCOPE_CACHE[phi] = cached
    return cached


# ---------------------------------------------------------------------------
# Production evaluator
# ---------------------------------------------------------------------------

_EMPTY: frozenset = frozenset()


class _Generator:
    """One relational conjunct used to enumerate bindings: ``key`` positions
    are bound before the atom runs, ``bind`` positions introduce variables,
    ``match`` positions repeat a freshly bound position within the atom."""

    __slots__ = ("rel", "key_positions", "key_vars", "bind", "match")

    def __init__(self, rel, key_positions, key_vars, bind, match):
        self.rel = rel
        self.key_positions = key_positions
        self.key_vars = key_vars
        self.bind = bind
        self.match = match


class _Plan:
    """Execution plan for a block of same-kind first-order quantifiers.

    ``generators`` enumerate candidate bindings from relation tuples;
    ``loops`` are block variables with no generator, enumerated over the
    whole universe; ``residual`` is what remains of the guard/conjunct list;
    ``payload`` is the matrix (for universal blocks).  Assumes bound
    variables have been renamed apart.
    """

    __slots__ = ("exists", "block", "generators", "loops", "residual", "payload")

    def __init__(self, exists, block, generators, loops, residual, payload):
        self.exists = exists
        self.block = block
        self.generators = generators
        self.loops = loops
        self.residual = residual
        self.payload = payload


def _flatten_and(phi: MsoFormula) -> list[MsoFormula]:
    if isinstance(phi, And):
        out = []
        for p in phi.parts:
            out.extend(_flatten_and(p))
        return out
    return [phi]


def _make_plan(node: Union[ExistsFO, ForallFO]) -> _Plan:
    exists = isinstance(node, ExistsFO)
    cls = ExistsFO if exists else ForallFO
    block: list[str] = []
    body: MsoFormula = node
    while isinstance(body, cls):
        block.append(body.var)
        body = body.body
    if exists:
        conjuncts = _flatten_and(body)
        payload = None
    elif isinstance(body, Imp):
        conjuncts = _flatten_and(body.left)
        payload = body.right
    else:
        conjuncts = []
        payload = body

    blockset = set(block)
    pool = [c for c in conjuncts if isinstance(c, RelAtom) and set(c.args) & blockset]
    chosen: list[RelAtom] = []
    generators: list[_Generator] = []
    covered: set[str] = set()
    while True:
        best = None
        best_key = None
        for atom in pool:
            new = set(atom.args) & blockset - covered
            if not new:
                continue
            n_bound = sum(1 for a in atom.args if a not in blockset or a in covered)
            key = (n_bound, -len(new))
            if best is None or key > best_key:
                best, best_key = atom, key
        if best is None:
            break
        key_positions = []
        key_vars = []
        bind = []
        match = []
        first_pos: dict[str, int] = {}
        for pos, a in enumerate(best.args):
            if a in blockset and a not in covered:
                if a in first_pos:
                    match.append((pos, first_pos[a]))
                else:
                    first_pos[a] = pos
                    bind.append((pos, a))
            else:
                key_positions.append(pos)
                key_vars.append(a)
        generators.append(
            _Generator(best.rel, tuple(key_positions), tuple(key_vars), tuple(bind), tuple(match))
        )
        chosen.append(best)
        covered |= set(best.args) & blockset
        pool.remove(best)
    loops = [v for v in block if v not in covered]
    residual = [c for c in conjuncts if not any(c is g for g in chosen)]
    return _Plan(exists, block, generators, loops, residual, payload)


class _Evaluator:
    def __init__(
        self,
        structure: RelationalStructure,
        fo_env: dict[str, int],
        so_env: dict[str, dict[int, bool]],
        budget: int,
    ):
        self.structure = structure
        self.universe = structure.universe
        self.usize = len(structure.universe)
        self.fo = fo_env
        self.so = so_env
        self.budget = budget
        self.steps = 0
        self.branch_counts: dict[str, int] = {}
        self.watch: Optional[tuple[str, int]] = None
        self.memo: dict = {}
        self._plans: dict[int, tuple[MsoFormula, _Plan]] = {}
        self._indexes: dict = {}

    # -- bookkeeping --------------------------------------------------------

    def _tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.budget:
            if self.branch_counts:
                worst = max(self.branch_counts, key=self.branch_counts.get)
                detail = f"dominating quantifier: {worst} ({self.branch_counts[worst]} branch points)"
            else:
                detail = "dominated by first-order enumeration"
            raise ResourceLimitError(f"mso evaluation exceeded its step budget ({detail})")

    def _index(self, rel: str, mask: tuple[int, ...]):
        key = (rel, mask)
        idx = self._indexes.get(key)
        if idx is None:
            idx = {}
            for t in self.structure.tuples(rel):
                k = tuple(t[i] for i in mask)
                idx.setdefault(k, []).append(t)
            self._indexes[key] = idx
        return idx

    # -- evaluation ---------------------------------------------------------

    def eval(self, phi: MsoFormula) -> Optional[bool]:
        self._tick()
        cls = type(phi)
        if cls is RelAtom:
            t = tuple(self.fo[a] for a in phi.args)
            return t in self.structure.tuples(phi.rel)
        if cls is SetAtom:
            elem = self.fo[phi.var]
            val = self.so[phi.svar].get(elem)
            if val is None:
                self.watch = (phi.svar, elem)
            return val
        if cls is Eq:
            return self.fo[phi.left] == self.fo[phi.right]
        if cls is Truth:
            return phi.value
        if cls is Not:
            v = self.eval(phi.body)
            return None if v is None else not v
        if cls is And:
            # Stops at the first non-True part.  Returning None where a later
            # part would be False is sound: unknowns are resolved by branching.
            for p in phi.parts:
                v = self.eval(p)
                if v is not True:
                    return v
            return True
        if cls is Or:
            for p in phi.parts:
                v = self.eval(p)
                if v is not False:
                    return v
            return False
        if cls is Imp:
            va = self.eval(phi.left)
            if va is False:
                return True
            if va is None:
                return None
            return self.eval(phi.right)
        if cls is Iff or cls is Xor:
            va = self.eval(phi.left)
            if va is None:
                return None
            vb = self.eval(phi.right)
            if vb is None:
                return None
            same = va == vb
            return same if cls is Iff else not same
        if cls is ExistsFO or cls is ForallFO:
            return self._eval_fo_block(phi)
        if cls is ExistsSO or cls is ForallSO:
            return self._eval_so(phi, cls is ExistsSO)
        raise TypeError(f"unknown node {phi!r}")  # pragma: no cover

    # -- memoized entry for quantifier nodes --------------------------------

    def _memo_key(self, phi: MsoFormula):
        fo_free, so_free = free_vars(phi)
        fo_part = tuple(sorted((v, self.fo[v]) for v in fo_free))
        so_part = []
        for sv in sorted(so_free):
            d = self.so[sv]
            if len(d) != self.usize:
                return None  # partially determined set: not safely memoizable
            so_part.append((sv, frozenset(e for e, b in d.items() if b)))
        return (id(phi), fo_part, tuple(so_part))

    def _eval_fo_block(self, phi: MsoFormula) -> Optional[bool]:
        key = self._memo_key(phi)
        if key is not None:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        cached = self._plans.get(id(phi))
        if cached is None or cached[0] is not phi:
            cached = (phi, _make_plan(phi))
            self._plans[id(phi)] = cached
        plan = cached[1]
        result = self._run_plan(plan, 0)
        if key is not None and result is not None:
            self.memo[key] = result
        return result

    def _run_plan(self, plan: _Plan, gi: int) -> Optional[bool]:
        """Returns the quantifier-block value under current bindings.

        For an existential block: True if some candidate satisfies the body,
        None if no definite witness but some candidate was unknown, else
        False.  Universal blocks are dual.
        """
        if gi < len(plan.generators):
            gen = plan.generators[gi]
            idx = self._index(gen.rel, gen.key_positions)
            key = tuple(self.fo[a] for a in gen.key_vars)
            unknown = False
            for t in idx.get(key, ()):
                self._tick()
                if any(t[p] != t[q] for p, q in gen.match):
                    continue
                for pos, a in gen.bind:
                    self.fo[a] = t[pos]
                v = self._run_plan(plan, gi + 1)
                for _, a in gen.bind:
                    del self.fo[a]
                if v is None:
                    unknown = True
                elif v is plan.exists:
                    return v
            return None if unknown else (not plan.exists)

        li = gi - len(plan.generators)
        if li < len(plan.loops):
            var = plan.loops[li]
            unknown = False
            for elem in self.universe:
                self._tick()
                self.fo[var] = elem
                v = self._run_plan(plan, gi + 1)
                del self.fo[var]
                if v is None:
                    unknown = True
                elif v is plan.exists:
                    return v
            return None if unknown else (not plan.exists)

        # all block variables bound: evaluate residual conjuncts and payload
        unknown = None
        for c in plan.residual:
            v = self.eval(c)
            if v is False:
                return False if plan.exists else True  # guard refuted -> instance vacuous
            if v is None and unknown is None:
                unknown = self.watch
        if plan.exists:
            if unknown is not None:
                self.watch = unknown
                return None
            return True
        v = self.eval(plan.payload)
        if v is True:
            return True
        if unknown is not None:
            # guard undetermined: instance could still be vacuously true
            self.watch = unknown
            return None
        return v

    # -- set quantifiers -----------------------------------------------------

    def _eval_so(self, phi: Union[ExistsSO, ForallSO], exists: bool) -> Optional[bool]:
        key = self._memo_key(phi)
        if key is not None:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        svar = phi.svar
        saved = self.so.get(svar)
        self.so[svar] = {}
        try:
            result = self._so_dfs(svar, phi.body, exists)
        finally:
            if saved is None:
                del self.so[svar]
            else:
                self.so[svar] = saved
        if key is not None and result is not None:
            self.memo[key] = result
        return result

    def _so_dfs(self, svar: str, body: MsoFormula, exists: bool) -> Optional[bool]:
        v = self.eval(body)
        if v is not None:
            return v
        wsvar, welem = self.watch
        if wsvar != svar:
            return None  # an enclosing quantifier's set is responsible
        self.branch_counts[svar] = self.branch_counts.get(svar, 0) + 1
        d = self.so[svar]
        try:
            for b in (False, True):
                d[welem] = b
                v = self._so_dfs(svar, body, exists)
                if v is None:
                    return None
                if v is exists:
                    return v
        finally:
            d.pop(welem, None)
        return not exists


def _prepare_env(
    structure: RelationalStructure, env: Optional[Mapping[str, object]]
) -> tuple[dict[str, int], dict[str, dict[int, bool]]]:
    fo: dict[str, int] = {}
    so: dict[str, dict[int, bool]] = {}
    elements = set(structure.universe)
    for name, value in (env or {}).items():
        if isinstance(value, int) and not isinstance(value, bool):
            if value not in elements:
                raise ValueError(f"binding {name}={value} is outside the universe")
            fo[name] = value
        elif isinstance(value, (set, frozenset)):
            if not set(value) <= elements:
                raise ValueError(f"set binding {name} contains non-elements")
            so[name] = {e: (e in value) for e in structure.universe}
        else:
            raise ValueError(f"binding {name} must be an element id or a set of ids")
    return fo, so


def _check_bound(phi: MsoFormula, fo: dict, so: dict) -> None:
    fo_free, so_free = free_vars(phi)
    missing = (fo_free - fo.keys()) | (so_free - so.keys())
    if missing:
        raise ValueError(f"unbound variables: {sorted(missing)}")


def eval_mso(
    structure: RelationalStructure,
    phi: MsoFormula,
    env: Optional[Mapping[str, object]] = None,
    *,
    limits: Limits | None = None,
) -> bool:
    """Decide structure satisfaction of ``phi`` under ``env`` bindings.

    ``env`` maps first-order variables to element ids and set variables to
    sets of element ids; it must cover all free variables.
    """
    fo, so = _prepare_env(structure, env)
    _check_bound(phi, fo, so)
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)  # membership branching can stack u frames per set variable
    ev = _Evaluator(structure, fo, so, get_limits(limits).mso_steps)
    result = ev.eval(_miniscoped(phi))
    assert result is not None, "evaluation of a closed formula cannot stay undetermined"
    return result


def evaluation_steps(
    structure: RelationalStructure,
    phi: MsoFormula,
    env: Optional[Mapping[str, object]] = None,
    *,
    limits: Limits | None = None,
) -> tuple[bool, int]:
    """Like eval_mso, also reporting the number of evaluation steps used."""
    fo, so = _prepare_env(structure, env)
    _check_bound(phi, fo, so)
    ev = _Evaluator(structure, fo, so, get_limits(limits).mso_steps)
    result = ev.eval(_miniscoped(phi))
    assert result is not None
    return result, ev.steps


# ---------------------------------------------------------------------------
# Reference evaluator
# ---------------------------------------------------------------------------


def _estimate_cost(phi: MsoFormula, usize: int) -> int:
    """Worst-case enumeration count: usize per first-order quantifier,
    2^usize per set quantifier, multiplied along the nesting."""
    if isinstance(phi, (RelAtom, Eq, SetAtom, Truth)):
        return 1
    if isinstance(phi, Not):
        return 1 + _estimate_cost(phi.body, usize)
    if isinstance(phi, (And, Or)):
        return 1 + sum(_estimate_cost(p, usize) for p in phi.parts)
    if isinstance(phi, (Imp, Iff, Xor)):
        return 1 + _estimate_cost(phi.left, usize) + _estimate_cost(phi.right, usize)
    if isinstance(phi, (ExistsFO, ForallFO)):
        return 1 + max(1, usize) * _estimate_cost(phi.body, usize)
    if isinstance(phi, (ExistsSO, ForallSO)):
        return 1 + (1 << usize) * _estimate_cost(phi.body, usize)
    raise TypeError(f"unknown node {phi!r}")  # pragma: no cover


def eval_mso_bruteforce(
    structure: RelationalStructure,
    phi: MsoFormula,
    env: Optional[Mapping[str, object]] = None,
    *,
    limits: Limits | None = None,
) -> bool:
    """Textbook evaluation by exhaustive enumeration (testing oracle).

    Refuses inputs whose estimated cost (universe^#FO-quantifiers times
    2^(universe * #nested-SO-quantifiers)) exceeds the configured budget.
    """
    cap = get_limits(limits).mso_brute_cost
    cost = _estimate_cost(phi, len(structure.universe))
    if cost > cap:
        raise ResourceLimitError(
            f"estimated enumeration cost {cost} exceeds the cap of {cap} "
            "(dominating quantifier: the outermost set quantifier)"
        )
    fo: dict[str, int] = {}
    so: dict[str, frozenset[int]] = {}
    for name, value in (env or {}).items():
        if isinstance(value, int) and not isinstance(value, bool):
            fo[name] = value
        else:
            so[name] = frozenset(value)
    fo_free, so_free = free_vars(phi)
    missing = (fo_free - fo.keys()) | (so_free - so.keys())
    if missing:
        raise ValueError(f"unbound variables: {sorted(missing)}")
    return _brute(structure, phi, fo, so)


def _brute(s: RelationalStructure, phi: MsoFormula, fo: dict, so: dict) -> bool:
    if isinstance(phi, RelAtom):
        return tuple(fo[a] for a in phi.args) in s.tuples(phi.rel)
    if isinstance(phi, Eq):
        return fo[phi.left] == fo[phi.right]
    if isinstance(phi, SetAtom):
        return fo[phi.var] in so[phi.svar]
    if isinstance(phi, Truth):
        return phi.value
    if isinstance(phi, Not):
        return not _brute(s, phi.body, fo, so)
    if isinstance(phi, And):
        return all(_brute(s, p, fo, so) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_brute(s, p, fo, so) for p in phi.parts)
    if isinstance(phi, Imp):
        return (not _brute(s, phi.left, fo, so)) or _brute(s, phi.right, fo, so)
    if isinstance(phi, Iff):
        return _brute(s, phi.left, fo, so) == _brute(s, phi.right, fo, so)
    if isinstance(phi, Xor):
        return _brute(s, phi.left, fo, so) != _brute(s, phi.right, fo, so)
    if isinstance(phi, (ExistsFO, ForallFO)):
        exists = isinstance(phi, ExistsFO)
        saved = fo.get(phi.var)
        had = phi.var in fo
        for elem in s.universe:
            fo[phi.var] = elem
            v = _brute(s, phi.body, fo, so)
            if v is exists:
                if had:
                    fo[phi.var] = saved
                else:
                    del fo[phi.var]
                return exists
        if had:
            fo[phi.var] = saved
        elif phi.var in fo:
            del fo[phi.var]
        return not exists
    if isinstance(phi, (ExistsSO, ForallSO)):
        exists = isinstance(phi, ExistsSO)
        saved = so.get(phi.svar)
        had = phi.svar in so
        for size in range(len(s.universe) + 1):
            for subset in itertools.combinations(s.universe, size):
                so[phi.svar] = frozenset(subset)
                v = _brute(s, phi.body, fo, so)
                if v is exists:
                    if had:
                        so[phi.svar] = saved
                    else:
                        del so[phi.svar]
                    return exists
        if had:
            so[phi.svar] = saved
        elif phi.svar in so:
            del so[phi.svar]
        return not exists
    raise TypeError(f"unknown node {phi!r}")  # pragma: no cover
