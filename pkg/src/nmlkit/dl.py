"""Default logic: stage construction, stable-extension existence, and
generating-default enumeration.

Extensions are deductively closed and infinite, so they are represented by
the set of generating rules; membership questions are entailment queries
against a pluggable oracle.  Rule indices are 1-based throughout, matching
the rule elements d1..dm of the relational structure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ParseError, ResourceLimitError
from .formula import Basis, Formula, format_formula, is_propositional, lnot, parse_formula
from .limits import Limits, get_limits
from .twdp import EntailmentOracle, entailment_oracle


@dataclass(frozen=True)
class DefaultRule:
    prerequisite: Formula
    justification: Formula
    conclusion: Formula

    def __post_init__(self):
        for part in (self.prerequisite, self.justification, self.conclusion):
            if not is_propositional(part):
                raise ValueError("default-rule parts must be propositional")

    def __str__(self) -> str:
        return (
            f"{format_formula(self.prerequisite)} : "
            f"{format_formula(self.justification)} / "
            f"{format_formula(self.conclusion)}"
        )


@dataclass(frozen=True)
class DefaultTheory:
    knowledge: tuple[Formula, ...]
    defaults: tuple[DefaultRule, ...]

    def __post_init__(self):
        for f in self.knowledge:
            if not is_propositional(f):
                raise ValueError("knowledge base must be propositional")


@dataclass(frozen=True)
class ExtensionWitness:
    """A stable extension, represented by its generating rule indices."""

    generating: frozenset[int]


def stage_fixpoint(
    theory: DefaultTheory,
    candidate: Iterable[int],
    oracle: Optional[EntailmentOracle] = None,
) -> tuple[bool, frozenset[int]]:
    """Run the iterative stage construction against a candidate generating
    set.

    With C the candidate's conclusions, rules are applied from the knowledge
    base upward: a rule fires once its prerequisite follows from what has
    been applied, unless its negated justification follows from knowledge+C.
    Returns (applied == candidate, applied).  If knowledge+C is inconsistent
    every negated justification follows, so nothing is applicable.
    """
    oracle = oracle or entailment_oracle("brute")
    candidate = frozenset(candidate)
    rules = theory.defaults
    if not candidate <= set(range(1, len(rules) + 1)):
        raise ValueError("candidate contains unknown rule indices")
    base = list(theory.knowledge)
    closure = base + [rules[i - 1].conclusion for i in sorted(candidate)]
    blocked = {
        i: oracle.entails(closure, lnot(rules[i - 1].justification))
        for i in range(1, len(rules) + 1)
    }
    applied: set[int] = set()
    changed = True
    while changed:
        changed = False
        derived = base + [rules[i - 1].conclusion for i in sorted(applied)]
        for i in range(1, len(rules) + 1):
            if i in applied or blocked[i]:
                continue
            if oracle.entails(derived, rules[i - 1].prerequisite):
                applied.add(i)
                changed = True
    return frozenset(applied) == candidate, frozenset(applied)


def extension_exists(
    theory: DefaultTheory,
    oracle: Optional[EntailmentOracle] = None,
    *,
    limits: Limits | None = None,
) -> tuple[bool, list[ExtensionWitness]]:
    """Enumerate all candidate generating sets (binary counting order, rule 1
    on the least significant bit) and keep those closing the stage fixpoint."""
    oracle = oracle or entailment_oracle("brute")
    m = len(theory.defaults)
    cap = get_limits(limits).dl_rules
    if m > cap:
        raise ResourceLimitError(f"{m} rules exceed the enumeration cap of {cap}")
    witnesses = []
    for mask in range(1 << m):
        candidate = frozenset(i + 1 for i in range(m) if (mask >> i) & 1)
        ok, _ = stage_fixpoint(theory, candidate, oracle)
        if ok:
            witnesses.append(ExtensionWitness(candidate))
    return bool(witnesses), witnesses


def parse_default_theory(text: str, basis: Basis = None) -> DefaultTheory:
    """Parse the .dt format: '#' comments, ``w: <formula>`` knowledge lines,
    ``d: <alpha> ; <beta> ; <gamma>`` rule lines."""
    basis = basis or Basis()
    knowledge: list[Formula] = []
    rules: list[DefaultRule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep or head not in ("w", "d"):
            raise ParseError(f"expected 'w:' or 'd:' line, got {line!r}", line=lineno)
        try:
            if head == "w":
                knowledge.append(parse_formula(rest, "prop", basis))
            else:
                parts = rest.split(";")
                if len(parts) != 3:
                    raise ParseError(
                        "default needs three ';'-separated parts", line=lineno
                    )
                alpha, beta, gamma = (parse_formula(p, "prop", basis) for p in parts)
                rules.append(DefaultRule(alpha, beta, gamma))
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), line=lineno) from None
            raise
    return DefaultTheory(tuple(knowledge), tuple(rules))


def format_default_theory(theory: DefaultTheory) -> str:
    lines = [f"w: {format_formula(f)}" for f in theory.knowledge]
    lines += [
        "d: {} ; {} ; {}".format(
            format_formula(r.prerequisite),
            format_formula(r.justification),
            format_formula(r.conclusion),
        )
        for r in theory.defaults
    ]
    return "\n".join(lines) + ("\n" if lines else "")
