"""Autoepistemic logic via full sets: fullness checking, expansion existence,
and full-set enumeration.

A stable expansion is represented by its full set: a polarity choice over the
belief atoms (the ``L``-rooted subformulas).  Entailment treats belief atoms
opaquely, so the brute-force and decomposition oracles apply unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ParseError, ResourceLimitError
from .formula import (
    Basis,
    Believes,
    Formula,
    believes_subformulae,
    format_formula,
    lnot,
    parse_formula,
)
from .limits import Limits, get_limits
from .twdp import EntailmentOracle, entailment_oracle


@dataclass(frozen=True)
class AeTheory:
    formulas: tuple[Formula, ...]


@dataclass(frozen=True)
class FullSetCandidate:
    """One polarity (positive = believed) per belief atom of the theory, in
    first-occurrence order."""

    entries: tuple[tuple[Believes, bool], ...]

    def polarity(self, atom: Believes) -> bool:
        for bel, positive in self.entries:
            if bel == atom:
                return positive
        raise KeyError(format_formula(atom))

    def literals(self) -> list[Formula]:
        return [bel if positive else lnot(bel) for bel, positive in self.entries]

    def __str__(self) -> str:
        return "{" + ", ".join(
            ("" if positive else "!") + format_formula(bel)
            for bel, positive in self.entries
        ) + "}"


def belief_atoms(sigma: AeTheory) -> list[Believes]:
    """Every L-rooted subformula of the theory (nested ones included),
    deduplicated, in first-occurrence order."""
    return believes_subformulae(list(sigma.formulas))


def is_full(
    sigma: AeTheory,
    candidate: FullSetCandidate,
    oracle: Optional[EntailmentOracle] = None,
) -> bool:
    """The candidate is full iff, for each belief atom L-phi, the theory plus
    the candidate's literals entails phi exactly when the atom is positive."""
    oracle = oracle or entailment_oracle("brute")
    premises = list(sigma.formulas) + candidate.literals()
    for bel, positive in candidate.entries:
        if oracle.entails(premises, bel.arg) != positive:
            return False
    return True


def expansion_exists(
    sigma: AeTheory,
    oracle: Optional[EntailmentOracle] = None,
    *,
    limits: Limits | None = None,
) -> tuple[bool, list[FullSetCandidate]]:
    """Enumerate all polarity choices (binary counting order, all-negative
    first) and return the full ones."""
    oracle = oracle or entailment_oracle("brute")
    atoms = belief_atoms(sigma)
    cap = get_limits(limits).ael_prefixes
    if len(atoms) > cap:
        raise ResourceLimitError(
            f"{len(atoms)} belief atoms exceed the enumeration cap of {cap}"
        )
    found = []
    for mask in range(1 << len(atoms)):
        candidate = FullSetCandidate(
            tuple((bel, bool((mask >> i) & 1)) for i, bel in enumerate(atoms))
        )
        if is_full(sigma, candidate, oracle):
            found.append(candidate)
    return bool(found), found


def parse_ae_theory(text: str, basis: Basis = None) -> AeTheory:
    """Parse the .ae format: one formula per line, '#' comments."""
    basis = basis or Basis()
    formulas = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            formulas.append(parse_formula(line, "ae", basis))
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return AeTheory(tuple(formulas))


def format_ae_theory(sigma: AeTheory) -> str:
    lines = [format_formula(f) for f in sigma.formulas]
    return "\n".join(lines) + ("\n" if lines else "")
