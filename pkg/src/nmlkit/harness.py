"""Verification harness: every headline property of the toolkit as a named,
seeded check.  The acceptance test module and the ``verify-paper`` CLI
subcommand both run these, so there is a single source of truth.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .ael import AeTheory, expansion_exists
from .dl import DefaultTheory, extension_exists, stage_fixpoint
from .encodings import (
    expansion_existence,
    extension_existence,
    implication,
    satisfiability,
    structure_check,
)
from .errors import ResourceLimitError
from .families import PseudoCliqueSpec, gen_ael_lower, gen_dl_lower, gen_pseudo_clique
from .formula import (
    Basis,
    Believes,
    Var,
    implies_bruteforce,
    limp,
    lnot,
    sat_bruteforce,
    subformulae,
)
from .mso import eval_mso
from .randgen import (
    random_ae_theory,
    random_entailment_query,
    random_formula_set,
    random_graph,
    random_literal_default_theory,
)
from .structures import (
    build_ael_structure,
    build_dl_structure,
    build_imp_structure,
    build_prop_structure,
    emit_gr,
    gaifman_graph,
    parse_gr,
)
from .treewidth import (
    TreeDecomposition,
    emit_td,
    exact_treewidth,
    heuristic_decomposition,
    normalize_pseudo,
    parse_td,
    validate_decomposition,
    width,
)
from .twdp import dp_sat, entailment_oracle

BASIS = Basis()


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    millis: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.detail} [{self.millis:.0f} ms]"


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, passed, detail, (time.perf_counter() - t0) * 1000)


def check_pseudo_clique_treewidth(seed: int = 1, quick: bool = False) -> CheckResult:
    """Exact treewidth of every pseudo-clique with 3..6 mains and uniform
    cardinality 0..3 equals size minus one, within 60 seconds total."""

    def run():
        t0 = time.perf_counter()
        bad = []
        for n in range(3, 7):
            for k in range(0, 4):
                g = gen_pseudo_clique(PseudoCliqueSpec(n, k))
                w, td = exact_treewidth(g)
                if w != n - 1 or validate_decomposition(g, td):
                    bad.append((n, k, w))
        elapsed = time.perf_counter() - t0
        ok = not bad and elapsed < 60.0
        return ok, f"16/16 instances at width n-1, {elapsed:.2f}s" if ok else f"failures: {bad}"

    return _timed("pseudo-clique treewidth", run)


def check_normalization(seed: int = 1, quick: bool = False) -> CheckResult:
    """Bag rewriting on random labeled pseudo-cliques: output valid, width
    never larger, every edge-node in exactly one bag of size at most three.

    The third property is unattainable once some pair has two or more
    edge-nodes: in any valid decomposition of an induced path i-d1-d2-j,
    forcing both internal vertices into single bags of size <= 3 is
    impossible (their shared bag would need all four vertices), so one of
    them must occur twice.  The check reports the loss honestly.
    """
    samples = 20 if quick else 100

    def run():
        rng = random.Random(seed)
        valid_ok = 0
        width_ok = 0
        once_ok = 0
        for _ in range(samples):
            n = rng.randint(3, 6)
            pairs = {
                (a, b): rng.randint(0, 3)
                for a in range(1, n + 1)
                for b in range(a + 1, n + 1)
            }
            g = gen_pseudo_clique(PseudoCliqueSpec(n, pairs))
            if rng.random() < 0.5:
                td = heuristic_decomposition(g, "min_fill")
            else:
                td = TreeDecomposition({1: frozenset(range(1, g.n + 1))}, frozenset())
            out = normalize_pseudo(g, td)
            if not validate_decomposition(g, out):
                valid_ok += 1
            if width(out) <= width(td):
                width_ok += 1
            edge_nodes = {v for v, lab in g.labels.items() if lab == "edge"}
            if all(
                sum(1 for bag in out.bags.values() if d in bag) == 1
                and all(len(bag) <= 3 for bag in out.bags.values() if d in bag)
                for d in edge_nodes
            ):
                once_ok += 1
        ok = valid_ok == samples and width_ok == samples and once_ok == samples
        return ok, (
            f"valid {valid_ok}/{samples}, width-monotone {width_ok}/{samples}, "
            f"exactly-once-small {once_ok}/{samples}"
        )

    return _timed("pseudo-clique normalization", run)


def check_sat_imp_encodings(seed: int = 1, quick: bool = False) -> CheckResult:
    """Model checking the satisfiability and implication encodings agrees
    with the truth-table oracles on random instances, within 120 seconds."""
    samples = 20 if quick else 100

    def run():
        rng = random.Random(seed)
        sat_enc = satisfiability(BASIS, "corrected")
        imp_enc = implication(BASIS, "corrected")
        t0 = time.perf_counter()
        sat_agree = 0
        for _ in range(samples):
            gamma = random_formula_set(rng, max_subformulae=8)
            verdict = eval_mso(build_prop_structure(gamma), sat_enc)
            if verdict == (sat_bruteforce(gamma) is not None):
                sat_agree += 1
        imp_agree = 0
        done = 0
        while done < samples:
            f = random_formula_set(rng, max_subformulae=5, max_formulas=2)
            g = random_formula_set(rng, max_subformulae=4, max_formulas=2)
            if len(subformulae(f + g)) > 8:
                continue
            done += 1
            verdict = eval_mso(build_imp_structure(f, g), imp_enc)
            if verdict == implies_bruteforce(f, g):
                imp_agree += 1
        elapsed = time.perf_counter() - t0
        ok = sat_agree == samples and imp_agree == samples and elapsed < 120.0
        return ok, (
            f"sat {sat_agree}/{samples}, imp {imp_agree}/{samples}, {elapsed:.1f}s"
        )

    return _timed("satisfiability/implication encodings", run)


def check_extension_encoding(seed: int = 1, quick: bool = False) -> CheckResult:
    """Model checking the extension-existence encoding agrees with the stage
    construction on random literal default theories."""
    samples = 20 if quick else 100

    def run():
        rng = random.Random(seed)
        enc = extension_existence(BASIS, "corrected")
        agree = 0
        for _ in range(samples):
            th = random_literal_default_theory(rng)
            verdict = eval_mso(build_dl_structure(th), enc)
            if verdict == extension_exists(th)[0]:
                agree += 1
        return agree == samples, f"{agree}/{samples} agreement"

    return _timed("extension-existence encoding", run)


def check_expansion_encoding(seed: int = 1, quick: bool = False) -> CheckResult:
    """Model checking the expansion-existence encoding agrees with full-set
    enumeration on random theories and on the three classic fixtures."""
    samples = 20 if quick else 100

    def run():
        rng = random.Random(seed)
        enc = expansion_existence(BASIS, "corrected")
        agree = 0
        for _ in range(samples):
            sigma = random_ae_theory(rng)
            verdict = eval_mso(build_ael_structure(sigma.formulas), enc)
            if verdict == expansion_exists(sigma)[0]:
                agree += 1
        p = Var("p")
        pos = AeTheory((limp(Believes(p), p),))
        neg = AeTheory((limp(lnot(Believes(p)), p),))
        empty = AeTheory(())
        fixtures = (
            len(expansion_exists(pos)[1]) == 2
            and len(expansion_exists(neg)[1]) == 0
            and len(expansion_exists(empty)[1]) == 1
            and eval_mso(build_ael_structure(pos.formulas), enc)
            and not eval_mso(build_ael_structure(neg.formulas), enc)
            and eval_mso(build_ael_structure(empty.formulas), enc)
        )
        ok = agree == samples and fixtures
        return ok, f"{agree}/{samples} agreement, fixtures {'ok' if fixtures else 'FAILED'}"

    return _timed("expansion-existence encoding", run)


def check_dp_scaling(seed: int = 1, quick: bool = False) -> CheckResult:
    """The decomposition DP solves the 2000-rule chain in under a second and
    scales about linearly from 1000 to 2000, while the truth-table oracle is
    rejected by its atom cap on the same instance."""

    def chain(m: int):
        return [Var("x1")] + [limp(Var(f"x{i}"), Var(f"x{i+1}")) for i in range(1, m)]

    def best_time(fn, repeats=3):
        best = float("inf")
        value = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - t0)
        return value, best

    def run():
        c1000, c2000 = chain(1000), chain(2000)
        dp_sat(chain(200))  # warmup: interning caches, allocator
        v1, time1000 = best_time(lambda: dp_sat(c1000))
        v2, time2000 = best_time(lambda: dp_sat(c2000))
        ratio = time2000 / max(time1000, 1e-9)
        try:
            sat_bruteforce(c2000)
            brute_rejected = False
        except ResourceLimitError:
            brute_rejected = True
        ok = v1 and v2 and time2000 < 1.0 and ratio <= 2.5 and brute_rejected
        return ok, (
            f"chain(2000) in {time2000*1000:.0f} ms, ratio {ratio:.2f}, "
            f"brute-force rejected: {brute_rejected}"
        )

    return _timed("fixed-width scaling", run)


def check_oracle_agreement(seed: int = 1, quick: bool = False) -> CheckResult:
    """Truth-table and decomposition oracles agree on random entailment
    queries; extension and expansion verdicts are oracle-independent."""
    n_queries = 60 if quick else 300
    n_theories = 40 if quick else 200

    def run():
        rng = random.Random(seed)
        brute = entailment_oracle("brute")
        twdp = entailment_oracle("twdp")
        q_agree = 0
        for _ in range(n_queries):
            premises, conclusion = random_entailment_query(rng)
            if brute.entails(premises, conclusion) == twdp.entails(premises, conclusion):
                q_agree += 1
        dl_agree = 0
        for _ in range(n_theories):
            th = random_literal_default_theory(rng)
            a = extension_exists(th, entailment_oracle("brute"))
            b = extension_exists(th, entailment_oracle("twdp"))
            if a[0] == b[0] and [w.generating for w in a[1]] == [w.generating for w in b[1]]:
                dl_agree += 1
        ae_agree = 0
        for _ in range(n_theories):
            sigma = random_ae_theory(rng)
            a = expansion_exists(sigma, entailment_oracle("brute"))
            b = expansion_exists(sigma, entailment_oracle("twdp"))
            if a[0] == b[0] and a[1] == b[1]:
                ae_agree += 1
        ok = q_agree == n_queries and dl_agree == n_theories and ae_agree == n_theories
        return ok, (
            f"queries {q_agree}/{n_queries}, extensions {dl_agree}/{n_theories}, "
            f"expansions {ae_agree}/{n_theories}"
        )

    return _timed("oracle cross-validation", run)


def check_family_growth(seed: int = 1, quick: bool = False) -> CheckResult:
    """Structure treewidth grows along the lower-bound families: strictly
    increasing for the rule family, exactly k-1 for the disjunction family."""

    def run():
        dl_widths = []
        for n in range(2, 6):
            g = gaifman_graph(build_dl_structure(gen_dl_lower(n, "printed")))
            dl_widths.append(exact_treewidth(g)[0])
        increasing = all(a < b for a, b in zip(dl_widths, dl_widths[1:]))
        ael_widths = []
        for k in range(3, 7):
            g = gaifman_graph(build_ael_structure(gen_ael_lower(k).formulas))
            ael_widths.append(exact_treewidth(g)[0])
        exact = ael_widths == [k - 1 for k in range(3, 7)]
        ok = increasing and exact
        return ok, f"rule family widths {dl_widths}, disjunction family widths {ael_widths}"

    return _timed("family treewidth growth", run)


def check_format_roundtrips(seed: int = 1, quick: bool = False) -> CheckResult:
    """.gr and .td emission round-trips are bit-exact on generated instances,
    and every emitted decomposition validates."""
    samples = 10 if quick else 40

    def run():
        rng = random.Random(seed)
        graphs = [
            gen_pseudo_clique(PseudoCliqueSpec(rng.randint(2, 6), rng.randint(0, 3)))
            for _ in range(samples // 2)
        ]
        graphs += [random_graph(rng, rng.randint(1, 14), rng.random()) for _ in range(samples // 2)]
        graphs.append(gaifman_graph(build_dl_structure(gen_dl_lower(3, "printed"))))
        bit_exact = 0
        valid = 0
        for g in graphs:
            text = emit_gr(g)
            again = emit_gr(parse_gr(text))
            if text == again:
                bit_exact += 1
            td = heuristic_decomposition(g, "min_fill")
            td_text = emit_td(td, g.n)
            parsed, n = parse_td(td_text)
            if td_text == emit_td(parsed, n) and not validate_decomposition(g, parsed):
                valid += 1
        total = len(graphs)
        ok = bit_exact == total and valid == total
        return ok, f"gr round-trips {bit_exact}/{total}, td round-trips+validation {valid}/{total}"

    return _timed("format round-trips", run)


def check_module_invariants(seed: int = 1, quick: bool = False) -> CheckResult:
    """Bundle of module-level invariants: the structural sanity encoding
    holds on every built structure, stage fixpoints echo their candidates,
    and heuristic decompositions validate on random graphs."""
    samples = 15 if quick else 60

    def run():
        rng = random.Random(seed)
        struc_prop = structure_check(BASIS, "prop")
        struc_imp = structure_check(BASIS, "imp")
        struc_dl = structure_check(BASIS, "dl")
        struc_ae = structure_check(BASIS, "ae")
        struc_ok = True
        for _ in range(samples):
            gamma = random_formula_set(rng, max_subformulae=8)
            struc_ok &= eval_mso(build_prop_structure(gamma), struc_prop)
            f = random_formula_set(rng, max_subformulae=4, max_formulas=2)
            g = random_formula_set(rng, max_subformulae=4, max_formulas=2)
            struc_ok &= eval_mso(build_imp_structure(f, g), struc_imp)
            th = random_literal_default_theory(rng)
            struc_ok &= eval_mso(build_dl_structure(th), struc_dl)
            sigma = random_ae_theory(rng)
            struc_ok &= eval_mso(build_ael_structure(sigma.formulas), struc_ae)
        echo_ok = True
        for _ in range(samples):
            th = random_literal_default_theory(rng)
            for witness in extension_exists(th)[1]:
                ok, applied = stage_fixpoint(th, witness.generating)
                echo_ok &= ok and applied == witness.generating
        heur_ok = True
        for _ in range(samples * 3):
            g = random_graph(rng, rng.randint(0, 12), rng.random())
            for method in ("min_degree", "min_fill"):
                heur_ok &= not validate_decomposition(g, heuristic_decomposition(g, method))
        ok = bool(struc_ok and echo_ok and heur_ok)
        return ok, (
            f"structure checks {'ok' if struc_ok else 'FAILED'}, "
            f"fixpoint echo {'ok' if echo_ok else 'FAILED'}, "
            f"heuristic validity {'ok' if heur_ok else 'FAILED'}"
        )

    return _timed("module invariants", run)


ALL_CHECKS = (
    check_pseudo_clique_treewidth,
    check_normalization,
    check_sat_imp_encodings,
    check_extension_encoding,
    check_expansion_encoding,
    check_dp_scaling,
    check_oracle_agreement,
    check_family_growth,
    check_format_roundtrips,
    check_module_invariants,
)


def run_all(seed: int = 1, quick: bool = False) -> list[CheckResult]:
    return [check(seed=seed, quick=quick) for check in ALL_CHECKS]
