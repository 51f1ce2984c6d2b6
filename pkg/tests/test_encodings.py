"""Oracle-equivalence and regression tests for the MSO encodings."""
import random

import pytest

from nmlkit.ael import AeTheory, expansion_exists
from nmlkit.dl import DefaultRule, DefaultTheory, extension_exists
from nmlkit.encodings import (
    _extension_without_groundedness,
    expansion_existence,
    extension_existence,
    implication,
    mso_encoding,
    satisfiability,
    structure_check,
)
from nmlkit.formula import (
    Basis,
    Believes,
    TRUE,
    Var,
    implies_bruteforce,
    limp,
    lnot,
    sat_bruteforce,
    subformulae,
)
from nmlkit.mso import eval_mso, to_text
from nmlkit.randgen import (
    random_ae_theory,
    random_formula_set,
    random_literal_default_theory,
)
from nmlkit.structures import (
    build_ael_structure,
    build_dl_structure,
    build_imp_structure,
    build_prop_structure,
)

BASIS = Basis()


def test_sat_encoding_fixtures():
    sat = satisfiability(BASIS)
    from nmlkit.formula import land, lor, parse_formula

    assert eval_mso(build_prop_structure([lor(Var("p"), Var("q"))]), sat) is True
    assert eval_mso(build_prop_structure([land(Var("p"), lnot(Var("p")))]), sat) is False
    assert eval_mso(build_prop_structure([]), sat) is True


def test_sat_encoding_agrees_with_bruteforce():
    rng = random.Random(100)
    sat = satisfiability(BASIS)
    for _ in range(100):
        gamma = random_formula_set(rng, max_subformulae=8)
        st = build_prop_structure(gamma)
        assert eval_mso(st, sat) == (sat_bruteforce(gamma) is not None)


def test_imp_encoding_agrees_with_bruteforce():
    rng = random.Random(200)
    imp = implication(BASIS)
    done = 0
    while done < 100:
        f = random_formula_set(rng, max_subformulae=5, max_formulas=2)
        g = random_formula_set(rng, max_subformulae=4, max_formulas=2)
        if len(subformulae(f + g)) > 8:
            continue
        done += 1
        st = build_imp_structure(f, g)
        assert eval_mso(st, imp) == implies_bruteforce(f, g)


def test_structure_check_holds_on_all_built_structures():
    rng = random.Random(300)
    checks = {
        "prop": structure_check(BASIS, "prop"),
        "imp": structure_check(BASIS, "imp"),
        "dl": structure_check(BASIS, "dl"),
        "ae": structure_check(BASIS, "ae"),
    }
    printed = {
        flavor: mso_encoding("struc", BASIS, "as_printed", flavor)
        for flavor in checks
    }
    for _ in range(40):
        st = build_prop_structure(random_formula_set(rng, max_subformulae=8))
        assert eval_mso(st, checks["prop"]) and eval_mso(st, printed["prop"])
        f = random_formula_set(rng, max_subformulae=4, max_formulas=2)
        g = random_formula_set(rng, max_subformulae=4, max_formulas=2)
        st = build_imp_structure(f, g)
        assert eval_mso(st, checks["imp"]) and eval_mso(st, printed["imp"])
        st = build_dl_structure(random_literal_default_theory(rng))
        assert eval_mso(st, checks["dl"]) and eval_mso(st, printed["dl"])
        st = build_ael_structure(random_ae_theory(rng).formulas)
        assert eval_mso(st, checks["ae"]) and eval_mso(st, printed["ae"])


def test_extension_encoding_fixtures():
    ext = extension_existence(BASIS)
    th = DefaultTheory((), (DefaultRule(TRUE, Var("p"), Var("q")),))
    assert eval_mso(build_dl_structure(th), ext) is True
    th = DefaultTheory((), (DefaultRule(TRUE, Var("p"), lnot(Var("p"))),))
    assert eval_mso(build_dl_structure(th), ext) is False
    th = DefaultTheory((), ())
    assert eval_mso(build_dl_structure(th), ext) is True


def test_extension_encoding_agrees_with_stage_oracle():
    rng = random.Random(400)
    ext = extension_existence(BASIS)
    for _ in range(100):
        th = random_literal_default_theory(rng)
        st = build_dl_structure(th)
        assert eval_mso(st, ext) == extension_exists(th)[0], th


def test_groundedness_regression():
    # The applicability fixpoint {rule 1} of this theory is subset-minimal
    # but not reachable from below, so no stable extension exists.  The
    # corrected encoding must reject it; replacing groundedness with bare
    # subset-minimality wrongly accepts it.
    x = Var("x")
    th = DefaultTheory(
        (),
        (
            DefaultRule(x, TRUE, x),
            DefaultRule(TRUE, lnot(x), lnot(x)),
            DefaultRule(lnot(x), TRUE, x),
        ),
    )
    assert extension_exists(th)[0] is False
    st = build_dl_structure(th)
    assert eval_mso(st, extension_existence(BASIS, "corrected")) is False
    assert eval_mso(st, _extension_without_groundedness(BASIS)) is True


def test_extension_as_printed_is_vacuous():
    # the verbatim stable-set matrix conjoins default(d) under a universal
    # quantifier, so it fails on any structure with a non-rule element
    th = DefaultTheory((), (DefaultRule(TRUE, Var("p"), Var("q")),))
    st = build_dl_structure(th)
    assert eval_mso(st, extension_existence(BASIS, "as_printed")) is False


def test_expansion_encoding_fixtures():
    full = expansion_existence(BASIS)
    p = Var("p")
    pos = AeTheory((limp(Believes(p), p),))
    assert eval_mso(build_ael_structure(pos.formulas), full) is True
    assert len(expansion_exists(pos)[1]) == 2
    neg = AeTheory((limp(lnot(Believes(p)), p),))
    assert eval_mso(build_ael_structure(neg.formulas), full) is False
    assert expansion_exists(neg)[1] == []
    empty = AeTheory(())
    assert eval_mso(build_ael_structure(empty.formulas), full) is True
    assert len(expansion_exists(empty)[1]) == 1


def test_expansion_as_printed_accepts_broken_fixture():
    # the verbatim fullness test reads the belief atom itself, which the
    # candidate set controls, so it wrongly accepts this theory
    p = Var("p")
    neg = AeTheory((limp(lnot(Believes(p)), p),))
    st = build_ael_structure(neg.formulas)
    assert eval_mso(st, expansion_existence(BASIS, "as_printed")) is True


def test_expansion_encoding_agrees_with_fullset_oracle():
    rng = random.Random(500)
    full = expansion_existence(BASIS)
    for _ in range(100):
        sigma = random_ae_theory(rng)
        st = build_ael_structure(sigma.formulas)
        assert eval_mso(st, full) == expansion_exists(sigma)[0], sigma


def test_nested_belief_encoding():
    full = expansion_existence(BASIS)
    sigma = AeTheory((Believes(Believes(Var("p"))),))
    st = build_ael_structure(sigma.formulas)
    assert eval_mso(st, full) == expansion_exists(sigma)[0] == False  # noqa: E712


def test_encoding_dispatcher():
    for name in ("struc", "assign", "sat", "imp", "extension", "full_exists"):
        assert mso_encoding(name, BASIS) is not None
    with pytest.raises(ValueError):
        mso_encoding("nope", BASIS)
    with pytest.raises(ValueError):
        mso_encoding("sat", BASIS, variant="fixed")


def test_assignment_constraint_is_open_in_set_variable():
    from nmlkit.mso import free_vars

    assign = mso_encoding("assign", BASIS)
    fo, so = free_vars(assign)
    assert so == {"M"} and not fo


def test_serialization_golden_small_basis():
    sat = satisfiability(Basis({"or", "not"}), "as_printed")
    text = to_text(sat)
    # frozen golden for the two-connective basis
    expected = (
        "(((A x. (~repr(x) -> (E y. (~var(y) & (conn_not_1(x, y) | conn_or_1(x, y) |"
        " conn_or_2(x, y)))))) & (A x. (~var(x) -> (F ^ ((E y. (conn_not_1(y, x) &"
        " (A z. (conn_not_1(z, x) -> z = y)))) | ((E y. (conn_or_1(y, x) & (A z."
        " (conn_or_1(z, x) -> z = y)))) & (E y. (conn_or_2(y, x) & (A z. (conn_or_2(z,"
        " x) -> z = y)))))))))) & (E M. ((A x. (A y1. (A y2. ((conn_not_1(y1, x) ->"
        " (x in M <-> ~y1 in M)) & ((conn_or_1(y1, x) & conn_or_2(y2, x)) -> (x in M"
        " <-> (y1 in M | y2 in M))))))) & (A x. (repr(x) -> x in M)))))"
    )
    assert text == expected
