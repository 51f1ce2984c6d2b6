import random

import pytest

from nmlkit.errors import ParseError, ResourceLimitError
from nmlkit.formula import (
    App,
    Basis,
    Believes,
    Const,
    FALSE,
    TRUE,
    Var,
    atoms,
    believes_subformulae,
    evaluate,
    format_formula,
    implies_bruteforce,
    land,
    limp,
    lnot,
    lor,
    lxor3,
    parse_formula,
    sat_bruteforce,
    subformulae,
)
from nmlkit.limits import Limits
from nmlkit.randgen import random_formula


def test_parse_and_not():
    f = parse_formula("p & !q")
    assert f == land(Var("p"), lnot(Var("q")))


def test_parse_belief_implication():
    f = parse_formula("L p -> p", mode="ae")
    assert f == limp(Believes(Var("p")), Var("p"))


def test_parse_incomplete_input():
    with pytest.raises(ParseError, match="end of input"):
        parse_formula("p &")


def test_parse_rejects_belief_in_prop_mode():
    with pytest.raises(ParseError, match="prop mode"):
        parse_formula("L p")


def test_parse_connective_outside_basis():
    with pytest.raises(ParseError, match="not in basis"):
        parse_formula("p ^ q", basis=Basis({"and", "or", "not"}))


def test_parse_precedence_and_associativity():
    # implication is right-associative, the others left-associative
    assert parse_formula("p -> q -> r") == limp(Var("p"), limp(Var("q"), Var("r")))
    assert parse_formula("p | q | r") == lor(lor(Var("p"), Var("q")), Var("r"))
    assert parse_formula("p & q | r") == lor(land(Var("p"), Var("q")), Var("r"))
    assert parse_formula("X3(p, q, r)") == lxor3(Var("p"), Var("q"), Var("r"))


def test_parse_comments_and_constants():
    assert parse_formula("T & p  # trailing comment\n") == land(TRUE, Var("p"))


def test_evaluate_contradiction():
    assert evaluate(land(Var("p"), lnot(Var("p"))), {"p": True}) is False


def test_evaluate_belief_atom_is_opaque():
    f = limp(Believes(Var("p")), Var("p"))
    assert evaluate(f, {Believes(Var("p")): False, "p": False}) is True


def test_evaluate_ternary_parity():
    f = lxor3(Var("x"), Var("y"), Var("z"))
    assert evaluate(f, {"x": True, "y": True, "z": False}) is False
    assert evaluate(f, {"x": True, "y": False, "z": False}) is True


def test_evaluate_missing_atom():
    with pytest.raises(ValueError, match="missing atom"):
        evaluate(Var("p"), {})


def test_sat_unsatisfiable():
    assert sat_bruteforce([land(Var("p"), lnot(Var("p")))]) is None


def test_sat_empty_set():
    assert sat_bruteforce([]) == {}


def test_sat_first_witness_order():
    # atoms sorted, False before True: p=False, q=True is the first witness
    witness = sat_bruteforce([lor(Var("p"), Var("q")), lnot(Var("p"))])
    assert witness == {"p": False, "q": True}


def test_sat_atom_cap():
    # negated atoms, so the very first (all-false) assignment is the witness
    formulas = [lnot(Var(f"x{i:02d}")) for i in range(25)]
    with pytest.raises(ResourceLimitError):
        sat_bruteforce(formulas)
    assert sat_bruteforce(formulas, limits=Limits(brute_atoms=25)) is not None


def test_implies_modus_ponens():
    assert implies_bruteforce([Var("p"), limp(Var("p"), Var("q"))], [Var("q")])


def test_implies_fails_on_disjunction():
    assert not implies_bruteforce([lor(Var("p"), Var("q"))], [Var("p")])


def test_implies_tautology_from_nothing():
    assert implies_bruteforce([], [lor(Var("p"), lnot(Var("p")))])


def test_subformulae_dedup():
    f = land(Var("p"), Var("p"))
    assert subformulae(f) == [Var("p"), f]


def test_subformulae_belief():
    f = limp(Believes(Var("p")), Var("p"))
    assert subformulae(f) == [Var("p"), Believes(Var("p")), f]
    assert believes_subformulae(f) == [Believes(Var("p"))]


def test_subformulae_parity():
    inner = lxor3(Var("x"), Var("y"), Var("z"))
    f = lnot(inner)
    assert subformulae(f) == [Var("x"), Var("y"), Var("z"), inner, f]


def test_subformulae_nested_belief():
    f = Believes(Believes(Var("p")))
    assert believes_subformulae(f) == [Believes(Var("p")), f]


def test_atoms_do_not_descend_into_belief():
    f = land(Believes(land(Var("p"), Var("q"))), Var("r"))
    assert atoms(f) == [Believes(land(Var("p"), Var("q"))), "r"]


def test_count_bound_by_node_count():
    f = land(Var("p"), land(Var("p"), Var("q")))
    assert len(subformulae(f)) <= 5


def test_print_parse_roundtrip_random():
    rng = random.Random(2024)
    for _ in range(300):
        f = random_formula(rng, ["p", "q", "r"], max_depth=4, allow_believes=True)
        assert parse_formula(format_formula(f), mode="ae") == f


def test_implies_matches_sat_reduction():
    rng = random.Random(77)
    for _ in range(200):
        f = [random_formula(rng, ["a", "b", "c"], 3) for _ in range(rng.randint(1, 2))]
        g = [random_formula(rng, ["a", "b", "c"], 3) for _ in range(rng.randint(1, 2))]
        direct = implies_bruteforce(f, g)
        via_sat = all(sat_bruteforce(f + [lnot(x)]) is None for x in g)
        assert direct == via_sat


def test_basis_validation():
    with pytest.raises(ValueError):
        Basis(set())
    with pytest.raises(ValueError):
        Basis({"nand"})
    assert Basis({"not"}).with_negation() == Basis({"not"})
    assert "not" in Basis({"or"}).with_negation()


def test_app_arity_checked():
    with pytest.raises(ValueError):
        App("and", (Var("p"),))
