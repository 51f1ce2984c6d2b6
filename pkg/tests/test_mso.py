import random

import pytest

from nmlkit.errors import ResourceLimitError
from nmlkit.limits import Limits
from nmlkit.mso import (
    And,
    Eq,
    ExistsFO,
    ExistsSO,
    ForallFO,
    ForallSO,
    Iff,
    Imp,
    Not,
    Or,
    RelAtom,
    SetAtom,
    Truth,
    eval_mso,
    eval_mso_bruteforce,
    free_vars,
    to_text,
)
from nmlkit.structures import RelationalStructure, Vocabulary


def tiny_structure(n=2, eds=((1, 2),)):
    rels = {"E": frozenset(eds), "U": frozenset({(1,)})}
    vocab = Vocabulary((("E", 2), ("U", 1)))
    return RelationalStructure(
        vocab, tuple(range(1, n + 1)), {i: "-" for i in range(1, n + 1)}, rels
    )


def test_full_set_witness():
    s = tiny_structure()
    phi = ExistsSO("M", ForallFO("x", SetAtom("M", "x")))
    assert eval_mso(s, phi) is True
    assert eval_mso_bruteforce(s, phi) is True


def test_relational_atoms_and_env():
    s = tiny_structure()
    assert eval_mso(s, RelAtom("E", ("x", "y")), {"x": 1, "y": 2}) is True
    assert eval_mso(s, RelAtom("E", ("x", "y")), {"x": 2, "y": 1}) is False
    assert eval_mso(s, SetAtom("M", "x"), {"x": 1, "M": {1}}) is True
    # relations absent from the structure read as empty
    assert eval_mso(s, RelAtom("missing", ("x",)), {"x": 1}) is False


def test_unbound_variable_rejected():
    s = tiny_structure()
    with pytest.raises(ValueError, match="unbound"):
        eval_mso(s, RelAtom("E", ("x", "y")), {"x": 1})


def test_quantifier_nesting():
    s = tiny_structure(3, ((1, 2), (2, 3)))
    connected_out = ForallFO(
        "x", Imp(RelAtom("U", ("x",)), ExistsFO("y", RelAtom("E", ("x", "y"))))
    )
    assert eval_mso(s, connected_out) is True
    everything_has_successor = ForallFO("x", ExistsFO("y", RelAtom("E", ("x", "y"))))
    assert eval_mso(s, everything_has_successor) is False


def test_shadowed_variables_evaluate_correctly():
    s = tiny_structure(3, ((1, 2), (2, 3)))
    # the inner forall x shadows the outer one
    phi = ExistsFO(
        "x",
        And(
            (
                RelAtom("U", ("x",)),
                ForallFO("x", Imp(RelAtom("E", ("x", "x")), Truth(False))),
            )
        ),
    )
    assert eval_mso(s, phi) is eval_mso_bruteforce(s, phi) is True


def test_step_budget_exceeded_fo():
    s = tiny_structure(12, ())
    payload = Or((RelAtom("E", ("x", "y")), Not(RelAtom("E", ("y", "z")))))
    phi = ForallFO("x", ForallFO("y", ForallFO("z", payload)))
    with pytest.raises(ResourceLimitError, match="budget"):
        eval_mso(s, phi, limits=Limits(mso_steps=60))


def test_step_budget_names_dominating_set_variable():
    s = tiny_structure(8, ())
    # exclusivity forces branching over both sets before the contradiction
    # with the 'both' conjunct surfaces, burning exponentially many steps
    exclusive = ForallFO("x", Iff(SetAtom("M", "x"), Not(SetAtom("N", "x"))))
    both = ForallFO(
        "x", Imp(RelAtom("U", ("x",)), And((SetAtom("M", "x"), SetAtom("N", "x"))))
    )
    phi = ExistsSO("M", ExistsSO("N", And((exclusive, both))))
    with pytest.raises(ResourceLimitError, match="dominating quantifier"):
        eval_mso(s, phi, limits=Limits(mso_steps=2000))


def test_bruteforce_cost_estimate_rejects():
    s = tiny_structure(14, ())
    phi = ExistsSO("A", ExistsSO("B", ForallFO("x", Truth(True))))
    with pytest.raises(ResourceLimitError, match="estimated"):
        eval_mso_bruteforce(s, phi, limits=Limits(mso_brute_cost=1000))


def test_serialization_golden():
    phi = ExistsSO(
        "M",
        And(
            (
                ForallFO("x", Imp(RelAtom("repr", ("x",)), SetAtom("M", "x"))),
                ExistsFO("y", And((Not(Eq("x", "y")), RelAtom("conn_or_1", ("y", "x"))))),
            )
        ),
    )
    assert to_text(phi) == (
        "(E M. ((A x. (repr(x) -> x in M)) & (E y. (~(x = y) & conn_or_1(y, x)))))"
    )


def test_free_vars():
    phi = ForallFO("x", Imp(SetAtom("M", "x"), RelAtom("E", ("x", "y"))))
    fo, so = free_vars(phi)
    assert fo == {"y"} and so == {"M"}


# ---------------------------------------------------------------------------
# Engine vs brute-force evaluator: randomized equivalence
# ---------------------------------------------------------------------------


def random_structure(rng, n):
    rels = {}
    for name, ar in (("U", 1), ("R", 2), ("S", 2)):
        rels[name] = frozenset(
            tuple(rng.randint(1, n) for _ in range(ar))
            for _ in range(rng.randint(0, 2 * n))
        )
    vocab = Vocabulary((("U", 1), ("R", 2), ("S", 2)))
    return RelationalStructure(
        vocab, tuple(range(1, n + 1)), {i: "-" for i in range(1, n + 1)}, rels
    )


def random_mso(rng, depth, fo, so):
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.3 and fo:
            return RelAtom("U", (rng.choice(fo),))
        if roll < 0.55 and fo:
            return RelAtom(rng.choice(["R", "S"]), (rng.choice(fo), rng.choice(fo)))
        if roll < 0.8 and fo and so:
            return SetAtom(rng.choice(so), rng.choice(fo))
        if len(fo) >= 2:
            return Eq(rng.choice(fo), rng.choice(fo))
        return Truth(rng.random() < 0.5)
    roll = rng.random()
    if roll < 0.14:
        return Not(random_mso(rng, depth - 1, fo, so))
    if roll < 0.3:
        return And((random_mso(rng, depth - 1, fo, so), random_mso(rng, depth - 1, fo, so)))
    if roll < 0.42:
        return Or((random_mso(rng, depth - 1, fo, so), random_mso(rng, depth - 1, fo, so)))
    if roll < 0.52:
        return Imp(random_mso(rng, depth - 1, fo, so), random_mso(rng, depth - 1, fo, so))
    if roll < 0.58:
        return Iff(random_mso(rng, depth - 1, fo, so), random_mso(rng, depth - 1, fo, so))
    if roll < 0.72:
        v = f"v{len(fo)}"
        cls = ExistsFO if rng.random() < 0.5 else ForallFO
        return cls(v, random_mso(rng, depth - 1, fo + [v], so))
    v = f"V{len(so)}"
    cls = ExistsSO if rng.random() < 0.5 else ForallSO
    return cls(v, random_mso(rng, depth - 1, fo, so + [v]))


def test_engine_matches_bruteforce_on_random_instances():
    rng = random.Random(424242)
    checked = 0
    for _ in range(400):
        n = rng.randint(1, 5)
        s = random_structure(rng, n)
        phi = random_mso(rng, rng.randint(2, 5), [], [])
        fo_free, so_free = free_vars(phi)
        env = {v: rng.randint(1, n) for v in fo_free}
        env.update(
            {
                V: frozenset(e for e in range(1, n + 1) if rng.random() < 0.5)
                for V in so_free
            }
        )
        try:
            expected = eval_mso_bruteforce(s, phi, env)
        except ResourceLimitError:
            continue
        assert eval_mso(s, phi, env) == expected, to_text(phi)
        checked += 1
    assert checked > 300


def test_isomorphism_invariance():
    from nmlkit.encodings import satisfiability
    from nmlkit.formula import Basis
    from nmlkit.randgen import random_formula_set
    from nmlkit.structures import build_prop_structure

    rng = random.Random(31)
    phi = satisfiability(Basis())
    for _ in range(10):
        gamma = random_formula_set(rng, max_subformulae=7)
        st = build_prop_structure(gamma)
        base = eval_mso(st, phi)
        perm = list(st.universe)
        rng.shuffle(perm)
        mapping = dict(zip(st.universe, perm))
        relabeled = RelationalStructure(
            st.vocabulary,
            st.universe,
            {mapping[e]: m for e, m in st.element_meta.items()},
            {
                name: frozenset(tuple(mapping[x] for x in t) for t in tups)
                for name, tups in st.relations.items()
            },
        )
        assert eval_mso(relabeled, phi) == base
