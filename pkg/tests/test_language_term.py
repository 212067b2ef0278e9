"""Languages, structures, homomorphisms, and the term calculus."""

from fractions import Fraction

import pytest

from eua.language import Language, Structure, is_homomorphism, validate_structure
from eua.term import (
    CompositionMismatch,
    Equation,
    TermError,
    TupleInputMismatch,
    arity_of,
    comp_term,
    mor_term,
    pow_term,
    sym_term,
    times_term,
    tuple_term,
)
from eua.vbase import (
    BaseTag,
    VMorphism,
    chain,
    compose,
    coproduct,
    discrete,
    enumerate_morphisms,
    hom,
    hom_functions,
    identity,
    make_graph,
    make_metric,
    make_set,
    morphism_from_dict,
    tensor,
    two_eps,
    unit,
)


def _diameter_language():
    two = discrete(BaseTag.FinMet, 2)
    two1 = two_eps(Fraction(1))
    return Language(BaseTag.FinMet, (("f", two, two1),)), two, two1


def test_empty_language_always_valid():
    L = Language(BaseTag.FinSet, ())
    S = Structure(L, make_set(("a",)), ())
    assert validate_structure(S).ok


def test_diameter_identity_table_is_valid():
    L, two, two1 = _diameter_language()
    A = make_metric(("u", "v"), {("u", "v"): Fraction(1)})
    H2, H21 = hom(two, A), hom(two1, A)
    # diameter <= 1, so both hom carriers list all four pairs
    assert H2.carrier == H21.carrier
    tab = VMorphism(H2, H21, tuple(range(H2.size)))
    S = Structure(L, A, (("f", tab),))
    assert validate_structure(S).ok


def test_graph_swap_is_valid_interpretation():
    I = unit(BaseTag.FinGraph)
    L = Language(BaseTag.FinGraph, (("f", I, I),))
    A = make_graph(("u", "v"), (("u", "v"),))
    H = hom(I, A)
    swap = VMorphism(H, H, (1, 0))
    S = Structure(L, A, (("f", swap),))
    assert validate_structure(S).ok


def test_validate_rejects_wrong_hom():
    L, two, two1 = _diameter_language()
    A = make_metric(("u", "v"), {("u", "v"): Fraction(2)})
    bad = identity(hom(two, A))  # codomain must be hom(two1, A)
    S = Structure(L, A, (("f", bad),))
    assert not validate_structure(S).ok


def test_identity_is_homomorphism():
    L, two, two1 = _diameter_language()
    A = make_metric(("u", "v"), {("u", "v"): Fraction(1)})
    tab = identity(hom(two, A))  # carriers coincide at diameter 1
    H2, H21 = hom(two, A), hom(two1, A)
    tab = VMorphism(H2, H21, tuple(range(H2.size)))
    S = Structure(L, A, (("f", tab),))
    assert is_homomorphism(identity(A), S, S).ok


def test_non_commuting_map_rejected_with_witness():
    I = unit(BaseTag.FinGraph)
    L = Language(BaseTag.FinGraph, (("f", I, I),))
    A = make_graph(("u", "v"), (("u", "v"),))
    H = hom(I, A)
    S_id = Structure(L, A, (("f", identity(H)),))
    S_swap = Structure(L, A, (("f", VMorphism(H, H, (1, 0))),))
    swap_map = morphism_from_dict(A, A, {"u": "v", "v": "u"})
    assert is_homomorphism(swap_map, S_id, S_id).ok
    v = is_homomorphism(identity(A), S_id, S_swap)
    assert not v.ok
    assert v.witness is not None


def test_homomorphisms_compose():
    I = unit(BaseTag.FinGraph)
    L = Language(BaseTag.FinGraph, (("f", I, I),))
    A = make_graph(("u", "v"), (("u", "v"),))
    H = hom(I, A)
    S = Structure(L, A, (("f", identity(H)),))
    homs = [
        h
        for h in enumerate_morphisms(A, A)
        if is_homomorphism(h, S, S).ok
    ]
    for h1 in homs:
        for h2 in homs:
            assert is_homomorphism(compose(h2, h1), S, S).ok


# -- terms -----------------------------------------------------------------


def test_mor_term_arity_flips():
    f = morphism_from_dict(chain(2), chain(2), {"x0": "x0", "x1": "x1"})
    t = mor_term(f)
    assert arity_of(t) == (chain(2), chain(2))
    delta = morphism_from_dict(
        discrete(BaseTag.FinMet, 2), two_eps(Fraction(1)),
        {"0:*": "x0", "1:*": "x1"},
    )
    t2 = mor_term(delta)
    # morphism 2 -> 2_1 gives a (2_1, 2)-ary term
    assert arity_of(t2) == (two_eps(Fraction(1)), discrete(BaseTag.FinMet, 2))


def test_pow_term_arity_is_tensor():
    I = unit(BaseTag.FinGraph)
    one = make_graph(("a",), ())
    L = Language(BaseTag.FinGraph, (("f", I, I),))
    t = pow_term(one, sym_term("f", L))
    assert arity_of(t) == (tensor(one, I), tensor(one, I))


def test_comp_mismatch_raises():
    L, two, two1 = _diameter_language()
    with pytest.raises(CompositionMismatch):
        comp_term(sym_term("f", L), sym_term("f", L))


def test_tuple_arity_is_coproduct_of_outputs():
    L = Language(BaseTag.FinSet, (("g", make_set(("a",)), unit(BaseTag.FinSet)),))
    g = sym_term("g", L)
    t = tuple_term([g, g, g])
    X, Y = arity_of(t)
    D, _ = coproduct(BaseTag.FinSet, [unit(BaseTag.FinSet)] * 3)
    assert Y == D
    assert Y == discrete(BaseTag.FinSet, 3)


def test_tuple_input_mismatch():
    L = Language(
        BaseTag.FinSet,
        (
            ("g", make_set(("a",)), unit(BaseTag.FinSet)),
            ("h", make_set(("a", "b")), unit(BaseTag.FinSet)),
        ),
    )
    with pytest.raises(TupleInputMismatch):
        tuple_term([sym_term("g", L), sym_term("h", L)])


def test_times_is_tuple_of_restrictions():
    X = make_set(("a",))
    L = Language(BaseTag.FinSet, (("g", X, X),))
    t = times_term(sym_term("g", L), sym_term("g", L))
    C, _ = coproduct(BaseTag.FinSet, [X, X])
    assert arity_of(t)[0] == C
    assert arity_of(t)[1] == C


def test_equation_requires_equal_arities():
    L, two, two1 = _diameter_language()
    with pytest.raises(TermError):
        Equation("bad", sym_term("f", L), mor_term(identity(two)))


def test_nested_tuple_uses_structural_coproduct():
    X = make_set(("a",))
    L = Language(BaseTag.FinSet, (("g", X, X),))
    g = sym_term("g", L)
    inner = tuple_term([g, g])
    outer = tuple_term([inner, g])
    C1, _ = coproduct(BaseTag.FinSet, [X, X])
    C2, _ = coproduct(BaseTag.FinSet, [C1, X])
    assert arity_of(outer)[1] == C2
