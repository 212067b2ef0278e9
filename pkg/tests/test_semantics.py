"""Interpretation, satisfaction in both modes, naturality, power coherence."""

import itertools
from fractions import Fraction

import pytest

from eua.language import Language, Structure, is_homomorphism
from eua.semantics import interpret, is_model, naturality_audit, satisfies
from eua.term import (
    Equation,
    Theory,
    comp_term,
    mor_term,
    pow_term,
    sym_term,
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
    enumerate_objects,
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


def _graph_f_setup(table="id"):
    I = unit(BaseTag.FinGraph)
    L = Language(BaseTag.FinGraph, (("f", I, I),))
    A = make_graph(("u", "v"), (("u", "v"),))
    H = hom(I, A)
    tab = identity(H) if table == "id" else VMorphism(H, H, (1, 0))
    return L, A, Structure(L, A, (("f", tab),)), I


def test_interpret_identity_morphism_term():
    L, A, S, I = _graph_f_setup()
    t = mor_term(identity(I))
    assert interpret(t, S) == identity(hom(I, A))


def test_interpret_composition_is_functorial():
    L, A, S, I = _graph_f_setup("swap")
    f = sym_term("f", L)
    ff = comp_term(f, f)
    assert interpret(ff, S) == compose(interpret(f, S), interpret(f, S))
    # two equivalent composites of morphism terms
    one = make_graph(("a",), ())
    g1 = morphism_from_dict(one, A, {"a": "u"})
    h = morphism_from_dict(A, A, {"u": "v", "v": "u"})
    t1 = comp_term(mor_term(g1), mor_term(h))
    t2 = mor_term(compose(h, g1))
    assert interpret(t1, S) == interpret(t2, S)


def test_graph_power_swaps_complete_graph():
    L, A, S, I = _graph_f_setup("swap")
    one = make_graph(("a",), ())
    t = pow_term(one, sym_term("f", L))
    m = interpret(t, S)
    # (f_A)^1 acts on the complete graph A^1 by the vertex part of f_A
    assert m.dom == hom(tensor(one, I), A)
    assert m.vmap == (1, 0)


def test_met_diameter_example_both_ways():
    two = discrete(BaseTag.FinMet, 2)
    two1 = two_eps(Fraction(1))
    L = Language(BaseTag.FinMet, (("f", two, two1),))
    delta = morphism_from_dict(two, two1, {"0:*": "x0", "1:*": "x1"})
    for d, expect in [(Fraction(1), True), (Fraction(2), False)]:
        A = make_metric(("u", "v"), {("u", "v"): d})
        H2, H21 = hom(two, A), hom(two1, A)
        idx = {f: i for i, f in enumerate(hom_functions(two1, A))}
        vmap = []
        for f in hom_functions(two, A):
            vmap.append(idx[f] if f in idx else idx[(f[0], f[0])])
        S = Structure(L, A, (("f", VMorphism(H2, H21, tuple(vmap))),))
        eq = Equation(
            "a",
            comp_term(mor_term(delta), sym_term("f", L)),
            mor_term(identity(two)),
        )
        v = satisfies(S, eq)
        assert v.ok == expect
        if not expect:
            assert v.witness == "[u,v]"


def test_trivial_equation_holds():
    L, A, S, I = _graph_f_setup("swap")
    f = sym_term("f", L)
    assert satisfies(S, Equation("t", f, f)).ok


def test_gra_gap_unenriched_vacuous_enriched_fails():
    # empty language; projections from the tensor square of an edge
    L0 = Language(BaseTag.FinGraph, ())
    G = make_graph(("g0", "g1"), (("g0", "g1"),))
    GG = tensor(G, G)
    from eua.vbase import tensor_projections

    p1, p2 = tensor_projections(G, G)
    A = make_graph(("u", "v"), ())  # edgeless two vertices
    S = Structure(L0, A, ())
    eq = Equation("gap", mor_term(p1), mor_term(p2))
    un = satisfies(S, eq, "unenriched")
    assert un.status == "vacuous"
    en = satisfies(S, eq, "enriched")
    assert en.status == "fails"
    assert en.witness == "[u,v]"
    assert en.witness_sort == "vertex"
    # single looped vertex is a model in both modes
    U = make_graph(("w",), (("w", "w"),))
    SU = Structure(L0, U, ())
    assert satisfies(SU, eq, "enriched").ok
    assert satisfies(SU, eq, "unenriched").ok


def test_enriched_unenriched_agree_when_unit_generates():
    two = discrete(BaseTag.FinMet, 2)
    two1 = two_eps(Fraction(1))
    L = Language(BaseTag.FinMet, (("f", two, two1),))
    delta = morphism_from_dict(two, two1, {"0:*": "x0", "1:*": "x1"})
    eq = Equation(
        "a",
        comp_term(mor_term(delta), sym_term("f", L)),
        mor_term(identity(two)),
    )
    for d in (Fraction(1), Fraction(2)):
        A = make_metric(("u", "v"), {("u", "v"): d})
        H2, H21 = hom(two, A), hom(two1, A)
        for tab in enumerate_morphisms(H2, H21):
            S = Structure(L, A, (("f", tab),))
            assert (
                satisfies(S, eq, "enriched").ok
                == satisfies(S, eq, "unenriched").ok
            )


def test_power_preserves_enriched_satisfaction():
    # if S satisfies (s=t) enriched then it satisfies (s^Z=t^Z)
    L, A, S, I = _graph_f_setup("id")
    f = sym_term("f", L)
    eq = Equation("e", f, mor_term(identity(I)))
    assert satisfies(S, eq).ok
    for Z in enumerate_objects(BaseTag.FinGraph, 2, include_empty=False):
        eqZ = Equation(
            "eZ", pow_term(Z, eq.lhs), pow_term(Z, eq.rhs)
        )
        assert satisfies(S, eqZ).ok


def test_power_coherence_pow_of_composite():
    L, A, S, I = _graph_f_setup("swap")
    f = sym_term("f", L)
    one = make_graph(("a",), ())
    lhs = pow_term(one, comp_term(f, f))
    rhs = comp_term(pow_term(one, f), pow_term(one, f))
    assert interpret(lhs, S) == interpret(rhs, S)


def test_tuple_projection_law():
    X = make_set(("a", "b"))
    L = Language(BaseTag.FinSet, (("g", X, unit(BaseTag.FinSet)),))
    A = make_set(("p", "q"))
    HX, HI = hom(X, A), hom(unit(BaseTag.FinSet), A)
    tab = list(enumerate_morphisms(HX, HI))[1]
    S = Structure(L, A, (("g", tab),))
    g = sym_term("g", L)
    tup = tuple_term([g, comp_term(g, mor_term(identity(X)))])
    C, injs = coproduct(
        BaseTag.FinSet, [unit(BaseTag.FinSet), unit(BaseTag.FinSet)]
    )
    for i, inj in enumerate(injs):
        proj = comp_term(mor_term(inj), tup)
        assert interpret(proj, S) == interpret(tup.parts[i], S)


def test_is_model_empty_theory():
    L0 = Language(BaseTag.FinSet, ())
    S = Structure(L0, make_set(("a",)), ())
    T = Theory("empty", L0, ())
    assert is_model(S, T).ok


def test_naturality_audit_positive_and_negative():
    L, A, S, I = _graph_f_setup("id")
    f = sym_term("f", L)
    ff = comp_term(f, f)
    # identity homomorphism
    assert naturality_audit(ff, identity(A), S, S).ok
    # swap is a homomorphism of the identity structure
    swap = morphism_from_dict(A, A, {"u": "v", "v": "u"})
    assert naturality_audit(ff, swap, S, S).ok
    # negative control: a non-homomorphism is rejected up front
    H = hom(I, A)
    S_swap = Structure(L, A, (("f", VMorphism(H, H, (1, 0))),))
    v = naturality_audit(ff, identity(A), S, S_swap)
    assert not v.ok
