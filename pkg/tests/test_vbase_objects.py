"""Object constructors: units, tensors, products, coproducts, homs."""

from fractions import Fraction

import pytest

from eua.values import INF
from eua.vbase import (
    BaseError,
    BaseMismatch,
    BaseTag,
    VMorphism,
    VObject,
    chain,
    coproduct,
    coproduct_copairing,
    compose,
    discrete,
    enumerate_morphisms,
    hom,
    identity,
    make_graph,
    make_metric,
    make_poset,
    make_quiver,
    make_set,
    points,
    product,
    product_pairing,
    tensor,
    tensor_projections,
    terminal,
    two_eps,
    unit,
)


def test_unit_shapes():
    assert unit(BaseTag.FinSet).carrier == ("*",)
    g = unit(BaseTag.FinGraph)
    assert g.has_edge("*", "*")
    q = unit(BaseTag.FinMGraph)
    assert q.qedges == (("loop", 0, 0),)
    m = unit(BaseTag.FinMet)
    assert m.dist == ((Fraction(0),),)


def test_metric_validation():
    with pytest.raises(BaseError):
        make_metric(("a", "b"), {("a", "b"): Fraction(0)})
    with pytest.raises(BaseError):
        # triangle violation: 5 > 1 + 1
        make_metric(
            ("a", "b", "c"),
            {
                ("a", "b"): Fraction(1),
                ("b", "c"): Fraction(1),
                ("a", "c"): Fraction(5),
            },
        )
    # INF is absorbing, so one INF pair with short others violates
    with pytest.raises(BaseError):
        make_metric(
            ("a", "b", "c"),
            {("a", "b"): Fraction(1), ("b", "c"): Fraction(1)},
        )


def test_poset_closure_applied():
    P = make_poset(("a", "b", "c"), [("a", "b"), ("b", "c")])
    assert P.le("a", "c")
    with pytest.raises(BaseError):
        VObject(
            BaseTag.FinPos,
            ("a", "b"),
            leq=frozenset({(0, 0), (1, 1), (0, 1), (1, 0)}),
        )


def test_tensor_met_plus_metric():
    t = tensor(two_eps(Fraction(1)), two_eps(Fraction(1)))
    assert t.d("(x0,x0)", "(x0,x1)") == Fraction(1)
    assert t.d("(x0,x0)", "(x1,x1)") == Fraction(2)


def test_tensor_unit_is_isomorphic():
    for base in BaseTag:
        X = _sample(base)
        T = tensor(unit(base), X)
        assert T.size == X.size
        assert len(enumerate_morphisms(T, X)) == len(
            enumerate_morphisms(T, X)
        )


def test_tensor_graph_with_edgeless_is_edgeless():
    one = make_graph(("a",), ())
    G = make_graph(("u", "v"), (("u", "v"),))
    assert tensor(one, G).edges == frozenset()


def test_tensor_base_mismatch():
    with pytest.raises(BaseMismatch):
        tensor(make_set(("a",)), chain(1))


def test_product_empty_is_terminal():
    for base in BaseTag:
        T, projs = product(base, [])
        assert projs == ()
        assert T.size == 1


def test_product_met_max_metric():
    P, _ = product(BaseTag.FinMet, [two_eps(Fraction(1)), two_eps(Fraction(1))])
    assert P.d("(x0,x0)", "(x1,x1)") == Fraction(1)


def test_product_universal_property_small():
    # pairing bijection Hom(T, X) x Hom(T, Y) ~ Hom(T, X x Y)
    for base in (BaseTag.FinSet, BaseTag.FinPos, BaseTag.FinMet):
        X = _sample(base)
        Y = _sample(base)
        P, projs = product(base, [X, Y])
        for T in (unit(base), _sample(base)):
            pairs = [
                (f, g)
                for f in enumerate_morphisms(T, X)
                for g in enumerate_morphisms(T, Y)
            ]
            mediated = set()
            for (f, g) in pairs:
                u = product_pairing([f, g], P, projs)
                assert compose(projs[0], u) == f
                assert compose(projs[1], u) == g
                mediated.add(u)
            assert len(mediated) == len(pairs)
            assert mediated == set(enumerate_morphisms(T, P))


def test_coproduct_met_cross_distance_inf():
    C, _ = coproduct(BaseTag.FinMet, [unit(BaseTag.FinMet)] * 2)
    assert C.d("0:*", "1:*") is INF


def test_discrete_is_coproduct_of_units():
    D = discrete(BaseTag.FinMet, 2)
    assert D.carrier == ("0:*", "1:*")
    assert D.d("0:*", "1:*") is INF


def test_coproduct_pos_antichain():
    C, _ = coproduct(BaseTag.FinPos, [chain(1), chain(1)])
    assert not C.le("0:x0", "1:x0")
    assert not C.le("1:x0", "0:x0")


def test_coproduct_universal_property_small():
    for base in (BaseTag.FinSet, BaseTag.FinPos, BaseTag.FinGraph):
        X = _sample(base)
        Y = _sample(base)
        C, injs = coproduct(base, [X, Y])
        T = _sample(base)
        pairs = [
            (f, g)
            for f in enumerate_morphisms(X, T)
            for g in enumerate_morphisms(Y, T)
        ]
        mediated = set()
        for (f, g) in pairs:
            u = coproduct_copairing([f, g], C, injs)
            assert compose(u, injs[0]) == f
            assert compose(u, injs[1]) == g
            mediated.add(u)
        assert len(mediated) == len(pairs)
        assert mediated == set(enumerate_morphisms(C, T))


def test_hom_met_constants_at_sup_distance():
    H = hom(two_eps(Fraction(1)), two_eps(Fraction(2)))
    assert H.carrier == ("[x0,x0]", "[x1,x1]")
    assert H.d("[x0,x0]", "[x1,x1]") == Fraction(2)


def test_hom_graph_complete_from_edgeless_vertex():
    one = make_graph(("a",), ())
    A = make_graph(("u", "v"), (("u", "v"),))
    H = hom(one, A)
    assert len(H.edges) == 4  # complete with loops


def test_hom_unit_is_carrier():
    for base in BaseTag:
        A = _sample(base)
        H = hom(unit(base), A)
        assert H.size == A.size


def test_points_of_graph_are_looped_vertices():
    A = make_graph(("u", "v"), (("u", "v"), ("u", "u")))
    assert [p.as_dict()["*"] for p in points(A)] == ["u"]


def test_enumerate_pos_antichain_to_chain():
    anti = make_poset(("a", "b"), ())
    assert len(enumerate_morphisms(anti, chain(2))) == 4


def test_enumerate_to_terminal_is_singleton():
    for base in BaseTag:
        X = _sample(base)
        assert len(enumerate_morphisms(X, terminal(base))) == 1


def test_enumeration_matches_hom_carrier_for_generator_bases():
    from eua.vbase import hom_functions

    for base in (BaseTag.FinSet, BaseTag.FinPos, BaseTag.FinMet):
        X, A = _sample(base), _sample(base)
        assert len(enumerate_morphisms(X, A)) == len(hom_functions(X, A))


def test_quiver_morphism_edges_compose():
    Q = make_quiver(("a", "b", "c"), [("e1", "a", "b"), ("e2", "b", "c")])
    R = make_quiver(("x", "y"), [("f1", "x", "y"), ("f2", "y", "y")])
    f = None
    for m in enumerate_morphisms(Q, R):
        if m.as_dict() == {"a": "x", "b": "y", "c": "y"}:
            f = m
            break
    assert f is not None
    g = identity(R)
    assert compose(g, f).apply_edge("e1") == f.apply_edge("e1")


def _sample(base: BaseTag) -> VObject:
    if base is BaseTag.FinSet:
        return make_set(("a", "b"))
    if base is BaseTag.FinPos:
        return chain(2)
    if base is BaseTag.FinMet:
        return two_eps(Fraction(1))
    if base is BaseTag.FinGraph:
        return make_graph(("u", "v"), (("u", "v"),))
    return make_quiver(("a", "b"), [("e1", "a", "b")])
