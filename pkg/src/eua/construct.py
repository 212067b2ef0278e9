"""Structure-level constructions, Birkhoff closure audits, theory transforms.

Products, powers, induced substructures, and base-split quotients of
structures; exhaustive model-class comparison; rewriting theories to
restrict output arities or eliminate power terms over a generating family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .language import Language, Structure, Verdict, is_homomorphism, validate_structure
from .semantics import interpret, is_model, satisfies
from .term import (
    CompT,
    Equation,
    MorT,
    PowT,
    Term,
    Theory,
    TupleT,
    comp_term,
    mor_term,
    pow_term,
)
from .vbase import (
    BaseTag,
    BudgetExceeded,
    Deadline,
    DEFAULT_MET_VALUES,
    ECoprod,
    ETensor,
    Leaf,
    VMorphism,
    VObject,
    coherence_iso,
    compose,
    coproduct,
    coproduct_copairing,
    curry_iso,
    enumerate_morphisms,
    enumerate_objects,
    find_section,
    hom,
    hom_functions,
    hom_post,
    identity,
    is_epi,
    pairing_iso,
    product,
    product_pairing,
    tensor,
    unit,
)


class TransformError(Exception):
    pass


class UnsupportedShape(TransformError):
    pass


# -- structure constructions ------------------------------------------------


def product_structure(Ss) -> tuple[Structure, tuple[VMorphism, ...]]:
    """Product carrier with componentwise tables; returns the projections."""
    Ss = list(Ss)
    L = Ss[0].language
    for S in Ss:
        if S.language != L:
            raise TransformError("language mismatch")
    base = L.base
    P, projs = product(base, [S.carrier for S in Ss])
    tables = []
    for (s, X, Y) in L.symbols:
        fwd_x, _ = pairing_iso(X, [S.carrier for S in Ss])
        _, bwd_y = pairing_iso(Y, [S.carrier for S in Ss])
        QX, qx_projs = product(base, [hom(X, S.carrier) for S in Ss])
        comp_tables = [
            compose(S.table(s), q) for S, q in zip(Ss, qx_projs)
        ]
        QY, qy_projs = product(base, [hom(Y, S.carrier) for S in Ss])
        paired = product_pairing(comp_tables, QY, qy_projs)
        tables.append((s, compose(bwd_y, compose(paired, fwd_x))))
    return Structure(L, P, tuple(tables)), projs


def power_structure(S: Structure, Z: VObject) -> Structure:
    """Carrier hom(Z, A) with tables conjugated through the swap of powers."""
    L = S.language
    A = S.carrier
    if Z.base is not A.base:
        raise TransformError("base mismatch")
    AZ = hom(Z, A)
    tables = []
    for (s, X, Y) in L.symbols:
        # hom(X, A^Z) ~ hom(Z (x) X, A) ~ hom(Z, A^X) -- swap via two currys
        swap_x = _power_swap(Z, X, A)
        swap_y = _power_swap(Z, Y, A)
        inner = hom_post(Z, S.table(s))
        tables.append((s, compose(_inv(swap_y), compose(inner, swap_x))))
    return Structure(L, AZ, tuple(tables))


def _power_swap(Z: VObject, X: VObject, A: VObject) -> VMorphism:
    """hom(X, hom(Z, A)) -> hom(Z, hom(X, A)) by exchanging arguments."""
    AZ = hom(Z, A)
    AX = hom(X, A)
    src = hom(X, AZ)
    dst = hom(Z, AX)
    fns_src = hom_functions(X, AZ)
    fns_AZ = hom_functions(Z, A)
    fns_AX = {f: i for i, f in enumerate(hom_functions(X, A))}
    fns_dst = {f: i for i, f in enumerate(hom_functions(Z, AX))}
    vmap = []
    for u in fns_src:
        flipped = tuple(
            fns_AX[tuple(fns_AZ[u[x]][z] for x in range(X.size))]
            for z in range(Z.size)
        )
        vmap.append(fns_dst[flipped])
    emap = None
    if Z.base is BaseTag.FinMGraph:
        from .vbase import hom_edge_data

        ed_src = hom_edge_data(X, AZ)
        ed_AZ = hom_edge_data(Z, A)
        ed_AX = {e: k for k, e in enumerate(hom_edge_data(X, A))}
        ed_dst = {e: k for k, e in enumerate(hom_edge_data(Z, AX))}
        fns_src_idx = {f: i for i, f in enumerate(fns_src)}
        emap = []
        for (i, j, assign) in ed_src:
            # assign: per edge of X, an edge of AZ = hom(Z, A)
            zparts = []
            for kz, (_, zs, zt) in enumerate(Z.qedges):
                xassign = tuple(
                    ed_AZ[assign[kx]][2][kz] for kx in range(len(X.qedges))
                )
                fsrc = fns_AX[
                    tuple(fns_AZ[fns_src[i][x]][zs] for x in range(X.size))
                ]
                ftgt = fns_AX[
                    tuple(fns_AZ[fns_src[j][x]][zt] for x in range(X.size))
                ]
                zparts.append(ed_AX[(fsrc, ftgt, xassign)])
            emap.append(ed_dst[(vmap[i], vmap[j], tuple(zparts))])
        emap = tuple(emap)
    return VMorphism(src, dst, tuple(vmap), emap)


def _inv(iso: VMorphism) -> VMorphism:
    inv_v = [0] * iso.cod.size
    for i, j in enumerate(iso.vmap):
        inv_v[j] = i
    inv_e = None
    if iso.base is BaseTag.FinMGraph:
        inv_e = [0] * len(iso.cod.qedges)
        for i, j in enumerate(iso.emap):
            inv_e[j] = i
        inv_e = tuple(inv_e)
    return VMorphism(iso.cod, iso.dom, tuple(inv_v), inv_e)


def induced_substructure(
    S: Structure, subset, edge_subset=None
) -> Optional[tuple[Structure, VMorphism]]:
    """The full substructure on a carrier subset, when the tables restrict.

    subset lists carrier element names; for quivers edge_subset defaults to
    all edges with endpoints inside. Returns (substructure, inclusion) or
    None when some table leaves the restricted hom elements.
    """
    A = S.carrier
    base = A.base
    keep = [A.index(x) for x in subset]
    keep_set = set(keep)
    names = tuple(A.carrier[i] for i in keep)
    back = {b: k for k, b in enumerate(keep)}
    if base is BaseTag.FinSet:
        B = VObject(base, names)
    elif base is BaseTag.FinPos:
        B = VObject(
            base,
            names,
            leq=frozenset(
                (back[i], back[j])
                for (i, j) in A.leq
                if i in keep_set and j in keep_set
            ),
        )
    elif base is BaseTag.FinMet:
        B = VObject(
            base,
            names,
            dist=tuple(tuple(A.dist[i][j] for j in keep) for i in keep),
        )
    elif base is BaseTag.FinGraph:
        B = VObject(
            base,
            names,
            edges=frozenset(
                (back[i], back[j])
                for (i, j) in A.edges
                if i in keep_set and j in keep_set
            ),
        )
    else:
        enames = A.edge_names()
        if edge_subset is None:
            ekeep = [
                k
                for k, (_, s, t) in enumerate(A.qedges)
                if s in keep_set and t in keep_set
            ]
        else:
            ekeep = [list(enames).index(e) for e in edge_subset]
            for k in ekeep:
                (_, s, t) = A.qedges[k]
                if s not in keep_set or t not in keep_set:
                    raise TransformError("edge subset leaves vertex subset")
        B = VObject(
            base,
            names,
            qedges=tuple(
                (A.qedges[k][0], back[A.qedges[k][1]], back[A.qedges[k][2]])
                for k in ekeep
            ),
        )
        incl = VMorphism(B, A, tuple(keep), tuple(ekeep))
        return _restrict_tables(S, B, incl)
    incl = VMorphism(B, A, tuple(keep))
    return _restrict_tables(S, B, incl)


def _restrict_tables(S: Structure, B: VObject, incl: VMorphism):
    L = S.language
    tables = []
    for (s, X, Y) in L.symbols:
        up_x = hom_post(X, incl)  # hom(X, B) -> hom(X, A), injective
        up_y = hom_post(Y, incl)
        f = S.table(s)
        HYB = up_y.dom
        img = {v: i for i, v in enumerate(up_y.vmap)}
        vmap = []
        for i in range(up_x.dom.size):
            target = f.vmap[up_x.vmap[i]]
            if target not in img:
                return None
            vmap.append(img[target])
        emap = None
        if B.base is BaseTag.FinMGraph:
            eimg = {v: i for i, v in enumerate(up_y.emap)}
            emap = []
            for k in range(len(up_x.dom.qedges)):
                target = f.emap[up_x.emap[k]]
                if target not in eimg:
                    return None
                emap.append(eimg[target])
            emap = tuple(emap)
        tables.append((s, VMorphism(up_x.dom, HYB, tuple(vmap), emap)))
    sub = Structure(L, B, tuple(tables))
    return sub, incl


def enumerate_induced_substructures(S: Structure):
    """All proper-or-full induced substructures on nonempty subsets."""
    A = S.carrier
    out = []
    elems = list(A.carrier)
    for r in range(len(elems) + 1):
        for subset in itertools.combinations(elems, r):
            res = induced_substructure(S, subset)
            if res is not None:
                out.append(res)
    return out


def check_v_split_quotient(
    e: VMorphism, S: Structure, T: Structure
) -> Verdict:
    """e must be a homomorphism, epi on carriers, with a base-level section."""
    h = is_homomorphism(e, S, T)
    if not h.ok:
        return Verdict(False, f"not a homomorphism: {h.reason}")
    if not is_epi(e):
        return Verdict(False, "not an epimorphism on the carrier")
    section = find_section(e)
    if section is None:
        return Verdict(False, "no base-level section")
    return Verdict(True, witness=section)


# -- closure audit -----------------------------------------------------------


@dataclass(frozen=True)
class ClosureReport:
    products_ok: bool
    powers_ok: bool
    substructures_ok: bool
    v_split_ok: bool
    violations: tuple[tuple[str, str], ...]

    @property
    def ok(self):
        return (
            self.products_ok
            and self.powers_ok
            and self.substructures_ok
            and self.v_split_ok
        )

    def __bool__(self):
        return self.ok


def closure_audit(
    T: Theory,
    instances,
    power_bound: int = 2,
    mode: str = "enriched",
    met_values=DEFAULT_MET_VALUES,
    budget_ms: Optional[int] = None,
) -> ClosureReport:
    """Audit that models are closed under products, powers, substructures,
    and base-split quotients, over the given structures."""
    deadline = Deadline(budget_ms)
    instances = list(instances)
    violations = []
    models = [S for S in instances if is_model(S, T, mode).ok]

    products_ok = True
    for S1 in models:
        for S2 in models:
            deadline.check("closure products")
            P, projs = product_structure([S1, S2])
            for pr, Sk in zip(projs, (S1, S2)):
                if not is_homomorphism(pr, P, Sk).ok:
                    products_ok = False
                    violations.append(("products", "projection not hom"))
            if not is_model(P, T, mode).ok:
                products_ok = False
                violations.append(
                    ("products", f"product of models is not a model")
                )

    powers_ok = True
    zs = enumerate_objects(
        T.language.base, power_bound, met_values, include_empty=False
    )
    for S in models:
        for Z in zs:
            deadline.check("closure powers")
            PS = power_structure(S, Z)
            if not is_model(PS, T, mode).ok:
                powers_ok = False
                violations.append(
                    ("powers", f"power by {Z.carrier} is not a model")
                )

    substructures_ok = True
    for S in models:
        deadline.check("closure substructures")
        for sub, incl in enumerate_induced_substructures(S):
            if not is_homomorphism(incl, sub, S).ok:
                substructures_ok = False
                violations.append(("substructures", "inclusion not hom"))
            if not is_model(sub, T, mode).ok:
                substructures_ok = False
                violations.append(
                    ("substructures", f"substructure on "
                     f"{sub.carrier.carrier} is not a model")
                )

    v_split_ok = True
    for S in models:
        for Tgt in instances:
            deadline.check("closure quotients")
            for e in enumerate_morphisms(S.carrier, Tgt.carrier):
                v = check_v_split_quotient(e, S, Tgt)
                if v.ok and not is_model(Tgt, T, mode).ok:
                    v_split_ok = False
                    violations.append(
                        ("v_split_quotients",
                         f"split quotient onto {Tgt.carrier.carrier} "
                         "is not a model")
                    )
    return ClosureReport(
        products_ok, powers_ok, substructures_ok, v_split_ok,
        tuple(violations),
    )


# -- theory transforms -------------------------------------------------------


def _family_jointly_epi(hs, Y: VObject) -> bool:
    if not hs:
        return Y.size == 0
    C, injs = coproduct(Y.base, [h.dom for h in hs])
    cot = coproduct_copairing(hs, C, injs)
    return is_epi(cot)


def transform_output_arities(T: Theory, gens) -> Theory:
    """Replace each equation by its family of postcompositions onto gens."""
    gens = list(gens)
    new_eqs = []
    for eq in T.equations:
        X, Y = eq.arity
        hs = [
            h for G in gens for h in enumerate_morphisms(G, Y)
        ]
        if not _family_jointly_epi(hs, Y):
            raise TransformError(
                f"family over {eq.name} is not jointly epimorphic"
            )
        for k, h in enumerate(hs):
            new_eqs.append(
                Equation(
                    f"{eq.name}.{k}",
                    comp_term(mor_term(h), eq.lhs),
                    comp_term(mor_term(h), eq.rhs),
                )
            )
    return Theory(f"{T.name}_outputs", T.language, tuple(new_eqs))


def _has_pow(t: Term) -> bool:
    if isinstance(t, PowT):
        return True
    if isinstance(t, CompT):
        return _has_pow(t.after) or _has_pow(t.first)
    if isinstance(t, TupleT):
        return any(_has_pow(p) for p in t.parts)
    return False


def _unit_power_free(t: Term, base: BaseTag) -> Term:
    """Replace t^I by unitor-conjugation of t, recursively erasing unit powers."""
    I = unit(base)
    if isinstance(t, PowT) and t.by == I:
        body = _unit_power_free(t.body, base)
        X, Y = body.arity
        lam_x = coherence_iso(
            ETensor((Leaf(I), Leaf(X))), Leaf(X), base
        )
        lam_y_inv = coherence_iso(
            Leaf(Y), ETensor((Leaf(I), Leaf(Y))), base
        )
        # hom(I (x) X, A) -> hom(X, A) is precomposition with lam_x^{-1},
        # realized as the term of the coherence morphism itself.
        return comp_term(
            mor_term(lam_y_inv), comp_term(body, mor_term(_inv(lam_x)))
        )
    if isinstance(t, CompT):
        return comp_term(
            _unit_power_free(t.after, base), _unit_power_free(t.first, base)
        )
    if isinstance(t, TupleT):
        from .term import tuple_term

        return tuple_term([_unit_power_free(p, base) for p in t.parts])
    return t


def transform_eliminate_powers(T: Theory, gens) -> Theory:
    """Rewrite top-level power equations (t^Z = s) over a generating family.

    Each such equation becomes, for every z: G -> Z with G in gens,
    t^G o (z (x) X) = (z (x) Y) o s.  With gens = {unit} the remaining unit
    powers are erased by unitor conjugation, so no power terms survive.
    """
    gens = list(gens)
    base = T.language.base
    I = unit(base)
    only_unit = gens == [I]
    new_eqs = []
    for eq in T.equations:
        sides = (eq.lhs, eq.rhs)
        powered = [t for t in sides if isinstance(t, PowT)]
        if not powered:
            if _has_pow(eq.lhs) or _has_pow(eq.rhs):
                raise UnsupportedShape(
                    f"{eq.name}: power terms below the top level"
                )
            new_eqs.append(eq)
            continue
        pw = powered[0]
        other = sides[1] if sides[0] is pw else sides[0]
        if _has_pow(other) or _has_pow(pw.body):
            raise UnsupportedShape(
                f"{eq.name}: power terms below the top level"
            )
        Z = pw.by
        t = pw.body
        X, Y = t.arity
        k = 0
        for G in gens:
            for z in enumerate_morphisms(G, Z):
                zX = _tensor_morphism(z, identity(X))
                zY = _tensor_morphism(z, identity(Y))
                lhs = comp_term(pow_term(G, t), mor_term(zX))
                rhs = comp_term(mor_term(zY), other)
                if only_unit:
                    lhs = _unit_power_free(lhs, base)
                new_eqs.append(Equation(f"{eq.name}.{k}", lhs, rhs))
                k += 1
    return Theory(f"{T.name}_powers", T.language, tuple(new_eqs))


def _tensor_morphism(f: VMorphism, g: VMorphism) -> VMorphism:
    """f (x) g on tensor carriers."""
    Tdom = tensor(f.dom, g.dom)
    Tcod = tensor(f.cod, g.cod)
    n2 = g.dom.size
    m2 = g.cod.size
    vmap = tuple(
        f.vmap[i // n2] * m2 + g.vmap[i % n2] for i in range(Tdom.size)
    )
    emap = None
    if f.base is BaseTag.FinMGraph:
        e2 = len(g.dom.qedges)
        f2 = len(g.cod.qedges)
        emap = tuple(
            f.emap[k // e2] * f2 + g.emap[k % e2]
            for k in range(len(Tdom.qedges))
        )
    return VMorphism(Tdom, Tcod, vmap, emap)


# -- exhaustive model comparison ---------------------------------------------


def enumerate_structures(
    L: Language,
    carrier_bound: int,
    met_values=DEFAULT_MET_VALUES,
    max_structures: int = 200000,
    budget_ms: Optional[int] = None,
):
    """All structures over carriers up to the bound, tables exhausted."""
    deadline = Deadline(budget_ms)
    count = 0
    for A in enumerate_objects(L.base, carrier_bound, met_values):
        pools = []
        for (s, X, Y) in L.symbols:
            pools.append(
                list(enumerate_morphisms(hom(X, A), hom(Y, A)))
            )
        for combo in itertools.product(*pools):
            deadline.check("enumerate_structures")
            count += 1
            if count > max_structures:
                raise BudgetExceeded(
                    f"more than {max_structures} structures at bound "
                    f"{carrier_bound}"
                )
            yield Structure(
                L, A, tuple((sym[0], m) for sym, m in zip(L.symbols, combo))
            )


def models_equal_up_to(
    T1: Theory,
    T2: Theory,
    bound: int,
    mode: str = "enriched",
    met_values=DEFAULT_MET_VALUES,
    max_structures: int = 200000,
    budget_ms: Optional[int] = None,
) -> Verdict:
    """Compare model classes by exhausting structures up to the bound."""
    if T1.language != T2.language:
        return Verdict(False, "different languages")
    for S in enumerate_structures(
        T1.language, bound, met_values, max_structures, budget_ms
    ):
        m1 = is_model(S, T1, mode).ok
        m2 = is_model(S, T2, mode).ok
        if m1 != m2:
            return Verdict(
                False,
                f"model of {'T1' if m1 else 'T2'} only",
                witness=S,
            )
    return Verdict(True)
