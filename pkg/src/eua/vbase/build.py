"""Object constructors: raw builders, monoidal/tensor, products, coproducts.

Carrier conventions (deterministic, structural):
  - tensor is binary and left-nested; elements are named "(x,y)";
  - n-ary product elements are named "(x1,...,xn)";
  - coproduct elements are tagged "i:x";
  - the unit carrier is ("*",).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from ..values import INF, d_add, d_max, is_dist
from .core import BaseError, BaseMismatch, BaseTag, VMorphism, VObject


# -- raw constructors ---------------------------------------------------


def make_set(names) -> VObject:
    return VObject(BaseTag.FinSet, tuple(names))


def make_poset(names, le_pairs) -> VObject:
    """Poset from generating pairs; reflexive-transitive closure is applied."""
    names = tuple(names)
    idx = {x: i for i, x in enumerate(names)}
    rel = {(i, i) for i in range(len(names))}
    rel.update((idx[a], idx[b]) for a, b in le_pairs)
    changed = True
    while changed:
        changed = False
        for (i, j) in list(rel):
            for (k, l) in list(rel):
                if k == j and (i, l) not in rel:
                    rel.add((i, l))
                    changed = True
    return VObject(BaseTag.FinPos, names, leq=frozenset(rel))


def make_metric(names, dist_pairs, default=INF) -> VObject:
    """Metric space from named pair distances; unset pairs get `default`."""
    names = tuple(names)
    idx = {x: i for i, x in enumerate(names)}
    n = len(names)
    mat = [[default] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = Fraction(0)
    for (a, b), v in dist_pairs.items():
        if not is_dist(v):
            raise BaseError(f"bad distance {v!r}")
        mat[idx[a]][idx[b]] = v
        mat[idx[b]][idx[a]] = v
    return VObject(
        BaseTag.FinMet, names, dist=tuple(tuple(row) for row in mat)
    )


def make_graph(names, edge_pairs) -> VObject:
    """Symmetric graph; edges closed under swap automatically."""
    names = tuple(names)
    idx = {x: i for i, x in enumerate(names)}
    e = set()
    for (a, b) in edge_pairs:
        e.add((idx[a], idx[b]))
        e.add((idx[b], idx[a]))
    return VObject(BaseTag.FinGraph, names, edges=frozenset(e))


def make_quiver(names, named_edges) -> VObject:
    """Directed multigraph from (edge_name, src, tgt) triples."""
    names = tuple(names)
    idx = {x: i for i, x in enumerate(names)}
    q = tuple((e, idx[s], idx[t]) for (e, s, t) in named_edges)
    return VObject(BaseTag.FinMGraph, names, qedges=q)


# -- distinguished objects ----------------------------------------------


@lru_cache(maxsize=None)
def unit(base: BaseTag) -> VObject:
    """The monoidal unit: a point; for graph bases, a point with a loop."""
    if base is BaseTag.FinSet:
        return make_set(("*",))
    if base is BaseTag.FinPos:
        return make_poset(("*",), ())
    if base is BaseTag.FinMet:
        return make_metric(("*",), {})
    if base is BaseTag.FinGraph:
        return make_graph(("*",), (("*", "*"),))
    return make_quiver(("*",), (("loop", "*", "*"),))


def initial(base: BaseTag) -> VObject:
    return coproduct(base, [])[0]


def terminal(base: BaseTag) -> VObject:
    return product(base, [])[0]


def discrete(base: BaseTag, n: int) -> VObject:
    """The coproduct of n copies of the unit."""
    obj, _ = coproduct(base, [unit(base)] * n)
    return obj


def chain(n: int) -> VObject:
    names = tuple(f"x{i}" for i in range(n))
    return make_poset(names, [(f"x{i}", f"x{i+1}") for i in range(n - 1)])


def two_eps(eps) -> VObject:
    """Two-point metric space at distance eps (eps = 0 collapses to a point)."""
    if eps == Fraction(0):
        return make_metric(("x0",), {})
    return make_metric(("x0", "x1"), {("x0", "x1"): eps})


def path(n: int) -> VObject:
    """The path quiver on n vertices: v0 -> v1 -> ... -> v(n-1)."""
    names = tuple(f"v{i}" for i in range(n))
    edges = [(f"e{i+1}", f"v{i}", f"v{i+1}") for i in range(n - 1)]
    return make_quiver(names, edges)


# -- tensor ---------------------------------------------------------------


def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


@lru_cache(maxsize=None)
def tensor(X: VObject, Y: VObject) -> VObject:
    """Monoidal product: cartesian except FinMet, which uses the +-metric."""
    if X.base is not Y.base:
        raise BaseMismatch(f"{X.base} vs {Y.base}")
    base = X.base
    names = tuple(
        _pair(a, b) for a in X.carrier for b in Y.carrier
    )
    nY = Y.size

    def pi(i):  # index of (X_i0, Y_i1)
        return i[0] * nY + i[1]

    if base is BaseTag.FinSet:
        return VObject(base, names)
    if base is BaseTag.FinPos:
        rel = frozenset(
            (pi((i, k)), pi((j, l)))
            for (i, j) in X.leq
            for (k, l) in Y.leq
        )
        return VObject(base, names, leq=rel)
    if base is BaseTag.FinMet:
        n = len(names)
        mat = [[None] * n for _ in range(n)]
        for i1 in range(X.size):
            for i2 in range(Y.size):
                for j1 in range(X.size):
                    for j2 in range(Y.size):
                        mat[pi((i1, i2))][pi((j1, j2))] = d_add(
                            X.dist[i1][j1], Y.dist[i2][j2]
                        )
        return VObject(base, names, dist=tuple(tuple(r) for r in mat))
    if base is BaseTag.FinGraph:
        e = frozenset(
            (pi((i, k)), pi((j, l)))
            for (i, j) in X.edges
            for (k, l) in Y.edges
        )
        return VObject(base, names, edges=e)
    q = tuple(
        (_pair(e1, e2), pi((s1, s2)), pi((t1, t2)))
        for (e1, s1, t1) in X.qedges
        for (e2, s2, t2) in Y.qedges
    )
    return VObject(base, names, qedges=q)


def tensor_projections(X: VObject, Y: VObject) -> tuple[VMorphism, VMorphism]:
    """Projections out of X (x) Y for the cartesian bases.

    Not available for FinMet (the +-tensor is not a product there).
    """
    if X.base is BaseTag.FinMet:
        raise BaseError("FinMet tensor has no projections")
    T = tensor(X, Y)
    nY = Y.size
    p1v = tuple(i // nY for i in range(T.size))
    p2v = tuple(i % nY for i in range(T.size))
    e1 = e2 = None
    if X.base is BaseTag.FinMGraph:
        nEY = len(Y.qedges)
        e1 = tuple(k // nEY for k in range(len(T.qedges)))
        e2 = tuple(k % nEY for k in range(len(T.qedges)))
    return VMorphism(T, X, p1v, e1), VMorphism(T, Y, p2v, e2)


# -- product --------------------------------------------------------------


def _tup(parts) -> str:
    return "(" + ",".join(parts) + ")"


def product(base: BaseTag, Xs) -> tuple[VObject, tuple[VMorphism, ...]]:
    """Categorical product with projections; FinMet uses the max metric."""
    return _product(base, tuple(Xs))


@lru_cache(maxsize=None)
def _product(base: BaseTag, Xs) -> tuple[VObject, tuple[VMorphism, ...]]:
    Xs = list(Xs)
    for X in Xs:
        if X.base is not base:
            raise BaseMismatch(f"{X.base} vs {base}")
    tuples = list(itertools.product(*[range(X.size) for X in Xs]))
    names = tuple(
        _tup([Xs[k].carrier[t[k]] for k in range(len(Xs))]) for t in tuples
    )
    pos = {t: i for i, t in enumerate(tuples)}

    if base is BaseTag.FinSet:
        P = VObject(base, names)
    elif base is BaseTag.FinPos:
        rel = frozenset(
            (pos[a], pos[b])
            for a in tuples
            for b in tuples
            if all((a[k], b[k]) in Xs[k].leq for k in range(len(Xs)))
        )
        P = VObject(base, names, leq=rel)
    elif base is BaseTag.FinMet:
        mat = tuple(
            tuple(
                d_max([Xs[k].dist[a[k]][b[k]] for k in range(len(Xs))])
                for b in tuples
            )
            for a in tuples
        )
        P = VObject(base, names, dist=mat)
    elif base is BaseTag.FinGraph:
        e = frozenset(
            (pos[a], pos[b])
            for a in tuples
            for b in tuples
            if all((a[k], b[k]) in Xs[k].edges for k in range(len(Xs)))
        )
        P = VObject(base, names, edges=e)
    else:
        etuples = list(
            itertools.product(*[range(len(X.qedges)) for X in Xs])
        )
        q = tuple(
            (
                _tup([Xs[k].qedges[t[k]][0] for k in range(len(Xs))]),
                pos[tuple(Xs[k].qedges[t[k]][1] for k in range(len(Xs)))],
                pos[tuple(Xs[k].qedges[t[k]][2] for k in range(len(Xs)))],
            )
            for t in etuples
        )
        P = VObject(base, names, qedges=q)

    projections = []
    for k, X in enumerate(Xs):
        vmap = tuple(t[k] for t in tuples)
        emap = None
        if base is BaseTag.FinMGraph:
            etuples = list(
                itertools.product(*[range(len(Z.qedges)) for Z in Xs])
            )
            emap = tuple(t[k] for t in etuples)
        projections.append(VMorphism(P, X, vmap, emap))
    return P, tuple(projections)


def product_pairing(fs, P: VObject, projections) -> VMorphism:
    """The unique map T -> P with projections[k] o it = fs[k]."""
    T = fs[0].dom
    vmap = []
    for i in range(T.size):
        images = tuple(f.vmap[i] for f in fs)
        target = _tup([f.cod.carrier[images[k]] for k, f in enumerate(fs)])
        vmap.append(P.index(target))
    emap = None
    if T.base is BaseTag.FinMGraph:
        enames = [q[0] for q in P.qedges]
        emap = []
        for k in range(len(T.qedges)):
            nm = _tup([f.cod.qedges[f.emap[k]][0] for f in fs])
            emap.append(enames.index(nm))
        emap = tuple(emap)
    return VMorphism(T, P, tuple(vmap), emap)


# -- coproduct ------------------------------------------------------------


def _tag(i: int, name: str) -> str:
    return f"{i}:{name}"


def coproduct(base: BaseTag, Xs) -> tuple[VObject, tuple[VMorphism, ...]]:
    """Disjoint union with injections; FinMet cross-distance is INF."""
    return _coproduct(base, tuple(Xs))


@lru_cache(maxsize=None)
def _coproduct(base: BaseTag, Xs) -> tuple[VObject, tuple[VMorphism, ...]]:
    Xs = list(Xs)
    for X in Xs:
        if X.base is not base:
            raise BaseMismatch(f"{X.base} vs {base}")
    names = tuple(
        _tag(i, a) for i, X in enumerate(Xs) for a in X.carrier
    )
    offsets = []
    off = 0
    for X in Xs:
        offsets.append(off)
        off += X.size

    if base is BaseTag.FinSet:
        C = VObject(base, names)
    elif base is BaseTag.FinPos:
        rel = set()
        for i, X in enumerate(Xs):
            rel.update(
                (offsets[i] + a, offsets[i] + b) for (a, b) in X.leq
            )
        C = VObject(base, names, leq=frozenset(rel))
    elif base is BaseTag.FinMet:
        n = len(names)
        mat = [[INF] * n for _ in range(n)]
        for i, X in enumerate(Xs):
            for a in range(X.size):
                for b in range(X.size):
                    mat[offsets[i] + a][offsets[i] + b] = X.dist[a][b]
        for i in range(n):
            mat[i][i] = Fraction(0)
        C = VObject(base, names, dist=tuple(tuple(r) for r in mat))
    elif base is BaseTag.FinGraph:
        e = set()
        for i, X in enumerate(Xs):
            e.update(
                (offsets[i] + a, offsets[i] + b) for (a, b) in X.edges
            )
        C = VObject(base, names, edges=frozenset(e))
    else:
        q = []
        for i, X in enumerate(Xs):
            q.extend(
                (_tag(i, e), offsets[i] + s, offsets[i] + t)
                for (e, s, t) in X.qedges
            )
        C = VObject(base, names, qedges=tuple(q))

    injections = []
    eoff = 0
    for i, X in enumerate(Xs):
        vmap = tuple(offsets[i] + a for a in range(X.size))
        emap = None
        if base is BaseTag.FinMGraph:
            emap = tuple(eoff + k for k in range(len(X.qedges)))
            eoff += len(X.qedges)
        injections.append(VMorphism(X, C, vmap, emap))
    return C, tuple(injections)


def coproduct_copairing(fs, C: VObject, injections) -> VMorphism:
    """The unique map C -> T with it o injections[k] = fs[k]."""
    T = fs[0].cod
    vmap = [0] * C.size
    for k, f in enumerate(fs):
        for i in range(f.dom.size):
            vmap[injections[k].vmap[i]] = f.vmap[i]
    emap = None
    if C.base is BaseTag.FinMGraph:
        emap = [0] * len(C.qedges)
        for k, f in enumerate(fs):
            for i in range(len(f.dom.qedges)):
                emap[injections[k].emap[i]] = f.emap[i]
        emap = tuple(emap)
    return VMorphism(C, T, tuple(vmap), emap)
