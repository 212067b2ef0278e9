"""Internal homs, morphism enumeration, and the currying adjunction.

hom(X, A) is the internal hom [X, A]:
  FinSet   all functions;
  FinPos   monotone maps with the pointwise order;
  FinMet   nonexpanding maps with the sup metric;
  FinGraph ALL vertex functions, with (f,g) an edge iff every edge (x,y)
           of X has (f x, g y) an edge of A;
  FinMGraph vertices are all vertex functions and an edge f -> g is a choice,
           for every edge a: x -> y of X, of an edge f(x) -> g(y) of A.

Carriers are listed lexicographically by the image-index tuple, so hom
elements, enumerate_morphisms, and points all share one canonical order.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..values import d_le, d_max
from .core import BaseError, BaseMismatch, BaseTag, VMorphism, VObject
from .build import product, tensor, unit


def _fn_name(X: VObject, A: VObject, vmap: tuple[int, ...]) -> str:
    return "[" + ",".join(A.carrier[i] for i in vmap) + "]"


def _iter_vertex_functions(X: VObject, A: VObject):
    return itertools.product(range(A.size), repeat=X.size)


def _structure_maps(X: VObject, A: VObject):
    """All structure-preserving image tuples, in lex order (backtracking)."""
    base = X.base
    n = X.size
    if base is BaseTag.FinSet or n == 0:
        yield from _iter_vertex_functions(X, A)
        return
    if base is BaseTag.FinGraph:
        loops = [(i, i) in X.edges for i in range(n)]
        prior = [
            [j for j in range(i) if (i, j) in X.edges]
            for i in range(n)
        ]
        # symmetric, so (i, j) in edges iff (j, i) is
        vmap = [0] * n

        def ok(i, v):
            if loops[i] and (v, v) not in A.edges:
                return False
            for j in prior[i]:
                if (v, vmap[j]) not in A.edges:
                    return False
            return True

    elif base is BaseTag.FinPos:
        up = [[j for j in range(i) if (i, j) in X.leq] for i in range(n)]
        dn = [[j for j in range(i) if (j, i) in X.leq] for i in range(n)]
        vmap = [0] * n

        def ok(i, v):
            for j in up[i]:
                if (v, vmap[j]) not in A.leq:
                    return False
            for j in dn[i]:
                if (vmap[j], v) not in A.leq:
                    return False
            return True

    elif base is BaseTag.FinMet:
        vmap = [0] * n

        def ok(i, v):
            for j in range(i):
                if not d_le(A.dist[v][vmap[j]], X.dist[i][j]):
                    return False
            return True

    else:  # FinMGraph vertex parts are unconstrained
        yield from _iter_vertex_functions(X, A)
        return

    def backtrack(i):
        if i == n:
            yield tuple(vmap)
            return
        for v in range(A.size):
            if ok(i, v):
                vmap[i] = v
                yield from backtrack(i + 1)

    yield from backtrack(0)


@lru_cache(maxsize=None)
def hom_functions(X: VObject, A: VObject) -> tuple[tuple[int, ...], ...]:
    """Image tuples forming the carrier of hom(X, A), in canonical order."""
    if X.base is not A.base:
        raise BaseMismatch(f"{X.base} vs {A.base}")
    if X.base in (BaseTag.FinGraph, BaseTag.FinMGraph):
        return tuple(_iter_vertex_functions(X, A))
    return tuple(_structure_maps(X, A))


def _quiver_edge_candidates(A: VObject):
    by_endpoints: dict[tuple[int, int], list[int]] = {}
    for k, (_, s, t) in enumerate(A.qedges):
        by_endpoints.setdefault((s, t), []).append(k)
    return by_endpoints


@lru_cache(maxsize=None)
def hom_function_index(X: VObject, A: VObject) -> dict:
    return {f: i for i, f in enumerate(hom_functions(X, A))}


@lru_cache(maxsize=None)
def hom_edge_index(X: VObject, A: VObject) -> dict:
    return {e: k for k, e in enumerate(hom_edge_data(X, A))}


@lru_cache(maxsize=None)
def hom_edge_data(
    X: VObject, A: VObject
) -> tuple[tuple[int, int, tuple[int, ...]], ...]:
    """FinMGraph hom edges: (src fn index, tgt fn index, edge assignment)."""
    fns = hom_functions(X, A)
    cands = _quiver_edge_candidates(A)
    out = []
    for i, f in enumerate(fns):
        for j, g in enumerate(fns):
            pools = []
            for (_, s, t) in X.qedges:
                pool = cands.get((f[s], g[t]), [])
                if not pool:
                    pools = None
                    break
                pools.append(pool)
            if pools is None:
                continue
            for assign in itertools.product(*pools):
                out.append((i, j, assign))
    return tuple(out)


@lru_cache(maxsize=None)
def hom(X: VObject, A: VObject) -> VObject:
    """The internal hom [X, A]."""
    if X.base is not A.base:
        raise BaseMismatch(f"{X.base} vs {A.base}")
    base = X.base
    fns = hom_functions(X, A)
    names = tuple(_fn_name(X, A, f) for f in fns)
    if base is BaseTag.FinSet:
        return VObject(base, names)
    if base is BaseTag.FinPos:
        rel = frozenset(
            (i, j)
            for i, f in enumerate(fns)
            for j, g in enumerate(fns)
            if all((f[k], g[k]) in A.leq for k in range(X.size))
        )
        return VObject(base, names, leq=rel)
    if base is BaseTag.FinMet:
        mat = tuple(
            tuple(
                d_max([A.dist[f[k]][g[k]] for k in range(X.size)])
                for g in fns
            )
            for f in fns
        )
        return VObject(base, names, dist=mat)
    if base is BaseTag.FinGraph:
        e = frozenset(
            (i, j)
            for i, f in enumerate(fns)
            for j, g in enumerate(fns)
            if all((f[x], g[y]) in A.edges for (x, y) in X.edges)
        )
        return VObject(base, names, edges=e)
    edges = hom_edge_data(X, A)
    q = tuple(
        (
            "[" + names[i] + ">" + names[j] + "|"
            + ",".join(A.qedges[k][0] for k in assign) + "]",
            i,
            j,
        )
        for (i, j, assign) in edges
    )
    return VObject(base, names, qedges=q)


def hom_element_name(X: VObject, A: VObject, images: dict[str, str]) -> str:
    """Canonical carrier name of the hom element with the given images."""
    vmap = tuple(A.index(images[x]) for x in X.carrier)
    return _fn_name(X, A, vmap)


def hom_element_images(X: VObject, A: VObject, name: str) -> dict[str, str]:
    H = hom(X, A)
    idx = H.index(name)
    f = hom_functions(X, A)[idx]
    return {X.carrier[k]: A.carrier[f[k]] for k in range(X.size)}


# -- morphism enumeration -------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_morphisms(X: VObject, Y: VObject) -> tuple[VMorphism, ...]:
    """All morphisms X -> Y in canonical order."""
    if X.base is not Y.base:
        raise BaseMismatch(f"{X.base} vs {Y.base}")
    base = X.base
    if base is BaseTag.FinGraph:
        out = []
        for f in _iter_vertex_functions(X, Y):
            if all((f[a], f[b]) in Y.edges for (a, b) in X.edges):
                out.append(VMorphism(X, Y, f))
        return tuple(out)
    if base is BaseTag.FinMGraph:
        cands = _quiver_edge_candidates(Y)
        out = []
        for f in _iter_vertex_functions(X, Y):
            pools = []
            for (_, s, t) in X.qedges:
                pool = cands.get((f[s], f[t]), [])
                if not pool:
                    pools = None
                    break
                pools.append(pool)
            if pools is None:
                continue
            for assign in itertools.product(*pools):
                out.append(VMorphism(X, Y, f, assign))
        return tuple(out)
    return tuple(VMorphism(X, Y, f) for f in _structure_maps(X, Y))


def points(A: VObject) -> tuple[VMorphism, ...]:
    """Global points I -> A."""
    return enumerate_morphisms(unit(A.base), A)


def point_indices(X: VObject, A: VObject) -> tuple[int, ...]:
    """Indices of hom(X, A) carrier elements that are actual morphisms X -> A.

    For graph bases these are the looped vertices of the hom object (with,
    for quivers, one entry per loop edge rather than per vertex); for the
    other bases every element is a point.
    """
    base = X.base
    fns = hom_functions(X, A)
    if base is BaseTag.FinGraph:
        return tuple(
            i
            for i, f in enumerate(fns)
            if all((f[a], f[b]) in A.edges for (a, b) in X.edges)
        )
    if base is BaseTag.FinMGraph:
        cands = _quiver_edge_candidates(A)
        out = []
        for i, f in enumerate(fns):
            if all(cands.get((f[s], f[t])) for (_, s, t) in X.qedges):
                out.append(i)
        return tuple(out)
    return tuple(range(len(fns)))


# -- post/pre composition at the hom level ---------------------------------


def hom_post(X: VObject, h: VMorphism) -> VMorphism:
    """hom(X, h): [X, A] -> [X, B] by postcomposition with h: A -> B."""
    A, B = h.dom, h.cod
    HA, HB = hom(X, A), hom(X, B)
    fnsA = hom_functions(X, A)
    fnsB = hom_function_index(X, B)
    vmap = tuple(fnsB[tuple(h.vmap[v] for v in f)] for f in fnsA)
    emap = None
    if X.base is BaseTag.FinMGraph:
        ea = hom_edge_data(X, A)
        eb = hom_edge_index(X, B)
        emap = tuple(
            eb[(vmap[i], vmap[j], tuple(h.emap[k] for k in assign))]
            for (i, j, assign) in ea
        )
    return VMorphism(HA, HB, vmap, emap)


def hom_pre(f: VMorphism, A: VObject) -> VMorphism:
    """hom(f, A) = A^f: [X, A] -> [Y, A] by precomposition with f: Y -> X."""
    Y, X = f.dom, f.cod
    HX, HY = hom(X, A), hom(Y, A)
    fnsX = hom_functions(X, A)
    fnsY = hom_function_index(Y, A)
    vmap = tuple(
        fnsY[tuple(g[f.vmap[y]] for y in range(Y.size))] for g in fnsX
    )
    emap = None
    if X.base is BaseTag.FinMGraph:
        ex = hom_edge_data(X, A)
        ey = hom_edge_index(Y, A)
        emap = tuple(
            ey[(vmap[i], vmap[j], tuple(assign[k] for k in f.emap))]
            for (i, j, assign) in ex
        )
    return VMorphism(HX, HY, vmap, emap)


# -- transpose / currying ---------------------------------------------------


def transpose(m: VMorphism, X: VObject, Y: VObject) -> VMorphism:
    """Curry m: X (x) Y -> Z into X -> [Y, Z]."""
    T = tensor(X, Y)
    if m.dom != T:
        raise BaseError("transpose: domain is not tensor(X, Y)")
    Z = m.cod
    H = hom(Y, Z)
    fns = hom_function_index(Y, Z)
    nY = Y.size
    vmap = tuple(
        fns[tuple(m.vmap[i * nY + j] for j in range(nY))]
        for i in range(X.size)
    )
    emap = None
    if X.base is BaseTag.FinMGraph:
        ed = hom_edge_index(Y, Z)
        nEY = len(Y.qedges)
        emap = tuple(
            ed[(
                vmap[X.qedges[kx][1]],
                vmap[X.qedges[kx][2]],
                tuple(m.emap[kx * nEY + ky] for ky in range(nEY)),
            )]
            for kx in range(len(X.qedges))
        )
    return VMorphism(X, H, vmap, emap)


def untranspose(g: VMorphism, X: VObject, Y: VObject, Z: VObject) -> VMorphism:
    """Uncurry g: X -> [Y, Z] into X (x) Y -> Z."""
    if g.cod != hom(Y, Z):
        raise BaseError("untranspose: codomain is not hom(Y, Z)")
    if g.dom != X:
        raise BaseError("untranspose: domain mismatch")
    T = tensor(X, Y)
    fns = hom_functions(Y, Z)
    nY = Y.size
    vmap = tuple(
        fns[g.vmap[i]][j] for i in range(X.size) for j in range(nY)
    )
    emap = None
    if X.base is BaseTag.FinMGraph:
        ed = hom_edge_data(Y, Z)
        emap = []
        for kx in range(len(X.qedges)):
            assign = ed[g.emap[kx]][2]
            emap.extend(assign)
        emap = tuple(emap)
    return VMorphism(T, Z, vmap, emap)
