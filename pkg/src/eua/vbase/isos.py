"""Canonical structural isomorphisms between hom/tensor/product objects.

These are the concrete bijections that interpretation conjugates by:
  curry_iso        A^(Z (x) X)  ~  (A^X)^Z
  hom_coprod_iso   A^(Y1+...+Yn)  ~  A^Y1 x ... x A^Yn
  pairing_iso      (prod Ai)^X  ~  prod (Ai^X)
Each returns a (forward, backward) pair of validated morphisms.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core import BaseTag, VMorphism, VObject
from .build import coproduct, product, tensor
from .homs import hom, hom_edge_data, hom_functions


@lru_cache(maxsize=None)
def curry_iso(Z: VObject, X: VObject, A: VObject) -> tuple[VMorphism, VMorphism]:
    """hom(tensor(Z, X), A)  ->  hom(Z, hom(X, A)), and its inverse."""
    T = tensor(Z, X)
    HT = hom(T, A)
    HX = hom(X, A)
    HZH = hom(Z, HX)
    fnsT = hom_functions(T, A)
    fnsX = {f: i for i, f in enumerate(hom_functions(X, A))}
    fnsZH = {f: i for i, f in enumerate(hom_functions(Z, HX))}
    nX = X.size

    def curry(u: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(
            fnsX[tuple(u[z * nX + x] for x in range(nX))]
            for z in range(Z.size)
        )

    fwd_v = tuple(fnsZH[curry(u)] for u in fnsT)
    bwd_v = [0] * len(fwd_v)
    for i, j in enumerate(fwd_v):
        bwd_v[j] = i
    fwd_e = bwd_e = None
    if Z.base is BaseTag.FinMGraph:
        edT = hom_edge_data(T, A)
        edX = {e: k for k, e in enumerate(hom_edge_data(X, A))}
        edZH = {e: k for k, e in enumerate(hom_edge_data(Z, HX))}
        nEX = len(X.qedges)
        fwd_e = []
        for (i, j, assign) in edT:
            zassign = tuple(
                edX[(
                    fwd_v_inner(Z, X, A, fnsT[i], Z_edge[1]),
                    fwd_v_inner(Z, X, A, fnsT[j], Z_edge[2]),
                    tuple(assign[kz * nEX + kx] for kx in range(nEX)),
                )]
                for kz, Z_edge in enumerate(Z.qedges)
            )
            fwd_e.append(edZH[(fwd_v[i], fwd_v[j], zassign)])
        fwd_e = tuple(fwd_e)
        bwd_e = [0] * len(fwd_e)
        for i, j in enumerate(fwd_e):
            bwd_e[j] = i
        bwd_e = tuple(bwd_e)
    fwd = VMorphism(HT, HZH, fwd_v, fwd_e)
    bwd = VMorphism(HZH, HT, tuple(bwd_v), bwd_e)
    return fwd, bwd


def fwd_v_inner(Z, X, A, u, z):
    """Index in hom(X, A) of the z-slice of u: V(Z) x V(X) -> V(A)."""
    nX = X.size
    fnsX = {f: i for i, f in enumerate(hom_functions(X, A))}
    return fnsX[tuple(u[z * nX + x] for x in range(nX))]


def hom_coprod_iso(Ys, A: VObject) -> tuple[VMorphism, VMorphism]:
    """hom(coproduct(Ys), A)  ->  product of the hom(Y_i, A)."""
    base = A.base
    C, _ = coproduct(base, Ys)
    HC = hom(C, A)
    homs = [hom(Y, A) for Y in Ys]
    P, _ = product(base, homs)
    fnsC = hom_functions(C, A)
    idx = [
        {f: i for i, f in enumerate(hom_functions(Y, A))} for Y in Ys
    ]
    offsets = []
    off = 0
    for Y in Ys:
        offsets.append(off)
        off += Y.size

    ptuples = {
        t: i
        for i, t in enumerate(
            itertools.product(*[range(H.size) for H in homs])
        )
    }

    def split(u):
        return tuple(
            idx[k][tuple(u[offsets[k] + a] for a in range(Ys[k].size))]
            for k in range(len(Ys))
        )

    fwd_v = tuple(ptuples[split(u)] for u in fnsC)
    bwd_v = [0] * len(fwd_v)
    for i, j in enumerate(fwd_v):
        bwd_v[j] = i
    fwd_e = bwd_e = None
    if base is BaseTag.FinMGraph:
        edC = hom_edge_data(C, A)
        edY = [
            {e: k for k, e in enumerate(hom_edge_data(Y, A))} for Y in Ys
        ]
        eoffsets = []
        eoff = 0
        for Y in Ys:
            eoffsets.append(eoff)
            eoff += len(Y.qedges)
        # product edge index: position among tuples of component edge indices
        petuples = {
            t: i
            for i, t in enumerate(
                itertools.product(
                    *[range(len(H.qedges)) for H in homs]
                )
            )
        }
        fwd_e = []
        for (i, j, assign) in edC:
            comp = tuple(
                edY[k][(
                    split(fnsC[i])[k],
                    split(fnsC[j])[k],
                    tuple(
                        assign[eoffsets[k] + t]
                        for t in range(len(Ys[k].qedges))
                    ),
                )]
                for k in range(len(Ys))
            )
            fwd_e.append(petuples[comp])
        fwd_e = tuple(fwd_e)
        bwd_e = [0] * len(fwd_e)
        for i, j in enumerate(fwd_e):
            bwd_e[j] = i
        bwd_e = tuple(bwd_e)
    fwd = VMorphism(HC, P, fwd_v, fwd_e)
    bwd = VMorphism(P, HC, tuple(bwd_v), bwd_e)
    return fwd, bwd


def pairing_iso(X: VObject, As) -> tuple[VMorphism, VMorphism]:
    """hom(X, product(As))  ->  product of the hom(X, A_i)."""
    base = X.base
    P, projs = product(base, As)
    HP = hom(X, P)
    homs = [hom(X, A) for A in As]
    Q, _ = product(base, homs)
    fnsP = hom_functions(X, P)
    idx = [
        {f: i for i, f in enumerate(hom_functions(X, A))} for A in As
    ]
    qtuples = {
        t: i
        for i, t in enumerate(
            itertools.product(*[range(H.size) for H in homs])
        )
    }

    def split(u):
        return tuple(
            idx[k][tuple(projs[k].vmap[v] for v in u)]
            for k in range(len(As))
        )

    fwd_v = tuple(qtuples[split(u)] for u in fnsP)
    bwd_v = [0] * len(fwd_v)
    for i, j in enumerate(fwd_v):
        bwd_v[j] = i
    fwd_e = bwd_e = None
    if base is BaseTag.FinMGraph:
        edP = hom_edge_data(X, P)
        edA = [
            {e: k for k, e in enumerate(hom_edge_data(X, A))} for A in As
        ]
        petuples = {
            t: i
            for i, t in enumerate(
                itertools.product(
                    *[range(len(H.qedges)) for H in homs]
                )
            )
        }
        fwd_e = []
        for (i, j, assign) in edP:
            comp = tuple(
                edA[k][(
                    split(fnsP[i])[k],
                    split(fnsP[j])[k],
                    tuple(projs[k].emap[a] for a in assign),
                )]
                for k in range(len(As))
            )
            fwd_e.append(petuples[comp])
        fwd_e = tuple(fwd_e)
        bwd_e = [0] * len(fwd_e)
        for i, j in enumerate(fwd_e):
            bwd_e[j] = i
        bwd_e = tuple(bwd_e)
    fwd = VMorphism(HP, Q, fwd_v, fwd_e)
    bwd = VMorphism(Q, HP, tuple(bwd_v), bwd_e)
    return fwd, bwd
