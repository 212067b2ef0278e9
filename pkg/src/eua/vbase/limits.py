"""Pullbacks and coequalizers, with their mediating maps.

The FinMet coequalizer carries the largest metric below the quotient
pseudo-metric (shortest chains through identification classes, exact
arithmetic), then collapses distance-zero classes to stay separated.
"""

from __future__ import annotations

from fractions import Fraction

from ..values import INF, d_add, d_le, d_max
from .core import BaseError, BaseTag, VMorphism, VObject


def pullback(f: VMorphism, g: VMorphism) -> tuple[VObject, VMorphism, VMorphism]:
    """The pullback of the cospan f: A -> C <- B :g."""
    if f.cod != g.cod:
        raise BaseError("pullback needs a cospan")
    A, B = f.dom, g.dom
    base = A.base
    pairs = [
        (i, j)
        for i in range(A.size)
        for j in range(B.size)
        if f.vmap[i] == g.vmap[j]
    ]
    pos = {p: k for k, p in enumerate(pairs)}
    names = tuple(f"({A.carrier[i]},{B.carrier[j]})" for (i, j) in pairs)

    if base is BaseTag.FinSet:
        P = VObject(base, names)
    elif base is BaseTag.FinPos:
        rel = frozenset(
            (pos[(i, j)], pos[(k, l)])
            for (i, j) in pairs
            for (k, l) in pairs
            if (i, k) in A.leq and (j, l) in B.leq
        )
        P = VObject(base, names, leq=rel)
    elif base is BaseTag.FinMet:
        mat = tuple(
            tuple(
                d_max([A.dist[i][k], B.dist[j][l]]) for (k, l) in pairs
            )
            for (i, j) in pairs
        )
        P = VObject(base, names, dist=mat)
    elif base is BaseTag.FinGraph:
        e = frozenset(
            (pos[(i, j)], pos[(k, l)])
            for (i, j) in pairs
            for (k, l) in pairs
            if (i, k) in A.edges and (j, l) in B.edges
        )
        P = VObject(base, names, edges=e)
    else:
        epairs = [
            (x, y)
            for x in range(len(A.qedges))
            for y in range(len(B.qedges))
            if f.emap[x] == g.emap[y]
        ]
        q = tuple(
            (
                f"({A.qedges[x][0]},{B.qedges[y][0]})",
                pos[(A.qedges[x][1], B.qedges[y][1])],
                pos[(A.qedges[x][2], B.qedges[y][2])],
            )
            for (x, y) in epairs
        )
        P = VObject(base, names, qedges=q)
        e1 = tuple(x for (x, _) in epairs)
        e2 = tuple(y for (_, y) in epairs)
        p1 = VMorphism(P, A, tuple(i for (i, _) in pairs), e1)
        p2 = VMorphism(P, B, tuple(j for (_, j) in pairs), e2)
        return P, p1, p2

    p1 = VMorphism(P, A, tuple(i for (i, _) in pairs))
    p2 = VMorphism(P, B, tuple(j for (_, j) in pairs))
    return P, p1, p2


def pullback_mediate(
    P: VObject, p1: VMorphism, p2: VMorphism, q1: VMorphism, q2: VMorphism
) -> VMorphism:
    """The unique u: T -> P with p1 u = q1 and p2 u = q2."""
    T = q1.dom
    index = {
        (p1.vmap[k], p2.vmap[k]): k for k in range(P.size)
    }
    vmap = tuple(index[(q1.vmap[i], q2.vmap[i])] for i in range(T.size))
    emap = None
    if T.base is BaseTag.FinMGraph:
        eindex = {
            (p1.emap[k], p2.emap[k]): k for k in range(len(P.qedges))
        }
        emap = tuple(
            eindex[(q1.emap[i], q2.emap[i])] for i in range(len(T.qedges))
        )
    return VMorphism(T, P, vmap, emap)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _classes(n, pairs):
    uf = _UnionFind(n)
    for a, b in pairs:
        uf.union(a, b)
    reps = sorted({uf.find(i) for i in range(n)})
    cls = {r: k for k, r in enumerate(reps)}
    return [cls[uf.find(i)] for i in range(n)], reps


def coequalizer(f: VMorphism, g: VMorphism) -> tuple[VObject, VMorphism]:
    """The coequalizer of the parallel pair f, g: A -> B."""
    if f.dom != g.dom or f.cod != g.cod:
        raise BaseError("coequalizer needs a parallel pair")
    A, B = f.dom, f.cod
    base = A.base
    vcls, vreps = _classes(
        B.size, [(f.vmap[i], g.vmap[i]) for i in range(A.size)]
    )

    if base is BaseTag.FinPos:
        # preorder generated on classes, then antisymmetrize by merging cycles
        k = len(vreps)
        rel = {(vcls[i], vcls[j]) for (i, j) in B.leq}
        rel |= {(c, c) for c in range(k)}
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if c == b and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        merge = [(a, b) for (a, b) in rel if (b, a) in rel and a != b]
        cls2, reps2 = _classes(k, merge)
        vcls = [cls2[c] for c in vcls]
        names = tuple(B.carrier[vreps[r]] for r in reps2)
        leq = frozenset({(cls2[a], cls2[b]) for (a, b) in rel})
        Q = VObject(base, names, leq=leq)
        q = VMorphism(B, Q, tuple(vcls))
        return Q, q

    if base is BaseTag.FinMet:
        # quotient pseudo-metric: shortest chains, zero within classes
        n = B.size
        W = [
            [
                Fraction(0) if vcls[i] == vcls[j] else B.dist[i][j]
                for j in range(n)
            ]
            for i in range(n)
        ]
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    via = d_add(W[i][k], W[k][j])
                    if not d_le(W[i][j], via):
                        W[i][j] = via
        # separate: merge classes at pseudo-distance zero
        zero = [
            (i, j)
            for i in range(n)
            for j in range(n)
            if W[i][j] == Fraction(0)
        ]
        vcls2, reps2 = _classes(n, zero)
        names = tuple(B.carrier[r] for r in reps2)
        mat = tuple(
            tuple(W[reps2[a]][reps2[b]] for b in range(len(reps2)))
            for a in range(len(reps2))
        )
        Q = VObject(base, names, dist=mat)
        q = VMorphism(B, Q, tuple(vcls2))
        return Q, q

    names = tuple(B.carrier[r] for r in vreps)
    if base is BaseTag.FinSet:
        Q = VObject(base, names)
        return Q, VMorphism(B, Q, tuple(vcls))
    if base is BaseTag.FinGraph:
        e = frozenset((vcls[i], vcls[j]) for (i, j) in B.edges)
        Q = VObject(base, names, edges=e)
        return Q, VMorphism(B, Q, tuple(vcls))
    # FinMGraph: classes in both sorts
    ecls, ereps = _classes(
        len(B.qedges), [(f.emap[i], g.emap[i]) for i in range(len(A.qedges))]
    )
    q = tuple(
        (B.qedges[r][0], vcls[B.qedges[r][1]], vcls[B.qedges[r][2]])
        for r in ereps
    )
    Q = VObject(base, names, qedges=q)
    return Q, VMorphism(B, Q, tuple(vcls), tuple(ecls))


def coequalizer_mediate(
    Q: VObject, q: VMorphism, h: VMorphism
) -> VMorphism:
    """The unique u: Q -> T with u q = h, for h coequalizing the same pair."""
    B = q.dom
    vmap = [None] * Q.size
    for i in range(B.size):
        c = q.vmap[i]
        if vmap[c] is None:
            vmap[c] = h.vmap[i]
        elif vmap[c] != h.vmap[i]:
            raise BaseError("map does not coequalize the pair")
    emap = None
    if B.base is BaseTag.FinMGraph:
        emap = [None] * len(Q.qedges)
        for k in range(len(B.qedges)):
            c = q.emap[k]
            if emap[c] is None:
                emap[c] = h.emap[k]
            elif emap[c] != h.emap[k]:
                raise BaseError("map does not coequalize the pair")
        emap = tuple(emap)
    return VMorphism(Q, h.cod, tuple(vmap), emap)
