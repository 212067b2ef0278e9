"""Morphism classification: mono/epi/split/regular/strong, surjections.

The regular-epi test is generic (coequalizer of the kernel pair, comparison
map an isomorphism). Strong epis use the per-base characterizations:
surjective for FinSet; surjective + the order-zigzag condition for FinPos;
surjective + d(y,y') = min over fibre pairs for FinMet; surjective on both
sorts for the graph bases. A surjection is a map hit by every global point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..values import d_min
from .core import BaseError, BaseTag, VMorphism, VObject
from .build import make_graph, make_metric, make_poset, make_quiver, make_set
from .homs import enumerate_morphisms, points
from .limits import coequalizer, pullback


@dataclass(frozen=True)
class MorphClassReport:
    mono: bool
    epi: bool
    split_epi: bool
    section: Optional[VMorphism]
    surjection: bool
    regular_epi: bool
    strong_epi: bool


def is_mono(f: VMorphism) -> bool:
    if f.base is BaseTag.FinMGraph:
        return len(set(f.vmap)) == f.dom.size and len(set(f.emap)) == len(
            f.dom.qedges
        )
    return len(set(f.vmap)) == f.dom.size


def is_epi(f: VMorphism) -> bool:
    if f.base is BaseTag.FinMGraph:
        return len(set(f.vmap)) == f.cod.size and len(set(f.emap)) == len(
            f.cod.qedges
        )
    return len(set(f.vmap)) == f.cod.size


def is_surjection(f: VMorphism) -> bool:
    """Whether every global point of the codomain is hit."""
    hit = set()
    for p in points(f.dom):
        vmap = tuple(f.vmap[v] for v in p.vmap)
        emap = (
            tuple(f.emap[k] for k in p.emap)
            if f.base is BaseTag.FinMGraph
            else None
        )
        hit.add((vmap, emap))
    for q in points(f.cod):
        key = (
            q.vmap,
            q.emap if f.base is BaseTag.FinMGraph else None,
        )
        if key not in hit:
            return False
    return True


def find_section(f: VMorphism) -> Optional[VMorphism]:
    from .core import compose, identity

    idc = identity(f.cod)
    for s in enumerate_morphisms(f.cod, f.dom):
        if compose(f, s) == idc:
            return s
    return None


def is_vertex_surjective(f: VMorphism) -> bool:
    return len(set(f.vmap)) == f.cod.size


def _image_relation_closure(f: VMorphism) -> frozenset[tuple[int, int]]:
    A, B = f.dom, f.cod
    rel = {(f.vmap[i], f.vmap[j]) for (i, j) in A.leq}
    rel |= {(i, i) for i in range(B.size)}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if c == b and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return frozenset(rel)


def is_strong_epi(f: VMorphism) -> bool:
    A, B = f.dom, f.cod
    base = f.base
    if base is BaseTag.FinSet:
        return is_vertex_surjective(f)
    if base is BaseTag.FinPos:
        if not is_vertex_surjective(f):
            return False
        return _image_relation_closure(f) == B.leq
    if base is BaseTag.FinMet:
        if not is_vertex_surjective(f):
            return False
        for y in range(B.size):
            for yp in range(B.size):
                fibre = [
                    A.dist[x][xp]
                    for x in range(A.size)
                    for xp in range(A.size)
                    if f.vmap[x] == y and f.vmap[xp] == yp
                ]
                if d_min(fibre) != B.dist[y][yp]:
                    return False
        return True
    if base is BaseTag.FinGraph:
        if not is_vertex_surjective(f):
            return False
        image_edges = {(f.vmap[i], f.vmap[j]) for (i, j) in A.edges}
        return image_edges == set(B.edges)
    # FinMGraph: surjective on both sorts
    return is_epi(f)


def comparison_iso(f: VMorphism) -> bool:
    """Kernel pair + coequalizer; is the comparison map an isomorphism?"""
    _, k1, k2 = pullback(f, f)
    Q, q = coequalizer(k1, k2)
    # comparison c: Q -> cod(f), determined by c(q(b)) = f... the kernel
    # pair lives over dom(f), so q: dom(f) -> Q and c(q(a)) = f(a).
    vmap = [None] * Q.size
    for i in range(f.dom.size):
        c = q.vmap[i]
        if vmap[c] is None:
            vmap[c] = f.vmap[i]
        elif vmap[c] != f.vmap[i]:
            return False
    if any(v is None for v in vmap):
        return False
    emap = None
    if f.base is BaseTag.FinMGraph:
        emap = [None] * len(Q.qedges)
        for k in range(len(f.dom.qedges)):
            c = q.emap[k]
            if emap[c] is None:
                emap[c] = f.emap[k]
            elif emap[c] != f.emap[k]:
                return False
        if any(v is None for v in emap):
            return False
        emap = tuple(emap)
    try:
        c = VMorphism(Q, f.cod, tuple(vmap), emap)
    except BaseError:
        return False
    return _is_iso(c)


def _is_iso(c: VMorphism) -> bool:
    if not (is_mono(c) and is_epi(c)):
        return False
    inv_v = [0] * c.cod.size
    for i, j in enumerate(c.vmap):
        inv_v[j] = i
    inv_e = None
    if c.base is BaseTag.FinMGraph:
        inv_e = [0] * len(c.cod.qedges)
        for i, j in enumerate(c.emap):
            inv_e[j] = i
        inv_e = tuple(inv_e)
    try:
        VMorphism(c.cod, c.dom, tuple(inv_v), inv_e)
    except BaseError:
        return False
    return True


def is_regular_epi(f: VMorphism) -> bool:
    return comparison_iso(f)


def classify(m: VMorphism) -> MorphClassReport:
    section = find_section(m)
    return MorphClassReport(
        mono=is_mono(m),
        epi=is_epi(m),
        split_epi=section is not None,
        section=section,
        surjection=is_surjection(m),
        regular_epi=is_regular_epi(m),
        strong_epi=is_strong_epi(m),
    )


# -- (surjection, injection)-style factorization ---------------------------


def surj_inj_factor(f: VMorphism) -> tuple[VMorphism, VMorphism]:
    """Factor f through its canonical image.

    For FinSet / FinPos / FinMet the middle object carries the structure
    induced from the codomain, giving the (surjection, injection)
    factorization. For the graph bases the injection class degenerates, so
    the middle carries the image edges, giving the (strong epi, mono)
    factorization instead; global points still factor as required.
    """
    A, B = f.dom, f.cod
    base = f.base
    image = sorted(set(f.vmap))
    names = tuple(B.carrier[i] for i in image)
    back = {b: k for k, b in enumerate(image)}

    if base is BaseTag.FinSet:
        M = make_set(names)
    elif base is BaseTag.FinPos:
        M = VObject(
            base,
            names,
            leq=frozenset(
                (back[i], back[j])
                for (i, j) in B.leq
                if i in back and j in back
            ),
        )
    elif base is BaseTag.FinMet:
        M = VObject(
            base,
            names,
            dist=tuple(
                tuple(B.dist[i][j] for j in image) for i in image
            ),
        )
    elif base is BaseTag.FinGraph:
        M = VObject(
            base,
            names,
            edges=frozenset(
                (back[f.vmap[i]], back[f.vmap[j]]) for (i, j) in A.edges
            ),
        )
    else:
        eimage = sorted(set(f.emap))
        eback = {b: k for k, b in enumerate(eimage)}
        M = VObject(
            base,
            names,
            qedges=tuple(
                (
                    B.qedges[e][0],
                    back[B.qedges[e][1]],
                    back[B.qedges[e][2]],
                )
                for e in eimage
            ),
        )
        e = VMorphism(
            A, M, tuple(back[v] for v in f.vmap),
            tuple(eback[x] for x in f.emap),
        )
        m = VMorphism(M, B, tuple(image), tuple(eimage))
        return e, m

    e = VMorphism(A, M, tuple(back[v] for v in f.vmap))
    m = VMorphism(M, B, tuple(image))
    return e, m
