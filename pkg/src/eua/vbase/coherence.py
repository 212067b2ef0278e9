"""Coherence isomorphisms between tensor/coproduct expression trees.

Expressions are trees of Leaf / ETensor / ECoprod nodes. Two expressions are
coherence-related when their distributive normal forms (coproducts of tensors
of leaves, unit leaves dropped) match summand by summand, with an optional
permutation of leaves inside summands and an optional permutation of
summands. coherence_iso produces the induced isomorphism; it is never
implicit anywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .core import BaseError, BaseTag, VMorphism, VObject
from .build import coproduct, tensor, unit


@dataclass(frozen=True)
class Leaf:
    obj: VObject


@dataclass(frozen=True)
class ETensor:
    parts: tuple

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class ECoprod:
    parts: tuple

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))


def evaluate(expr, base: BaseTag) -> VObject:
    """The VObject an expression denotes (tensors left-nested, fold unit)."""
    if isinstance(expr, Leaf):
        return expr.obj
    if isinstance(expr, ETensor):
        if not expr.parts:
            return unit(base)
        objs = [evaluate(p, base) for p in expr.parts]
        return reduce(tensor, objs)
    if isinstance(expr, ECoprod):
        objs = [evaluate(p, base) for p in expr.parts]
        return coproduct(base, objs)[0]
    raise BaseError(f"not an expression: {expr!r}")


def _is_unit_leaf(expr, base) -> bool:
    return isinstance(expr, Leaf) and expr.obj == unit(base)


def _normal_form(expr, base):
    """DNF summands: list of (leaf objects tuple, vertex decom, edge decom).

    For each summand we return the leaf signature plus, aligned with the
    carrier (and edge list) of evaluate(expr), flat decompositions
    (summand_index, leaf index tuple).
    """
    if isinstance(expr, Leaf):
        X = expr.obj
        if _is_unit_leaf(expr, base):
            sigs = [()]
            vdec = [(0, ())]
            edec = [(0, ())] if base is BaseTag.FinMGraph else None
            return sigs, vdec, edec
        sigs = [(X,)]
        vdec = [(0, (i,)) for i in range(X.size)]
        edec = None
        if base is BaseTag.FinMGraph:
            edec = [(0, (k,)) for k in range(len(X.qedges))]
        return sigs, vdec, edec
    if isinstance(expr, ECoprod):
        sigs, vdec, edec = [], [], ([] if base is BaseTag.FinMGraph else None)
        for p in expr.parts:
            ps, pv, pe = _normal_form(p, base)
            off = len(sigs)
            sigs.extend(ps)
            vdec.extend((off + s, leaves) for (s, leaves) in pv)
            if edec is not None:
                edec.extend((off + s, leaves) for (s, leaves) in pe)
        return sigs, vdec, edec
    if isinstance(expr, ETensor):
        sigs = [()]
        vdec = [(0, ())]
        edec = [(0, ())] if base is BaseTag.FinMGraph else None
        for p in expr.parts:
            ps, pv, pe = _normal_form(p, base)
            nsigs = [s1 + s2 for s1 in sigs for s2 in ps]
            nv = [
                (s1 * len(ps) + s2, l1 + l2)
                for (s1, l1) in vdec
                for (s2, l2) in pv
            ]
            ne = None
            if edec is not None:
                ne = [
                    (s1 * len(ps) + s2, l1 + l2)
                    for (s1, l1) in edec
                    for (s2, l2) in pe
                ]
            sigs, vdec, edec = nsigs, nv, ne
        return sigs, vdec, edec
    raise BaseError(f"not an expression: {expr!r}")


def coherence_iso(
    src,
    dst,
    base: BaseTag,
    leaf_permutation=None,
    summand_permutation=None,
) -> VMorphism:
    """The canonical isomorphism evaluate(src) -> evaluate(dst).

    leaf_permutation maps source leaf positions to destination leaf
    positions within each summand (identity by default); the summand
    permutation likewise (identity by default). Raises BaseError when the
    expressions are not coherence-related under the given pairing.
    """
    S = evaluate(src, base)
    D = evaluate(dst, base)
    ssigs, svdec, sedec = _normal_form(src, base)
    dsigs, dvdec, dedec = _normal_form(dst, base)
    if len(ssigs) != len(dsigs):
        raise BaseError("expressions have different summand counts")
    nsum = len(ssigs)
    sperm = summand_permutation or tuple(range(nsum))
    for s in range(nsum):
        src_sig = ssigs[s]
        dst_sig = dsigs[sperm[s]]
        perm = leaf_permutation or tuple(range(len(src_sig)))
        if len(src_sig) != len(dst_sig) or len(perm) != len(src_sig):
            raise BaseError("leaf counts differ between paired summands")
        for k in range(len(src_sig)):
            if src_sig[k] != dst_sig[perm[k]]:
                raise BaseError(
                    f"leaf {k} of summand {s} does not match its pair"
                )

    def permute(s, leaves):
        perm = leaf_permutation or tuple(range(len(leaves)))
        out = [None] * len(leaves)
        for k, v in enumerate(leaves):
            out[perm[k]] = v
        return (sperm[s], tuple(out))

    dst_v = {key: i for i, key in enumerate(dvdec)}
    vmap = tuple(dst_v[permute(s, ls)] for (s, ls) in svdec)
    emap = None
    if base is BaseTag.FinMGraph:
        dst_e = {key: i for i, key in enumerate(dedec)}
        emap = tuple(dst_e[permute(s, ls)] for (s, ls) in sedec)
    return VMorphism(S, D, vmap, emap)
