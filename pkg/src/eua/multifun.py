"""Multi-functional languages: symbols take a tensor list of powers.

A symbol f: ([X_1..X_n]; Y) interprets as a map
  hom(X_1, A) (x) ... (x) hom(X_n, A)  ->  hom(Y, A)
with tensors bracketed left-nested throughout and the empty list denoting
the unit. Coherence terms (the symmetry swap and the unitors) interpret by
the structure maps of the tensor; on normalized arities the unitors are
identities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Union

from .language import Verdict
from .semantics import SatVerdict
from .vbase import (
    BaseTag,
    VMorphism,
    VObject,
    compose,
    enumerate_morphisms,
    hom,
    hom_pre,
    identity,
    tensor,
    unit,
)


class MLanguageError(Exception):
    pass


@dataclass(frozen=True)
class MLanguage:
    base: BaseTag
    symbols: tuple[tuple[str, tuple[VObject, ...], VObject], ...]

    def arity(self, name: str):
        for (s, ins, out) in self.symbols:
            if s == name:
                return (ins, out)
        raise MLanguageError(f"unknown symbol {name}")

    def names(self):
        return tuple(s for (s, _, _) in self.symbols)


def interp_arity_object(base: BaseTag, arities, A: VObject) -> VObject:
    """Left-nested tensor of the hom objects; the empty list is the unit."""
    homs = [hom(X, A) for X in arities]
    if not homs:
        return unit(base)
    return reduce(tensor, homs)


@dataclass(frozen=True)
class MStructure:
    language: MLanguage
    carrier: VObject
    tables: tuple[tuple[str, VMorphism], ...]

    def table(self, name: str) -> VMorphism:
        for (s, m) in self.tables:
            if s == name:
                return m
        raise MLanguageError(f"no table for {name}")


def validate_mstructure(S: MStructure) -> Verdict:
    L = S.language
    if S.carrier.base is not L.base:
        return Verdict(False, "carrier off base")
    if set(n for (n, _) in S.tables) != set(L.names()):
        return Verdict(False, "tables do not match symbols")
    for (s, ins, out) in L.symbols:
        m = S.table(s)
        if m.dom != interp_arity_object(L.base, ins, S.carrier):
            return Verdict(False, f"table {s}: wrong domain")
        if m.cod != hom(out, S.carrier):
            return Verdict(False, f"table {s}: wrong codomain")
    return Verdict(True)


# -- terms ---------------------------------------------------------------


@dataclass(frozen=True)
class MSymT:
    name: str
    inputs: tuple[VObject, ...]
    output: VObject

    @property
    def arity(self):
        return (self.inputs, (self.output,))


@dataclass(frozen=True)
class MMorT:
    morphism: VMorphism  # h: Y -> X gives an ([X]; [Y])-ary term

    @property
    def arity(self):
        return ((self.morphism.cod,), (self.morphism.dom,))


@dataclass(frozen=True)
class MTensorT:
    left: "MTerm"
    right: "MTerm"

    @property
    def arity(self):
        li, lo = self.left.arity
        ri, ro = self.right.arity
        return (li + ri, lo + ro)


@dataclass(frozen=True)
class MSigmaT:
    x: VObject
    y: VObject

    @property
    def arity(self):
        return ((self.x, self.y), (self.y, self.x))


@dataclass(frozen=True)
class MUnitorT:
    x: VObject
    side: str  # "l" | "r" | "l_inv" | "r_inv"; identity on normalized lists

    @property
    def arity(self):
        return ((self.x,), (self.x,))


@dataclass(frozen=True)
class MCompT:
    after: "MTerm"
    first: "MTerm"

    @property
    def arity(self):
        return (self.first.arity[0], self.after.arity[1])


MTerm = Union[MSymT, MMorT, MTensorT, MSigmaT, MUnitorT, MCompT]


def msym(name: str, L: MLanguage) -> MTerm:
    ins, out = L.arity(name)
    return MSymT(name, ins, out)


def mmor(m: VMorphism) -> MTerm:
    return MMorT(m)


def mtensor(t: MTerm, s: MTerm) -> MTerm:
    return MTensorT(t, s)


def msigma(x: VObject, y: VObject) -> MTerm:
    return MSigmaT(x, y)


def munitor(x: VObject, side: str = "l") -> MTerm:
    return MUnitorT(x, side)


def mcomp(s: MTerm, t: MTerm) -> MTerm:
    if t.arity[1] != s.arity[0]:
        raise MLanguageError(
            f"middle arities differ: {t.arity[1]} vs {s.arity[0]}"
        )
    return MCompT(s, t)


# -- interpretation --------------------------------------------------------


def _mixed_radix(sizes):
    def decode(i):
        out = []
        for sz in reversed(sizes):
            out.append(i % sz)
            i //= sz
        return tuple(reversed(out))

    def encode(tup):
        i = 0
        for sz, v in zip(sizes, tup):
            i = i * sz + v
        return i

    return decode, encode


def interpret_mterm(t: MTerm, S: MStructure) -> VMorphism:
    A = S.carrier
    base = S.language.base
    ins, outs = t.arity
    if isinstance(t, MSymT):
        return S.table(t.name)
    if isinstance(t, MMorT):
        return hom_pre(t.morphism, A)
    if isinstance(t, MUnitorT):
        return identity(interp_arity_object(base, ins, A))
    if isinstance(t, MCompT):
        return compose(
            interpret_mterm(t.after, S), interpret_mterm(t.first, S)
        )
    if isinstance(t, MSigmaT):
        HX, HY = hom(t.x, A), hom(t.y, A)
        D = tensor(HX, HY)
        C = tensor(HY, HX)
        nY = HY.size
        nX = HX.size
        vmap = tuple(
            (i % nY) * nX + (i // nY) for i in range(D.size)
        )
        emap = None
        if base is BaseTag.FinMGraph:
            eY = len(HY.qedges)
            eX = len(HX.qedges)
            emap = tuple(
                (k % eY) * eX + (k // eY) for k in range(len(D.qedges))
            )
        return VMorphism(D, C, vmap, emap)
    if isinstance(t, MTensorT):
        f = interpret_mterm(t.left, S)
        g = interpret_mterm(t.right, S)
        li, lo = t.left.arity
        ri, ro = t.right.arity
        D = interp_arity_object(base, ins, A)
        C = interp_arity_object(base, outs, A)
        in_sizes = [hom(X, A).size for X in ins]
        out_sizes = [hom(Y, A).size for Y in outs]
        dec_in, _ = _mixed_radix(in_sizes)
        _, enc_out = _mixed_radix(out_sizes)
        ldec, lenc = _mixed_radix([hom(X, A).size for X in li])
        rdec, renc = _mixed_radix([hom(X, A).size for X in ri])
        lodec, _ = _mixed_radix([hom(Y, A).size for Y in lo])
        rodec, _ = _mixed_radix([hom(Y, A).size for Y in ro])
        vmap = []
        for i in range(D.size):
            parts = dec_in(i)
            lval = f.vmap[lenc(parts[: len(li)])]
            rval = g.vmap[renc(parts[len(li):])]
            vmap.append(enc_out(lodec(lval) + rodec(rval)))
        emap = None
        if base is BaseTag.FinMGraph:
            in_esizes = [len(hom(X, A).qedges) for X in ins]
            out_esizes = [len(hom(Y, A).qedges) for Y in outs]
            dec_ein, _ = _mixed_radix(in_esizes)
            _, enc_eout = _mixed_radix(out_esizes)
            _, lenc_e = _mixed_radix([len(hom(X, A).qedges) for X in li])
            _, renc_e = _mixed_radix([len(hom(X, A).qedges) for X in ri])
            lodec_e, _ = _mixed_radix([len(hom(Y, A).qedges) for Y in lo])
            rodec_e, _ = _mixed_radix([len(hom(Y, A).qedges) for Y in ro])
            emap = []
            for k in range(len(D.qedges)):
                parts = dec_ein(k)
                lval = f.emap[lenc_e(parts[: len(li)])]
                rval = g.emap[renc_e(parts[len(li):])]
                emap.append(enc_eout(lodec_e(lval) + rodec_e(rval)))
            emap = tuple(emap)
        return VMorphism(D, C, tuple(vmap), emap)
    raise TypeError(t)


@dataclass(frozen=True)
class MEquation:
    name: str
    lhs: MTerm
    rhs: MTerm

    def __post_init__(self):
        if self.lhs.arity != self.rhs.arity:
            raise MLanguageError(
                f"equation {self.name}: arity lists differ"
            )


@dataclass(frozen=True)
class MTheory:
    name: str
    language: MLanguage
    equations: tuple[MEquation, ...]


def msatisfies(S: MStructure, eq: MEquation, mode: str = "enriched") -> SatVerdict:
    sa = interpret_mterm(eq.lhs, S)
    ta = interpret_mterm(eq.rhs, S)
    if mode == "enriched":
        if sa == ta:
            return SatVerdict("holds", mode)
        H = sa.dom
        for i in range(H.size):
            if sa.vmap[i] != ta.vmap[i]:
                return SatVerdict("fails", mode, H.carrier[i], "vertex")
        for k in range(len(H.qedges)):
            if sa.emap[k] != ta.emap[k]:
                return SatVerdict("fails", mode, H.qedges[k][0], "edge")
    pts = enumerate_morphisms(unit(S.language.base), sa.dom)
    if not pts:
        return SatVerdict("vacuous", mode)
    for p in pts:
        if compose(sa, p) != compose(ta, p):
            return SatVerdict(
                "fails", mode, sa.dom.carrier[p.vmap[0]], "point"
            )
    return SatVerdict("holds", mode)


def is_mmodel(S: MStructure, T: MTheory, mode: str = "enriched"):
    failures = []
    for eq in T.equations:
        v = msatisfies(S, eq, mode)
        if not v.ok:
            failures.append((eq.name, v))
    return Verdict(not failures, witness=tuple(failures) or None)


def enumerate_mstructures(L: MLanguage, carrier: VObject):
    """All structures on a fixed carrier, tables exhausted."""
    pools = []
    for (s, ins, out) in L.symbols:
        D = interp_arity_object(L.base, ins, carrier)
        C = hom(out, carrier)
        pools.append(list(enumerate_morphisms(D, C)))
    for combo in itertools.product(*pools):
        yield MStructure(
            L,
            carrier,
            tuple((sym[0], m) for sym, m in zip(L.symbols, combo)),
        )
