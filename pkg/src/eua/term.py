"""The recursive term calculus with computed arities.

Terms of arity (X, Y) interpret as maps hom(X, A) -> hom(Y, A):
  MorT(m: Y -> X)        arity (X, Y), precomposition with m;
  SymT(name)             the symbol's declared arity;
  PowT(Z, t: (X, Y))     arity (Z (x) X, Z (x) Y);
  CompT(s: (Y, W), t: (X, Y))   arity (X, W), t applies first;
  TupleT([t_i: (X, Y_i)])       arity (X, Y_1 + ... + Y_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .language import Language, UnknownSymbol
from .vbase import BaseMismatch, VMorphism, VObject, coproduct, tensor


class TermError(Exception):
    pass


class CompositionMismatch(TermError):
    pass


class TupleInputMismatch(TermError):
    pass


@dataclass(frozen=True)
class MorT:
    morphism: VMorphism

    @property
    def arity(self) -> tuple[VObject, VObject]:
        return (self.morphism.cod, self.morphism.dom)


@dataclass(frozen=True)
class SymT:
    name: str
    input: VObject
    output: VObject

    @property
    def arity(self):
        return (self.input, self.output)


@dataclass(frozen=True)
class PowT:
    by: VObject
    body: "Term"

    @property
    def arity(self):
        X, Y = self.body.arity
        return (tensor(self.by, X), tensor(self.by, Y))


@dataclass(frozen=True)
class CompT:
    after: "Term"
    first: "Term"

    @property
    def arity(self):
        X, _ = self.first.arity
        _, W = self.after.arity
        return (X, W)


@dataclass(frozen=True)
class TupleT:
    parts: tuple["Term", ...]
    base: object  # BaseTag, needed for the empty tuple's output arity

    @property
    def arity(self):
        X = self.parts[0].arity[0]
        out, _ = coproduct(self.base, [p.arity[1] for p in self.parts])
        return (X, out)


Term = Union[MorT, SymT, PowT, CompT, TupleT]


def mor_term(m: VMorphism) -> Term:
    return MorT(m)


def sym_term(name: str, L: Language) -> Term:
    X, Y = L.arity(name)
    return SymT(name, X, Y)


def pow_term(Z: VObject, t: Term) -> Term:
    X, _ = t.arity
    if Z.base is not X.base:
        raise BaseMismatch(f"{Z.base} vs {X.base}")
    return PowT(Z, t)


def comp_term(s: Term, t: Term) -> Term:
    """s after t; the middle arities must agree structurally."""
    _, Yt = t.arity
    Ys, _ = s.arity
    if Yt != Ys:
        raise CompositionMismatch(
            f"middle arities differ: {Yt.carrier} vs {Ys.carrier}"
        )
    return CompT(s, t)


def tuple_term(ts) -> Term:
    ts = tuple(ts)
    if not ts:
        raise TupleInputMismatch("empty tuple has no input arity")
    X0 = ts[0].arity[0]
    for t in ts[1:]:
        if t.arity[0] != X0:
            raise TupleInputMismatch("tuple components disagree on input arity")
    return TupleT(ts, X0.base)


def times_term(t1: Term, t2: Term) -> Term:
    """Product of terms: (X+X', Y+Y') from t1: (X, Y) and t2: (X', Y')."""
    X1, _ = t1.arity
    X2, _ = t2.arity
    C, (i1, i2) = coproduct(X1.base, [X1, X2])
    return tuple_term(
        [comp_term(t1, mor_term(i1)), comp_term(t2, mor_term(i2))]
    )


def arity_of(t: Term) -> tuple[VObject, VObject]:
    return t.arity


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.lhs.arity != self.rhs.arity:
            raise TermError(
                f"equation {self.name}: sides have different arities"
            )

    @property
    def arity(self):
        return self.lhs.arity


@dataclass(frozen=True)
class Theory:
    name: str
    language: Language
    equations: tuple[Equation, ...]
