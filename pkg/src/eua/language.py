"""Languages, structures over them, and structure homomorphisms.

A language is a table of function symbols with input/output arities in a
fixed base; a structure interprets each symbol f: (X, Y) as a base morphism
hom(X, A) -> hom(Y, A) on a carrier A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .vbase import (
    BaseTag,
    VMorphism,
    VObject,
    compose,
    hom,
    hom_post,
    identity,
)


class LanguageError(Exception):
    pass


class UnknownSymbol(LanguageError):
    pass


@dataclass(frozen=True)
class Language:
    base: BaseTag
    symbols: tuple[tuple[str, VObject, VObject], ...]

    def __post_init__(self):
        names = [s for (s, _, _) in self.symbols]
        if len(set(names)) != len(names):
            raise LanguageError("duplicate symbol names")
        for (s, X, Y) in self.symbols:
            if X.base is not self.base or Y.base is not self.base:
                raise LanguageError(f"symbol {s} has arities off base")

    def arity(self, name: str) -> tuple[VObject, VObject]:
        for (s, X, Y) in self.symbols:
            if s == name:
                return (X, Y)
        raise UnknownSymbol(name)

    def names(self) -> tuple[str, ...]:
        return tuple(s for (s, _, _) in self.symbols)


@dataclass(frozen=True)
class Structure:
    language: Language
    carrier: VObject
    tables: tuple[tuple[str, VMorphism], ...]

    def table(self, name: str) -> VMorphism:
        for (s, m) in self.tables:
            if s == name:
                return m
        raise UnknownSymbol(name)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: Optional[str] = None
    witness: Optional[object] = None

    def __bool__(self):
        return self.ok


def validate_structure(S: Structure) -> Verdict:
    """Each table must be a base morphism hom(X, A) -> hom(Y, A)."""
    L = S.language
    if S.carrier.base is not L.base:
        return Verdict(False, "carrier off base")
    names = set(L.names())
    given = [s for (s, _) in S.tables]
    if set(given) != names or len(given) != len(names):
        return Verdict(False, f"tables {sorted(given)} != symbols {sorted(names)}")
    for (s, X, Y) in L.symbols:
        m = S.table(s)
        HX, HY = hom(X, S.carrier), hom(Y, S.carrier)
        if m.dom != HX:
            return Verdict(False, f"table {s}: domain is not hom(input, A)")
        if m.cod != HY:
            return Verdict(False, f"table {s}: codomain is not hom(output, A)")
        # structure preservation holds by VMorphism construction
    return Verdict(True)


def is_homomorphism(h: VMorphism, S: Structure, T: Structure) -> Verdict:
    """Does h: A -> B commute with every symbol's interpretation square?"""
    if S.language != T.language:
        return Verdict(False, "different languages")
    if h.dom != S.carrier or h.cod != T.carrier:
        return Verdict(False, "carrier mismatch")
    for (s, X, Y) in S.language.symbols:
        hX = hom_post(X, h)
        hY = hom_post(Y, h)
        left = compose(T.table(s), hX)
        right = compose(hY, S.table(s))
        if left != right:
            HX = left.dom
            for i in range(HX.size):
                if left.vmap[i] != right.vmap[i]:
                    return Verdict(
                        False,
                        f"square for {s} fails",
                        witness=(s, HX.carrier[i]),
                    )
            if HX.base is BaseTag.FinMGraph:
                for k in range(len(HX.qedges)):
                    if left.emap[k] != right.emap[k]:
                        return Verdict(
                            False,
                            f"square for {s} fails",
                            witness=(s, HX.qedges[k][0]),
                        )
    return Verdict(True)
