"""Interpretation of terms on structures; enriched and unenriched satisfaction.

Enriched satisfaction compares the interpreted morphisms extensionally on
every hom element (and edge, for quivers); unenriched satisfaction compares
them only on global points of the input power. Verdicts carry the first
differing element in canonical order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .language import Structure, Verdict, is_homomorphism
from .term import CompT, Equation, MorT, PowT, SymT, Term, Theory, TupleT
from .vbase import (
    BaseTag,
    VMorphism,
    compose,
    coproduct,
    curry_iso,
    enumerate_morphisms,
    hom,
    hom_coprod_iso,
    hom_post,
    hom_pre,
    product,
    product_pairing,
    unit,
)


@lru_cache(maxsize=None)
def _curry(Z, X, A):
    return curry_iso(Z, X, A)


@lru_cache(maxsize=100000)
def interpret(t: Term, S: Structure) -> VMorphism:
    """The morphism hom(X, A) -> hom(Y, A) a term denotes on a structure."""
    A = S.carrier
    if isinstance(t, MorT):
        return hom_pre(t.morphism, A)
    if isinstance(t, SymT):
        declared = S.language.arity(t.name)
        if declared != (t.input, t.output):
            raise ValueError(f"symbol {t.name} arity differs from language")
        return S.table(t.name)
    if isinstance(t, CompT):
        return compose(interpret(t.after, S), interpret(t.first, S))
    if isinstance(t, PowT):
        X, Y = t.body.arity
        Z = t.by
        fwd_x, _ = _curry(Z, X, A)
        _, bwd_y = _curry(Z, Y, A)
        inner = hom_post(Z, interpret(t.body, S))
        return compose(bwd_y, compose(inner, fwd_x))
    if isinstance(t, TupleT):
        Ys = [p.arity[1] for p in t.parts]
        homs = [hom(Y, A) for Y in Ys]
        P, projs = product(A.base, homs)
        pairing = product_pairing(
            [interpret(p, S) for p in t.parts], P, projs
        )
        _, bwd = hom_coprod_iso(Ys, A)
        return compose(bwd, pairing)
    raise TypeError(f"not a term: {t!r}")


@dataclass(frozen=True)
class SatVerdict:
    status: str  # "holds" | "fails" | "vacuous"
    mode: str  # "enriched" | "unenriched"
    witness: Optional[str] = None
    witness_sort: Optional[str] = None  # "vertex" | "edge" | "point"

    @property
    def ok(self) -> bool:
        return self.status in ("holds", "vacuous")

    def __bool__(self):
        return self.ok


def _first_difference(a: VMorphism, b: VMorphism):
    H = a.dom
    for i in range(H.size):
        if a.vmap[i] != b.vmap[i]:
            return (H.carrier[i], "vertex")
    if H.base is BaseTag.FinMGraph:
        for k in range(len(H.qedges)):
            if a.emap[k] != b.emap[k]:
                return (H.qedges[k][0], "edge")
    return None


def satisfies(S: Structure, eq: Equation, mode: str = "enriched") -> SatVerdict:
    sa = interpret(eq.lhs, S)
    ta = interpret(eq.rhs, S)
    if mode == "enriched":
        diff = _first_difference(sa, ta)
        if diff is None:
            return SatVerdict("holds", mode)
        return SatVerdict("fails", mode, diff[0], diff[1])
    if mode != "unenriched":
        raise ValueError(f"unknown mode {mode!r}")
    pts = enumerate_morphisms(unit(S.carrier.base), sa.dom)
    if not pts:
        return SatVerdict("vacuous", mode)
    for p in pts:
        if compose(sa, p) != compose(ta, p):
            return SatVerdict(
                "fails", mode, sa.dom.carrier[p.vmap[0]], "point"
            )
    return SatVerdict("holds", mode)


@dataclass(frozen=True)
class ModelReport:
    ok: bool
    failures: tuple[tuple[str, SatVerdict], ...]
    mode: str

    def __bool__(self):
        return self.ok


def is_model(S: Structure, T: Theory, mode: str = "enriched") -> ModelReport:
    failures = []
    for eq in T.equations:
        v = satisfies(S, eq, mode)
        if not v.ok:
            failures.append((eq.name, v))
    return ModelReport(not failures, tuple(failures), mode)


def naturality_audit(
    t: Term, h: VMorphism, S: Structure, T: Structure
) -> Verdict:
    """Interpretation must be natural in the structure along homomorphisms."""
    hcheck = is_homomorphism(h, S, T)
    if not hcheck.ok:
        return Verdict(False, f"not a homomorphism: {hcheck.reason}")
    X, Y = t.arity
    lhs = compose(hom_post(Y, h), interpret(t, S))
    rhs = compose(interpret(t, T), hom_post(X, h))
    if lhs != rhs:
        diff = _first_difference(lhs, rhs)
        return Verdict(False, "naturality square fails", witness=diff)
    return Verdict(True)
