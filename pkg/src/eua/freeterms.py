"""Bounded approximation of the extended-term category: depth-bounded term
enumeration, syntactic congruence (sound for equality), and semantic probing
(sound for inequality). Statuses always disclose the bound used."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .construct import enumerate_structures
from .language import Language, Structure
from .semantics import interpret
from .term import (
    CompT,
    MorT,
    PowT,
    SymT,
    Term,
    TupleT,
    comp_term,
    mor_term,
    pow_term,
    sym_term,
    tuple_term,
)
from .vbase import (
    BudgetExceeded,
    Deadline,
    DEFAULT_MET_VALUES,
    VObject,
    compose,
    coproduct,
    enumerate_morphisms,
    identity,
    tensor,
)


def term_depth(t: Term) -> int:
    """Constructor applications; morphism and symbol leaves cost zero."""
    if isinstance(t, (MorT, SymT)):
        return 0
    if isinstance(t, PowT):
        return 1 + term_depth(t.body)
    if isinstance(t, CompT):
        return 1 + max(term_depth(t.after), term_depth(t.first))
    if isinstance(t, TupleT):
        return 1 + max(term_depth(p) for p in t.parts)
    raise TypeError(t)


def enumerate_terms(
    L: Language,
    X: VObject,
    Y: VObject,
    depth: int,
    universe=None,
    morphism_leaves=None,
    powers=(),
    tuple_width: int = 2,
    max_terms: int = 200000,
) -> tuple[Term, ...]:
    """All terms of arity (X, Y) with at most `depth` constructor layers.

    Leaves are the language's symbols plus morphism terms between universe
    objects (or the explicit morphism_leaves). Power terms are generated for
    the listed `powers` objects when the resulting tensor arities stay in
    the universe; tuples go up to tuple_width over universe coproducts.
    """
    if universe is None:
        universe = {X, Y}
        for (_, Xf, Yf) in L.symbols:
            universe |= {Xf, Yf}
    universe = list(dict.fromkeys(universe))
    if not universe:
        raise ValueError("arity universe is empty")
    uset = set(universe)

    by_arity: dict[tuple[VObject, VObject], dict[Term, int]] = {}

    def add(t: Term, d: int):
        key = t.arity
        slot = by_arity.setdefault(key, {})
        if t not in slot or slot[t] > d:
            slot[t] = d
            if sum(len(v) for v in by_arity.values()) > max_terms:
                raise BudgetExceeded(f"more than {max_terms} terms")

    if morphism_leaves is None:
        morphism_leaves = [
            m
            for A in universe
            for B in universe
            for m in enumerate_morphisms(A, B)
        ]
    for m in morphism_leaves:
        add(mor_term(m), 0)
    for (s, _, _) in L.symbols:
        add(sym_term(s, L), 0)

    for layer in range(1, depth + 1):
        current = [
            (t, d)
            for slot in list(by_arity.values())
            for (t, d) in slot.items()
            if d < layer
        ]
        # composites
        by_input: dict[VObject, list[tuple[Term, int]]] = {}
        for (t, d) in current:
            by_input.setdefault(t.arity[0], []).append((t, d))
        for (t, d) in current:
            mid = t.arity[1]
            for (s, ds) in by_input.get(mid, []):
                if max(d, ds) + 1 <= layer:
                    add(comp_term(s, t), max(d, ds) + 1)
        # powers
        for Z in powers:
            for (t, d) in current:
                Xb, Yb = t.arity
                if tensor(Z, Xb) in uset and tensor(Z, Yb) in uset:
                    add(pow_term(Z, t), d + 1)
        # tuples
        if tuple_width >= 2:
            for Xin, slot in list(by_input.items()):
                terms_here = [(t, d) for (t, d) in slot]
                for k in range(2, tuple_width + 1):
                    for combo in itertools.product(terms_here, repeat=k):
                        d = max(dd for (_, dd) in combo) + 1
                        if d > layer:
                            continue
                        out = coproduct(
                            L.base, [t.arity[1] for (t, _) in combo]
                        )[0]
                        if out in uset:
                            add(tuple_term([t for (t, _) in combo]), d)

    return tuple(
        t
        for (t, d) in sorted(
            by_arity.get((X, Y), {}).items(), key=lambda kv: kv[1]
        )
    )


@dataclass(frozen=True)
class SeparationVerdict:
    separated: bool
    bound: int
    witness: Optional[Structure] = None

    @property
    def status(self) -> str:
        if self.separated:
            return "semantically-separated"
        return f"undecided-at({self.bound})"


def semantic_separate(
    t: Term,
    s: Term,
    L: Language,
    probe_bound: int,
    met_values=DEFAULT_MET_VALUES,
    max_structures: int = 100000,
    budget_ms: Optional[int] = None,
    probes=None,
) -> SeparationVerdict:
    """Search bounded structures for one where the interpretations differ."""
    if t.arity != s.arity:
        raise ValueError("terms must share an arity")
    if probes is None:
        probes = enumerate_structures(
            L, probe_bound, met_values, max_structures, budget_ms
        )
    for S in probes:
        if interpret(t, S) != interpret(s, S):
            return SeparationVerdict(True, probe_bound, S)
    return SeparationVerdict(False, probe_bound)


# -- congruence closure -------------------------------------------------------


class _Partition:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        r = x
        while self.parent[r] != r:
            r = self.parent[r]
        while self.parent[x] != r:
            self.parent[x], x = r, self.parent[x]
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
            return True
        return False

    def classes(self):
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def _identity_like(t: Term) -> bool:
    return isinstance(t, MorT) and t.morphism == identity(t.morphism.dom)


def congruence_classes(terms) -> list[list[Term]]:
    """Partition terms by the syntactic laws: category laws, composition of
    morphism terms, power functoriality, and the tuple projection law.

    Only sound rewrites are applied; two terms in one class are equal in
    every structure.
    """
    terms = list(terms)
    tset = set(terms)
    part = _Partition(terms)

    def canon(t: Term) -> Term:
        # normalize: assoc-flatten composites, drop identities, fuse
        # morphism composites, push powers through composites
        if isinstance(t, CompT):
            chain = _comp_chain(t)
            chain = [c for c in chain if not _identity_like(c)]
            if not chain:
                X = t.arity[0]
                return mor_term(identity(X))
            fused = [canon(c) for c in chain]
            out = []
            for c in fused:
                if out and isinstance(out[-1], MorT) and isinstance(c, MorT):
                    # (g-term after f-term) with f applied first is the
                    # term of the composite morphism f o g at base level
                    prev = out.pop()
                    out.append(
                        mor_term(compose(c.morphism, prev.morphism))
                    )
                else:
                    out.append(c)
            out = [c for c in out if not _identity_like(c)]
            if not out:
                return mor_term(identity(t.arity[0]))
            acc = out[0]
            for c in out[1:]:
                acc = comp_term(c, acc)
            return acc
        if isinstance(t, PowT):
            body = canon(t.body)
            if isinstance(body, MorT):
                from .construct import _tensor_morphism

                return mor_term(
                    _tensor_morphism(identity(t.by), body.morphism)
                )
            if isinstance(body, CompT):
                return canon(
                    comp_term(
                        pow_term(t.by, body.after),
                        pow_term(t.by, body.first),
                    )
                )
            return pow_term(t.by, body)
        if isinstance(t, TupleT):
            return tuple_term([canon(p) for p in t.parts])
        return t

    buckets: dict[Term, list[Term]] = {}
    for t in terms:
        buckets.setdefault(canon(t), []).append(t)
    for group in buckets.values():
        for other in group[1:]:
            part.union(group[0], other)

    # tuple projection law: proj_i o tuple(ts) ~ ts[i]
    for t in terms:
        if isinstance(t, CompT) and isinstance(t.first, TupleT):
            tup = t.first
            if isinstance(t.after, MorT):
                C, injs = coproduct(
                    tup.base, [p.arity[1] for p in tup.parts]
                )
                for i, inj in enumerate(injs):
                    if t.after.morphism == inj and tup.parts[i] in tset:
                        part.union(t, tup.parts[i])

    # congruence: merge composites/powers/tuples of merged parts
    changed = True
    while changed:
        changed = False
        reps: dict[Term, Term] = {t: part.find(t) for t in terms}
        index: dict[tuple, list[Term]] = {}
        for t in terms:
            key = _shape_key(t, reps)
            index.setdefault(key, []).append(t)
        for group in index.values():
            for other in group[1:]:
                if part.union(group[0], other):
                    changed = True
    return part.classes()


def _comp_chain(t: Term):
    if isinstance(t, CompT):
        return _comp_chain(t.first) + _comp_chain(t.after)
    return [t]


def _shape_key(t: Term, reps):
    if isinstance(t, CompT):
        return ("comp", reps[t.after] if t.after in reps else t.after,
                reps[t.first] if t.first in reps else t.first)
    if isinstance(t, PowT):
        return ("pow", t.by, reps[t.body] if t.body in reps else t.body)
    if isinstance(t, TupleT):
        return ("tuple",) + tuple(
            reps[p] if p in reps else p for p in t.parts
        )
    return ("leaf", t)


@dataclass(frozen=True)
class HomTable:
    input: VObject
    output: VObject
    terms: tuple[Term, ...]
    classes: tuple[tuple[Term, ...], ...]
    statuses: tuple[str, ...]  # per class pair status matrix is implicit;
    # statuses[i] reports how class i relates to the others


def hom_table(
    L: Language,
    objects,
    depth: int,
    probe_bound: int,
    met_values=DEFAULT_MET_VALUES,
    max_structures: int = 50000,
    powers=(),
    budget_ms: Optional[int] = None,
) -> dict[tuple[VObject, VObject], HomTable]:
    """Tables of depth-bounded terms per arity pair, partitioned by the
    syntactic congruence and then probed for semantic separation."""
    objects = list(objects)
    out = {}
    probes = list(
        enumerate_structures(L, probe_bound, met_values, max_structures,
                             budget_ms)
    )
    for X in objects:
        for Y in objects:
            terms = enumerate_terms(
                L, X, Y, depth, universe=objects, powers=powers
            )
            if not terms:
                continue
            classes = congruence_classes(terms)
            statuses = []
            for i, cls in enumerate(classes):
                separated_from_all = True
                for j, other in enumerate(classes):
                    if i == j:
                        continue
                    v = semantic_separate(
                        cls[0], other[0], L, probe_bound,
                        met_values, max_structures, probes=probes,
                    )
                    if not v.separated:
                        separated_from_all = False
                statuses.append(
                    "semantically-separated"
                    if separated_from_all and len(classes) > 1
                    else ("syntactic" if len(classes) == 1
                          else f"undecided-at({probe_bound})")
                )
            out[(X, Y)] = HomTable(
                X, Y, terms, tuple(tuple(c) for c in classes),
                tuple(statuses),
            )
    return out
