"""Exhaustive desk-scale audits: object families, the currying adjunction,
unit-generator verification, and hom-stability of morphism classes."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..values import INF, d_le, d_max
from .core import BaseError, BaseTag, VMorphism, VObject, compose, identity
from .build import make_graph, make_metric, make_poset, make_quiver, make_set, unit, tensor
from .classify import (
    is_regular_epi,
    is_strong_epi,
    is_surjection,
)
from .homs import enumerate_morphisms, hom, hom_post, transpose, untranspose


class BudgetExceeded(Exception):
    """Raised when a declared enumeration or wall-clock budget runs out."""


class Deadline:
    def __init__(self, ms: Optional[int] = None):
        self.t0 = time.monotonic()
        self.ms = ms

    def check(self, what: str = "audit"):
        if self.ms is not None and (time.monotonic() - self.t0) * 1000 > self.ms:
            raise BudgetExceeded(f"{what}: wall clock budget {self.ms} ms")

    @property
    def elapsed_ms(self) -> int:
        return int((time.monotonic() - self.t0) * 1000)


DEFAULT_MET_VALUES = (Fraction(1), Fraction(2), INF)


def enumerate_objects(
    base: BaseTag,
    max_size: int,
    met_values=DEFAULT_MET_VALUES,
    include_empty: bool = True,
):
    """All labeled objects of the base with carrier size <= max_size.

    FinMet draws off-diagonal distances from met_values; FinMGraph reads
    max_size as a bound on |vertices| + |edges| (both sorts are carrier).
    """
    sizes = range(0 if include_empty else 1, max_size + 1)
    out = []
    if base is BaseTag.FinSet:
        for n in sizes:
            out.append(make_set(tuple(f"x{i}" for i in range(n))))
        return out
    if base is BaseTag.FinPos:
        for n in sizes:
            names = tuple(f"x{i}" for i in range(n))
            offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
            for sub in itertools.product([False, True], repeat=len(offdiag)):
                rel = {(i, i) for i in range(n)}
                rel.update(p for p, keep in zip(offdiag, sub) if keep)
                try:
                    out.append(
                        VObject(base, names, leq=frozenset(rel))
                    )
                except BaseError:
                    continue
        return out
    if base is BaseTag.FinMet:
        vals = [v for v in met_values if v != Fraction(0)]
        for n in sizes:
            names = tuple(f"x{i}" for i in range(n))
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            for choice in itertools.product(vals, repeat=len(pairs)):
                mat = [[Fraction(0)] * n for _ in range(n)]
                for (i, j), v in zip(pairs, choice):
                    mat[i][j] = v
                    mat[j][i] = v
                try:
                    out.append(
                        VObject(
                            base,
                            names,
                            dist=tuple(tuple(r) for r in mat),
                        )
                    )
                except BaseError:
                    continue
        return out
    if base is BaseTag.FinGraph:
        for n in sizes:
            names = tuple(f"x{i}" for i in range(n))
            canon = [(i, j) for i in range(n) for j in range(i, n)]
            for sub in itertools.product([False, True], repeat=len(canon)):
                e = set()
                for (i, j), keep in zip(canon, sub):
                    if keep:
                        e.add((i, j))
                        e.add((j, i))
                out.append(VObject(base, names, edges=frozenset(e)))
        return out
    # FinMGraph: |V| + |E| <= max_size
    for n in sizes:
        names = tuple(f"x{i}" for i in range(n))
        max_edges = max_size - n
        for k in range(max_edges + 1):
            if n == 0 and k > 0:
                continue
            slots = list(itertools.product(range(n), repeat=2))
            for combo in itertools.combinations_with_replacement(slots, k):
                q = tuple(
                    (f"e{t}", s, d) for t, (s, d) in enumerate(combo)
                )
                out.append(VObject(base, names, qedges=q))
    return out


@dataclass
class AuditResult:
    ok: bool
    checked: int
    elapsed_ms: int
    failure: Optional[str] = None
    map_level: int = 0


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


def _dp_count(n, m, pairs, self_ok, pair_ok, factor_fn=None):
    """Frontier DP: pairs are essential binary constraints among 0..n-1."""
    later = [[] for _ in range(n)]
    earlier = [[] for _ in range(n)]
    for (a, b) in pairs:
        lo, hi = min(a, b), max(a, b)
        later[lo].append(hi)
        earlier[hi].append((a, b))
    states: dict[tuple, int] = {(): 1}
    keys: tuple = ()
    for i in range(n):
        kept = tuple(
            sorted({j for j in range(i + 1) if any(k > i for k in later[j])})
        )
        newstates: dict[tuple, int] = {}
        for state, cnt in states.items():
            assign = dict(zip(keys, state))
            for v in range(m):
                base_factor = self_ok(i, v)
                if not base_factor:
                    continue
                total = cnt * base_factor
                good = True
                for (a, b) in earlier[i]:
                    va = v if a == i else assign[a]
                    vb = v if b == i else assign[b]
                    f = pair_ok(a, b, va, vb)
                    if not f:
                        good = False
                        break
                    total *= f
                if not good:
                    continue
                assign[i] = v
                key = tuple(assign[j] for j in kept)
                newstates[key] = newstates.get(key, 0) + total
        states = newstates
        keys = kept
    return sum(states.values())


_count_cache: dict = {}


def _dist_key(v):
    return (1, 0, 0) if v is INF else (0, v.numerator, v.denominator)


def iso_key(X: VObject):
    """A canonical form under carrier permutation (desk-scale sizes)."""
    n = X.size
    perms = list(itertools.permutations(range(n)))
    best = None
    for p in perms:
        if X.base is BaseTag.FinSet:
            enc = (n,)
        elif X.base is BaseTag.FinPos:
            enc = tuple(sorted((p[i], p[j]) for (i, j) in X.leq))
        elif X.base is BaseTag.FinMet:
            inv = [0] * n
            for a, b in enumerate(p):
                inv[b] = a
            enc = tuple(
                _dist_key(X.dist[inv[a]][inv[b]])
                for a in range(n)
                for b in range(n)
            )
        elif X.base is BaseTag.FinGraph:
            enc = tuple(sorted((p[i], p[j]) for (i, j) in X.edges))
        else:
            enc = tuple(sorted((p[s], p[t]) for (_, s, t) in X.qedges))
        if best is None or enc < best:
            best = enc
    return (X.base, n, best)


def _pair_rows(H: VObject, sig, ok) -> list[int]:
    """Bitmask rows: rows[u] has bit v iff the ordered pair (u, v) is ok."""
    key = ("rows", hash(H), sig)
    rows = _count_cache.get(key)
    if rows is None:
        m = H.size
        rows = []
        for u in range(m):
            bits = 0
            for v in range(m):
                if ok(u, v):
                    bits |= 1 << v
            rows.append(bits)
        _count_cache[key] = rows
    return rows


def _contract_small(comp, pairs, masks, rowfn) -> int:
    """Count maps from a <=3-slot component via bitmask contraction.

    comp: slot ids; pairs: constrained (a, b) slot pairs with a < b;
    masks[slot]: allowed-image bitmask; rowfn(a, b): rows for that pair.
    """
    c = len(comp)
    if c == 1:
        return masks[comp[0]].bit_count()
    if c == 2:
        a, b = comp
        rows = rowfn(a, b)
        mb = masks[b]
        total = 0
        ma = masks[a]
        u = 0
        mm = ma
        while mm:
            low = mm & -mm
            u = low.bit_length() - 1
            total += (rows[u] & mb).bit_count()
            mm ^= low
        return total
    a, b, c3 = comp
    pset = set(pairs)
    rows_ab = rowfn(a, b) if (a, b) in pset else None
    rows_ac = rowfn(a, c3) if (a, c3) in pset else None
    rows_bc = rowfn(b, c3) if (b, c3) in pset else None
    total = 0
    ma, mb, mc = masks[a], masks[b], masks[c3]
    mm = ma
    while mm:
        lowu = mm & -mm
        u = lowu.bit_length() - 1
        mm ^= lowu
        allowed_b = mb & (rows_ab[u] if rows_ab is not None else ~0)
        base_c = mc & (rows_ac[u] if rows_ac is not None else ~0)
        bb = allowed_b
        while bb:
            lowv = bb & -bb
            v = lowv.bit_length() - 1
            bb ^= lowv
            cc = base_c & (rows_bc[v] if rows_bc is not None else ~0)
            total += cc.bit_count()
    return total


def count_structure_maps(X: VObject, Y: VObject) -> int:
    """|Hom(X, Y)| counted without enumeration.

    Vacuous constraints (pairs the codomain can never violate) are dropped,
    the domain is split into constraint components, and per-component counts
    are cached against the codomain.
    """
    base = X.base
    n = X.size
    m = Y.size
    if m == 0:
        return 0 if n > 0 else 1
    if n == 0:
        return 1

    if base is BaseTag.FinSet:
        return m ** n

    if base is BaseTag.FinMet:
        dmax = d_max(
            [Y.dist[i][j] for i in range(m) for j in range(m)] or [INF]
        )
        ess = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if not d_le(dmax, X.dist[i][j])
        ]
        self_ok = lambda i, v: 1
        pair_ok = lambda a, b, va, vb: 1 if d_le(Y.dist[va][vb], X.dist[a][b]) else 0
        sig = lambda comp: (
            "met",
            tuple(
                tuple(
                    X.dist[a][b] if (min(a, b), max(a, b)) in essset else INF
                    for b in comp
                )
                for a in comp
            ),
        )
        essset = set(ess)
    elif base is BaseTag.FinPos:
        total_rel = all(
            (i, j) in Y.leq or (j, i) in Y.leq
            for i in range(m)
            for j in range(m)
        ) and frozenset((i, j) for i in range(m) for j in range(m)) == Y.leq
        ess = [] if total_rel else [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if (i, j) in X.leq or (j, i) in X.leq
        ]
        self_ok = lambda i, v: 1
        def pair_ok(a, b, va, vb):
            if (a, b) in X.leq and (va, vb) not in Y.leq:
                return 0
            if (b, a) in X.leq and (vb, va) not in Y.leq:
                return 0
            return 1
        sig = lambda comp: (
            "pos",
            tuple(
                tuple(
                    ((a, b) in X.leq, (b, a) in X.leq) for b in comp
                )
                for a in comp
            ),
        )
    elif base is BaseTag.FinGraph:
        complete = len(Y.edges) == m * m
        ess = [] if complete else [
            (i, j) for (i, j) in X.edges if i < j
        ]
        loops = set() if complete else {i for (i, j) in X.edges if i == j}
        self_ok = lambda i, v: (
            1 if i not in loops or (v, v) in Y.edges else 0
        )
        pair_ok = lambda a, b, va, vb: (
            1 if (va, vb) in Y.edges and (vb, va) in Y.edges else 0
        )
        sig = lambda comp: (
            "gra",
            tuple(
                tuple((a, b) in X.edges for b in comp) for a in comp
            ),
            tuple(a in loops for a in comp),
        )
    else:  # FinMGraph
        cands: dict[tuple[int, int], int] = {}
        for (_, s, t) in Y.qedges:
            cands[(s, t)] = cands.get((s, t), 0) + 1
        counts = {cands.get((u, v), 0) for u in range(m) for v in range(m)}
        if len(counts) == 1:
            c = counts.pop()
            if c == 0 and X.qedges:
                return 0
            return (m ** n) * (c ** len(X.qedges))
        ess = sorted(
            {
                (min(s, t), max(s, t))
                for (_, s, t) in X.qedges
                if s != t
            }
        )
        loop_mult = [0] * n
        emult: dict[tuple[int, int], int] = {}
        for (_, s, t) in X.qedges:
            if s == t:
                loop_mult[s] += 1
            else:
                emult[(s, t)] = emult.get((s, t), 0) + 1
        def self_ok(i, v):
            if loop_mult[i] == 0:
                return 1
            c = cands.get((v, v), 0)
            return c ** loop_mult[i] if c else 0
        def pair_ok(a, b, va, vb):
            f = 1
            k = emult.get((a, b), 0)
            if k:
                c = cands.get((va, vb), 0)
                if c == 0:
                    return 0
                f *= c ** k
            k = emult.get((b, a), 0)
            if k:
                c = cands.get((vb, va), 0)
                if c == 0:
                    return 0
                f *= c ** k
            return f
        sig = lambda comp: (
            "mgra",
            tuple(
                tuple(
                    (emult.get((a, b), 0), emult.get((b, a), 0))
                    for b in comp
                )
                for a in comp
            ),
            tuple(loop_mult[a] for a in comp),
        )

    uf = _UF(n)
    for (a, b) in ess:
        uf.union(a, b)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(uf.find(i), []).append(i)

    full_mask = (1 << m) - 1

    def slot_mask(i):
        if base is BaseTag.FinGraph and i in loops:
            bits = 0
            for v in range(m):
                if (v, v) in Y.edges:
                    bits |= 1 << v
            return bits
        return full_mask

    def rowfn(a, b):
        if base is BaseTag.FinMet:
            thr = X.dist[a][b]
            return _pair_rows(
                Y,
                ("met", _dist_key(thr)),
                lambda u, v: d_le(Y.dist[u][v], thr),
            )
        if base is BaseTag.FinPos:
            fwd = (a, b) in X.leq
            bwd = (b, a) in X.leq
            return _pair_rows(
                Y,
                ("pos", fwd, bwd),
                lambda u, v: (not fwd or (u, v) in Y.leq)
                and (not bwd or (v, u) in Y.leq),
            )
        return _pair_rows(
            Y, ("gra",), lambda u, v: (u, v) in Y.edges
        )

    total = 1
    ykey = hash(Y)
    for comp in comps.values():
        comp = sorted(comp)
        if len(comp) == 1:
            total *= sum(self_ok(comp[0], u) for u in range(m))
            continue
        if len(comp) <= 3 and base is not BaseTag.FinMGraph:
            cpairs = sorted(
                {
                    (min(a, b), max(a, b))
                    for (a, b) in ess
                    if a in comp and b in comp
                }
            )
            masks = {i: slot_mask(i) for i in comp}
            total *= _contract_small(comp, cpairs, masks, rowfn)
            if total == 0:
                return 0
            continue
        key = (sig(comp), ykey)
        cached = _count_cache.get(key)
        if cached is None:
            pos = {a: k for k, a in enumerate(comp)}
            cpairs = [
                (pos[a], pos[b])
                for (a, b) in ess
                if a in pos and b in pos
            ]
            cached = _dp_count(
                len(comp),
                m,
                cpairs,
                lambda k, v: self_ok(comp[k], v),
                lambda a, b, va, vb: pair_ok(comp[a], comp[b], va, vb),
            )
            _count_cache[key] = cached
        total *= cached
        if total == 0:
            return 0
    return total


def adjunction_audit(
    base: BaseTag,
    bound: int,
    met_values=DEFAULT_MET_VALUES,
    naturality_bound: int = 2,
    map_level_cap: int = 4000,
    up_to_iso: bool = True,
    budget_ms: Optional[int] = None,
) -> AuditResult:
    """Verify Hom(X (x) Y, Z) ~ Hom(X, [Y, Z]) bijectively and naturally.

    For every object triple of the bound family (deduplicated up to
    isomorphism: both hom-set cardinalities are iso-invariants) the two
    hom-sets are counted independently and compared. Whenever the sets are
    small enough (map_level_cap) the transpose/untranspose round trip is
    verified map by map as well; naturality against postcomposition
    h: Z -> Z' runs on the naturality_bound family.
    """
    deadline = Deadline(budget_ms)
    objs = enumerate_objects(base, bound, met_values)
    if up_to_iso:
        seen_keys = set()
        reps = []
        for o in objs:
            k = iso_key(o)
            if k not in seen_keys:
                seen_keys.add(k)
                reps.append(o)
        objs = reps
    checked = 0
    map_level = 0
    for X in objs:
        for Y in objs:
            T = tensor(X, Y)
            deadline.check("adjunction")
            for Z in objs:
                checked += 1
                H = hom(Y, Z)
                nT = count_structure_maps(T, Z)
                nS = count_structure_maps(X, H)
                if nT != nS:
                    return AuditResult(
                        False, checked, deadline.elapsed_ms,
                        f"|Hom(T,Z)|={nT} != |Hom(X,[Y,Z])|={nS} "
                        f"at X={X.carrier} Y={Y.carrier} Z={Z.carrier}",
                        map_level,
                    )
                if nS <= map_level_cap:
                    map_level += 1
                    seen = set()
                    for g in enumerate_morphisms(X, H):
                        try:
                            f = untranspose(g, X, Y, Z)
                        except BaseError as exc:
                            return AuditResult(
                                False, checked, deadline.elapsed_ms,
                                f"untranspose invalid at {X.carrier},"
                                f"{Y.carrier},{Z.carrier}: {exc}",
                                map_level,
                            )
                        if transpose(f, X, Y) != g:
                            return AuditResult(
                                False, checked, deadline.elapsed_ms,
                                "transpose round trip failed",
                                map_level,
                            )
                        if f in seen:
                            return AuditResult(
                                False, checked, deadline.elapsed_ms,
                                "untranspose not injective",
                                map_level,
                            )
                        seen.add(f)
                    if len(seen) != nT:
                        return AuditResult(
                            False, checked, deadline.elapsed_ms,
                            "untranspose not surjective",
                            map_level,
                        )
    # naturality on the smaller family
    small = enumerate_objects(base, naturality_bound, met_values)
    for X in small:
        for Y in small:
            T = tensor(X, Y)
            for Z in small:
                for Zp in small:
                    deadline.check("adjunction naturality")
                    for h in enumerate_morphisms(Z, Zp):
                        post = hom_post(Y, h)
                        for f in enumerate_morphisms(T, Z):
                            lhs = transpose(compose(h, f), X, Y)
                            rhs = compose(post, transpose(f, X, Y))
                            if lhs != rhs:
                                return AuditResult(
                                    False, checked, deadline.elapsed_ms,
                                    f"naturality failed at {X.carrier},"
                                    f"{Y.carrier},{Z.carrier}",
                                    map_level,
                                )
    return AuditResult(True, checked, deadline.elapsed_ms, None, map_level)


def verify_unit_generator(
    base: BaseTag,
    bound: int,
    met_values=DEFAULT_MET_VALUES,
) -> tuple[bool, Optional[tuple[VMorphism, VMorphism]]]:
    """Check that global points separate parallel morphisms up to the bound."""
    objs = enumerate_objects(base, bound, met_values)
    I = unit(base)
    for A in objs:
        pts = enumerate_morphisms(I, A)
        for B in objs:
            seen: dict[tuple, VMorphism] = {}
            for f in enumerate_morphisms(A, B):
                sig = tuple(compose(f, p) for p in pts)
                if sig in seen and seen[sig] != f:
                    return False, (seen[sig], f)
                seen.setdefault(sig, f)
    return True, None


_CLASS_TESTS = {
    "Surj": is_surjection,
    "RegEpi": is_regular_epi,
    "StrongEpi": is_strong_epi,
}


def is_stable(
    X: VObject,
    cls: str,
    bound: int,
    met_values=DEFAULT_MET_VALUES,
    budget_ms: Optional[int] = None,
) -> tuple[bool, Optional[VMorphism]]:
    """Does hom(X, e) stay in the class for every e in the class (<= bound)?"""
    test = _CLASS_TESTS[cls]
    deadline = Deadline(budget_ms)
    objs = enumerate_objects(X.base, bound, met_values)
    for A in objs:
        for B in objs:
            deadline.check("is_stable")
            for e in enumerate_morphisms(A, B):
                if not test(e):
                    continue
                if not test(hom_post(X, e)):
                    return False, e
    return True, None
