"""Objects and morphisms of the five finite enrichment bases.

A VObject is an immutable finite object of one of the bases FinSet, FinPos,
FinMet, FinGraph, FinMGraph; a VMorphism is a structure-preserving map.
Equality of objects is structural (carrier names included), so distinct
constructions of isomorphic objects are distinct values and all coherence
is explicit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..values import INF, d_add, d_le, is_dist


class BaseError(Exception):
    """Ill-formed object or morphism data."""


class BaseMismatch(BaseError):
    """Operands live over different bases."""


class BaseTag(enum.Enum):
    FinSet = "FinSet"
    FinPos = "FinPos"
    FinMet = "FinMet"
    FinGraph = "FinGraph"
    FinMGraph = "FinMGraph"

    @property
    def unit_is_generator(self) -> bool:
        """Whether points separate parallel morphisms (checked by audits)."""
        return self in (BaseTag.FinSet, BaseTag.FinPos, BaseTag.FinMet)


@dataclass(frozen=True, eq=False)
class VObject:
    base: BaseTag
    carrier: tuple[str, ...]
    # FinPos: reflexive transitive antisymmetric relation as index pairs.
    leq: Optional[frozenset[tuple[int, int]]] = None
    # FinMet: row-major symmetric matrix of Fraction | INF.
    dist: Optional[tuple[tuple[object, ...], ...]] = None
    # FinGraph: symmetric edge relation as index pairs (both orientations).
    edges: Optional[frozenset[tuple[int, int]]] = None
    # FinMGraph: named edges (name, src index, tgt index) in declaration order.
    qedges: Optional[tuple[tuple[str, int, int], ...]] = None

    def __post_init__(self):
        names = self.carrier
        if len(set(names)) != len(names):
            raise BaseError(f"duplicate carrier names: {names}")
        n = len(names)
        if self.base is BaseTag.FinPos:
            rel = self.leq
            if rel is None:
                raise BaseError("FinPos object needs leq")
            for (i, j) in rel:
                if not (0 <= i < n and 0 <= j < n):
                    raise BaseError("leq index out of range")
            for i in range(n):
                if (i, i) not in rel:
                    raise BaseError("leq not reflexive")
            for (i, j) in rel:
                if (j, i) in rel and i != j:
                    raise BaseError("leq not antisymmetric")
                for (k, l) in rel:
                    if k == j and (i, l) not in rel:
                        raise BaseError("leq not transitive")
        elif self.base is BaseTag.FinMet:
            d = self.dist
            if d is None or len(d) != n or any(len(r) != n for r in d):
                raise BaseError("FinMet object needs an n x n matrix")
            for i in range(n):
                if d[i][i] != Fraction(0):
                    raise BaseError("nonzero diagonal")
                for j in range(n):
                    if not is_dist(d[i][j]):
                        raise BaseError(f"bad distance {d[i][j]!r}")
                    if d[i][j] != d[j][i]:
                        raise BaseError("metric not symmetric")
                    if i != j and d[i][j] == Fraction(0):
                        raise BaseError("zero distance between distinct points")
                    for k in range(n):
                        if not d_le(d[i][j], d_add(d[i][k], d[k][j])):
                            raise BaseError("triangle inequality fails")
        elif self.base is BaseTag.FinGraph:
            e = self.edges
            if e is None:
                raise BaseError("FinGraph object needs edges")
            for (i, j) in e:
                if not (0 <= i < n and 0 <= j < n):
                    raise BaseError("edge index out of range")
                if (j, i) not in e:
                    raise BaseError("edge relation not symmetric")
        elif self.base is BaseTag.FinMGraph:
            q = self.qedges
            if q is None:
                raise BaseError("FinMGraph object needs qedges")
            enames = [name for (name, _, _) in q]
            if len(set(enames)) != len(enames):
                raise BaseError("duplicate edge names")
            for (_, s, t) in q:
                if not (0 <= s < n and 0 <= t < n):
                    raise BaseError("edge endpoint out of range")

    def _key(self):
        return (self.base, self.carrier, self.leq, self.dist,
                self.edges, self.qedges)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VObject):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    # -- basic accessors -------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.carrier)

    def index(self, name: str) -> int:
        try:
            return self.carrier.index(name)
        except ValueError:
            raise BaseError(f"{name!r} not in carrier {self.carrier}") from None

    def le(self, a: str, b: str) -> bool:
        return (self.index(a), self.index(b)) in self.leq

    def d(self, a: str, b: str):
        return self.dist[self.index(a)][self.index(b)]

    def has_edge(self, a: str, b: str) -> bool:
        return (self.index(a), self.index(b)) in self.edges

    def edge_names(self) -> tuple[str, ...]:
        return tuple(name for (name, _, _) in self.qedges)

    def edge_endpoints(self, name: str) -> tuple[str, str]:
        for (e, s, t) in self.qedges:
            if e == name:
                return (self.carrier[s], self.carrier[t])
        raise BaseError(f"unknown edge {name!r}")

    def __repr__(self):
        return f"VObject({self.base.value}, {list(self.carrier)})"


def _vertex_ok(X: VObject, Y: VObject, vmap: tuple[int, ...]) -> Optional[str]:
    """Return an error string if vmap is not structure preserving, else None."""
    base = X.base
    if base is BaseTag.FinPos:
        for (i, j) in X.leq:
            if (vmap[i], vmap[j]) not in Y.leq:
                return f"not monotone at ({X.carrier[i]},{X.carrier[j]})"
    elif base is BaseTag.FinMet:
        for i in range(X.size):
            for j in range(i + 1, X.size):
                if not d_le(Y.dist[vmap[i]][vmap[j]], X.dist[i][j]):
                    return f"expands ({X.carrier[i]},{X.carrier[j]})"
    elif base is BaseTag.FinGraph:
        for (i, j) in X.edges:
            if (vmap[i], vmap[j]) not in Y.edges:
                return f"edge ({X.carrier[i]},{X.carrier[j]}) not preserved"
    return None


@dataclass(frozen=True, eq=False)
class VMorphism:
    dom: VObject
    cod: VObject
    # Image indices into cod.carrier, aligned with dom.carrier.
    vmap: tuple[int, ...]
    # FinMGraph only: image edge indices aligned with dom.qedges.
    emap: Optional[tuple[int, ...]] = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VMorphism):
            return NotImplemented
        return (
            self.vmap == other.vmap
            and self.emap == other.emap
            and (self.dom is other.dom or self.dom == other.dom)
            and (self.cod is other.cod or self.cod == other.cod)
        )

    def __hash__(self):
        return hash((self.vmap, self.emap, hash(self.dom), hash(self.cod)))

    def __post_init__(self):
        if self.dom.base is not self.cod.base:
            raise BaseMismatch(f"{self.dom.base} vs {self.cod.base}")
        if len(self.vmap) != self.dom.size:
            raise BaseError("vmap length mismatch")
        for i in self.vmap:
            if not (0 <= i < self.cod.size):
                raise BaseError("vmap image out of range")
        err = _vertex_ok(self.dom, self.cod, self.vmap)
        if err:
            raise BaseError(f"not a morphism: {err}")
        if self.dom.base is BaseTag.FinMGraph:
            if self.emap is None or len(self.emap) != len(self.dom.qedges):
                raise BaseError("FinMGraph morphism needs emap")
            for k, (_, s, t) in enumerate(self.dom.qedges):
                (_, s2, t2) = self.cod.qedges[self.emap[k]]
                if s2 != self.vmap[s] or t2 != self.vmap[t]:
                    raise BaseError("emap not compatible with endpoints")
        elif self.emap is not None:
            raise BaseError("emap only allowed for FinMGraph")

    @property
    def base(self) -> BaseTag:
        return self.dom.base

    def apply(self, name: str) -> str:
        return self.cod.carrier[self.vmap[self.dom.index(name)]]

    def apply_edge(self, ename: str) -> str:
        names = self.dom.edge_names()
        return self.cod.qedges[self.emap[names.index(ename)]][0]

    def as_dict(self) -> dict[str, str]:
        return {
            self.dom.carrier[i]: self.cod.carrier[self.vmap[i]]
            for i in range(self.dom.size)
        }

    def __repr__(self):
        arrow = ",".join(
            f"{a}|->{b}" for a, b in self.as_dict().items()
        )
        return f"VMorphism({arrow})"


def identity(X: VObject) -> VMorphism:
    emap = tuple(range(len(X.qedges))) if X.base is BaseTag.FinMGraph else None
    return VMorphism(X, X, tuple(range(X.size)), emap)


def compose(g: VMorphism, f: VMorphism) -> VMorphism:
    """g after f."""
    if f.cod != g.dom:
        raise BaseError("compose endpoint mismatch")
    vmap = tuple(g.vmap[i] for i in f.vmap)
    emap = None
    if f.base is BaseTag.FinMGraph:
        emap = tuple(g.emap[k] for k in f.emap)
    return VMorphism(f.dom, g.cod, vmap, emap)


def morphism_from_dict(
    X: VObject, Y: VObject, vmap: dict[str, str], emap: Optional[dict[str, str]] = None
) -> VMorphism:
    vs = tuple(Y.index(vmap[name]) for name in X.carrier)
    es = None
    if X.base is BaseTag.FinMGraph:
        if emap is None:
            raise BaseError("FinMGraph morphism needs an edge map")
        cod_names = Y.edge_names()
        es = tuple(cod_names.index(emap[name]) for name in X.edge_names())
    return VMorphism(X, Y, vs, es)
