"""Parser, validator, and serializer for the `.eat` theory-file format.

Line/block grammar with `#` comments. Statements:

  base FinSet|FinPos|FinMet|FinGraph|FinMGraph
  object N = set{a b} | poset{elems: a b; le: a<=b} |
             metric{elems: a b; d: a b = 3/2; default = inf} |
             graph{v: a b; e: a-b} | quiver{v: a b; e: e1: a->b} |
             unit | discrete(n) | chain(n) | two_eps(p/q) | path(n) |
             tensor(N1,N2) | product(...) | coproduct(...) | hom(N1,N2)
  morphism h : X -> Y { a|->u; b|->v } [edges { e1|->f1 }]
  language L { f : X -> Y; ... }
  term t over L : (X,Y) = sym f | mor h | mor id(X) | pow(Z, t) |
                          comp(s, t) | tuple(t1, ..., tn) | times(t1, t2)
  axiom a [over L] : t1 = t2
  theory T over L { a1; a2 }
  structure A over L { carrier = N; f = table{ KEY |-> KEY; ... } }
  mlanguage M { mu : [I, I] -> I; ... }      maxiom / mtheory / mstructure

Hom-element keys are literals like {x|->p, y|->q}; tensor keys are tuples
of keys; quiver tables use vtable{...} etable{...} with edge literals
{src KEY; tgt KEY; map e1|->a1}. Rational literals are p/q, integers, or
inf; floats are rejected. Declared arities are checked, never inferred.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .language import Language, Structure, validate_structure
from .multifun import (
    MEquation,
    MLanguage,
    MStructure,
    MTheory,
    interp_arity_object,
    mcomp,
    mmor,
    msigma,
    msym,
    mtensor,
    munitor,
)
from .term import (
    Equation,
    Term,
    Theory,
    comp_term,
    mor_term,
    pow_term,
    sym_term,
    times_term,
    tuple_term,
)
from .values import INF, parse_dist, show_dist
from .vbase import (
    BaseTag,
    VMorphism,
    VObject,
    chain,
    coproduct,
    discrete,
    hom,
    hom_edge_data,
    hom_element_name,
    hom_functions,
    identity,
    make_graph,
    make_metric,
    make_poset,
    make_quiver,
    make_set,
    morphism_from_dict,
    path,
    product,
    tensor,
    two_eps,
    unit,
)


class EatError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# -- tokens -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow2>\|->)
  | (?P<arrow><-|->)
  | (?P<le><=)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[{}()\[\]:;,=*\-/.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise EatError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(val)
        else:
            toks.append(Tok(kind, val, line, col))
            col += len(val)
        i = m.end()
    toks.append(Tok("eof", "", line, col))
    return toks


class _Stream:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.next()
        if t.text != text:
            raise EatError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def expect_kind(self, kind: str) -> Tok:
        t = self.next()
        if t.kind != kind:
            raise EatError(f"expected {kind}, found {t.text!r}", t.line, t.col)
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def err(self, msg: str):
        t = self.peek()
        raise EatError(msg, t.line, t.col)


# -- workspace ---------------------------------------------------------------


@dataclass
class Workspace:
    base: Optional[BaseTag] = None
    objects: dict[str, VObject] = field(default_factory=dict)
    morphisms: dict[str, VMorphism] = field(default_factory=dict)
    languages: dict[str, Language] = field(default_factory=dict)
    terms: dict[str, tuple[Term, str]] = field(default_factory=dict)
    axioms: dict[str, tuple[Equation, str]] = field(default_factory=dict)
    theories: dict[str, Theory] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    mlanguages: dict[str, MLanguage] = field(default_factory=dict)
    mterms: dict[str, tuple[object, str]] = field(default_factory=dict)
    maxioms: dict[str, tuple[MEquation, str]] = field(default_factory=dict)
    mtheories: dict[str, MTheory] = field(default_factory=dict)
    mstructures: dict[str, MStructure] = field(default_factory=dict)
    positions: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict)
    decl_order: list[tuple[str, str]] = field(default_factory=list)
    sources: dict[tuple[str, str], str] = field(default_factory=dict)

    def object_named(self, name: str, tok: Tok) -> VObject:
        if name not in self.objects:
            raise EatError(f"unknown object {name!r}", tok.line, tok.col)
        return self.objects[name]

    def _declare(self, kind, name, tok, source):
        if (kind, name) in self.positions:
            raise EatError(f"duplicate {kind} {name!r}", tok.line, tok.col)
        self.positions[(kind, name)] = (tok.line, tok.col)
        self.decl_order.append((kind, name))
        self.sources[(kind, name)] = source


# -- helpers ------------------------------------------------------------------


def _names_until(ts: _Stream, stops) -> list[str]:
    out = []
    while ts.peek().text not in stops and ts.peek().kind != "eof":
        t = ts.next()
        if t.kind in ("name", "int"):
            out.append(t.text)
        elif t.kind == "string":
            out.append(t.text[1:-1])
        elif t.text == ",":
            continue
        else:
            raise EatError(f"expected a name, found {t.text!r}", t.line, t.col)
    return out


def _parse_dist_tok(ts: _Stream):
    t = ts.next()
    if t.text == "inf":
        return INF
    if t.kind != "int":
        raise EatError(f"malformed distance {t.text!r}", t.line, t.col)
    num = int(t.text)
    if ts.at("/"):
        ts.next()
        den = ts.expect_kind("int")
        try:
            return Fraction(num, int(den.text))
        except ZeroDivisionError:
            raise EatError("zero denominator", den.line, den.col)
    if ts.at("."):
        t2 = ts.peek()
        raise EatError("float literals are not accepted", t2.line, t2.col)
    return Fraction(num)


# -- object expressions --------------------------------------------------------


def _parse_object_expr(ts: _Stream, ws: Workspace) -> VObject:
    t = ts.next()
    base = ws.base
    if t.text == "set":
        ts.expect("{")
        names = _names_until(ts, "}")
        ts.expect("}")
        _need_base(base, BaseTag.FinSet, t)
        return make_set(names)
    if t.text == "poset":
        ts.expect("{")
        ts.expect("elems")
        ts.expect(":")
        names = _names_until(ts, (";", "}"))
        pairs = []
        while ts.at(";"):
            ts.next()
            if ts.at("}"):
                break
            ts.expect("le")
            ts.expect(":")
            while not ts.at(";") and not ts.at("}"):
                a = ts.expect_kind("name").text
                ts.expect("<=")
                b = ts.expect_kind("name").text
                pairs.append((a, b))
                if ts.at(","):
                    ts.next()
        ts.expect("}")
        _need_base(base, BaseTag.FinPos, t)
        return make_poset(names, pairs)
    if t.text == "metric":
        ts.expect("{")
        ts.expect("elems")
        ts.expect(":")
        names = _names_until(ts, (";", "}"))
        dist = {}
        default = INF
        while ts.at(";"):
            ts.next()
            if ts.at("}"):
                break
            key = ts.next()
            if key.text == "d":
                ts.expect(":")
                while not ts.at(";") and not ts.at("}"):
                    a = ts.expect_kind("name").text
                    b = ts.expect_kind("name").text
                    ts.expect("=")
                    v = _parse_dist_tok(ts)
                    dist[(a, b)] = v
                    if ts.at(","):
                        ts.next()
            elif key.text == "default":
                ts.expect("=")
                default = _parse_dist_tok(ts)
            else:
                raise EatError(
                    f"unknown metric clause {key.text!r}", key.line, key.col
                )
        ts.expect("}")
        _need_base(base, BaseTag.FinMet, t)
        return make_metric(names, dist, default)
    if t.text == "graph":
        ts.expect("{")
        ts.expect("v")
        ts.expect(":")
        names = _names_until(ts, (";", "}"))
        edges = []
        while ts.at(";"):
            ts.next()
            if ts.at("}"):
                break
            ts.expect("e")
            ts.expect(":")
            while not ts.at(";") and not ts.at("}"):
                a = ts.expect_kind("name").text
                ts.expect("-")
                b = ts.expect_kind("name").text
                edges.append((a, b))
                if ts.at(","):
                    ts.next()
        ts.expect("}")
        _need_base(base, BaseTag.FinGraph, t)
        return make_graph(names, edges)
    if t.text == "quiver":
        ts.expect("{")
        ts.expect("v")
        ts.expect(":")
        names = _names_until(ts, (";", "}"))
        edges = []
        while ts.at(";"):
            ts.next()
            if ts.at("}"):
                break
            ts.expect("e")
            ts.expect(":")
            while not ts.at(";") and not ts.at("}"):
                e = ts.expect_kind("name").text
                ts.expect(":")
                a = ts.expect_kind("name").text
                ts.expect("->")
                b = ts.expect_kind("name").text
                edges.append((e, a, b))
                if ts.at(","):
                    ts.next()
        ts.expect("}")
        _need_base(base, BaseTag.FinMGraph, t)
        return make_quiver(names, edges)
    if t.text == "unit":
        return unit(base)
    if t.text == "discrete":
        ts.expect("(")
        n = int(ts.expect_kind("int").text)
        ts.expect(")")
        return discrete(base, n)
    if t.text == "chain":
        ts.expect("(")
        n = int(ts.expect_kind("int").text)
        ts.expect(")")
        _need_base(base, BaseTag.FinPos, t)
        return chain(n)
    if t.text == "two_eps":
        ts.expect("(")
        v = _parse_dist_tok(ts)
        ts.expect(")")
        _need_base(base, BaseTag.FinMet, t)
        return two_eps(v)
    if t.text == "path":
        ts.expect("(")
        n = int(ts.expect_kind("int").text)
        ts.expect(")")
        _need_base(base, BaseTag.FinMGraph, t)
        return path(n)
    if t.text == "tensor":
        ts.expect("(")
        a = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(",")
        b = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(")")
        return tensor(a, b)
    if t.text in ("product", "coproduct"):
        ts.expect("(")
        parts = []
        while not ts.at(")"):
            parts.append(ws.object_named(ts.expect_kind("name").text, t))
            if ts.at(","):
                ts.next()
        ts.expect(")")
        maker = product if t.text == "product" else coproduct
        return maker(base, parts)[0]
    if t.text == "hom":
        ts.expect("(")
        a = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(",")
        b = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(")")
        return hom(a, b)
    raise EatError(f"unknown object expression {t.text!r}", t.line, t.col)


def _need_base(declared: Optional[BaseTag], wanted: BaseTag, tok: Tok):
    if declared is not wanted:
        raise EatError(
            f"object form requires base {wanted.value}, file declares "
            f"{declared.value if declared else 'none'}",
            tok.line,
            tok.col,
        )


# -- element literals -----------------------------------------------------------


@dataclass(frozen=True)
class Shape:
    kind: str  # "raw" | "hom" | "tensor" | "unit"
    obj: VObject
    hom_args: Optional[tuple[VObject, VObject]] = None
    parts: Optional[tuple["Shape", ...]] = None


def hom_shape(X: VObject, A: VObject) -> Shape:
    return Shape("hom", hom(X, A), (X, A))


def tensor_shape(parts) -> Shape:
    parts = tuple(parts)
    if not parts:
        b = None
        raise EatError("empty tensor shape needs a base")
    obj = parts[0].obj
    for p in parts[1:]:
        obj = tensor(obj, p.obj)
    return Shape("tensor", obj, None, parts)


def unit_shape(base: BaseTag) -> Shape:
    return Shape("unit", unit(base))


def _parse_vertex_literal(ts: _Stream, shape: Shape) -> str:
    """Parse an element literal against a shape; return the carrier name."""
    t = ts.peek()
    if t.text == "{":
        if shape.kind != "hom":
            ts.err("map literal used where the element is not a hom element")
        ts.next()
        X, A = shape.hom_args
        images = {}
        while not ts.at("}"):
            k = ts.next()
            key = k.text[1:-1] if k.kind == "string" else k.text
            ts.expect("|->")
            v = ts.next()
            val = v.text[1:-1] if v.kind == "string" else v.text
            images[key] = val
            if ts.at(",") or ts.at(";"):
                ts.next()
        ts.expect("}")
        missing = [x for x in X.carrier if x not in images]
        if missing:
            raise EatError(f"map literal missing {missing}", t.line, t.col)
        try:
            return hom_element_name(X, A, images)
        except Exception as exc:
            raise EatError(f"bad hom element: {exc}", t.line, t.col)
    if t.text == "(":
        if shape.kind != "tensor":
            ts.err("tuple literal used where the element is not a tensor")
        ts.next()
        names = []
        for i, part in enumerate(shape.parts):
            if i:
                ts.expect(",")
            names.append(_parse_vertex_literal(ts, part))
        ts.expect(")")
        out = names[0]
        for nm in names[1:]:
            out = f"({out},{nm})"
        return out
    if t.text == "*":
        ts.next()
        return "*"
    tok = ts.next()
    name = tok.text[1:-1] if tok.kind == "string" else tok.text
    if name not in shape.obj.carrier:
        raise EatError(
            f"{name!r} is not an element here", tok.line, tok.col
        )
    return name


def _parse_edge_literal(ts: _Stream, shape: Shape) -> str:
    """Parse an edge literal against a shape; return the edge name."""
    t = ts.peek()
    if t.text == "{":
        if shape.kind != "hom":
            ts.err("edge map literal outside a hom edge")
        ts.next()
        X, A = shape.hom_args
        ts.expect("src")
        src = _parse_vertex_literal(ts, shape)
        ts.expect(";")
        ts.expect("tgt")
        tgt = _parse_vertex_literal(ts, shape)
        emap = {}
        if ts.at(";"):
            ts.next()
            if not ts.at("}"):
                ts.expect("map")
                while not ts.at("}"):
                    k = ts.expect_kind("name").text
                    ts.expect("|->")
                    v = ts.expect_kind("name").text
                    emap[k] = v
                    if ts.at(",") or ts.at(";"):
                        ts.next()
        ts.expect("}")
        H = shape.obj
        src_i = H.index(src)
        tgt_i = H.index(tgt)
        xnames = X.edge_names()
        anames = A.edge_names()
        try:
            assign = tuple(anames.index(emap[e]) for e in xnames)
        except KeyError as exc:
            raise EatError(f"edge map missing {exc}", t.line, t.col)
        for k, (i, j, a) in enumerate(hom_edge_data(X, A)):
            if (i, j, a) == (src_i, tgt_i, assign):
                return H.qedges[k][0]
        raise EatError("no such hom edge", t.line, t.col)
    if t.text == "(":
        if shape.kind != "tensor":
            ts.err("tuple edge literal outside a tensor")
        ts.next()
        names = []
        for i, part in enumerate(shape.parts):
            if i:
                ts.expect(",")
            names.append(_parse_edge_literal(ts, part))
        ts.expect(")")
        out = names[0]
        for nm in names[1:]:
            out = f"({out},{nm})"
        return out
    tok = ts.next()
    name = tok.text[1:-1] if tok.kind == "string" else tok.text
    if name not in shape.obj.edge_names():
        raise EatError(f"{name!r} is not an edge here", tok.line, tok.col)
    return name


def _parse_table(
    ts: _Stream, dom_shape: Shape, cod_shape: Shape
) -> VMorphism:
    """table{...} or vtable{...} etable{...} into a morphism."""
    D, C = dom_shape.obj, cod_shape.obj
    t = ts.next()
    vmap_names: dict[str, str] = {}
    emap_names: dict[str, str] = {}
    if t.text == "table":
        _parse_table_entries(ts, dom_shape, cod_shape, vmap_names)
        if D.base is BaseTag.FinMGraph and D.qedges:
            raise EatError(
                "quiver table needs vtable/etable", t.line, t.col
            )
    elif t.text == "vtable":
        _parse_table_entries(ts, dom_shape, cod_shape, vmap_names)
        if ts.at("etable"):
            ts.next()
            _parse_etable_entries(ts, dom_shape, cod_shape, emap_names)
    else:
        raise EatError(f"expected table, found {t.text!r}", t.line, t.col)
    missing = [x for x in D.carrier if x not in vmap_names]
    if missing:
        raise EatError(f"table missing entries for {missing}", t.line, t.col)
    vmap = {x: vmap_names[x] for x in D.carrier}
    emap = None
    if D.base is BaseTag.FinMGraph:
        missing_e = [e for e in D.edge_names() if e not in emap_names]
        if missing_e:
            raise EatError(
                f"etable missing entries for {missing_e}", t.line, t.col
            )
        emap = {e: emap_names[e] for e in D.edge_names()}
    try:
        return morphism_from_dict(D, C, vmap, emap)
    except Exception as exc:
        raise EatError(f"table is not a morphism: {exc}", t.line, t.col)


def _parse_table_entries(ts, dom_shape, cod_shape, out):
    ts.expect("{")
    while not ts.at("}"):
        k = _parse_vertex_literal(ts, dom_shape)
        ts.expect("|->")
        v = _parse_vertex_literal(ts, cod_shape)
        out[k] = v
        if ts.at(";") or ts.at(","):
            ts.next()
    ts.expect("}")


def _parse_etable_entries(ts, dom_shape, cod_shape, out):
    ts.expect("{")
    while not ts.at("}"):
        k = _parse_edge_literal(ts, dom_shape)
        ts.expect("|->")
        v = _parse_edge_literal(ts, cod_shape)
        out[k] = v
        if ts.at(";") or ts.at(","):
            ts.next()
    ts.expect("}")


# -- term expressions ------------------------------------------------------------


def _parse_term(ts: _Stream, ws: Workspace, L: Language) -> Term:
    t = ts.next()
    if t.text == "sym":
        nm = ts.expect_kind("name")
        try:
            return sym_term(nm.text, L)
        except Exception:
            raise EatError(f"unknown symbol {nm.text!r}", nm.line, nm.col)
    if t.text == "mor":
        if ts.at("id"):
            ts.next()
            ts.expect("(")
            ob = ws.object_named(ts.expect_kind("name").text, t)
            ts.expect(")")
            return mor_term(identity(ob))
        nm = ts.expect_kind("name")
        if nm.text not in ws.morphisms:
            raise EatError(f"unknown morphism {nm.text!r}", nm.line, nm.col)
        return mor_term(ws.morphisms[nm.text])
    if t.text == "pow":
        ts.expect("(")
        ob = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(",")
        body = _parse_term(ts, ws, L)
        ts.expect(")")
        return pow_term(ob, body)
    if t.text == "comp":
        ts.expect("(")
        s = _parse_term(ts, ws, L)
        ts.expect(",")
        u = _parse_term(ts, ws, L)
        ts.expect(")")
        try:
            return comp_term(s, u)
        except Exception as exc:
            raise EatError(str(exc), t.line, t.col)
    if t.text == "tuple":
        ts.expect("(")
        parts = [_parse_term(ts, ws, L)]
        while ts.at(","):
            ts.next()
            parts.append(_parse_term(ts, ws, L))
        ts.expect(")")
        try:
            return tuple_term(parts)
        except Exception as exc:
            raise EatError(str(exc), t.line, t.col)
    if t.text == "times":
        ts.expect("(")
        a = _parse_term(ts, ws, L)
        ts.expect(",")
        b = _parse_term(ts, ws, L)
        ts.expect(")")
        return times_term(a, b)
    if t.kind == "name" and t.text in ws.terms:
        term, lang = ws.terms[t.text]
        return term
    raise EatError(f"unknown term expression {t.text!r}", t.line, t.col)


def _parse_mterm(ts: _Stream, ws: Workspace, L: MLanguage):
    t = ts.next()
    if t.text == "sym":
        nm = ts.expect_kind("name")
        try:
            return msym(nm.text, L)
        except Exception:
            raise EatError(f"unknown symbol {nm.text!r}", nm.line, nm.col)
    if t.text == "mor":
        if ts.at("id"):
            ts.next()
            ts.expect("(")
            ob = ws.object_named(ts.expect_kind("name").text, t)
            ts.expect(")")
            return mmor(identity(ob))
        nm = ts.expect_kind("name")
        if nm.text not in ws.morphisms:
            raise EatError(f"unknown morphism {nm.text!r}", nm.line, nm.col)
        return mmor(ws.morphisms[nm.text])
    if t.text == "tensor":
        ts.expect("(")
        a = _parse_mterm(ts, ws, L)
        ts.expect(",")
        b = _parse_mterm(ts, ws, L)
        ts.expect(")")
        return mtensor(a, b)
    if t.text == "sigma":
        ts.expect("(")
        a = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(",")
        b = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(")")
        return msigma(a, b)
    if t.text in ("lunit", "runit"):
        ts.expect("(")
        a = ws.object_named(ts.expect_kind("name").text, t)
        ts.expect(")")
        return munitor(a, t.text[0])
    if t.text == "comp":
        ts.expect("(")
        s = _parse_mterm(ts, ws, L)
        ts.expect(",")
        u = _parse_mterm(ts, ws, L)
        ts.expect(")")
        try:
            return mcomp(s, u)
        except Exception as exc:
            raise EatError(str(exc), t.line, t.col)
    if t.kind == "name" and t.text in ws.mterms:
        return ws.mterms[t.text][0]
    raise EatError(f"unknown mterm expression {t.text!r}", t.line, t.col)


# -- statements --------------------------------------------------------------------


def parse(text: str) -> Workspace:
    ts = _Stream(tokenize(text))
    ws = Workspace()
    while ts.peek().kind != "eof":
        _parse_statement(ts, ws)
    if ws.base is None and (
        ws.objects or ws.languages or ws.mlanguages
    ):
        raise EatError("no base declared", 1, 1)
    return ws


def _snapshot(ts: _Stream):
    return ts.i


def _source_between(ts: _Stream, start: int) -> str:
    return " ".join(t.text for t in ts.toks[start:ts.i])


def _parse_statement(ts: _Stream, ws: Workspace):
    t = ts.next()
    start = ts.i - 1
    if t.text == "base":
        nm = ts.expect_kind("name")
        try:
            ws.base = BaseTag(nm.text)
        except ValueError:
            raise EatError(f"unknown base {nm.text!r}", nm.line, nm.col)
        return
    if ws.base is None:
        raise EatError("the base must be declared first", t.line, t.col)
    if t.text == "object":
        nm = ts.expect_kind("name")
        ts.expect("=")
        obj = _parse_object_expr(ts, ws)
        ws._declare("object", nm.text, nm, _source_between(ts, start))
        ws.objects[nm.text] = obj
        return
    if t.text == "morphism":
        nm = ts.expect_kind("name")
        ts.expect(":")
        X = ws.object_named(ts.expect_kind("name").text, nm)
        ts.expect("->")
        Y = ws.object_named(ts.expect_kind("name").text, nm)
        vmap = {}
        ts.expect("{")
        while not ts.at("}"):
            k = ts.next()
            key = k.text[1:-1] if k.kind == "string" else k.text
            ts.expect("|->")
            v = ts.next()
            vmap[key] = v.text[1:-1] if v.kind == "string" else v.text
            if ts.at(";") or ts.at(","):
                ts.next()
        ts.expect("}")
        emap = None
        if ts.at("edges"):
            ts.next()
            emap = {}
            ts.expect("{")
            while not ts.at("}"):
                k = ts.expect_kind("name").text
                ts.expect("|->")
                emap[k] = ts.expect_kind("name").text
                if ts.at(";") or ts.at(","):
                    ts.next()
            ts.expect("}")
        try:
            m = morphism_from_dict(X, Y, vmap, emap)
        except Exception as exc:
            raise EatError(f"not a morphism: {exc}", nm.line, nm.col)
        ws._declare("morphism", nm.text, nm, _source_between(ts, start))
        ws.morphisms[nm.text] = m
        return
    if t.text == "language":
        nm = ts.expect_kind("name")
        ts.expect("{")
        syms = []
        while not ts.at("}"):
            s = ts.expect_kind("name")
            ts.expect(":")
            X = ws.object_named(ts.expect_kind("name").text, s)
            ts.expect("->")
            Y = ws.object_named(ts.expect_kind("name").text, s)
            syms.append((s.text, X, Y))
            if ts.at(";"):
                ts.next()
        ts.expect("}")
        ws._declare("language", nm.text, nm, _source_between(ts, start))
        ws.languages[nm.text] = Language(ws.base, tuple(syms))
        return
    if t.text == "term":
        nm = ts.expect_kind("name")
        ts.expect("over")
        ln = ts.expect_kind("name")
        if ln.text not in ws.languages:
            raise EatError(f"unknown language {ln.text!r}", ln.line, ln.col)
        L = ws.languages[ln.text]
        ts.expect(":")
        ts.expect("(")
        X = ws.object_named(ts.expect_kind("name").text, nm)
        ts.expect(",")
        Y = ws.object_named(ts.expect_kind("name").text, nm)
        ts.expect(")")
        ts.expect("=")
        term = _parse_term(ts, ws, L)
        if term.arity != (X, Y):
            raise EatError(
                f"term {nm.text!r} has arity "
                f"({term.arity[0].carrier},{term.arity[1].carrier}), "
                f"declared ({X.carrier},{Y.carrier})",
                nm.line,
                nm.col,
            )
        ws._declare("term", nm.text, nm, _source_between(ts, start))
        ws.terms[nm.text] = (term, ln.text)
        return
    if t.text == "axiom":
        nm = ts.expect_kind("name")
        lang_name = None
        if ts.at("over"):
            ts.next()
            lang_name = ts.expect_kind("name").text
        ts.expect(":")
        L = ws.languages.get(lang_name) if lang_name else None
        if L is None:
            L = _guess_language(ts, ws)
            if L is None:
                raise EatError(
                    "cannot infer the axiom's language; use `over`",
                    nm.line, nm.col,
                )
        lhs = _parse_term(ts, ws, L)
        ts.expect("=")
        rhs = _parse_term(ts, ws, L)
        try:
            eq = Equation(nm.text, lhs, rhs)
        except Exception as exc:
            raise EatError(str(exc), nm.line, nm.col)
        ws._declare("axiom", nm.text, nm, _source_between(ts, start))
        ws.axioms[nm.text] = (eq, _lang_name(ws, L))
        return
    if t.text == "theory":
        nm = ts.expect_kind("name")
        ts.expect("over")
        ln = ts.expect_kind("name")
        if ln.text not in ws.languages:
            raise EatError(f"unknown language {ln.text!r}", ln.line, ln.col)
        ts.expect("{")
        eqs = []
        while not ts.at("}"):
            an = ts.expect_kind("name")
            if an.text not in ws.axioms:
                raise EatError(f"unknown axiom {an.text!r}", an.line, an.col)
            eqs.append(ws.axioms[an.text][0])
            if ts.at(";"):
                ts.next()
        ts.expect("}")
        ws._declare("theory", nm.text, nm, _source_between(ts, start))
        ws.theories[nm.text] = Theory(
            nm.text, ws.languages[ln.text], tuple(eqs)
        )
        return
    if t.text == "structure":
        nm = ts.expect_kind("name")
        ts.expect("over")
        ln = ts.expect_kind("name")
        if ln.text not in ws.languages:
            raise EatError(f"unknown language {ln.text!r}", ln.line, ln.col)
        L = ws.languages[ln.text]
        ts.expect("{")
        ts.expect("carrier")
        ts.expect("=")
        A = ws.object_named(ts.expect_kind("name").text, nm)
        if ts.at(";"):
            ts.next()
        tables = []
        while not ts.at("}"):
            s = ts.expect_kind("name")
            try:
                X, Y = L.arity(s.text)
            except Exception:
                raise EatError(
                    f"unknown symbol {s.text!r}", s.line, s.col
                )
            ts.expect("=")
            m = _parse_table(ts, hom_shape(X, A), hom_shape(Y, A))
            tables.append((s.text, m))
            if ts.at(";"):
                ts.next()
        ts.expect("}")
        S = Structure(L, A, tuple(tables))
        v = validate_structure(S)
        if not v.ok:
            raise EatError(f"invalid structure: {v.reason}", nm.line, nm.col)
        ws._declare("structure", nm.text, nm, _source_between(ts, start))
        ws.structures[nm.text] = S
        return
    if t.text == "mlanguage":
        nm = ts.expect_kind("name")
        ts.expect("{")
        syms = []
        while not ts.at("}"):
            s = ts.expect_kind("name")
            ts.expect(":")
            ts.expect("[")
            ins = []
            while not ts.at("]"):
                ins.append(ws.object_named(ts.expect_kind("name").text, s))
                if ts.at(","):
                    ts.next()
            ts.expect("]")
            ts.expect("->")
            out = ws.object_named(ts.expect_kind("name").text, s)
            syms.append((s.text, tuple(ins), out))
            if ts.at(";"):
                ts.next()
        ts.expect("}")
        ws._declare("mlanguage", nm.text, nm, _source_between(ts, start))
        ws.mlanguages[nm.text] = MLanguage(ws.base, tuple(syms))
        return
    if t.text == "mterm":
        nm = ts.expect_kind("name")
        ts.expect("over")
        ln = ts.expect_kind("name")
        L = ws.mlanguages.get(ln.text)
        if L is None:
            raise EatError(f"unknown mlanguage {ln.text!r}", ln.line, ln.col)
        ts.expect(":")
        ts.expect("(")
        ins = _parse_obj_list(ts, ws, nm)
        ts.expect(",")
        outs = _parse_obj_list(ts, ws, nm)
        ts.expect(")")
        ts.expect("=")
        term = _parse_mterm(ts, ws, L)
        if term.arity != (tuple(ins), tuple(outs)):
            raise EatError(
                f"mterm {nm.text!r} arity differs from declaration",
                nm.line, nm.col,
            )
        ws._declare("mterm", nm.text, nm, _source_between(ts, start))
        ws.mterms[nm.text] = (term, ln.text)
        return
    if t.text == "maxiom":
        nm = ts.expect_kind("name")
        lang_name = None
        if ts.at("over"):
            ts.next()
            lang_name = ts.expect_kind("name").text
        ts.expect(":")
        L = ws.mlanguages.get(lang_name) if lang_name else None
        if L is None:
            L = _guess_mlanguage(ts, ws)
            if L is None:
                raise EatError(
                    "cannot infer the maxiom's language; use `over`",
                    nm.line, nm.col,
                )
        lhs = _parse_mterm(ts, ws, L)
        ts.expect("=")
        rhs = _parse_mterm(ts, ws, L)
        try:
            eq = MEquation(nm.text, lhs, rhs)
        except Exception as exc:
            raise EatError(str(exc), nm.line, nm.col)
        ws._declare("maxiom", nm.text, nm, _source_between(ts, start))
        ws.maxioms[nm.text] = (eq, _mlang_name(ws, L))
        return
    if t.text == "mtheory":
        nm = ts.expect_kind("name")
        ts.expect("over")
        ln = ts.expect_kind("name")
        if ln.text not in ws.mlanguages:
            raise EatError(f"unknown mlanguage {ln.text!r}", ln.line, ln.col)
        ts.expect("{")
        eqs = []
        while not ts.at("}"):
            an = ts.expect_kind("name")
            if an.text not in ws.maxioms:
                raise EatError(
                    f"unknown maxiom {an.text!r}", an.line, an.col
                )
            eqs.append(ws.maxioms[an.text][0])
            if ts.at(";"):
                ts.next()
        ts.expect("}")
        ws._declare("mtheory", nm.text, nm, _source_between(ts, start))
        ws.mtheories[nm.text] = MTheory(
            nm.text, ws.mlanguages[ln.text], tuple(eqs)
        )
        return
    if t.text == "mstructure":
        nm = ts.expect_kind("name")
        ts.expect("over")
        ln = ts.expect_kind("name")
        L = ws.mlanguages.get(ln.text)
        if L is None:
            raise EatError(f"unknown mlanguage {ln.text!r}", ln.line, ln.col)
        ts.expect("{")
        ts.expect("carrier")
        ts.expect("=")
        A = ws.object_named(ts.expect_kind("name").text, nm)
        if ts.at(";"):
            ts.next()
        tables = []
        while not ts.at("}"):
            s = ts.expect_kind("name")
            try:
                ins, out = L.arity(s.text)
            except Exception:
                raise EatError(f"unknown symbol {s.text!r}", s.line, s.col)
            ts.expect("=")
            if ins:
                dshape = tensor_shape([hom_shape(X, A) for X in ins])
            else:
                dshape = unit_shape(ws.base)
            m = _parse_table(ts, dshape, hom_shape(out, A))
            tables.append((s.text, m))
            if ts.at(";"):
                ts.next()
        ts.expect("}")
        S = MStructure(L, A, tuple(tables))
        from .multifun import validate_mstructure

        v = validate_mstructure(S)
        if not v.ok:
            raise EatError(
                f"invalid mstructure: {v.reason}", nm.line, nm.col
            )
        ws._declare("mstructure", nm.text, nm, _source_between(ts, start))
        ws.mstructures[nm.text] = S
        return
    raise EatError(f"unknown statement {t.text!r}", t.line, t.col)


def _parse_obj_list(ts: _Stream, ws: Workspace, tok) -> list[VObject]:
    ts.expect("[")
    out = []
    while not ts.at("]"):
        out.append(ws.object_named(ts.expect_kind("name").text, tok))
        if ts.at(","):
            ts.next()
    ts.expect("]")
    return out


def _guess_language(ts: _Stream, ws: Workspace) -> Optional[Language]:
    """Infer the language from the first sym or term reference ahead."""
    i = ts.i
    while ts.toks[i].kind != "eof":
        t = ts.toks[i]
        if t.text == "sym":
            nm = ts.toks[i + 1].text
            for L in ws.languages.values():
                if nm in L.names():
                    return L
        if t.kind == "name" and t.text in ws.terms:
            return ws.languages[ws.terms[t.text][1]]
        if t.text == "=" or t.kind == "eof":
            pass
        i += 1
        if ts.toks[i - 1].text in (";",):
            break
    if len(ws.languages) == 1:
        return next(iter(ws.languages.values()))
    return None


def _guess_mlanguage(ts: _Stream, ws: Workspace):
    i = ts.i
    while ts.toks[i].kind != "eof":
        t = ts.toks[i]
        if t.text == "sym":
            nm = ts.toks[i + 1].text
            for L in ws.mlanguages.values():
                if nm in L.names():
                    return L
        if t.kind == "name" and t.text in ws.mterms:
            return ws.mlanguages[ws.mterms[t.text][1]]
        i += 1
    if len(ws.mlanguages) == 1:
        return next(iter(ws.mlanguages.values()))
    return None


def _lang_name(ws: Workspace, L: Language) -> str:
    for name, lang in ws.languages.items():
        if lang == L:
            return name
    return "?"


def _mlang_name(ws: Workspace, L) -> str:
    for name, lang in ws.mlanguages.items():
        if lang == L:
            return name
    return "?"


# -- serialization -----------------------------------------------------------------


def serialize(ws: Workspace) -> str:
    """Canonical text for a workspace; stable under reparsing."""
    lines = []
    if ws.base is not None:
        lines.append(f"base {ws.base.value}")
    for (kind, name) in ws.decl_order:
        src = ws.sources[(kind, name)]
        lines.append(_reflow(src))
    return "\n".join(lines) + "\n"


def _reflow(src: str) -> str:
    # canonical spacing: collapse runs, tidy around punctuation
    s = src
    for a, b in [
        (" ;", ";"), (" ,", ","), ("( ", "("), (" )", ")"),
        ("[ ", "["), (" ]", "]"), ("{ ", "{ "), (" |-> ", "|->"),
    ]:
        while a in s:
            s = s.replace(a, b)
    s = s.replace("|->", " |-> ")
    return s


def workspace_to_json(ws: Workspace) -> dict:
    """Canonical JSON-ready summary of a workspace (stable key order)."""
    def obj_json(X: VObject):
        d = {"base": X.base.value, "carrier": list(X.carrier)}
        if X.leq is not None:
            d["leq"] = sorted(
                [X.carrier[i], X.carrier[j]] for (i, j) in X.leq
            )
        if X.dist is not None:
            d["dist"] = [
                [show_dist(v) for v in row] for row in X.dist
            ]
        if X.edges is not None:
            d["edges"] = sorted(
                [X.carrier[i], X.carrier[j]] for (i, j) in X.edges
            )
        if X.qedges is not None:
            d["qedges"] = [
                [e, X.carrier[s], X.carrier[t]] for (e, s, t) in X.qedges
            ]
        return d

    def mor_json(m: VMorphism):
        d = {"map": {a: b for a, b in sorted(m.as_dict().items())}}
        if m.emap is not None:
            d["edge_map"] = {
                m.dom.qedges[k][0]: m.cod.qedges[m.emap[k]][0]
                for k in range(len(m.dom.qedges))
            }
        return d

    return {
        "base": ws.base.value if ws.base else None,
        "objects": {k: obj_json(v) for k, v in sorted(ws.objects.items())},
        "morphisms": {
            k: mor_json(v) for k, v in sorted(ws.morphisms.items())
        },
        "languages": {
            k: {s: [list(X.carrier), list(Y.carrier)]
                for (s, X, Y) in L.symbols}
            for k, L in sorted(ws.languages.items())
        },
        "terms": sorted(ws.terms),
        "axioms": sorted(ws.axioms),
        "theories": {
            k: [eq.name for eq in T.equations]
            for k, T in sorted(ws.theories.items())
        },
        "structures": {
            k: {"carrier": list(S.carrier.carrier)}
            for k, S in sorted(ws.structures.items())
        },
        "mlanguages": sorted(ws.mlanguages),
        "mtheories": {
            k: [eq.name for eq in T.equations]
            for k, T in sorted(ws.mtheories.items())
        },
        "mstructures": {
            k: {"carrier": list(S.carrier.carrier)}
            for k, S in sorted(ws.mstructures.items())
        },
    }
