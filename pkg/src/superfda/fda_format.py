"""The `.fda` text format: serialization, a located-diagnostic parser and document checks.

    algebra NAME { gen IDENT : (INT, even|odd); ... d IDENT = EXPR; ... }
    element NAME in ALGEBRA = EXPR;
    cocycle NAME in ALGEBRA = EXPR;          # declared d-closed
    morphism NAME : SRC -> TGT [curved] { IDENT -> EXPR; ... }

EXPR is a sum of products of Gaussian-rational literals (`3`, `-1/2`, `i`,
`2/3*i`, `(1/2+i)`) and generators with optional `^INT` powers.  `#` starts a
comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .errors import AlgebraError
from .graded_algebra import (RESERVED, SHIFT_D, Bidegree, DerivationSpec, DgaMorphism, Element, FreeDGA,
                             GeneratorTable, apply_derivation, check_morphism)
from .report import ReportEntry, entry
from .scalars import I, ONE, GaussianRational

MAX_EXPONENT = 64
MAX_DEPTH = 100


# --- serialization ------------------------------------------------------------------------

def ident(label: str) -> str:
    """A label made safe for use as a block name."""
    s = re.sub(r"[^A-Za-z0-9_]", "_", label).strip("_") or "unnamed"
    if s[0].isdigit():
        s = "_" + s
    return s + "_" if s in RESERVED else s


def _mono(table: GeneratorTable, mono) -> str:
    return "*".join(table.decls[g].name for g, e in mono for _ in range(e))


def element_text(x: Element) -> str:
    if not x.terms:
        return "0"
    parts = []
    for m, c in sorted(x.terms.items()):
        if not m:
            parts.append(c.to_text())
        elif c == ONE:
            parts.append(_mono(x.table, m))
        elif c == -ONE:
            parts.append("-" + _mono(x.table, m))
        else:
            parts.append(f"{c.to_text()}*{_mono(x.table, m)}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def algebra_text(alg: FreeDGA, name: Optional[str] = None, pretty: bool = False) -> str:
    sep = "\n  " if pretty else " "
    stmts = [f"gen {g.name} : ({g.bidegree.n},{'odd' if g.bidegree.odd else 'even'});" for g in alg.generators]
    stmts += [f"d {g.name} = {element_text(alg.d_of(g.name))};" for g in alg.generators]
    body = sep.join(stmts)
    end = "\n}" if pretty else " }"
    return f"algebra {name or ident(alg.label)} {{{sep}{body}{end}"


def morphism_text(m: DgaMorphism, name: Optional[str] = None, source: Optional[str] = None,
                  target: Optional[str] = None, pretty: bool = False) -> str:
    sep = "\n  " if pretty else " "
    stmts = [f"{g.name} -> {element_text(m.images[g.id])};" for g in m.source.generators]
    head = (f"morphism {name or ident(m.label)} : {source or ident(m.source.label)} -> "
            f"{target or ident(m.target.label)}{' curved' if m.curved else ''}")
    end = "\n}" if pretty else " }"
    return f"{head} {{{sep}{sep.join(stmts)}{end}"


def serialize(x: Union[FreeDGA, Element, DgaMorphism], name: Optional[str] = None, pretty: bool = False) -> str:
    if isinstance(x, FreeDGA):
        return algebra_text(x, name, pretty)
    if isinstance(x, Element):
        return element_text(x)
    if isinstance(x, DgaMorphism):
        return morphism_text(x, name, pretty=pretty)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def serialize_bundle(algebras=(), elements=(), morphisms=(), pretty: bool = True) -> str:
    """A whole document: (name, FreeDGA), (name, algebra name, Element, is_cocycle), (name, DgaMorphism)."""
    out = []
    names = {}
    for name, alg in algebras:
        names[id(alg.table)] = name
        out.append(algebra_text(alg, name, pretty))
    for name, alg_name, x, closed in elements:
        out.append(f"{'cocycle' if closed else 'element'} {name} in {alg_name} = {element_text(x)};")
    for name, m in morphisms:
        out.append(morphism_text(m, name, names.get(id(m.source.table)), names.get(id(m.target.table)), pretty))
    return "\n".join(out) + "\n"


# --- diagnostics and tokens ---------------------------------------------------------------

@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    line: int
    column: int
    message: str
    lexeme: str = ""

    def __str__(self):
        lx = f" near {self.lexeme!r}" if self.lexeme else ""
        return f"{self.line}:{self.column}: {self.severity}: {self.message}{lx}"


class FdaSyntaxError(AlgebraError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics[:3]))


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+) | (?P<comment>\#[^\n]*) |
    (?P<arrow>->) | (?P<int>[0-9]+) | (?P<ident>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<op>[{}():;,=+\-*/^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str  # int, ident, op, eof
    text: str
    line: int
    col: int


class _Stop(Exception):
    """Abort the current parse after a diagnostic was recorded."""


def tokenize(text: str, diags: list) -> list[Tok]:
    toks = []
    pos, line, col = 0, 1, 1
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            diags.append(ParseDiagnostic("error", line, col, "unexpected character", text[pos]))
            raise _Stop
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            toks.append(Tok("op" if kind == "arrow" else kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(Tok("eof", "", line, col))
    return toks


# --- expression syntax tree ----------------------------------------------------------------

@dataclass
class Node:
    kind: str  # num, gen, sum, prod
    tok: Tok
    value: object = None
    exp: int = 1
    children: list = field(default_factory=list)
    signs: list = field(default_factory=list)


class _Parser:
    def __init__(self, toks: list[Tok], diags: list):
        self.toks = toks
        self.i = 0
        self.diags = diags
        self.depth = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Optional[Tok] = None):
        tok = tok or self.cur
        self.diags.append(ParseDiagnostic("error", tok.line, tok.col, msg, tok.text))
        raise _Stop

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, text: str) -> Optional[Tok]:
        if self.cur.kind in ("op", "ident") and self.cur.text == text:
            return self.next()
        return None

    def expect(self, text: str) -> Tok:
        t = self.accept(text)
        if t is None:
            self.fail(f"expected {text!r}")
        return t

    def name(self, what: str) -> Tok:
        t = self.cur
        if t.kind != "ident":
            self.fail(f"expected {what}")
        if t.text in RESERVED:
            self.fail(f"{t.text!r} is reserved and cannot name a {what}")
        return self.next()

    def integer(self) -> int:
        neg = self.accept("-") is not None
        t = self.cur
        if t.kind != "int":
            self.fail("expected an integer")
        self.next()
        return -int(t.text) if neg else int(t.text)

    # EXPR := [+|-] term ((+|-) term)*
    def expr(self) -> Node:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail("expression nested too deeply")
        start = self.cur
        node = Node("sum", start)
        sign = -1 if self.accept("-") else (self.accept("+") and 1) or 1
        node.children.append(self.term())
        node.signs.append(sign)
        while self.cur.kind == "op" and self.cur.text in "+-":
            sign = -1 if self.next().text == "-" else 1
            node.children.append(self.term())
            node.signs.append(sign)
        self.depth -= 1
        return node

    def term(self) -> Node:
        node = Node("prod", self.cur)
        node.children.append(self.factor())
        while self.accept("*"):
            node.children.append(self.factor())
        return node

    def factor(self) -> Node:
        t = self.cur
        if t.kind == "int":
            self.next()
            num = GaussianRational(int(t.text))
            if self.accept("/"):
                d = self.cur
                if d.kind != "int":
                    self.fail("expected a denominator")
                self.next()
                if int(d.text) == 0:
                    self.fail("zero denominator", d)
                num = num / int(d.text)
            return Node("num", t, num)
        if t.kind == "ident" and t.text == "i":
            self.next()
            return Node("num", t, I)
        if t.kind == "ident":
            if t.text in RESERVED:
                self.fail(f"{t.text!r} is reserved")
            self.next()
            exp = 1
            if self.accept("^"):
                e = self.cur
                if e.kind != "int":
                    self.fail("expected an exponent")
                self.next()
                exp = int(e.text)
                if exp > MAX_EXPONENT:
                    self.fail(f"exponent above {MAX_EXPONENT}", e)
            return Node("gen", t, t.text, exp)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("expected a number, i, a generator or '('")


def _evaluate(node: Node, table: GeneratorTable, p: _Parser) -> Element:
    if node.kind == "num":
        return Element.scalar(table, node.value)
    if node.kind == "gen":
        if node.value not in table.index:
            p.fail(f"unknown generator {node.value!r}", node.tok)
        gid = table.index[node.value]
        if node.exp != 1 and table._ext[gid]:
            p.fail(f"exponent on the exterior generator {node.value!r}", node.tok)
        return Element.generator(table, gid) ** node.exp
    if node.kind == "prod":
        out = _evaluate(node.children[0], table, p)
        for c in node.children[1:]:
            out = out * _evaluate(c, table, p)
        return out
    out = Element.zero(table)
    for s, c in zip(node.signs, node.children):
        v = _evaluate(c, table, p)
        out = out + v if s > 0 else out - v
    return out


# --- documents ---------------------------------------------------------------------------

@dataclass
class FdaDocument:
    algebras: dict = field(default_factory=dict)  # name -> FreeDGA
    elements: dict = field(default_factory=dict)  # name -> (algebra name, Element)
    cocycles: set = field(default_factory=set)
    element_algebra: dict = field(default_factory=dict)  # element name -> FreeDGA
    morphisms: dict = field(default_factory=dict)  # name -> DgaMorphism
    order: list = field(default_factory=list)  # (kind, name)
    locations: dict = field(default_factory=dict)  # (kind, name) -> (line, col)
    names: dict = field(default_factory=dict)  # id(table) -> algebra name in this document

    def serialize(self) -> str:
        out = []
        for kind, name in self.order:
            if kind == "algebra":
                out.append(algebra_text(self.algebras[name], name, pretty=True))
            elif kind in ("element", "cocycle"):
                alg, x = self.elements[name]
                out.append(f"{kind} {name} in {alg} = {element_text(x)};")
            else:
                m = self.morphisms[name]
                out.append(morphism_text(m, name, self.names.get(id(m.source.table), ident(m.source.label)),
                                         self.names.get(id(m.target.table), ident(m.target.label)), pretty=True))
        return "\n".join(out) + "\n"


Resolver = Callable[[str], Optional[FreeDGA]]


def _algebra_block(p: _Parser, doc: FdaDocument):
    head = p.next()
    nt = p.name("algebra name")
    name = nt.text
    if name in doc.algebras:
        p.fail(f"algebra {name!r} declared twice", nt)
    p.expect("{")
    decls: list = []
    seen: dict = {}
    dstmts: list = []
    while not p.accept("}"):
        t = p.cur
        if t.kind == "eof":
            p.fail("unterminated algebra block")
        if p.accept("gen"):
            g = p.name("generator name")
            if g.text in seen:
                p.fail(f"generator {g.text!r} declared twice", g)
            p.expect(":")
            p.expect("(")
            n = p.integer()
            p.expect(",")
            par = p.cur
            if par.text not in ("even", "odd"):
                p.fail("expected even or odd")
            p.next()
            p.expect(")")
            p.expect(";")
            if n < 0:
                p.fail("negative degree", g)
            seen[g.text] = g
            decls.append((g.text, Bidegree(n, par.text == "odd")))
        elif p.accept("d"):
            g = p.cur
            if g.kind != "ident":
                p.fail("expected a generator after d")
            p.next()
            p.expect("=")
            e = p.expr()
            p.expect(";")
            dstmts.append((g, e))
        else:
            p.fail("expected 'gen', 'd' or '}'")
    try:
        table = GeneratorTable(decls)
    except AlgebraError as exc:
        p.fail(str(exc), nt)
    values = {}
    where = {}
    for g, e in dstmts:
        if g.text not in table.index:
            p.fail(f"differential of undeclared generator {g.text!r}", g)
        gid = table.index[g.text]
        if gid in values:
            p.fail(f"second differential for {g.text!r}", g)
        v = _evaluate(e, table, p)
        if v:
            want = table.decls[gid].bidegree + SHIFT_D
            got = v.bidegree()
            if got != want:
                p.fail(f"DegreeMismatch: d {g.text} has bidegree {got}, expected {want}", g)
        values[gid] = v
        where[gid] = g
    alg = FreeDGA(table, DerivationSpec(table, SHIFT_D, values), name)
    for gid, v in values.items():
        if v:
            dd = apply_derivation(alg.differential, v)
            if dd:
                p.fail(f"NotSquareZero: d(d {table.decls[gid].name}) = {element_text(dd.first_term())} is nonzero",
                       where[gid])
    doc.algebras[name] = alg
    doc.names[id(table)] = name
    doc.order.append(("algebra", name))
    doc.locations[("algebra", name)] = (head.line, head.col)


def _resolve(p: _Parser, doc: FdaDocument, resolver: Optional[Resolver]) -> FreeDGA:
    t = p.cur
    if t.kind != "ident":
        p.fail("expected an algebra name")
    p.next()
    if t.text in doc.algebras:
        return doc.algebras[t.text]
    if resolver is not None:
        try:
            alg = resolver(t.text)
        except Exception:  # resolvers are user code; any failure is an unknown name
            alg = None
        if alg is not None:
            doc.names.setdefault(id(alg.table), t.text)
            return alg
    p.fail(f"unknown algebra {t.text!r}", t)


def _element_block(p: _Parser, doc: FdaDocument, resolver):
    head = p.next()
    kind = head.text
    nt = p.name("element name")
    if nt.text in doc.elements:
        p.fail(f"element {nt.text!r} declared twice", nt)
    p.expect("in")
    at = p.cur
    alg = _resolve(p, doc, resolver)
    p.expect("=")
    e = p.expr()
    p.expect(";")
    x = _evaluate(e, alg.table, p)
    if x.bidegree() == "mixed":
        p.fail("element is not homogeneous", nt)
    doc.elements[nt.text] = (doc.names.get(id(alg.table), at.text), x)
    doc.element_algebra[nt.text] = alg
    if kind == "cocycle":
        doc.cocycles.add(nt.text)
    doc.order.append((kind, nt.text))
    doc.locations[(kind, nt.text)] = (head.line, head.col)


def _morphism_block(p: _Parser, doc: FdaDocument, resolver):
    head = p.next()
    nt = p.name("morphism name")
    if nt.text in doc.morphisms:
        p.fail(f"morphism {nt.text!r} declared twice", nt)
    p.expect(":")
    src = _resolve(p, doc, resolver)
    p.expect("->")
    tgt = _resolve(p, doc, resolver)
    curved = p.accept("curved") is not None
    p.expect("{")
    imgs = {}
    while not p.accept("}"):
        g = p.cur
        if g.kind != "ident":
            p.fail("expected a generator name or '}'")
        p.next()
        if g.text not in src.table.index:
            p.fail(f"{g.text!r} is not a generator of the source", g)
        gid = src.table.index[g.text]
        if gid in imgs:
            p.fail(f"second image for {g.text!r}", g)
        p.expect("->")
        e = p.expr()
        p.expect(";")
        imgs[gid] = _evaluate(e, tgt.table, p)
    try:
        m = DgaMorphism(src, tgt, imgs, curved=curved, label=nt.text, default_zero=True)
    except AlgebraError as exc:
        p.fail(str(exc), nt)
    doc.morphisms[nt.text] = m
    doc.order.append(("morphism", nt.text))
    doc.locations[("morphism", nt.text)] = (head.line, head.col)


def parse_with_diagnostics(text: str, resolver: Optional[Resolver] = None):
    """(document or None, diagnostics).  A document is returned only when there are no errors."""
    diags: list[ParseDiagnostic] = []
    doc = FdaDocument()
    try:
        toks = tokenize(text, diags)
        p = _Parser(toks, diags)
        while p.cur.kind != "eof":
            t = p.cur
            if t.text == "algebra":
                _algebra_block(p, doc)
            elif t.text in ("element", "cocycle"):
                _element_block(p, doc, resolver)
            elif t.text == "morphism":
                _morphism_block(p, doc, resolver)
            else:
                p.fail("expected 'algebra', 'element', 'cocycle' or 'morphism'")
    except _Stop:
        pass
    except RecursionError:
        diags.append(ParseDiagnostic("error", 0, 0, "input nested too deeply"))
    except AlgebraError as exc:
        diags.append(ParseDiagnostic("error", 0, 0, str(exc)))
    if diags:
        return None, diags
    return doc, []


def parse(text: str, resolver: Optional[Resolver] = None) -> FdaDocument:
    doc, diags = parse_with_diagnostics(text, resolver)
    if doc is None:
        raise FdaSyntaxError(diags)
    return doc


def parse_algebra(text: str) -> FreeDGA:
    doc = parse(text)
    if len(doc.algebras) != 1:
        raise FdaSyntaxError([ParseDiagnostic("error", 1, 1, "expected exactly one algebra")])
    return next(iter(doc.algebras.values()))


def parse_element(text: str, alg: FreeDGA) -> Element:
    diags: list = []
    try:
        p = _Parser(tokenize(text, diags), diags)
        node = p.expr()
        if p.cur.kind != "eof":
            p.fail("trailing input")
        return _evaluate(node, alg.table, p)
    except _Stop:
        raise FdaSyntaxError(diags)


def check_document(doc: FdaDocument, prefix: str = "doc") -> list[ReportEntry]:
    """d² = 0 for each algebra, closure of declared cocycles, validity of morphisms."""
    from .graded_algebra import check_d_squared
    out = []
    for name, alg in doc.algebras.items():
        e = check_d_squared(alg)
        out.append(ReportEntry(f"{prefix}.{name}.dsquared", e.status, e.detail, e.counterexample))
    for name in sorted(doc.cocycles):
        alg_name, x = doc.elements[name]
        alg = doc.element_algebra[name]
        dx = alg.d(x)
        out.append(entry(f"{prefix}.{name}.closed", not dx, f"cocycle {name} is d-closed in {alg_name}",
                         None if not dx else dx.first_term()))
    for name, m in doc.morphisms.items():
        out.append(check_morphism(m, f"{prefix}.{name}.valid"))
    return out
