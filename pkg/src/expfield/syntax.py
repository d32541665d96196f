"""The ``.efd`` presentation language: lexer, parser and pretty printer.

Example::

    # the free exponential field on one generator
    field F { gens x, ex; exp x = ex; egg; }
    tuple T on F = (x, 2*x);
    khovanskii K on F { f1 = X1 - x; witness = (x); coeffs = {x}; }

Expressions use ``+ - * / ^``, parentheses, integer literals and
``exp(...)``.  They are kept as small syntax trees and only interpreted
against a field when used, as polynomials (``rel``), field elements
(tuples, witnesses) or exponential polynomials (certificate equations).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, ParseError
from .exppoly import ExpPoly, ExpPolyMap, const, ep_exp, sym, var
from .ideals import Poly
from .presentation import EFieldPresentation

KEYWORDS = {"field", "gens", "base", "exp", "rel", "egg", "tuple", "khovanskii", "on",
            "witness", "coeffs", "vars"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}(),;=+\-*/^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# --------------------------------------------------------------------------
# expression trees: ("num", Fraction) | ("id", name) | ("neg", e) | ("exp", e)
#                   | (op, a, b) for op in add sub mul div | ("pow", e, int)


def _fold(node):
    op = node[0]
    if op == "neg" and node[1][0] == "num":
        return ("num", -node[1][1])
    if op == "div" and node[1][0] == "num" and node[2][0] == "num" and node[2][1]:
        return ("num", node[1][1] / node[2][1])
    return node


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "exp": 5, "id": 5}
_SYM = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}


def _prec(node):
    if node[0] == "num":
        q = node[1]
        if q.denominator != 1:
            return 2
        return 3 if q < 0 else 5
    return _PREC[node[0]]


def format_expr(node) -> str:
    """Print with the fewest parentheses that still re-parse to the same tree."""
    op = node[0]
    if op == "num":
        q = node[1]
        return str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)
    if op == "id":
        return node[1]
    if op == "exp":
        return "exp(%s)" % format_expr(node[1])
    if op == "neg":
        inner = format_expr(node[1])
        return "-(%s)" % inner if _prec(node[1]) <= 3 else "-" + inner
    if op == "pow":
        base = format_expr(node[1])
        if _prec(node[1]) <= 4:
            base = "(%s)" % base
        return "%s^%d" % (base, node[2])
    p = _PREC[op]
    left = format_expr(node[1])
    if _prec(node[1]) < p:
        left = "(%s)" % left
    right = format_expr(node[2])
    if _prec(node[2]) <= p:
        right = "(%s)" % right
    return left + _SYM[op] + right


def expr_ids(node) -> set:
    if node[0] == "id":
        return {node[1]}
    if node[0] == "num":
        return set()
    out = set()
    for child in node[1:]:
        if isinstance(child, tuple):
            out |= expr_ids(child)
    return out


def to_poly(node, ring, where=""):
    op = node[0]
    if op == "num":
        return ring.const(node[1])
    if op == "id":
        if node[1] not in ring.index:
            raise InputError("unknown symbol %r%s" % (node[1], where))
        return ring.gen(node[1])
    if op == "neg":
        return -to_poly(node[1], ring, where)
    if op == "pow":
        return to_poly(node[1], ring, where) ** node[2]
    if op == "exp":
        raise InputError("exp(...) is not allowed in a polynomial relation%s" % where)
    a, b = to_poly(node[1], ring, where), to_poly(node[2], ring, where)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if not b.is_constant() or not b:
        raise InputError("relations must be polynomial (division by %s)%s" % (b, where))
    return a * (1 / b.constant_value())


def to_element(node, F: EFieldPresentation):
    """Interpret an expression as an element of F (exp is applied on A(F))."""
    op = node[0]
    if op == "num":
        return F.field.const(node[1])
    if op == "id":
        if node[1] not in F.ring.index:
            raise InputError("unknown symbol %r in field %s" % (node[1], F.name))
        return F.gen(node[1])
    if op == "neg":
        return -to_element(node[1], F)
    if op == "pow":
        return to_element(node[1], F) ** node[2]
    if op == "exp":
        return F.exp_of(to_element(node[1], F))
    a, b = to_element(node[1], F), to_element(node[2], F)
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def to_exppoly(node, symbols) -> ExpPoly:
    """Identifiers in ``symbols`` become coefficient symbols, the others indeterminates."""
    op = node[0]
    if op == "num":
        return const(node[1])
    if op == "id":
        return sym(node[1]) if node[1] in symbols else var(node[1])
    if op == "neg":
        return -to_exppoly(node[1], symbols)
    if op == "pow":
        return to_exppoly(node[1], symbols) ** node[2]
    if op == "exp":
        return ep_exp(to_exppoly(node[1], symbols))
    a, b = to_exppoly(node[1], symbols), to_exppoly(node[2], symbols)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if not b.is_constant() or not b:
        raise InputError("division in an exponential polynomial must be by a nonzero constant")
    return a / _const_value(b)


def _const_value(f: ExpPoly) -> Fraction:
    return sum((c for _, c in f.terms), Fraction(0))


# --------------------------------------------------------------------------
# documents


@dataclass
class FieldDecl:
    name: str
    gens: tuple
    base_name: str | None = None
    base_set: tuple | None = None
    exps: tuple = ()
    rels: tuple = ()
    egg: bool = False
    line: int = field(default=0, compare=False)


@dataclass
class TupleDecl:
    name: str
    on: str | None
    entries: tuple
    line: int = field(default=0, compare=False)


@dataclass
class CertDecl:
    name: str
    on: str
    equations: tuple            # ((label, expr), ...)
    witness: tuple
    coeffs: tuple = ()
    vars: tuple | None = None
    line: int = field(default=0, compare=False)


@dataclass
class PresentationDoc:
    fields: dict
    tuples: dict
    certs: dict
    source: str = field(default="", compare=False)
    _built: dict = field(default_factory=dict, compare=False, repr=False)

    def presentation(self, name) -> EFieldPresentation:
        if name not in self.fields:
            raise InputError("no field named %r (have: %s)" % (name, ", ".join(self.fields)))
        if name not in self._built:
            self._built[name] = build_field(self, self.fields[name])
        return self._built[name]

    def tuple_elements(self, name, F: EFieldPresentation):
        t = self.tuples[name]
        return [to_element(e, F) for e in t.entries]

    def certificate(self, name):
        from .khovanskii import KhovanskiiCertificate

        if name not in self.certs:
            raise InputError("no certificate named %r" % name)
        c = self.certs[name]
        F = self.presentation(c.on)
        symbols = set(F.generators)
        system = [to_exppoly(e, symbols) for _, e in c.equations]
        if c.vars is not None:
            xs = c.vars
        else:
            xs = tuple(sorted(set().union(*(f.indeterminates() for f in system)), key=_natural))
        try:
            pm = ExpPolyMap(tuple(system), tuple(xs))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        witness = [to_element(w, F) for w in c.witness]
        return F, KhovanskiiCertificate(pm, witness, c.coeffs, name=c.name)


def _natural(name):
    m = re.match(r"(.*?)(\d+)$", name)
    return (m.group(1), int(m.group(2))) if m else (name, -1)


def build_field(doc: PresentationDoc, d: FieldDecl) -> EFieldPresentation:
    from .ideals import PolyRing

    ring = PolyRing(d.gens)
    rels = [to_poly(r, ring, " in field %s" % d.name) for r in d.rels]
    base = None
    base_gens = d.base_set or ()
    if d.base_name is not None:
        base = doc.presentation(d.base_name)
        base_gens = base.generators
    return EFieldPresentation(d.name, d.gens, rels, d.exps, base_gens, base, d.egg)


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        raise ParseError("%s, found %r" % (msg, shown), tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error("expected %r" % text)
        return self.next()

    def ident(self, what="identifier", allow_keyword=False) -> Token:
        t = self.tok
        if t.kind != "ident" or (t.text in KEYWORDS and not allow_keyword):
            self.error("expected %s" % what)
        return self.next()

    # expressions
    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = "add" if self.next().text == "+" else "sub"
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = "mul" if self.next().text == "*" else "div"
            node = _fold((op, node, self.unary()))
        return node

    def unary(self):
        if self.at("-"):
            self.next()
            return _fold(("neg", self.unary()))
        return self.power()

    def power(self):
        node = self.atom()
        if self.at("^"):
            self.next()
            t = self.tok
            if t.kind != "int":
                self.error("expected a non-negative integer exponent")
            self.next()
            node = ("pow", node, int(t.text))
        return node

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.next()
            return ("num", Fraction(int(t.text)))
        if t.text == "exp" and t.kind == "ident":
            self.next()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return ("exp", inner)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.next()
            return ("id", t.text)
        if self.at("("):
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected an expression")

    def expr_list(self):
        self.expect("(")
        items = []
        if not self.at(")"):
            items.append(self.expr())
            while self.at(","):
                self.next()
                items.append(self.expr())
        self.expect(")")
        return tuple(items)

    def id_set(self):
        self.expect("{")
        items = []
        if not self.at("}"):
            items.append(self.ident().text)
            while self.at(","):
                self.next()
                items.append(self.ident().text)
        self.expect("}")
        return tuple(items)

    # declarations
    def document(self, source) -> PresentationDoc:
        doc = PresentationDoc({}, {}, {}, source)
        names = {}
        while self.tok.kind != "eof":
            t = self.tok
            if t.text == "field":
                d = self.field_decl(doc)
                table = doc.fields
            elif t.text == "tuple":
                d = self.tuple_decl(doc)
                table = doc.tuples
            elif t.text == "khovanskii":
                d = self.cert_decl(doc)
                table = doc.certs
            else:
                self.error("expected 'field', 'tuple' or 'khovanskii'")
            if d.name in names:
                raise ParseError("duplicate name %r (first defined on line %d)"
                                 % (d.name, names[d.name]), t.line, t.col)
            names[d.name] = t.line
            table[d.name] = d
        return doc

    def field_decl(self, doc) -> FieldDecl:
        start = self.expect("field")
        name = self.ident("field name").text
        self.expect("{")
        gens, exps, rels = None, [], []
        base_name = base_set = None
        egg = False
        while not self.at("}"):
            t = self.tok
            if t.text == "gens":
                self.next()
                if gens is not None:
                    self.error("second 'gens' clause", t)
                gens = []
                if not self.at(";"):
                    gens.append(self.ident("generator name").text)
                    while self.at(","):
                        self.next()
                        gens.append(self.ident("generator name").text)
                seen = set()
                for g in gens:
                    if g in seen:
                        raise ParseError("duplicate generator %r" % g, t.line, t.col)
                    seen.add(g)
            elif t.text == "base":
                self.next()
                if self.at("{"):
                    base_set = self.id_set()
                else:
                    bt = self.ident("base field name or {generators}")
                    if bt.text not in doc.fields:
                        raise ParseError("unknown field %r" % bt.text, bt.line, bt.col)
                    base_name = bt.text
            elif t.text == "exp":
                self.next()
                a = self.ident("exp argument")
                self.expect("=")
                e = self.ident("exp value")
                exps.append((a, e))
            elif t.text == "rel":
                self.next()
                lhs = self.expr()
                self.expect("=")
                rhs = self.expr()
                rels.append((lhs if rhs == ("num", Fraction(0)) else ("sub", lhs, rhs), t))
            elif t.text == "egg":
                self.next()
                egg = True
            else:
                self.error("expected a field clause (gens, base, exp, rel, egg)")
            self.expect(";")
        self.expect("}")
        if gens is None:
            raise ParseError("field %s has no 'gens' clause" % name, start.line, start.col)
        known = set(gens)
        for a, e in exps:
            for tok in (a, e):
                if tok.text not in known:
                    raise ParseError("unknown symbol %r" % tok.text, tok.line, tok.col)
        for r, tok in rels:
            bad = expr_ids(r) - known
            if bad:
                raise ParseError("unknown symbol %r in relation" % sorted(bad)[0], tok.line, tok.col)
        if base_set is not None:
            for g in base_set:
                if g not in known:
                    raise ParseError("unknown symbol %r in base" % g, start.line, start.col)
        if base_name is not None:
            bad = [g for g in doc.fields[base_name].gens if g not in known]
            if bad:
                raise ParseError("base field %s has generators %s missing here"
                                 % (base_name, ", ".join(bad)), start.line, start.col)
        return FieldDecl(name, tuple(gens), base_name, base_set,
                         tuple((a.text, e.text) for a, e in exps), tuple(r for r, _ in rels), egg,
                         line=start.line)

    def tuple_decl(self, doc) -> TupleDecl:
        start = self.expect("tuple")
        name = self.ident("tuple name").text
        on = None
        if self.at("on"):
            self.next()
            ft = self.ident("field name")
            if ft.text not in doc.fields:
                raise ParseError("unknown field %r" % ft.text, ft.line, ft.col)
            on = ft.text
        self.expect("=")
        entries = self.expr_list()
        self.expect(";")
        if on is not None:
            bad = set().union(*(expr_ids(e) for e in entries)) - set(doc.fields[on].gens) \
                if entries else set()
            if bad:
                raise ParseError("unknown symbol %r in tuple" % sorted(bad)[0], start.line, start.col)
        return TupleDecl(name, on, entries, line=start.line)

    def cert_decl(self, doc) -> CertDecl:
        start = self.expect("khovanskii")
        name = self.ident("certificate name").text
        self.expect("on")
        ft = self.ident("field name")
        if ft.text not in doc.fields:
            raise ParseError("unknown field %r" % ft.text, ft.line, ft.col)
        gens = set(doc.fields[ft.text].gens)
        self.expect("{")
        eqs, witness, coeffs, xs = [], None, (), None
        while not self.at("}"):
            t = self.tok
            if t.text == "witness":
                self.next()
                self.expect("=")
                witness = self.expr_list()
                bad = set().union(set(), *(expr_ids(e) for e in witness)) - gens
                if bad:
                    raise ParseError("unknown symbol %r in witness" % sorted(bad)[0], t.line, t.col)
            elif t.text == "coeffs":
                self.next()
                self.expect("=")
                coeffs = self.id_set()
                bad = [g for g in coeffs if g not in gens]
                if bad:
                    raise ParseError("unknown symbol %r in coeffs" % bad[0], t.line, t.col)
            elif t.text == "vars":
                self.next()
                self.expect("=")
                self.expect("(")
                xs = [self.ident("indeterminate").text]
                while self.at(","):
                    self.next()
                    xs.append(self.ident("indeterminate").text)
                self.expect(")")
                xs = tuple(xs)
            else:
                label = self.ident("equation label (f1, f2, ...)").text
                self.expect("=")
                eqs.append((label, self.expr()))
            self.expect(";")
        self.expect("}")
        if not eqs:
            raise ParseError("certificate %s has no equations" % name, start.line, start.col)
        if witness is None:
            raise ParseError("certificate %s has no witness" % name, start.line, start.col)
        return CertDecl(name, ft.text, tuple(eqs), witness, coeffs, xs, line=start.line)


def parse(text: str) -> PresentationDoc:
    return _Parser(text).document(text)


def parse_file(path) -> PresentationDoc:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def parse_tuple(text: str) -> tuple:
    """Parse a bare tuple such as ``(x, 2*y - x)`` into expression trees."""
    p = _Parser(text)
    if not p.at("("):
        items = (p.expr(),)
    else:
        items = p.expr_list()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return items


def format_doc(doc: PresentationDoc) -> str:
    """Canonical text; ``parse(format_doc(d)) == d``."""
    blocks = []
    order = sorted([(d.line, 0, d) for d in doc.fields.values()]
                   + [(t.line, 1, t) for t in doc.tuples.values()]
                   + [(c.line, 2, c) for c in doc.certs.values()], key=lambda x: (x[0], x[1]))
    # fields must precede their uses; stable by source line, fields first for synthetic docs
    emitted = set()
    pending = [item for item in order]
    while pending:
        progress = False
        for item in list(pending):
            d = item[2]
            deps = _deps(d)
            if deps <= emitted:
                blocks.append(_format_decl(d))
                emitted.add(d.name)
                pending.remove(item)
                progress = True
                break
        if not progress:
            raise InputError("circular field references")
    return "\n".join(blocks)


def _deps(d) -> set:
    if isinstance(d, FieldDecl):
        return {d.base_name} if d.base_name else set()
    return {d.on} if d.on else set()


def _format_decl(d) -> str:
    if isinstance(d, FieldDecl):
        lines = ["field %s {" % d.name, ("  gens %s;" % ", ".join(d.gens)).replace("gens ;", "gens;")]
        if d.base_name:
            lines.append("  base %s;" % d.base_name)
        elif d.base_set is not None:
            lines.append("  base {%s};" % ", ".join(d.base_set))
        for a, e in d.exps:
            lines.append("  exp %s = %s;" % (a, e))
        for r in d.rels:
            lines.append("  rel %s = 0;" % format_expr(r))
        if d.egg:
            lines.append("  egg;")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(d, TupleDecl):
        on = " on %s" % d.on if d.on else ""
        return "tuple %s%s = (%s);\n" % (d.name, on, ", ".join(format_expr(e) for e in d.entries))
    lines = ["khovanskii %s on %s {" % (d.name, d.on)]
    for label, e in d.equations:
        lines.append("  %s = %s;" % (label, format_expr(e)))
    if d.vars is not None:
        lines.append("  vars = (%s);" % ", ".join(d.vars))
    lines.append("  witness = (%s);" % ", ".join(format_expr(w) for w in d.witness))
    lines.append("  coeffs = {%s};" % ", ".join(d.coeffs))
    lines.append("}")
    return "\n".join(lines) + "\n"
