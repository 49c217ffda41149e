"""Parsers and serializers for PSC programs, ASO programs and PP formulas.

PSC program grammar::

    program   := { statement } ;
    statement := ( rule | directive ) "." ;
    directive := "#universe" atom { "," atom } ;
    rule      := head [ ":-" bodyatom { "," bodyatom } ] ;
    head      := bodyatom | prefatom | measatom ;
    bodyatom  := atom | "not" atom | "sc" "(" base "," family ")" ;
    base      := "{" [ atom { "," atom } ] "}" ;
    family    := "{" [ base { "," base } ] "}" | "card" "(" int ".." int ")"
               | "even" | "any" ;
    prefatom  := "pref" "(" base "," family "," order ")" ;
    order     := "chain" "(" base { "<" base } ")"
               | "pairs" "(" [ base "<=" base { "," base "<=" base } ] ")"
               | "rel" "(" [ base "<=" base { "," base "<=" base } ] ")"
               | "rank" "(" weightmap ")" ;
    measatom  := "meas" "(" base "," family "," measure ")" ;
    measure   := "weights" "(" weightmap ")"
               | "indicator" "(" atom "," real "," real ")"
               | "linear" "(" atomweights [ "," "offset" "=" real ] ")" ;
    weightmap := [ base "=" real { "," base "=" real } ] [ "," "default" "=" real ] ;

``pairs`` is closed reflexively and transitively; ``rel`` is kept as given.
Comments run from ``%`` to the end of the line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

from . import aso as aso_mod
from . import pp as pp_mod
from .core import (
    ANY,
    EVEN,
    AnyFamily,
    Card,
    Chain,
    Even,
    Extensional,
    Indicator,
    Linear,
    MeasureAtom,
    NormalRule,
    Pairs,
    PreorderAtom,
    Program,
    Rank,
    Rule,
    SCAtom,
    Weights,
    canonical,
    check_atom,
    model_key,
)
from .errors import (
    ParseDiagnostic,
    ParseError,
    SemanticError,
    SourceSpan,
    StrongNegationInGenError,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<directive>\#[A-Za-z_]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<punct>:-|\.\.|<=|<\||[.,(){}<>=&|!-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # directive | ident | number | punct | eof
    text: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, pos, pos + 1)
            raise ParseError(f"{span}: unexpected character {text[pos]!r}",
                             (ParseDiagnostic("error", f"unexpected character {text[pos]!r}", span),))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), SourceSpan(line, pos - line_start + 1, pos, m.end())))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, pos - line_start + 1, pos, pos)))
    return tokens


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.line, a.column, a.start, max(a.end, b.end))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.diagnostics: list[ParseDiagnostic] = []

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind != "eof" and tok.text == text

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def prev_span(self) -> SourceSpan:
        return self.tokens[self.pos - 1].span if self.pos else self.peek().span

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        msg = f"{message}, found {found}"
        raise ParseError(f"{tok.span}: {msg}", tuple(self.diagnostics) + (ParseDiagnostic("error", msg, tok.span),))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def warn(self, message: str, span: SourceSpan):
        self.diagnostics.append(ParseDiagnostic("warning", message, span))

    def semantic(self, message: str, span: SourceSpan):
        self.diagnostics.append(ParseDiagnostic("error", message, span))

    def build(self, start: SourceSpan, make: Callable):
        """Run a core constructor, turning invariant failures into diagnostics."""
        try:
            return make()
        except SemanticError as exc:
            self.semantic(str(exc), _join(start, self.prev_span()))
            return None

    def finish(self):
        errors = [d for d in self.diagnostics if d.severity == "error"]
        if errors:
            first = errors[0]
            raise SemanticError(f"{first.span}: {first.message}", tuple(self.diagnostics))

    # shared pieces

    def atom(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail("expected an atom")
        self.advance()
        name = tok.text
        if self.at("(") and self.peek(1).kind == "number" and self.at(")", 2):
            num = self.peek(1).text
            if not num.isdigit():
                self.fail("expected a nonnegative integer argument", self.peek(1))
            self.pos += 3
            name = f"{name}({num})"
        try:
            check_atom(name)
        except SemanticError:
            self.fail("atom names start with a lowercase letter", tok)
        return name

    def integer(self) -> int:
        tok = self.peek()
        if tok.kind != "number" or not tok.text.isdigit():
            self.fail("expected a nonnegative integer")
        self.advance()
        return int(tok.text)

    def real(self) -> float:
        sign = 1.0
        if self.at("-"):
            self.advance()
            sign = -1.0
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return sign * float(tok.text)
        if tok.kind == "ident" and tok.text == "inf":
            self.advance()
            return sign * math.inf
        self.fail("expected a number or inf")

    def atom_set(self) -> frozenset:
        start = self.expect("{").span
        items = []
        if not self.at("}"):
            items.append(self.atom())
            while self.at(","):
                self.advance()
                items.append(self.atom())
        self.expect("}")
        if len(set(items)) != len(items):
            self.warn("duplicate atom in set", _join(start, self.prev_span()))
        return frozenset(items)


# --------------------------------------------------------------------------
# PSC programs


class PscParser(_Parser):
    def program(self) -> Program:
        rules: list[tuple[Rule, SourceSpan]] = []
        extra: set = set()
        while self.peek().kind != "eof":
            start = self.peek().span
            if self.peek().kind == "directive":
                tok = self.advance()
                if tok.text != "#universe":
                    self.fail("unknown directive", tok)
                extra.add(self.atom())
                while self.at(","):
                    self.advance()
                    extra.add(self.atom())
            else:
                rule = self.rule()
                if rule is not None:
                    rules.append((rule, _join(start, self.prev_span())))
            self.expect(".")
        self.finish()
        kinds: dict = {}
        for rule, span in rules:
            if isinstance(rule.head, (PreorderAtom, MeasureAtom)):
                kinds.setdefault(type(rule.head), span)
        if len(kinds) > 1:
            span = max(kinds.values(), key=lambda s: s.start)
            self.semantic("program mixes pre-ordered and measure PSC atoms", span)
            self.finish()
        return Program(tuple(r for r, _ in rules), frozenset(extra))

    def rule(self) -> Optional[Rule]:
        start = self.peek().span
        head = self.head()
        body = []
        if self.at(":-"):
            self.advance()
            body.append(self.body_atom())
            while self.at(","):
                self.advance()
                body.append(self.body_atom())
        if head is None or any(b is None for b in body):
            return None
        return self.build(start, lambda: Rule(head, tuple(body)))

    def _keyword(self, word: str) -> bool:
        return self.at(word) and self.at("(", 1) and self.at("{", 2)

    def head(self):
        if self._keyword("pref"):
            return self.pref_atom()
        if self._keyword("meas"):
            return self.meas_atom()
        return self.body_atom()

    def body_atom(self) -> Optional[SCAtom]:
        start = self.peek().span
        if self._keyword("pref") or self._keyword("meas"):
            self.fail("PSC atoms may only appear in rule heads")
        if self._keyword("sc"):
            self.advance()
            self.advance()
            base = self.atom_set()
            self.expect(",")
            family = self.family()
            self.expect(")")
            if family is None:
                return None
            return self.build(start, lambda: SCAtom(base, family))
        if self.at("not") and self.peek(1).kind == "ident":
            self.advance()
            return _literal(self.atom(), True)
        return _literal(self.atom(), False)

    def family(self):
        start = self.peek().span
        if self.at("{"):
            self.advance()
            sets = []
            if not self.at("}"):
                sets.append(self.atom_set())
                while self.at(","):
                    self.advance()
                    sets.append(self.atom_set())
            self.expect("}")
            if len(set(sets)) != len(sets):
                self.warn("duplicate set in family", _join(start, self.prev_span()))
            return Extensional(frozenset(sets))
        if self.at("card"):
            self.advance()
            self.expect("(")
            lo = self.integer()
            self.expect("..")
            hi = self.integer()
            self.expect(")")
            return self.build(start, lambda: Card(lo, hi))
        if self.at("even"):
            self.advance()
            return EVEN
        if self.at("any"):
            self.advance()
            return ANY
        self.fail("expected a family: '{', card, even or any")

    def _base_family(self):
        self.advance()
        self.expect("(")
        base = self.atom_set()
        self.expect(",")
        family = self.family()
        self.expect(",")
        return base, family

    def pref_atom(self):
        start = self.peek().span
        base, family = self._base_family()
        order = self.order()
        self.expect(")")
        if family is None or order is None:
            return None
        return self.build(start, lambda: PreorderAtom(SCAtom(base, family), order))

    def meas_atom(self):
        start = self.peek().span
        base, family = self._base_family()
        measure = self.measure()
        self.expect(")")
        if family is None or measure is None:
            return None
        if isinstance(measure, Indicator) and measure.pivot not in base:
            self.warn(f"indicator pivot {measure.pivot} is not in the base", _join(start, self.prev_span()))
        return self.build(start, lambda: MeasureAtom(SCAtom(base, family), measure))

    def _pairs(self):
        pairs = []
        if not self.at(")"):
            while True:
                a = self.atom_set()
                self.expect("<=")
                b = self.atom_set()
                pairs.append((a, b))
                if not self.at(","):
                    break
                self.advance()
        return tuple(pairs)

    def order(self):
        start = self.peek().span
        word = self.peek().text if self.peek().kind == "ident" else None
        if word not in ("chain", "pairs", "rel", "rank"):
            self.fail("expected an order: chain, pairs, rel or rank")
        self.advance()
        self.expect("(")
        if word == "chain":
            sets = [self.atom_set()]
            while self.at("<"):
                self.advance()
                sets.append(self.atom_set())
            self.expect(")")
            return self.build(start, lambda: Chain(tuple(sets)))
        if word in ("pairs", "rel"):
            pairs = self._pairs()
            self.expect(")")
            return Pairs(pairs, closed=(word == "pairs"))
        weights, default = self.weightmap()
        self.expect(")")
        return self.build(start, lambda: Rank(weights, default))

    def weightmap(self):
        weights = []
        default = None
        first = True
        while not self.at(")"):
            if not first:
                self.expect(",")
            first = False
            if self.at("default") and self.at("=", 1):
                self.advance()
                self.advance()
                default = self.real()
                break
            s = self.atom_set()
            self.expect("=")
            weights.append((s, self.real()))
        return tuple(weights), default

    def measure(self):
        start = self.peek().span
        word = self.peek().text if self.peek().kind == "ident" else None
        if word not in ("weights", "indicator", "linear"):
            self.fail("expected a measure: weights, indicator or linear")
        self.advance()
        self.expect("(")
        if word == "weights":
            weights, default = self.weightmap()
            self.expect(")")
            return self.build(start, lambda: Weights(weights, default))
        if word == "indicator":
            pivot = self.atom()
            self.expect(",")
            if_in = self.real()
            self.expect(",")
            if_out = self.real()
            self.expect(")")
            return Indicator(pivot, if_in, if_out)
        weights = []
        offset = 0.0
        first = True
        while not self.at(")"):
            if not first:
                self.expect(",")
            first = False
            if self.at("offset") and self.at("=", 1):
                self.advance()
                self.advance()
                offset = self.real()
                break
            a = self.atom()
            self.expect("=")
            weights.append((a, self.real()))
        self.expect(")")
        return self.build(start, lambda: Linear(tuple(weights), offset))


def _literal(name: str, negated: bool) -> SCAtom:
    base = frozenset((name,))
    return SCAtom(base, Extensional(frozenset((frozenset() if negated else base,))))


def parse_psc(text: str, warnings: Optional[list] = None) -> Program:
    """Parse a PSC program; warnings, if any, are appended to ``warnings``."""
    p = PscParser(text)
    try:
        return p.program()
    finally:
        if warnings is not None:
            warnings.extend(d for d in p.diagnostics if d.severity == "warning")


# --------------------------------------------------------------------------
# ASO programs


_STRONG_NEG = "strong negation is not allowed in the generating program"


class AsoParser(_Parser):
    def program(self) -> "aso_mod.AsoProgram":
        gen, pref = [], []
        section = None
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "directive":
                self.advance()
                if tok.text not in ("#gen", "#pref"):
                    self.fail("expected #gen or #pref", tok)
                section = tok.text
                self.expect(".")
                continue
            if section is None:
                self.fail("expected a #gen. or #pref. section header")
            if section == "#gen":
                rule = self.gen_rule()
                if rule is not None:
                    gen.append(rule)
            else:
                pref.append(self.pref_rule())
            self.expect(".")
        self.finish()
        return aso_mod.AsoProgram(tuple(gen), tuple(pref))

    def literal(self) -> "aso_mod.Lit":
        if self.at("-"):
            self.advance()
            return aso_mod.Lit(self.atom(), True)
        return aso_mod.Lit(self.atom())

    def body(self):
        pos, neg = [], []
        if not self.at(":-"):
            return pos, neg
        self.advance()
        if self.at("."):
            return pos, neg
        while True:
            if self.at("not") and (self.peek(1).kind == "ident" or self.at("-", 1)):
                self.advance()
                neg.append(self.literal())
            else:
                pos.append(self.literal())
            if not self.at(","):
                break
            self.advance()
        return pos, neg

    def gen_rule(self):
        start = self.peek().span
        head = self.literal()
        pos, neg = self.body()
        lits = [head, *pos, *neg]
        if any(l.strong for l in lits):
            self.semantic(_STRONG_NEG, _join(start, self.prev_span()))
            return None
        return NormalRule(head.atom, tuple(l.atom for l in pos), tuple(l.atom for l in neg))

    def pref_rule(self):
        options = [self.disjunction()]
        while self.at(">"):
            self.advance()
            options.append(self.disjunction())
        pos, neg = self.body()
        return aso_mod.AsoPrefRule(tuple(options), tuple(pos), tuple(neg))

    def disjunction(self):
        parts = [self.conjunction()]
        while self.at("|"):
            self.advance()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else aso_mod.Or(tuple(parts))

    def conjunction(self):
        parts = [self.unary()]
        while self.at("&"):
            self.advance()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else aso_mod.And(tuple(parts))

    def unary(self):
        if self.at("not"):
            self.advance()
            if not (self.peek().kind == "ident" or self.at("-")):
                self.fail("default negation may only precede a literal", self.peek())
            return aso_mod.Naf(self.literal())
        if self.at("("):
            self.advance()
            inner = self.disjunction()
            self.expect(")")
            return inner
        return self.literal()


def parse_aso(text: str, warnings: Optional[list] = None) -> "aso_mod.AsoProgram":
    p = AsoParser(text)
    try:
        prog = p.program()
    except SemanticError as exc:
        if any(d.message == _STRONG_NEG for d in exc.diagnostics):
            raise StrongNegationInGenError(str(exc), exc.diagnostics) from None
        raise
    finally:
        if warnings is not None:
            warnings.extend(d for d in p.diagnostics if d.severity == "warning")
    return prog


# --------------------------------------------------------------------------
# PP formulas

# Binding strength, loosest first: "<|", "|", "&", "!".


class PPParser(_Parser):
    def formula(self):
        f = self.lex()
        if self.at("."):
            self.advance()
        if self.peek().kind != "eof":
            self.fail("expected end of formula")
        return f

    def lex(self):
        operands = [self.disj()]
        while self.at("<|"):
            self.advance()
            operands.append(self.disj())
        if len(operands) == 1:
            return operands[0][0]
        if all(bare for _, bare in operands):
            return pp_mod.Atomic(tuple(f.desires[0] for f, _ in operands))
        return pp_mod.Lex(tuple(f for f, _ in operands))

    # the following return (formula, is_bare_desire)

    def disj(self):
        left, bare = self.conj()
        while self.at("|"):
            self.advance()
            right, _ = self.conj()
            left, bare = pp_mod.POr(left, right), False
        return left, bare

    def conj(self):
        left, bare = self.neg()
        while self.at("&"):
            self.advance()
            right, _ = self.neg()
            left, bare = pp_mod.PAnd(left, right), False
        return left, bare

    def neg(self):
        if self.at("!"):
            self.advance()
            arg, _ = self.neg()
            return pp_mod.PNot(arg), False
        if self.at("("):
            self.advance()
            inner = self.lex()
            self.expect(")")
            return inner, False
        return pp_mod.basic(self.atom()), True


def parse_pp(text: str) -> "pp_mod.PrefFormula":
    return PPParser(text).formula()


# --------------------------------------------------------------------------
# serialization


def format_real(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def format_set(s) -> str:
    return "{" + ", ".join(canonical(s)) + "}"


def _sets(sets) -> list:
    return sorted(sets, key=model_key)


def format_family(f) -> str:
    if isinstance(f, Extensional):
        return "{" + ", ".join(format_set(s) for s in _sets(f.sets)) + "}"
    if isinstance(f, Card):
        return f"card({f.lo}..{f.hi})"
    if isinstance(f, Even):
        return "even"
    if isinstance(f, AnyFamily):
        return "any"
    raise TypeError(f)


def format_sc(a: SCAtom) -> str:
    if len(a.base) == 1 and isinstance(a.family, Extensional) and len(a.family.sets) == 1:
        (name,) = a.base
        (member,) = a.family.sets
        return name if member else f"not {name}"
    return f"sc({format_set(a.base)}, {format_family(a.family)})"


def _weightmap(weights, default) -> str:
    parts = [f"{format_set(s)} = {format_real(w)}" for s, w in weights]
    if default is not None:
        parts.append(f"default = {format_real(default)}")
    return ", ".join(parts)


def format_order(o) -> str:
    if isinstance(o, Chain):
        return "chain(" + " < ".join(format_set(s) for s in o.sets) + ")"
    if isinstance(o, Pairs):
        word = "pairs" if o.closed else "rel"
        return f"{word}(" + ", ".join(f"{format_set(a)} <= {format_set(b)}" for a, b in o.pairs) + ")"
    if isinstance(o, Rank):
        return f"rank({_weightmap(o.weights, o.default)})"
    raise TypeError(o)


def format_measure(m) -> str:
    if isinstance(m, Weights):
        return f"weights({_weightmap(m.weights, m.default)})"
    if isinstance(m, Indicator):
        return f"indicator({m.pivot}, {format_real(m.if_in)}, {format_real(m.if_out)})"
    if isinstance(m, Linear):
        parts = [f"{a} = {format_real(w)}" for a, w in m.weights]
        parts.append(f"offset = {format_real(m.offset)}")
        return "linear(" + ", ".join(parts) + ")"
    raise TypeError(m)


def format_head(h) -> str:
    if isinstance(h, PreorderAtom):
        return f"pref({format_set(h.base)}, {format_family(h.family)}, {format_order(h.order)})"
    if isinstance(h, MeasureAtom):
        return f"meas({format_set(h.base)}, {format_family(h.family)}, {format_measure(h.measure)})"
    return format_sc(h)


def format_rule(r: Rule) -> str:
    if r.body:
        return f"{format_head(r.head)} :- " + ", ".join(format_sc(b) for b in r.body) + "."
    return f"{format_head(r.head)}."


def serialize_psc(p: Program) -> str:
    lines = []
    mentioned: set = set()
    for r in p.rules:
        mentioned |= r.atoms()
    extra = p.universe - mentioned
    if extra:
        lines.append("#universe " + ", ".join(canonical(extra)) + ".")
    lines.extend(sorted({format_rule(r) for r in p.rules}))
    return "".join(line + "\n" for line in lines)


def format_bc(c, parent: Optional[type] = None) -> str:
    if isinstance(c, aso_mod.Lit):
        return str(c)
    if isinstance(c, aso_mod.Naf):
        return f"not {c.lit}"
    if isinstance(c, aso_mod.And):
        text = " & ".join(format_bc(p, aso_mod.And) for p in c.parts)
        return f"({text})" if parent is aso_mod.And else text
    if isinstance(c, aso_mod.Or):
        text = " | ".join(format_bc(p, aso_mod.Or) for p in c.parts)
        return f"({text})" if parent in (aso_mod.And, aso_mod.Or) else text
    raise TypeError(c)


def _aso_body(pos, neg) -> str:
    lits = [str(l) for l in pos] + [f"not {l}" for l in neg]
    return " :- " + ", ".join(lits) if lits else ""


def serialize_aso(a: "aso_mod.AsoProgram") -> str:
    lines = ["#gen."]
    for r in a.gen:
        lines.append(r.head + _aso_body(r.pos, r.neg) + ".")
    lines.append("#pref.")
    for r in a.pref:
        lines.append(" > ".join(format_bc(c) for c in r.options) + _aso_body(r.body_pos, r.body_neg) + ".")
    return "".join(line + "\n" for line in lines)


def serialize_pp(f, top: bool = True) -> str:
    if isinstance(f, pp_mod.Atomic):
        text = " <| ".join(f.desires)
        return text if top or f.is_basic else f"({text})"
    if isinstance(f, pp_mod.PNot):
        return "!" + _pp_wrap(f.arg)
    if isinstance(f, pp_mod.PAnd):
        text = f"{_pp_wrap(f.left)} & {_pp_wrap(f.right)}"
    elif isinstance(f, pp_mod.POr):
        text = f"{_pp_wrap(f.left)} | {_pp_wrap(f.right)}"
    elif isinstance(f, pp_mod.Lex):
        text = " <| ".join(f"({serialize_pp(p)})" for p in f.parts)
    else:
        raise TypeError(f)
    return text if top else f"({text})"


def _pp_wrap(f) -> str:
    if isinstance(f, pp_mod.Atomic) and f.is_basic:
        return f.desires[0]
    if isinstance(f, pp_mod.PNot):
        return serialize_pp(f, top=True)
    return serialize_pp(f, top=False)


def serialize(obj) -> str:
    if isinstance(obj, Program):
        return serialize_psc(obj)
    if isinstance(obj, aso_mod.AsoProgram):
        return serialize_aso(obj)
    return serialize_pp(obj) + "\n"
