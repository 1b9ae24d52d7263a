"""Text format for problems (.fol): vocabulary line, formula, directives.

Grammar sketch::

    vocab P/2, Q/1; const c, d;
    forall x. exists y. (P(x,y) -> Q(y))
    @sigma P, Q;
    @bound 3;
    @free x;

Operators ``!`` ``&`` ``|`` ``->`` ``<->`` ``=`` ``!=`` with precedence
``!`` > ``&`` > ``|`` > ``->`` > ``<->``; quantifier scope extends maximally
right; ``#`` starts a line comment; ``!=`` sugars to ``!(s = t)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import ParseError
from .syntax import (And, Atom, Const, Eq, Exists, Forall, Formula, Iff,
                     Implies, Not, Or, Term, Var, Vocabulary, free_vars)

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<op><->|->|!=|[()/,;.=!&|@])
""", re.VERBOSE)

_KEYWORDS = {"vocab", "const", "forall", "exists"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "int" | "op" | "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class Problem:
    vocabulary: Vocabulary
    formula: Optional[Formula]
    declared_free: Tuple[str, ...] = ()
    directives: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "declared_free", tuple(self.declared_free))


class _Parser:
    def __init__(self, tokens: List[_Token], require_formula: bool = True):
        self.tokens = tokens
        self.i = 0
        self.var_positions: Dict[str, Tuple[int, int]] = {}
        self.first_eq: Optional[Tuple[int, int]] = None
        self.vocab = Vocabulary()
        self.require_formula = require_formula

    # -- token helpers -----------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, got {t.text or 'end of input'!r}",
                             t.line, t.column)
        return t

    def error(self, msg: str, tok: Optional[_Token] = None):
        t = tok or self.peek()
        raise ParseError(msg, t.line, t.column)

    # -- problem -----------------------------------------------------------
    def parse(self) -> Problem:
        self.parse_vocab()
        formula: Optional[Formula] = None
        formula_tok: Optional[_Token] = None
        directives: Dict[str, str] = {}
        declared_free: List[str] = []
        while self.peek().kind != "eof":
            if self.peek().text == "@":
                self.parse_directive(directives, declared_free)
            elif formula is None:
                formula_tok = self.peek()
                formula = self.parse_formula()
            else:
                self.error("unexpected trailing input (formula already parsed)")
        if formula is None and self.require_formula and not _is_system(directives):
            t = self.peek()
            raise ParseError("missing formula", t.line, t.column)
        if "noeq" in directives and self.first_eq is not None:
            raise ParseError("equality used under @noeq", *self.first_eq)
        if formula is not None:
            unbound = free_vars(formula) - set(declared_free)
            if unbound:
                v = sorted(unbound)[0]
                line, col = self.var_positions.get(v, (formula_tok.line, formula_tok.column))
                raise ParseError(f"unbound variable {v!r} not declared @free", line, col)
        return Problem(self.vocab, formula, tuple(declared_free), directives)

    def parse_vocab(self) -> None:
        self.expect("vocab")
        predicates: List[Tuple[str, int]] = []
        while self.peek().text != ";":
            t = self.next()
            if t.kind != "name":
                self.error("expected predicate name", t)
            self.expect("/")
            a = self.next()
            if a.kind != "int":
                self.error("expected arity", a)
            predicates.append((t.text, int(a.text)))
            if self.peek().text == ",":
                self.next()
        self.expect(";")
        constants: List[str] = []
        if self.peek().text == "const":
            self.next()
            while self.peek().text != ";":
                t = self.next()
                if t.kind != "name":
                    self.error("expected constant name", t)
                constants.append(t.text)
                if self.peek().text == ",":
                    self.next()
            self.expect(";")
        try:
            self.vocab = Vocabulary(tuple(predicates), tuple(constants))
        except ValueError as e:
            t = self.tokens[0]
            raise ParseError(str(e), t.line, t.column) from e

    def parse_directive(self, directives: Dict[str, str], declared_free: List[str]) -> None:
        self.expect("@")
        key = self.next()
        if key.kind != "name":
            self.error("expected directive name", key)
        parts: List[str] = []
        while self.peek().text != ";":
            t = self.next()
            if t.kind == "eof":
                self.error("unterminated directive", t)
            parts.append(t.text)
        self.expect(";")
        if key.text == "free":
            for name in parts:
                if name != ",":
                    declared_free.append(name)
        else:
            directives[key.text] = " ".join(parts)

    # -- formulas (precedence climbing) ------------------------------------
    def parse_formula(self) -> Formula:
        return self.parse_iff()

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        if self.peek().text == "<->":
            self.next()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek().text == "->":
            self.next()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        parts = [self.parse_and()]
        while self.peek().text == "|":
            self.next()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Formula:
        parts = [self.parse_unary()]
        while self.peek().text == "&":
            self.next()
            parts.append(self.parse_unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self) -> Formula:
        t = self.peek()
        if t.text == "!":
            self.next()
            return Not(self.parse_unary())
        if t.text in ("forall", "exists"):
            self.next()
            v = self.next()
            if v.kind != "name" or v.text in _KEYWORDS:
                self.error("expected variable name", v)
            self.expect(".")
            body = self.parse_formula()  # scope extends maximally right
            return Forall(v.text, body) if t.text == "forall" else Exists(v.text, body)
        if t.text == "(":
            self.next()
            f = self.parse_formula()
            self.expect(")")
            return f
        if t.kind == "name":
            return self.parse_atom_or_eq()
        self.error(f"expected formula, got {t.text or 'end of input'!r}", t)

    def parse_atom_or_eq(self) -> Formula:
        t = self.next()
        if self.peek().text == "(" and self.vocab.is_predicate(t.text):
            self.next()
            args: List[Term] = [self.parse_term()]
            while self.peek().text == ",":
                self.next()
                args.append(self.parse_term())
            self.expect(")")
            arity = self.vocab.arity(t.text)
            if len(args) != arity:
                raise ParseError(
                    f"arity mismatch: {t.text} expects {arity} arguments, got {len(args)}",
                    t.line, t.column)
            return Atom(t.text, tuple(args))
        if self.peek().text in ("=", "!="):
            left = self.term_from_name(t)
            op = self.next()
            right = self.parse_term()
            if self.first_eq is None:
                self.first_eq = (op.line, op.column)
            eq = Eq(left, right)
            return eq if op.text == "=" else Not(eq)
        # bare name: nullary predicate atom
        if self.vocab.is_predicate(t.text):
            if self.vocab.arity(t.text) != 0:
                raise ParseError(
                    f"arity mismatch: {t.text} expects {self.vocab.arity(t.text)} "
                    "arguments, got 0", t.line, t.column)
            return Atom(t.text, ())
        if self.vocab.is_constant(t.text):
            raise ParseError(f"constant {t.text!r} used as formula", t.line, t.column)
        raise ParseError(f"undeclared predicate {t.text!r}", t.line, t.column)

    def parse_term(self) -> Term:
        t = self.next()
        if t.kind != "name" or t.text in _KEYWORDS:
            self.error("expected term", t)
        return self.term_from_name(t)

    def term_from_name(self, t: _Token) -> Term:
        if self.vocab.is_constant(t.text):
            return Const(t.text)
        if self.vocab.is_predicate(t.text):
            raise ParseError(f"predicate {t.text!r} used as term", t.line, t.column)
        self.var_positions.setdefault(t.text, (t.line, t.column))
        return Var(t.text)


def _is_system(directives: Dict[str, str]) -> bool:
    """Transition-system files (@init/@trans/@prop) need no top-level formula."""
    return any(k in directives for k in ("init", "trans", "prop"))


def parse_problem(text: str, require_formula: bool = True) -> Problem:
    return _Parser(_tokenize(text), require_formula).parse()


def parse_formula_text(text: str, vocab: Vocabulary,
                       declared_free: Tuple[str, ...] = ()) -> Formula:
    """Parse a bare formula over an existing vocabulary (used for directive
    bodies such as @init/@trans/@prop)."""
    p = _Parser(_tokenize(text))
    p.vocab = vocab
    f = p.parse_formula()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"unexpected trailing input {t.text!r}", t.line, t.column)
    unbound = free_vars(f) - set(declared_free)
    if unbound:
        v = sorted(unbound)[0]
        line, col = p.var_positions.get(v, (1, 1))
        raise ParseError(f"unbound variable {v!r} not declared @free", line, col)
    return f


# ---------------------------------------------------------------------------
# Rendering

def render(p: Problem) -> str:
    lines = [_render_vocab(p.vocabulary)]
    if p.formula is not None:
        lines.append(render_formula(p.formula))
    if p.declared_free:
        lines.append(f"@free {', '.join(p.declared_free)};")
    for key in sorted(p.directives):
        value = p.directives[key]
        lines.append(f"@{key} {value};".replace(" ;", ";"))
    return "\n".join(lines) + "\n"


def _render_vocab(v: Vocabulary) -> str:
    preds = ", ".join(f"{n}/{a}" for n, a in v.predicates)
    out = f"vocab {preds};"
    if v.constants:
        out += f" const {', '.join(v.constants)};"
    return out


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.predicate
        return f"{f.predicate}({', '.join(str(t) for t in f.args)})"
    if isinstance(f, Eq):
        return f"({f.left} = {f.right})"
    if isinstance(f, Not):
        return f"!{render_formula(f.sub)}"
    if isinstance(f, And):
        return "(" + " & ".join(render_formula(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(render_formula(a) for a in f.args) + ")"
    if isinstance(f, Implies):
        return f"({render_formula(f.left)} -> {render_formula(f.right)})"
    if isinstance(f, Iff):
        return f"({render_formula(f.left)} <-> {render_formula(f.right)})"
    if isinstance(f, Forall):
        return f"(forall {f.var}. {render_formula(f.body)})"
    if isinstance(f, Exists):
        return f"(exists {f.var}. {render_formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")
