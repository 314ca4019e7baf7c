"""Syntax of the modal language: formula trees, parsing, printing, NNF.

Connectives: `true`, `false`, atoms, `~` (not), `&` (and), `|` (or),
`[]` (box) and `<>` (diamond).  Precedence is unary > `&` > `|`;
both binary connectives associate to the right, so `a | b | c` parses
as `Or(a, Or(b, c))`.  The Unicode aliases □ ◇ ¬ ∧ ∨ are accepted on
input; printing always produces the ASCII form, and
`parse(to_text(f))` returns a tree structurally equal to `f`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError

__all__ = [
    "Formula", "Atom", "Top", "Bot", "Not", "And", "Or", "Box", "Diamond",
    "TOP", "BOT", "parse", "to_text", "to_nnf", "modal_depth", "atoms_of",
    "conj", "disj", "is_nnf",
]

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {"true", "false"}


class Formula:
    """Base class of all formula nodes.  Instances are immutable."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name) or self.name in _KEYWORDS:
            raise ValueError(f"invalid atom name: {self.name!r}")


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    child: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    child: Formula


TOP = Top()
BOT = Bot()


def conj(parts: Iterable[Formula]) -> Formula:
    """Right-nested conjunction of `parts`; the empty conjunction is `true`."""
    items = list(parts)
    if not items:
        return TOP
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    """Right-nested disjunction of `parts`; the empty disjunction is `false`."""
    items = list(parts)
    if not items:
        return BOT
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Or(f, out)
    return out


# --- tokenizer -------------------------------------------------------------

_UNICODE_ALIASES = {"□": "[]", "◇": "<>", "¬": "~", "∧": "&", "∨": "|"}
_SINGLE = set("~&|()")


@dataclass(frozen=True)
class _Token:
    kind: str  # "[]", "<>", "~", "&", "|", "(", ")", "ident", "true", "false", "end"
    text: str
    column: int  # 1-based


def _is_ident_start(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z" or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or "0" <= ch <= "9"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        col = i + 1
        if text.startswith("[]", i):
            tokens.append(_Token("[]", "[]", col))
            i += 2
        elif text.startswith("<>", i):
            tokens.append(_Token("<>", "<>", col))
            i += 2
        elif ch in _UNICODE_ALIASES:
            tokens.append(_Token(_UNICODE_ALIASES[ch], ch, col))
            i += 1
        elif ch in _SINGLE:
            tokens.append(_Token(ch, ch, col))
            i += 1
        elif _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            kind = word if word in _KEYWORDS else "ident"
            tokens.append(_Token(kind, word, col))
            i = j
        else:
            raise ParseError(f"unknown token {ch!r}", col)
    tokens.append(_Token("end", "", n + 1))
    return tokens


# --- recursive-descent parser ----------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def parse(self) -> Formula:
        f = self._or()
        tok = self._peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.column)
        return f

    def _or(self) -> Formula:
        parts = [self._and()]
        while self._peek().kind == "|":
            self._advance()
            parts.append(self._and())
        return disj(parts)

    def _and(self) -> Formula:
        parts = [self._unary()]
        while self._peek().kind == "&":
            self._advance()
            parts.append(self._unary())
        return conj(parts)

    def _unary(self) -> Formula:
        tok = self._peek()
        if tok.kind == "~":
            self._advance()
            return Not(self._unary())
        if tok.kind == "[]":
            self._advance()
            return Box(self._unary())
        if tok.kind == "<>":
            self._advance()
            return Diamond(self._unary())
        if tok.kind == "true":
            self._advance()
            return TOP
        if tok.kind == "false":
            self._advance()
            return BOT
        if tok.kind == "ident":
            self._advance()
            return Atom(tok.text)
        if tok.kind == "(":
            self._advance()
            f = self._or()
            closing = self._peek()
            if closing.kind != ")":
                raise ParseError("expected ')'", closing.column)
            self._advance()
            return f
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.column)
        raise ParseError(f"unexpected {tok.text!r}", tok.column)


def parse(text: str) -> Formula:
    """Parse formula text into its unique tree.

    Raises ParseError (with a 1-based column) on syntax errors and
    unknown tokens.
    """
    return _Parser(_tokenize(text)).parse()


# --- printing ---------------------------------------------------------------


def to_text(f: Formula) -> str:
    """Minimal-parenthesis rendering; inverse of `parse` up to whitespace."""
    return _or_text(f)


def _or_text(f: Formula) -> str:
    if isinstance(f, Or):
        return f"{_and_text(f.left)} | {_or_text(f.right)}"
    return _and_text(f)


def _and_text(f: Formula) -> str:
    if isinstance(f, And):
        return f"{_unary_text(f.left)} & {_and_text(f.right)}"
    return _unary_text(f)


def _unary_text(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Not):
        return "~" + _unary_text(f.child)
    if isinstance(f, Box):
        return "[]" + _unary_text(f.child)
    if isinstance(f, Diamond):
        return "<>" + _unary_text(f.child)
    return "(" + _or_text(f) + ")"


# --- structural transformations ----------------------------------------------


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: negation pushed onto atoms.

    Uses the dualities ~[]g = <>~g and ~<>g = []~g together with the
    De Morgan laws; double negations cancel, ~true = false, ~false = true.
    """
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, And):
        return And(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Or):
        return Or(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Box):
        return Box(to_nnf(f.child))
    if isinstance(f, Diamond):
        return Diamond(to_nnf(f.child))
    g = f.child  # f is Not
    if isinstance(g, Atom):
        return f
    if isinstance(g, Top):
        return BOT
    if isinstance(g, Bot):
        return TOP
    if isinstance(g, Not):
        return to_nnf(g.child)
    if isinstance(g, And):
        return Or(to_nnf(Not(g.left)), to_nnf(Not(g.right)))
    if isinstance(g, Or):
        return And(to_nnf(Not(g.left)), to_nnf(Not(g.right)))
    if isinstance(g, Box):
        return Diamond(to_nnf(Not(g.child)))
    return Box(to_nnf(Not(g.child)))  # g is Diamond


def is_nnf(f: Formula) -> bool:
    """True when every negation in `f` sits directly on an atom."""
    if isinstance(f, Not):
        return isinstance(f.child, Atom)
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    if isinstance(f, (Box, Diamond)):
        return is_nnf(f.child)
    return True


def modal_depth(f: Formula) -> int:
    """Maximum nesting of box/diamond; bare boolean formulas have depth 0."""
    if isinstance(f, (Atom, Top, Bot)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.child)
    if isinstance(f, (And, Or)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.child)


def atoms_of(f: Formula) -> frozenset[str]:
    """The set of atom names occurring in `f`."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, (Not, Box, Diamond)):
            stack.append(g.child)
        elif isinstance(g, (And, Or)):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)
