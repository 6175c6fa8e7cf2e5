"""Parser for the ASCII surface syntax of logical forms.

Grammar, loosest binding first::

    term  := '\\' IDENT '.' term
           | ('forall' | 'exists') IDENT '.' term
           | or_t ('->' term)?            right-associative
    or_t  := and_t ('|' and_t)*
    and_t := not_t ('&' not_t)*
    not_t := '!' not_t | app_t
    app_t := atom atom*                   juxtaposition, left-associative
    atom  := IDENT ('(' term (',' term)* ')')?
           | '(' term ')'

Lambda and quantifier bodies extend as far right as possible.  A bare
identifier is a variable when an enclosing binder captures it or when it
is a single letter with an optional digit suffix (``x``, ``f``, ``x1``);
anything longer is a constant.  ``name(args)`` builds a predication
unless ``name`` is bound, in which case it builds an application spine
so that reduction can substitute the functor.
"""

from __future__ import annotations

import re

from .errors import SourceSyntaxError
from .terms import (And, App, Const, Exists, Forall, Implies, Lam, Not, Or,
                    Pred, Term, Var)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VAR_SHAPE_RE = re.compile(r"[A-Za-z][0-9]*\Z")
_KEYWORDS = ("forall", "exists")


def is_variable_name(name: str) -> bool:
    """Shape rule for unbound identifiers: one letter plus optional digits."""
    return bool(_VAR_SHAPE_RE.fullmatch(name))


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if text.startswith("->", pos):
                self.items.append(("ARROW", "->", pos))
                pos += 2
                continue
            if ch in "\\.(),&|!":
                kind = {"\\": "LAMBDA", ".": "DOT", "(": "LPAR", ")": "RPAR",
                        ",": "COMMA", "&": "AND", "|": "OR", "!": "NOT"}[ch]
                self.items.append((kind, ch, pos))
                pos += 1
                continue
            m = _IDENT_RE.match(text, pos)
            if m:
                word = m.group(0)
                kind = word.upper() if word in _KEYWORDS else "IDENT"
                self.items.append((kind, word, pos))
                pos = m.end()
                continue
            raise SourceSyntaxError(f"unexpected character {ch!r}", offset=pos)
        self.items.append(("EOF", "", n))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.i]

    def next(self) -> tuple[str, str, int]:
        item = self.items[self.i]
        self.i += 1
        return item

    def expect(self, kind: str) -> tuple[str, str, int]:
        item = self.next()
        if item[0] != kind:
            raise SourceSyntaxError(
                f"expected {kind}, found {item[1] or 'end of input'!r}",
                offset=item[2])
        return item


def parse_term(text: str) -> Term:
    """Parse one logical form; raises SourceSyntaxError with an offset."""
    toks = _Tokens(text)
    term = _term(toks, frozenset())
    kind, value, pos = toks.peek()
    if kind != "EOF":
        raise SourceSyntaxError(f"trailing input {value!r}", offset=pos)
    return term


def _term(toks: _Tokens, bound: frozenset[str]) -> Term:
    kind, _, _ = toks.peek()
    if kind == "LAMBDA":
        toks.next()
        _, name, _ = toks.expect("IDENT")
        toks.expect("DOT")
        return Lam(name, _term(toks, bound | {name}))
    if kind in ("FORALL", "EXISTS"):
        toks.next()
        _, name, _ = toks.expect("IDENT")
        toks.expect("DOT")
        body = _term(toks, bound | {name})
        return Forall(name, body) if kind == "FORALL" else Exists(name, body)
    left = _or(toks, bound)
    if toks.peek()[0] == "ARROW":
        toks.next()
        return Implies(left, _term(toks, bound))
    return left


def _or(toks: _Tokens, bound: frozenset[str]) -> Term:
    term = _and(toks, bound)
    while toks.peek()[0] == "OR":
        toks.next()
        term = Or(term, _and(toks, bound))
    return term


def _and(toks: _Tokens, bound: frozenset[str]) -> Term:
    term = _not(toks, bound)
    while toks.peek()[0] == "AND":
        toks.next()
        term = And(term, _not(toks, bound))
    return term


def _not(toks: _Tokens, bound: frozenset[str]) -> Term:
    if toks.peek()[0] == "NOT":
        toks.next()
        return Not(_not(toks, bound))
    return _app(toks, bound)


def _app(toks: _Tokens, bound: frozenset[str]) -> Term:
    term = _atom(toks, bound)
    while toks.peek()[0] in ("IDENT", "LPAR"):
        term = App(term, _atom(toks, bound))
    return term


def _atom(toks: _Tokens, bound: frozenset[str]) -> Term:
    kind, value, pos = toks.next()
    if kind == "LPAR":
        term = _term(toks, bound)
        toks.expect("RPAR")
        return term
    if kind != "IDENT":
        raise SourceSyntaxError(
            f"expected a term, found {value or 'end of input'!r}", offset=pos)
    if toks.peek()[0] == "LPAR":
        toks.next()
        args = [_term(toks, bound)]
        while toks.peek()[0] == "COMMA":
            toks.next()
            args.append(_term(toks, bound))
        toks.expect("RPAR")
        if value in bound:
            spine: Term = Var(value)
            for a in args:
                spine = App(spine, a)
            return spine
        return Pred(value, tuple(args))
    if value in bound or is_variable_name(value):
        return Var(value)
    return Const(value)
