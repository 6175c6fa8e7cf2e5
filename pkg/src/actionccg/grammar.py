"""Categorial grammar: categories, lexical entries, and combination.

The category language is tiny: atoms N, NP, AP and the two slashes.
``X/Y`` wants a Y on its right, ``X\\Y`` normally wants a Y on its left.
A backslash function additionally accepts a right-adjacent argument,
which is how a quantifier entry of category ``NP\\NP`` attaches to the
noun phrase that follows it.  The only unary rule promotes a bare noun
to a noun phrase with unchanged semantics.

Semantic composition fills binders inside out: for a two-argument verb
``\\x.\\y.cut(x,y) -> divided(y)`` the patient consumed through ``/NP``
binds the inner ``y`` and the subject consumed through ``\\NP`` binds the
outer ``x``.  A quantified argument is hoisted: its quantifier wraps the
result and its restrictor lands in the antecedent of the consequence
implication (or is conjoined when there is none).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

from .errors import DuplicateEntryWarning, SourceSyntaxError
from .terms import (App, Const, Exists, Forall, Implies, Lam, Term, Var, And,
                    all_names, beta_reduce, canonical, free_vars, fresh_name,
                    substitute)

ATOMIC_CATEGORIES = ("N", "NP", "AP")
GOAL_CATEGORY_NAME = "AP"


class Category:
    __slots__ = ()

    def __str__(self) -> str:
        return render_category(self)


@dataclass(frozen=True)
class Atom(Category):
    name: str


@dataclass(frozen=True)
class Forward(Category):
    result: Category
    arg: Category


@dataclass(frozen=True)
class Backward(Category):
    result: Category
    arg: Category


N = Atom("N")
NP = Atom("NP")
AP = Atom("AP")
GOAL_CATEGORY = AP


def render_category(cat: Category) -> str:
    if isinstance(cat, Atom):
        return cat.name
    slash = "/" if isinstance(cat, Forward) else "\\"
    return f"{_wrap(cat.result)}{slash}{_wrap(cat.arg)}"


def _wrap(cat: Category) -> str:
    text = render_category(cat)
    return text if isinstance(cat, Atom) else f"({text})"


def parse_category(text: str) -> Category:
    """Parse ``N``, ``NP``, ``AP`` and slash combinations thereof.

    Slashes associate to the left, so ``AP\\NP/NP`` equals ``(AP\\NP)/NP``.
    """
    cat, pos = _category(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise SourceSyntaxError(f"trailing input {text[pos]!r}", offset=pos)
    return cat


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _category(text: str, pos: int) -> tuple[Category, int]:
    cat, pos = _category_part(text, pos)
    while True:
        pos = _skip_ws(text, pos)
        if pos < len(text) and text[pos] in "/\\":
            slash = text[pos]
            arg, pos = _category_part(text, pos + 1)
            cat = Forward(cat, arg) if slash == "/" else Backward(cat, arg)
        else:
            return cat, pos


def _category_part(text: str, pos: int) -> tuple[Category, int]:
    pos = _skip_ws(text, pos)
    if pos >= len(text):
        raise SourceSyntaxError("unexpected end of category", offset=pos)
    if text[pos] == "(":
        cat, pos = _category(text, pos + 1)
        pos = _skip_ws(text, pos)
        if pos >= len(text) or text[pos] != ")":
            raise SourceSyntaxError("unbalanced parenthesis", offset=pos)
        return cat, pos + 1
    end = pos
    while end < len(text) and text[end].isalpha():
        end += 1
    name = text[pos:end]
    if name not in ATOMIC_CATEGORIES:
        raise SourceSyntaxError(
            f"unknown category atom {name or text[pos]!r}", offset=pos)
    return Atom(name), end


@dataclass(frozen=True)
class LexEntry:
    """One lexicon line: token, category, semantics, weight, provenance."""

    token: str
    category: Category
    semantics: Term
    weight: float = 0.0
    provenance: str = "seed"

    @property
    def key(self) -> tuple[str, str, str]:
        """Identity for feature counting: weight changes keep the key."""
        return (self.token, render_category(self.category),
                canonical(self.semantics))

    def __str__(self) -> str:
        return (f"{self.token} := {render_category(self.category)} : "
                f"{self.semantics} @ {self.weight!r}")


class Lexicon:
    """Immutable token-to-entries map.

    Lookup tries the exact token first and falls back to a
    case-insensitive match, so detector output such as ``Chopping`` finds
    an entry learned from the lower-case corpus token ``chopping``.
    """

    def __init__(self, entries=()):
        self._entries: tuple[LexEntry, ...] = tuple(entries)
        self._exact: dict[str, list[LexEntry]] = {}
        self._folded: dict[str, list[LexEntry]] = {}
        for entry in self._entries:
            self._exact.setdefault(entry.token, []).append(entry)
            self._folded.setdefault(entry.token.lower(), []).append(entry)
        self._weights = {e.key: e.weight for e in self._entries}

    @property
    def entries(self) -> tuple[LexEntry, ...]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def lookup(self, token: str) -> tuple[LexEntry, ...]:
        found = self._exact.get(token)
        if found is None:
            found = self._folded.get(token.lower(), [])
        return tuple(found)

    def has_token(self, token: str) -> bool:
        return bool(self.lookup(token))

    def weight_of(self, key: tuple[str, str, str]) -> float:
        return self._weights[key]

    def with_entries(self, new_entries, warn_duplicates: bool = False) -> "Lexicon":
        """Extend with ``new_entries``, merging duplicates.

        Entries agreeing on token, category, and semantics up to renaming
        collapse into one, keeping the higher weight.
        """
        merged: dict[tuple[str, str, str], LexEntry] = {
            e.key: e for e in self._entries}
        order = list(self._entries)
        for entry in new_entries:
            old = merged.get(entry.key)
            if old is None:
                merged[entry.key] = entry
                order.append(entry)
                continue
            if warn_duplicates:
                warnings.warn(f"duplicate entry for {entry.token!r}: "
                              f"{entry.key[1]} : {entry.key[2]}",
                              DuplicateEntryWarning, stacklevel=2)
            if entry.weight > old.weight:
                merged[entry.key] = replace(old, weight=entry.weight)
        return Lexicon(merged[e.key] for e in order)

    def with_weights(self, weights: dict[tuple[str, str, str], float]) -> "Lexicon":
        return Lexicon(replace(e, weight=weights.get(e.key, e.weight))
                       for e in self._entries)


def unary_project(category: Category, semantics: Term):
    """N promotes to NP, identity on semantics; anything else is None."""
    if category == N:
        return NP, semantics
    return None


def combine(left: tuple[Category, Term], right: tuple[Category, Term],
            budget: int | None = None):
    """Binary combination of adjacent items, or None when no rule fires.

    At most one rule can apply to an ordered pair: a category can never
    equal one of its own subcategories, so the trigger conditions below
    are mutually exclusive.
    """
    (lcat, lsem), (rcat, rsem) = left, right
    if isinstance(lcat, Forward) and lcat.arg == rcat:
        return lcat.result, apply_argument(lsem, rsem, budget)
    if isinstance(rcat, Backward) and rcat.arg == lcat:
        return rcat.result, apply_argument(rsem, lsem, budget)
    if isinstance(lcat, Backward) and lcat.arg == rcat:
        return lcat.result, apply_argument(lsem, rsem, budget)
    return None


def apply_argument(fun: Term, arg: Term, budget: int | None = None) -> Term:
    """Feed one syntactic argument to a function term.

    The innermost pending binder receives the argument; earlier binders
    stay pending for later arguments.  A function already wrapped in a
    quantifier is applied underneath it, and a quantified argument is
    hoisted as described in the module docstring.  The result is in
    beta-normal form.
    """
    kwargs = {} if budget is None else {"budget": budget}
    if isinstance(fun, (Forall, Exists)):
        var, body = fun.var, fun.body
        if var in free_vars(arg):
            renamed = fresh_name(var, free_vars(arg) | all_names(body))
            body = substitute(body, var, Var(renamed))
            var = renamed
        return type(fun)(var, apply_argument(body, arg, budget))
    if isinstance(arg, (Forall, Exists)):
        return _hoist_quantifier(fun, arg, budget)
    if isinstance(fun, Lam) and isinstance(fun.body, Lam):
        param, body = fun.param, fun.body
        if param in free_vars(arg):
            renamed = fresh_name(param, free_vars(arg) | all_names(body))
            body = substitute(body, param, Var(renamed))
            param = renamed
        return Lam(param, apply_argument(body, arg, budget))
    return beta_reduce(App(fun, arg), **kwargs)


def _hoist_quantifier(fun: Term, arg: Term, budget: int | None) -> Term:
    var = fresh_name(arg.var, free_vars(arg.body) | all_names(fun))
    restrictor = (arg.body if var == arg.var
                  else substitute(arg.body, arg.var, Var(var)))
    core = apply_argument(fun, Var(var), budget)
    return type(arg)(var, _push_restrictor(restrictor, core))


def _push_restrictor(restrictor: Term, target: Term) -> Term:
    if isinstance(target, Lam):
        param, body = target.param, target.body
        if param in free_vars(restrictor):
            renamed = fresh_name(param, free_vars(restrictor) | all_names(body))
            body = substitute(body, param, Var(renamed))
            param = renamed
        return Lam(param, _push_restrictor(restrictor, body))
    if isinstance(target, Implies):
        return Implies(And(restrictor, target.left), target.right)
    return And(restrictor, target)
