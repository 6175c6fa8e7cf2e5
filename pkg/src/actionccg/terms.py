"""Lambda-calculus terms used as logical forms for manipulation actions.

Terms are immutable trees.  ``Pred`` covers saturated predications such as
``cut(knife,cucumber)``; an application whose function is still unknown
(a bound name, as in ``\\f.forall x.f(x)``) is kept as an ``App`` spine and
collapses into a ``Pred`` as soon as reduction reveals an atomic head.
All operations are pure, so sharing terms across threads is safe.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import ConstantFunctionWarning, NonTerminationError

DEFAULT_STEP_BUDGET = 10_000


class Term:
    """Base class for logical-form nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Pred(Term):
    name: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Lam(Term):
    param: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Or(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Term):
    body: Term


@dataclass(frozen=True)
class Implies(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Forall(Term):
    var: str
    body: Term


@dataclass(frozen=True)
class Exists(Term):
    var: str
    body: Term


_BINARY = (And, Or, Implies)
_QUANT = (Forall, Exists)


def free_vars(term: Term) -> frozenset[str]:
    """Names of variables occurring free in ``term``.

    Predicate functors (``cut`` in ``cut(x,y)``) are constants, never
    variables, so they are not reported.
    """
    out: set[str] = set()
    _free(term, frozenset(), out)
    return frozenset(out)


def _free(t: Term, bound: frozenset[str], out: set[str]) -> None:
    if isinstance(t, Var):
        if t.name not in bound:
            out.add(t.name)
    elif isinstance(t, Const):
        pass
    elif isinstance(t, Pred):
        for a in t.args:
            _free(a, bound, out)
    elif isinstance(t, Lam):
        _free(t.body, bound | {t.param}, out)
    elif isinstance(t, App):
        _free(t.fun, bound, out)
        _free(t.arg, bound, out)
    elif isinstance(t, _BINARY):
        _free(t.left, bound, out)
        _free(t.right, bound, out)
    elif isinstance(t, Not):
        _free(t.body, bound, out)
    elif isinstance(t, _QUANT):
        _free(t.body, bound | {t.var}, out)
    else:
        raise TypeError(f"not a term: {t!r}")


def all_names(term: Term) -> frozenset[str]:
    """Every identifier in ``term``: variables, constants, functors, binders."""
    out: set[str] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, (Var, Const)):
            out.add(t.name)
        elif isinstance(t, Pred):
            out.add(t.name)
            stack.extend(t.args)
        elif isinstance(t, Lam):
            out.add(t.param)
            stack.append(t.body)
        elif isinstance(t, App):
            stack.append(t.fun)
            stack.append(t.arg)
        elif isinstance(t, _BINARY):
            stack.append(t.left)
            stack.append(t.right)
        elif isinstance(t, Not):
            stack.append(t.body)
        elif isinstance(t, _QUANT):
            out.add(t.var)
            stack.append(t.body)
    return frozenset(out)


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """First of ``base``, ``base1``, ``base2``, ... not in ``avoid``.

    The counter restarts at every call, which keeps renaming deterministic
    for a given input term.
    """
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(term: Term, var: str, replacement: Term) -> Term:
    """Capture-avoiding substitution of ``replacement`` for free ``var``.

    A ``Pred`` functor equal to ``var`` is rewritten too: with an atomic
    replacement the predication is renamed in place, otherwise it unfolds
    into an application spine for later reduction.
    """
    fvr = free_vars(replacement)
    return _subst(term, var, replacement, fvr)


def _subst(t: Term, var: str, rep: Term, fvr: frozenset[str]) -> Term:
    if isinstance(t, Var):
        return rep if t.name == var else t
    if isinstance(t, Const):
        return t
    if isinstance(t, Pred):
        args = tuple(_subst(a, var, rep, fvr) for a in t.args)
        if t.name == var:
            if isinstance(rep, (Var, Const)):
                return Pred(rep.name, args)
            spine: Term = rep
            for a in args:
                spine = App(spine, a)
            return spine
        return Pred(t.name, args)
    if isinstance(t, App):
        return App(_subst(t.fun, var, rep, fvr), _subst(t.arg, var, rep, fvr))
    if isinstance(t, Lam):
        if t.param == var:
            return t
        body = t.body
        param = t.param
        if param in fvr and var in free_vars(body):
            param = fresh_name(param, fvr | all_names(body) | {var})
            body = _subst(body, t.param, Var(param), frozenset({param}))
        return Lam(param, _subst(body, var, rep, fvr))
    if isinstance(t, _QUANT):
        if t.var == var:
            return t
        body = t.body
        bound = t.var
        if bound in fvr and var in free_vars(body):
            bound = fresh_name(bound, fvr | all_names(body) | {var})
            body = _subst(body, t.var, Var(bound), frozenset({bound}))
        return type(t)(bound, _subst(body, var, rep, fvr))
    if isinstance(t, _BINARY):
        return type(t)(_subst(t.left, var, rep, fvr), _subst(t.right, var, rep, fvr))
    if isinstance(t, Not):
        return Not(_subst(t.body, var, rep, fvr))
    raise TypeError(f"not a term: {t!r}")


def _step(t: Term) -> tuple[Term, bool]:
    """One leftmost-outermost reduction step; returns (term, stepped)."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return substitute(t.fun.body, t.fun.param, t.arg), True
        if isinstance(t.fun, Const):
            return Pred(t.fun.name, (t.arg,)), True
        if isinstance(t.fun, Pred):
            return Pred(t.fun.name, t.fun.args + (t.arg,)), True
        fun, stepped = _step(t.fun)
        if stepped:
            return App(fun, t.arg), True
        arg, stepped = _step(t.arg)
        return App(t.fun, arg), stepped
    if isinstance(t, Lam):
        body, stepped = _step(t.body)
        return Lam(t.param, body), stepped
    if isinstance(t, Pred):
        for i, a in enumerate(t.args):
            na, stepped = _step(a)
            if stepped:
                return Pred(t.name, t.args[:i] + (na,) + t.args[i + 1:]), True
        return t, False
    if isinstance(t, _BINARY):
        left, stepped = _step(t.left)
        if stepped:
            return type(t)(left, t.right), True
        right, stepped = _step(t.right)
        return type(t)(t.left, right), stepped
    if isinstance(t, Not):
        body, stepped = _step(t.body)
        return Not(body), stepped
    if isinstance(t, _QUANT):
        body, stepped = _step(t.body)
        return type(t)(t.var, body), stepped
    return t, False


def beta_reduce(term: Term, budget: int = DEFAULT_STEP_BUDGET) -> Term:
    """Normalize ``term`` by leftmost-outermost reduction.

    Aborts with NonTerminationError once ``budget`` steps have been spent,
    which bounds divergent self-applications.
    """
    steps = 0
    while True:
        term, stepped = _step(term)
        if not stepped:
            return term
        steps += 1
        if steps > budget:
            raise NonTerminationError(f"no normal form within {budget} steps")


def is_beta_normal(term: Term) -> bool:
    """True when no reduction step applies anywhere in ``term``."""
    return not _step(term)[1]


def alpha_eq(a: Term, b: Term) -> bool:
    """Structural equality up to consistent renaming of bound variables."""
    return _aeq(a, b, {}, {}, 0)


def _aeq(a: Term, b: Term, ea: dict, eb: dict, depth: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return ea.get(a.name, a.name) == eb.get(b.name, b.name)
    if isinstance(a, Const):
        return a.name == b.name
    if isinstance(a, Pred):
        return (a.name == b.name and len(a.args) == len(b.args)
                and all(_aeq(x, y, ea, eb, depth) for x, y in zip(a.args, b.args)))
    if isinstance(a, Lam):
        return _aeq(a.body, b.body, {**ea, a.param: depth}, {**eb, b.param: depth},
                    depth + 1)
    if isinstance(a, App):
        return _aeq(a.fun, b.fun, ea, eb, depth) and _aeq(a.arg, b.arg, ea, eb, depth)
    if isinstance(a, _BINARY):
        return (_aeq(a.left, b.left, ea, eb, depth)
                and _aeq(a.right, b.right, ea, eb, depth))
    if isinstance(a, Not):
        return _aeq(a.body, b.body, ea, eb, depth)
    if isinstance(a, _QUANT):
        return _aeq(a.body, b.body, {**ea, a.var: depth}, {**eb, b.var: depth},
                    depth + 1)
    raise TypeError(f"not a term: {a!r}")


def canonical(term: Term) -> str:
    """Rendering with bound variables renumbered in binder order.

    Two terms produce the same canonical string exactly when they are
    alpha-equivalent, so the string doubles as a dictionary key for
    grouping derivations by logical form.
    """
    counter = [0]
    return render(_canon(term, {}, counter))


def _canon(t: Term, env: dict, counter: list[int]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Const):
        return t
    if isinstance(t, Pred):
        return Pred(t.name, tuple(_canon(a, env, counter) for a in t.args))
    if isinstance(t, Lam):
        new = f"_{counter[0]}"
        counter[0] += 1
        return Lam(new, _canon(t.body, {**env, t.param: new}, counter))
    if isinstance(t, App):
        return App(_canon(t.fun, env, counter), _canon(t.arg, env, counter))
    if isinstance(t, _BINARY):
        return type(t)(_canon(t.left, env, counter), _canon(t.right, env, counter))
    if isinstance(t, Not):
        return Not(_canon(t.body, env, counter))
    if isinstance(t, _QUANT):
        new = f"_{counter[0]}"
        counter[0] += 1
        return type(t)(new, _canon(t.body, {**env, t.var: new}, counter))
    raise TypeError(f"not a term: {t!r}")


def inverse_lambda(result: Term, arg: Term) -> Lam:
    """Abstract ``arg`` out of ``result``: the function that maps ``arg``
    back to ``result`` under application.

    Every subterm alpha-equivalent to ``arg`` is replaced, which yields the
    most general candidate.  When ``arg`` does not occur the outcome is a
    constant function and a ConstantFunctionWarning is emitted.
    """
    v = fresh_name("v", all_names(result) | all_names(arg))
    replaced, hits = _replace(result, arg, v, frozenset())
    if hits == 0:
        warnings.warn(f"argument {arg} does not occur in {result}",
                      ConstantFunctionWarning, stacklevel=2)
    return Lam(v, replaced)


def _replace(t: Term, target: Term, v: str, bound: frozenset[str]) -> tuple[Term, int]:
    if not (free_vars(target) & bound) and alpha_eq(t, target):
        return Var(v), 1
    if isinstance(t, (Var, Const)):
        return t, 0
    if isinstance(t, Pred):
        total = 0
        args = []
        for a in t.args:
            na, n = _replace(a, target, v, bound)
            args.append(na)
            total += n
        return Pred(t.name, tuple(args)), total
    if isinstance(t, Lam):
        body, n = _replace(t.body, target, v, bound | {t.param})
        return Lam(t.param, body), n
    if isinstance(t, App):
        fun, n1 = _replace(t.fun, target, v, bound)
        arg, n2 = _replace(t.arg, target, v, bound)
        return App(fun, arg), n1 + n2
    if isinstance(t, _BINARY):
        left, n1 = _replace(t.left, target, v, bound)
        right, n2 = _replace(t.right, target, v, bound)
        return type(t)(left, right), n1 + n2
    if isinstance(t, Not):
        body, n = _replace(t.body, target, v, bound)
        return Not(body), n
    if isinstance(t, _QUANT):
        body, n = _replace(t.body, target, v, bound | {t.var})
        return type(t)(t.var, body), n
    raise TypeError(f"not a term: {t!r}")


def replace_constant(term: Term, old: str, new: str) -> Term:
    """Swap every occurrence of constant ``old`` for constant ``new``."""
    v = fresh_name("swap", all_names(term) | {old, new})
    replaced, _ = _replace(term, Const(old), v, frozenset())
    return substitute(replaced, v, Const(new))


# Rendering.  Precedence, loosest first: lambda and quantifier bodies,
# implication (right-associative), disjunction, conjunction, negation,
# juxtaposition, atoms.  ``a & b -> c`` therefore reads ((a & b) -> c).

_P_BODY, _P_IMPL, _P_OR, _P_AND, _P_NOT, _P_APP, _P_ATOM = range(7)


def render(term: Term) -> str:
    """ASCII surface form; ``parse_term`` inverts it."""
    return _render(term, _P_BODY)


def _render(t: Term, ctx: int) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Pred):
        args = ",".join(_render(a, _P_BODY) for a in t.args)
        return f"{t.name}({args})"
    if isinstance(t, App):
        head, args = _spine(t)
        if isinstance(head, (Var, Const)):
            rendered = ",".join(_render(a, _P_BODY) for a in args)
            return f"{head.name}({rendered})"
        out = f"{_render(t.fun, _P_APP)} {_render(t.arg, _P_ATOM)}"
        return f"({out})" if ctx > _P_APP else out
    if isinstance(t, Lam):
        out = f"\\{t.param}.{_render(t.body, _P_BODY)}"
        return f"({out})" if ctx > _P_BODY else out
    if isinstance(t, Forall):
        out = f"forall {t.var}.{_render(t.body, _P_BODY)}"
        return f"({out})" if ctx > _P_BODY else out
    if isinstance(t, Exists):
        out = f"exists {t.var}.{_render(t.body, _P_BODY)}"
        return f"({out})" if ctx > _P_BODY else out
    if isinstance(t, Implies):
        out = f"{_render(t.left, _P_OR)} -> {_render(t.right, _P_IMPL)}"
        return f"({out})" if ctx > _P_IMPL else out
    if isinstance(t, Or):
        out = f"{_render(t.left, _P_OR)} | {_render(t.right, _P_AND)}"
        return f"({out})" if ctx > _P_OR else out
    if isinstance(t, And):
        out = f"{_render(t.left, _P_AND)} & {_render(t.right, _P_NOT)}"
        return f"({out})" if ctx > _P_AND else out
    if isinstance(t, Not):
        out = f"!{_render(t.body, _P_NOT)}"
        return f"({out})" if ctx > _P_NOT else out
    raise TypeError(f"not a term: {t!r}")


def _spine(t: App) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    head: Term = t
    while isinstance(head, App):
        args.append(head.arg)
        head = head.fun
    args.reverse()
    return head, args
