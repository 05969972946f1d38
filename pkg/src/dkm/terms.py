"""Terms of the lambda-Pi calculus modulo rewriting, in locally nameless form.

Bound variables are de Bruijn indices counted from the innermost binder.
Every term caches ``lbr``, one more than its largest free index (0 when
closed), so that shifting and substitution skip closed subterms.
Binder names are kept only as display hints: they take no part in equality
or hashing, so ``==`` on terms is alpha-equivalence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

__all__ = [
    "Sort", "Var", "Const", "App", "Lam", "Pi", "FVar", "Term", "TYPE", "KIND",
    "Position", "alpha_eq", "shift", "subst", "instantiate", "strengthen",
    "abstract", "occurs", "occurs_bound", "free_vars", "free_constants", "unapply",
    "apply", "subterm_at", "subterms", "size",
]


@dataclass(frozen=True, slots=True)
class Sort:
    name: str  # "Type" or "Kind"
    lbr = 0

    def __repr__(self):
        return self.name


TYPE = Sort("Type")
KIND = Sort("Kind")


@dataclass(frozen=True, slots=True)
class Var:
    index: int
    lbr: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lbr", self.index + 1)

    def __repr__(self):
        return f"#{self.index}"


@dataclass(frozen=True, slots=True)
class Const:
    name: str
    lbr = 0

    def __repr__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"
    lbr: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b = self.fun.lbr, self.arg.lbr
        object.__setattr__(self, "lbr", a if a > b else b)

    def __repr__(self):
        return f"({self.fun!r} {self.arg!r})"


@dataclass(frozen=True, slots=True)
class Lam:
    name: str = field(compare=False)
    type: "Term"
    body: "Term"
    lbr: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b = self.type.lbr, self.body.lbr - 1
        object.__setattr__(self, "lbr", a if a > b else b)

    def __repr__(self):
        return f"(\\{self.name}:{self.type!r}. {self.body!r})"


@dataclass(frozen=True, slots=True)
class Pi:
    name: str = field(compare=False)
    domain: "Term"
    codomain: "Term"
    lbr: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b = self.domain.lbr, self.codomain.lbr - 1
        object.__setattr__(self, "lbr", a if a > b else b)

    def __repr__(self):
        return f"(Pi {self.name}:{self.domain!r}. {self.codomain!r})"


_fresh_ids = itertools.count()


@dataclass(frozen=True, slots=True)
class FVar:
    """A free variable standing for an opened binder.

    Only the type checker creates these; each one is globally unique.
    """
    name: str = field(compare=False)
    id: int = field(default_factory=lambda: next(_fresh_ids))
    lbr = 0

    def __repr__(self):
        return f"{self.name}%{self.id}"


Term = Union[Sort, Var, Const, App, Lam, Pi, FVar]

# A path of child selectors from the root of a term:
# "fun", "arg", "binderType", "body", "domain", "codomain".
Position = tuple


def alpha_eq(t: Term, u: Term) -> bool:
    return t == u


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every variable index >= ``cutoff``."""
    if d == 0 or t.lbr <= cutoff:
        return t
    return _shift(t, d, cutoff)


def _shift(t, d, c):
    # callers guarantee t.lbr > c
    tp = type(t)
    if tp is Var:
        return Var(t.index + d)
    if tp is App:
        f, a = t.fun, t.arg
        f2 = _shift(f, d, c) if f.lbr > c else f
        a2 = _shift(a, d, c) if a.lbr > c else a
        return App(f2, a2)
    if tp is Lam:
        a, b = t.type, t.body
        a2 = _shift(a, d, c) if a.lbr > c else a
        b2 = _shift(b, d, c + 1) if b.lbr > c + 1 else b
        return Lam(t.name, a2, b2)
    a, b = t.domain, t.codomain
    a2 = _shift(a, d, c) if a.lbr > c else a
    b2 = _shift(b, d, c + 1) if b.lbr > c + 1 else b
    return Pi(t.name, a2, b2)


def subst(body: Term, u: Term) -> Term:
    """Replace the variable bound just outside ``body`` by ``u``.

    ``u`` lives in the context surrounding the binder; the remaining free
    indices of ``body`` are decremented by one.
    """
    if body.lbr <= 0:
        return body
    return _subst(body, u, 0)


def _subst(t, u, depth):
    # callers guarantee t.lbr > depth
    tp = type(t)
    if tp is Var:
        i = t.index
        if i == depth:
            return shift(u, depth)
        return Var(i - 1)
    if tp is App:
        f, a = t.fun, t.arg
        f2 = _subst(f, u, depth) if f.lbr > depth else f
        a2 = _subst(a, u, depth) if a.lbr > depth else a
        return App(f2, a2)
    if tp is Lam:
        a, b = t.type, t.body
        a2 = _subst(a, u, depth) if a.lbr > depth else a
        b2 = _subst(b, u, depth + 1) if b.lbr > depth + 1 else b
        return Lam(t.name, a2, b2)
    a, b = t.domain, t.codomain
    a2 = _subst(a, u, depth) if a.lbr > depth else a
    b2 = _subst(b, u, depth + 1) if b.lbr > depth + 1 else b
    return Pi(t.name, a2, b2)


def instantiate(t: Term, values: Sequence[Term]) -> Term:
    """Substitute for the ``n = len(values)`` outermost variables of ``t``.

    ``values[0]`` replaces the outermost of them (index ``n - 1`` at the top
    of ``t``) and ``values[-1]`` the innermost (index 0).  Used to apply a
    rewrite rule's right-hand side to a matching substitution.
    """
    if not values:
        return t
    return _inst(t, tuple(values), len(values), 0)


def _inst(t, vals, n, depth):
    if t.lbr <= depth:
        return t
    tp = type(t)
    if tp is Var:
        i = t.index
        if i < depth:
            return t
        j = i - depth
        if j < n:
            return shift(vals[n - 1 - j], depth)
        return Var(i - n)
    if tp is App:
        return App(_inst(t.fun, vals, n, depth), _inst(t.arg, vals, n, depth))
    if tp is Lam:
        return Lam(t.name, _inst(t.type, vals, n, depth),
                   _inst(t.body, vals, n, depth + 1))
    if tp is Pi:
        return Pi(t.name, _inst(t.domain, vals, n, depth),
                  _inst(t.codomain, vals, n, depth + 1))
    return t


def abstract(t: Term, fvars: Sequence[FVar]) -> Term:
    """Inverse of :func:`instantiate`: turn ``fvars`` back into bound indices.

    ``fvars[0]`` becomes the outermost variable.
    """
    if not fvars:
        return t
    n = len(fvars)
    pos = {fv.id: n - 1 - k for k, fv in enumerate(fvars)}
    return _abstract(t, pos, 0)


def _abstract(t, pos, depth):
    tp = type(t)
    if tp is FVar:
        k = pos.get(t.id)
        return t if k is None else Var(k + depth)
    if tp is Var:
        return Var(t.index + len(pos)) if t.index >= depth else t
    if tp is App:
        return App(_abstract(t.fun, pos, depth), _abstract(t.arg, pos, depth))
    if tp is Lam:
        return Lam(t.name, _abstract(t.type, pos, depth), _abstract(t.body, pos, depth + 1))
    if tp is Pi:
        return Pi(t.name, _abstract(t.domain, pos, depth),
                  _abstract(t.codomain, pos, depth + 1))
    return t


def occurs(t: Term, index: int) -> bool:
    """Does the free variable ``index`` occur in ``t``?"""
    if t.lbr <= index:
        return False
    tp = type(t)
    if tp is Var:
        return t.index == index
    if tp is App:
        return occurs(t.fun, index) or occurs(t.arg, index)
    if tp is Lam:
        return occurs(t.type, index) or occurs(t.body, index + 1)
    if tp is Pi:
        return occurs(t.domain, index) or occurs(t.codomain, index + 1)
    return False


def occurs_bound(body: Term) -> bool:
    """Does the variable of the enclosing binder occur in ``body``?"""
    return occurs(body, 0)


def strengthen(body: Term) -> Term:
    """Drop the (unused) enclosing binder of ``body``, lowering indices."""
    if occurs(body, 0):
        raise ValueError("bound variable occurs in body")
    return subst(body, Var(0))


def free_vars(t: Term, depth: int = 0) -> set[int]:
    out: set[int] = set()
    _free_vars(t, depth, out)
    return out


def _free_vars(t, depth, out):
    tp = type(t)
    if tp is Var:
        if t.index >= depth:
            out.add(t.index - depth)
    elif tp is App:
        _free_vars(t.fun, depth, out)
        _free_vars(t.arg, depth, out)
    elif tp is Lam:
        _free_vars(t.type, depth, out)
        _free_vars(t.body, depth + 1, out)
    elif tp is Pi:
        _free_vars(t.domain, depth, out)
        _free_vars(t.codomain, depth + 1, out)


def free_constants(t: Term) -> frozenset[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        t = stack.pop()
        tp = type(t)
        if tp is Const:
            out.add(t.name)
        elif tp is App:
            stack.append(t.fun)
            stack.append(t.arg)
        elif tp is Lam:
            stack.append(t.type)
            stack.append(t.body)
        elif tp is Pi:
            stack.append(t.domain)
            stack.append(t.codomain)
    return frozenset(out)


def unapply(t: Term) -> tuple[Term, list[Term]]:
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def apply(head: Term, args: Sequence[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


_CHILDREN = {
    App: ("fun", "arg"),
    Lam: ("binderType", "body"),
    Pi: ("domain", "codomain"),
}
_ATTR = {"fun": "fun", "arg": "arg", "binderType": "type", "body": "body",
         "domain": "domain", "codomain": "codomain"}


def subterm_at(t: Term, path: Position) -> Term:
    for step in path:
        if step not in _CHILDREN.get(type(t), ()):
            raise KeyError(f"invalid position step {step!r} for {t!r}")
        t = getattr(t, _ATTR[step])
    return t


def subterms(t: Term, path: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order enumeration of ``(position, subterm)`` pairs."""
    yield path, t
    for step in _CHILDREN.get(type(t), ()):
        yield from subterms(getattr(t, _ATTR[step]), path + (step,))


def size(t: Term) -> int:
    n = 0
    stack = [t]
    while stack:
        t = stack.pop()
        n += 1
        tp = type(t)
        if tp is App:
            stack.append(t.fun)
            stack.append(t.arg)
        elif tp is Lam:
            stack.append(t.type)
            stack.append(t.body)
        elif tp is Pi:
            stack.append(t.domain)
            stack.append(t.codomain)
    return n
