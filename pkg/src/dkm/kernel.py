"""Type checking for the lambda-Pi calculus modulo rewriting.

A :class:`Theory` is an ordered signature of typed constants, definitions
and rewrite rules.  :func:`elaborate` checks declarations one at a time
against the prefix before them and returns a frozen theory.
"""

from __future__ import annotations

import sys
from typing import Iterable, Optional, Sequence

from . import errors as E
from .errors import DkmError
from .rewrite import EMPTY_RULES, CompiledRuleSet, Reducer, compile_rule
from .syntax import ConstDecl, Declaration, Definition, Rule, print_term
from .terms import (KIND, TYPE, App, Const, FVar, Lam, Pi, Sort, Term, Var,
                    abstract, free_vars, instantiate, shift, subst, unapply)

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class Context:
    """Typing context: binder names and types, innermost last.

    Each type is scoped over the entries before it.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[tuple] = ()):
        self.entries = tuple(entries)

    def push(self, name: str, ty: Term) -> "Context":
        return Context(self.entries + ((name, ty),))

    def lookup(self, index: int) -> Term:
        if not 0 <= index < len(self.entries):
            raise DkmError(E.UNBOUND, f"unbound variable #{index}")
        return shift(self.entries[-1 - index][1], index + 1)

    @property
    def names(self) -> list:
        return [n for n, _ in self.entries]

    def __len__(self):
        return len(self.entries)


EMPTY_CONTEXT = Context()


class Theory:
    """An ordered, elaborated signature.  Frozen once elaboration ends."""

    def __init__(self, theory_id: str = "anonymous", parent: Optional["Theory"] = None,
                 fuel: Optional[int] = None):
        self.id = theory_id
        if parent is None:
            self.constants: dict[str, Term] = {}
            self.definitions: dict[str, tuple] = {}
            self.bodies: dict[str, Term] = {}
            self.rules: CompiledRuleSet = EMPTY_RULES
            self.declarations: list[Declaration] = []
            self.framework_names: Optional[frozenset] = None
            self.fuel = fuel
        else:
            self.constants = dict(parent.constants)
            self.definitions = dict(parent.definitions)
            self.bodies = dict(parent.bodies)
            self.rules = parent.rules
            self.declarations = list(parent.declarations)
            self.framework_names = parent.framework_names
            self.fuel = parent.fuel if fuel is None else fuel
        self.frozen = False
        self.reducer = Reducer(self.rules, self.bodies, self.fuel)

    def __repr__(self):
        return (f"Theory({self.id!r}, {len(self.constants)} constants, "
                f"{len(self.rules)} rules)")

    def __contains__(self, name: str) -> bool:
        return name in self.constants

    def type_of(self, name: str) -> Term:
        try:
            return self.constants[name]
        except KeyError:
            raise DkmError(E.UNBOUND, f"unknown constant {name!r}") from None

    @property
    def names(self) -> list:
        return list(self.constants)

    @property
    def user_declarations(self) -> list:
        fw = self.framework_names or frozenset()
        return [d for d in self.declarations
                if isinstance(d, Rule) or d.name not in fw]

    def freeze(self) -> "Theory":
        if self.framework_names is None:
            self.framework_names = frozenset(self.constants)
        self.frozen = True
        return self

    def with_fuel(self, fuel: int) -> "Theory":
        th = Theory(self.id, self, fuel)
        th.frozen = True
        return th

    # mutation, only while elaborating
    def _guard(self):
        if self.frozen:
            raise RuntimeError("theory is frozen")

    def _add_constant(self, d: ConstDecl):
        self._guard()
        self.constants[d.name] = d.type
        self.declarations.append(d)

    def _add_definition(self, d: Definition):
        self._guard()
        self.constants[d.name] = d.type
        self.definitions[d.name] = (d.type, d.body)
        self.bodies[d.name] = d.body
        self.declarations.append(d)

    def _add_rule(self, d: Rule):
        self._guard()
        self.rules = self.rules.extend([d])
        self.reducer = Reducer(self.rules, self.bodies, self.fuel)
        self.declarations.append(d)

    def extend(self, decls: Iterable[Declaration], theory_id: Optional[str] = None) -> "Theory":
        return elaborate(decls, base=self, theory_id=theory_id)


# ---------------------------------------------------------------------------
# Inference and checking
#
# Internally terms are locally closed: entering a binder replaces its
# variable by a fresh FVar whose type is recorded in ``_Local.types``.  Rule
# instantiation and beta reduction then never re-index closed subterms.

class _Local:
    __slots__ = ("th", "types")

    def __init__(self, th: Theory):
        self.th = th
        self.types: dict[int, Term] = {}

    @classmethod
    def open(cls, th: Theory, ctx: Context) -> tuple["_Local", list]:
        loc = cls(th)
        fvs: list[FVar] = []
        for name, ty in ctx.entries:
            fv = FVar(name)
            loc.types[fv.id] = instantiate(ty, fvs)
            fvs.append(fv)
        return loc, fvs

    def bind(self, name: str, ty: Term) -> FVar:
        fv = FVar(name)
        self.types[fv.id] = ty
        return fv

    # reduction helpers
    def whnf(self, t: Term) -> Term:
        return self.th.reducer.whnf(t)

    def conv(self, t: Term, u: Term) -> bool:
        return self.th.reducer.conv(t, u)

    def show(self, t: Term) -> str:
        try:
            t = self.th.reducer.nf(t)
        except DkmError:
            pass
        return print_term(t)

    def conv_fail(self, what: str, expected: Term, actual: Term) -> DkmError:
        return DkmError(E.CONV_FAIL, f"{what}: expected {self.show(expected)}, "
                                     f"found {self.show(actual)}")

    # typing
    def infer(self, t: Term) -> Term:
        tp = type(t)
        if tp is FVar:
            return self.types[t.id]
        if tp is Const:
            return self.th.type_of(t.name)
        if tp is App:
            head, args = unapply(t)
            fty = self.infer(head)
            for a in args:
                w = self.whnf(fty)
                if type(w) is not Pi:
                    raise DkmError(E.NOT_A_FUNCTION,
                                   f"{print_term(head)} is applied to too many arguments: "
                                   f"its type {self.show(fty)} is not a product")
                self.check(a, w.domain)
                fty = subst(w.codomain, a)
            return fty
        if tp is Sort:
            if t == TYPE:
                return KIND
            raise DkmError(E.SORT_ERROR, "Kind has no type")
        if tp is Lam:
            self.check_domain(t.type)
            fv = self.bind(t.name, t.type)
            bty = self.infer(subst(t.body, fv))
            if bty == KIND:
                raise DkmError(E.SORT_ERROR, "cannot abstract over a kind-valued body")
            return Pi(t.name, t.type, abstract(bty, [fv]))
        if tp is Pi:
            self.check_domain(t.domain)
            fv = self.bind(t.name, t.domain)
            s = self.whnf(self.infer(subst(t.codomain, fv)))
            if s != TYPE and s != KIND:
                raise DkmError(E.SORT_ERROR,
                               f"codomain of {print_term(t)} is not a type or a kind")
            return s
        if tp is Var:
            raise DkmError(E.UNBOUND, f"unbound variable #{t.index}")
        raise TypeError(f"not a term: {t!r}")

    def check_domain(self, a: Term) -> None:
        s = self.whnf(self.infer(a))
        if s != TYPE:
            raise DkmError(E.SORT_ERROR, f"binder type {print_term(a)} has sort "
                                         f"{print_term(s)}, expected Type")

    def check_sort(self, ty: Term) -> Term:
        s = self.whnf(self.infer(ty))
        if s != TYPE and s != KIND:
            raise DkmError(E.SORT_ERROR, f"{print_term(ty)} is not a type or a kind")
        return s

    def check(self, t: Term, expected: Term) -> None:
        while type(t) is Lam:
            w = self.whnf(expected)
            if type(w) is not Pi:
                break
            self.check_domain(t.type)
            if not self.conv(t.type, w.domain):
                raise self.conv_fail("binder type mismatch", w.domain, t.type)
            fv = self.bind(t.name, t.type)
            t = subst(t.body, fv)
            expected = subst(w.codomain, fv)
        actual = self.infer(t)
        if not self.conv(actual, expected):
            raise self.conv_fail(f"type mismatch for {print_term(t)}", expected, actual)


def infer(th: Theory, ctx: Context, t: Term) -> Term:
    """Infer the type of ``t``, whose free variables are bound by ``ctx``."""
    loc, fvs = _Local.open(th, ctx)
    return abstract(loc.infer(instantiate(t, fvs)), fvs)


def check(th: Theory, ctx: Context, t: Term, expected: Term) -> None:
    """Check ``t`` against ``expected``; raises :class:`DkmError` on failure."""
    loc, fvs = _Local.open(th, ctx)
    loc.check(instantiate(t, fvs), instantiate(expected, fvs))


def _whnf(th: Theory, t: Term) -> Term:
    return th.reducer.whnf(t)


def _check_domain(th: Theory, ctx: Context, a: Term) -> None:
    loc, fvs = _Local.open(th, ctx)
    loc.check_domain(instantiate(a, fvs))


def _check_sort(th: Theory, ctx: Context, ty: Term) -> Term:
    loc, fvs = _Local.open(th, ctx)
    return loc.check_sort(instantiate(ty, fvs))


# ---------------------------------------------------------------------------
# Rewrite rules

def _lower_to_prefix(ty: Term, n: int, j: int) -> Optional[Term]:
    """Re-scope ``ty`` from the full rule context (n vars) to the prefix of length j."""
    drop = n - j
    if any(v < drop for v in free_vars(ty)):
        return None
    return shift(ty, -drop)


def infer_rule_context(th: Theory, rule: Rule) -> Context:
    """Types of a rule's context variables, inferred by walking the lhs spine.

    Annotated types are taken as given; an unannotated variable gets the
    domain of the product it is matched against.
    """
    n = len(rule.names)
    full: list[Optional[Term]] = [None] * n     # types in the full context, by position
    for j, ann in enumerate(rule.types):
        if ann is not None:
            full[j] = shift(ann, n - j)

    def walk(p: Term) -> Term:
        head, args = unapply(p)
        if type(head) is not Const:
            raise DkmError(E.RULE_CONTEXT_INFERENCE_FAIL,
                           "pattern is not headed by a constant")
        ty = th.type_of(head.name)
        for a in args:
            w = _whnf(th, ty)
            if type(w) is not Pi:
                raise DkmError(E.RULE_CONTEXT_INFERENCE_FAIL,
                               f"{head.name} is applied to too many arguments")
            if type(a) is Var:
                pos = n - 1 - a.index
                if full[pos] is None:
                    full[pos] = w.domain
            else:
                walk(a)
            ty = subst(w.codomain, a)
        return ty

    walk(rule.lhs)
    entries = []
    for j, (name, ty) in enumerate(zip(rule.names, full)):
        if rule.types[j] is not None:
            entries.append((name, rule.types[j]))
            continue
        low = None if ty is None else _lower_to_prefix(ty, n, j)
        if low is None:
            raise DkmError(E.RULE_CONTEXT_INFERENCE_FAIL,
                           f"cannot infer the type of pattern variable {name!r}")
        entries.append((name, low))
    return Context(entries)


def check_rule(th: Theory, rule: Rule) -> Context:
    """Check that both sides of ``rule`` have the same type; return its context."""
    ctx = EMPTY_CONTEXT
    inferred = infer_rule_context(th, rule)
    for name, ty in inferred.entries:
        try:
            _check_domain(th, ctx, ty)
        except DkmError as err:
            raise DkmError(E.RULE_ILL_TYPED,
                           f"type of pattern variable {name!r}: {err.diagnostic.message}")
        ctx = ctx.push(name, ty)
    try:
        lty = infer(th, ctx, rule.lhs)
    except DkmError as err:
        if err.code == E.FUEL_EXHAUSTED:
            raise
        raise DkmError(E.RULE_ILL_TYPED,
                       f"left-hand side is ill-typed: {err.diagnostic.message}")
    try:
        check(th, ctx, rule.rhs, lty)
    except DkmError as err:
        if err.code == E.FUEL_EXHAUSTED:
            raise
        raise DkmError(E.RULE_ILL_TYPED,
                       f"right-hand side does not have the type of the left-hand "
                       f"side: {err.diagnostic.message}")
    return ctx


# ---------------------------------------------------------------------------
# Elaboration

def elaborate(decls: Iterable[Declaration], base: Optional[Theory] = None,
              theory_id: Optional[str] = None, fuel: Optional[int] = None) -> Theory:
    """Check ``decls`` in order on top of ``base`` and return a frozen theory."""
    th = Theory(theory_id or (base.id if base else "anonymous"), base, fuel)
    for d in decls:
        try:
            _elaborate_one(th, d)
        except DkmError as err:
            raise err.with_span(d.span) from err
    return th.freeze()


def _elaborate_one(th: Theory, d: Declaration) -> None:
    if isinstance(d, Rule):
        compile_rule(d)
        check_rule(th, d)
        th._add_rule(d)
        return
    if d.name in th.constants:
        raise DkmError(E.DUPLICATE_NAME, f"{d.name!r} is already declared")
    _check_sort(th, EMPTY_CONTEXT, d.type)
    if isinstance(d, Definition):
        check(th, EMPTY_CONTEXT, d.body, d.type)
        th._add_definition(d)
    else:
        th._add_constant(d)
