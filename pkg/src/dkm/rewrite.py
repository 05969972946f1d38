"""First-order rewriting: rule compilation, matching, whnf, nf and conversion.

Reduction is beta, delta (unfolding of definitions at the head) and the
user's rewrite rules.  Rule left-hand sides are left-linear first-order
patterns headed by a constant; matching reduces a subject argument to weak
head normal form only where the pattern demands a constant head.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import (FUEL_EXHAUSTED, HIGHER_ORDER_PATTERN, NO_HEAD_CONSTANT,
                     NONLINEAR_PATTERN, DkmError)
from .syntax import Rule
from .terms import (App, Const, Lam, Pi, Sort, Term, Var, apply, instantiate,
                    subst, unapply)

DEFAULT_FUEL = 10**6


def default_fuel() -> int:
    env = os.environ.get("DKM_FUEL")
    return int(env) if env else DEFAULT_FUEL


@dataclass(frozen=True)
class CompiledRule:
    head: str
    arity: int
    args: tuple          # lhs argument patterns; Var(k) is a pattern variable
    rhs: Term
    names: tuple         # context variable names, outermost first
    source: Rule

    @property
    def nvars(self) -> int:
        return len(self.names)


class CompiledRuleSet:
    """Rules indexed by the head constant of their left-hand side.

    Within a head, rules are tried in declaration order.
    """

    def __init__(self, by_head: Mapping[str, tuple] = ()):
        self._by_head = MappingProxyType(dict(by_head))

    def get(self, head: str) -> tuple:
        return self._by_head.get(head, ())

    def heads(self) -> dict:
        return {h: len(rs) for h, rs in self._by_head.items()}

    def __len__(self):
        return sum(len(rs) for rs in self._by_head.values())

    def __iter__(self):
        for rs in self._by_head.values():
            yield from rs

    def extend(self, rules: Iterable[Rule]) -> "CompiledRuleSet":
        by_head = {h: list(rs) for h, rs in self._by_head.items()}
        for r in rules:
            cr = compile_rule(r)
            by_head.setdefault(cr.head, []).append(cr)
        return CompiledRuleSet({h: tuple(rs) for h, rs in by_head.items()})


EMPTY_RULES = CompiledRuleSet()


def _has_binder(t: Term) -> bool:
    tp = type(t)
    if tp is Lam or tp is Pi:
        return True
    if tp is App:
        return _has_binder(t.fun) or _has_binder(t.arg)
    return False


def compile_rule(rule: Rule) -> CompiledRule:
    span = rule.span
    if _has_binder(rule.lhs):
        raise DkmError(HIGHER_ORDER_PATTERN,
                       "left-hand side contains a binder", span)
    head, args = unapply(rule.lhs)
    if type(head) is not Const:
        raise DkmError(NO_HEAD_CONSTANT,
                       "left-hand side is not headed by a constant", span)
    seen: set[int] = set()

    def check(p: Term) -> None:
        if type(p) is Var:
            if p.index in seen:
                raise DkmError(NONLINEAR_PATTERN,
                               f"pattern variable {rule.names[len(rule.names) - 1 - p.index]!r} "
                               f"occurs more than once", span)
            seen.add(p.index)
            return
        h, sub = unapply(p)
        if type(h) is Var:
            raise DkmError(HIGHER_ORDER_PATTERN,
                           "pattern variable applied to arguments", span)
        if type(h) is not Const:
            raise DkmError(HIGHER_ORDER_PATTERN,
                           "argument is not a first-order pattern", span)
        for s in sub:
            check(s)

    for a in args:
        check(a)
    return CompiledRule(head.name, len(args), tuple(args), rule.rhs,
                        tuple(rule.names), rule)


def compile_rules(rules: Iterable[Rule]) -> CompiledRuleSet:
    return EMPTY_RULES.extend(rules)


def _match_syntactic(p: Term, t: Term, sub: list) -> bool:
    if type(p) is Var:
        sub[p.index] = t
        return True
    ph, pargs = unapply(p)
    th, targs = unapply(t)
    if th != ph or len(pargs) != len(targs):
        return False
    return all(_match_syntactic(pa, ta, sub) for pa, ta in zip(pargs, targs))


def match_rule(rule, t: Term) -> Optional[dict]:
    """Syntactic first-order matching of a rule's left-hand side against ``t``.

    Returns a mapping from pattern-variable name to term, or ``None``.
    """
    cr = rule if isinstance(rule, CompiledRule) else compile_rule(rule)
    head, args = unapply(t)
    if type(head) is not Const or head.name != cr.head or len(args) != cr.arity:
        return None
    sub: list = [None] * cr.nvars
    for p, a in zip(cr.args, args):
        if not _match_syntactic(p, a, sub):
            return None
    n = cr.nvars
    return {cr.names[n - 1 - k]: v for k, v in enumerate(sub)}


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit: int):
        self.left = limit
        self.limit = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise DkmError(FUEL_EXHAUSTED,
                           f"reduction exceeded {self.limit} steps "
                           f"(the rewrite rules may not terminate)")


class Reducer:
    """Reduction machinery over a fixed rule set and definition map.

    Each public call gets its own step budget of ``fuel`` head steps.
    """

    def __init__(self, rules: CompiledRuleSet = EMPTY_RULES,
                 defs: Optional[Mapping[str, Term]] = None,
                 fuel: Optional[int] = None):
        self.rules = rules
        self.defs = defs if defs is not None else {}
        self.fuel = fuel if fuel is not None else default_fuel()

    def budget(self) -> _Budget:
        return _Budget(self.fuel)

    # -- weak head normal form ------------------------------------------
    def whnf(self, t: Term, budget: Optional[_Budget] = None) -> Term:
        return self._whnf(t, budget or self.budget())

    def _whnf(self, t: Term, budget: _Budget) -> Term:
        stack: list = []  # pending arguments, last = first applied
        while True:
            tp = type(t)
            if tp is App:
                stack.append(t.arg)
                t = t.fun
                continue
            if tp is Lam and stack:
                budget.tick()
                t = subst(t.body, stack.pop())
                continue
            if tp is Const:
                body = self.defs.get(t.name)
                if body is not None:
                    budget.tick()
                    t = body
                    continue
                rules = self.rules.get(t.name)
                if rules:
                    spine = stack[::-1]
                    fired = False
                    for r in rules:
                        if r.arity > len(spine):
                            continue
                        sub = self._match_spine(r, spine, budget)
                        if sub is not None:
                            budget.tick()
                            t = instantiate(r.rhs, sub)
                            stack = spine[r.arity:][::-1]
                            fired = True
                            break
                    if fired:
                        continue
                    stack = spine[::-1]
            break
        while stack:
            t = App(t, stack.pop())
        return t

    def _match_spine(self, r: CompiledRule, spine: list, budget: _Budget):
        sub: list = [None] * r.nvars
        for i, p in enumerate(r.args):
            if not self._match(p, spine, i, sub, budget):
                return None
        # sub[k] holds the value of Var(k); instantiate wants outermost first
        return sub[::-1]

    def _match(self, p: Term, where: list, i: int, sub: list, budget: _Budget) -> bool:
        """Match pattern ``p`` against ``where[i]``, reducing it in place if needed."""
        if type(p) is Var:
            sub[p.index] = where[i]
            return True
        ph, pargs = unapply(p)
        th, targs = unapply(where[i])
        if not (th == ph and len(targs) == len(pargs)):
            t = self._whnf(where[i], budget)
            where[i] = t
            th, targs = unapply(t)
            if not (th == ph and len(targs) == len(pargs)):
                return False
        for k, pa in enumerate(pargs):
            if not self._match(pa, targs, k, sub, budget):
                return False
        return True

    # -- full normal form ----------------------------------------------
    def nf(self, t: Term, budget: Optional[_Budget] = None) -> Term:
        return self._nf(t, budget or self.budget())

    def _nf(self, t: Term, budget: _Budget) -> Term:
        t = self._whnf(t, budget)
        tp = type(t)
        if tp is App:
            head, args = unapply(t)
            if type(head) in (Lam, Pi):
                head = self._nf(head, budget)
            return apply(head, [self._nf(a, budget) for a in args])
        if tp is Lam:
            return Lam(t.name, self._nf(t.type, budget), self._nf(t.body, budget))
        if tp is Pi:
            return Pi(t.name, self._nf(t.domain, budget), self._nf(t.codomain, budget))
        return t

    # -- conversion ----------------------------------------------------
    def conv(self, t: Term, u: Term, budget: Optional[_Budget] = None) -> bool:
        return self._conv(t, u, budget or self.budget())

    def _conv(self, t: Term, u: Term, budget: _Budget) -> bool:
        if t == u:
            return True
        t = self._whnf(t, budget)
        u = self._whnf(u, budget)
        if t == u:
            return True
        tp = type(t)
        if tp is not type(u):
            return False
        if tp is Pi:
            return (self._conv(t.domain, u.domain, budget)
                    and self._conv(t.codomain, u.codomain, budget))
        if tp is Lam:
            return (self._conv(t.type, u.type, budget)
                    and self._conv(t.body, u.body, budget))
        if tp is App:
            th, targs = unapply(t)
            uh, uargs = unapply(u)
            if len(targs) != len(uargs):
                return False
            if type(th) in (Lam, Pi) or type(uh) in (Lam, Pi):
                if not self._conv(th, uh, budget):
                    return False
            elif th != uh:
                return False
            return all(self._conv(a, b, budget) for a, b in zip(targs, uargs))
        return False  # distinct sorts, variables or constants


def whnf(rules: CompiledRuleSet, defs: Optional[Mapping[str, Term]], t: Term,
         fuel: Optional[int] = None) -> Term:
    return Reducer(rules, defs, fuel).whnf(t)


def nf(rules: CompiledRuleSet, defs: Optional[Mapping[str, Term]], t: Term,
       fuel: Optional[int] = None) -> Term:
    return Reducer(rules, defs, fuel).nf(t)


def conv(rules: CompiledRuleSet, defs: Optional[Mapping[str, Term]], t: Term, u: Term,
         fuel: Optional[int] = None) -> bool:
    return Reducer(rules, defs, fuel).conv(t, u)
