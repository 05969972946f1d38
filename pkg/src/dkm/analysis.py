"""Analysis of proofs written in the calculus-of-constructions theory.

A declaration is *in S* when every ``arrow`` and ``imp`` it mentions is
applied to two arguments, the second a lambda whose variable is unused, and
it never mentions ``pi``.  Such declarations erase to the simple type
theory by dropping those vacuous binders.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import errors as E
from .catalog import coc_theory, stt_theory
from .errors import DkmError
from .kernel import Theory, elaborate
from .syntax import ConstDecl, Declaration, Definition, Rule
from .terms import (App, Const, Lam, Pi, Term, apply, free_constants,
                    occurs_bound, strengthen, unapply)

DEPENDENT = {"arrow": ("ARROW_DEPENDENT", "ARROW_PARTIAL"),
             "imp": ("IMP_DEPENDENT", "IMP_PARTIAL")}
FORBIDDEN = frozenset({"pi"})


class ViolationKind(str, enum.Enum):
    ARROW_DEPENDENT = "ARROW_DEPENDENT"
    IMP_DEPENDENT = "IMP_DEPENDENT"
    USES_PI = "USES_PI"
    ARROW_PARTIAL = "ARROW_PARTIAL"
    IMP_PARTIAL = "IMP_PARTIAL"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    position: tuple   # first step names the part: "type", "body", "lhs", "rhs", "ctx<i>"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "path": list(self.position)}


@dataclass(frozen=True)
class Ingredients:
    framework: frozenset = frozenset()
    library: frozenset = frozenset()
    axioms: frozenset = frozenset()

    @property
    def all(self) -> frozenset:
        return self.framework | self.library | self.axioms

    def to_json(self) -> dict:
        return {"framework": sorted(self.framework), "library": sorted(self.library),
                "axioms": sorted(self.axioms)}


def classify(th: Theory, names: Iterable[str]) -> Ingredients:
    """Split constant names into theory primitives, user definitions and user axioms."""
    fw = th.framework_names or frozenset()
    framework, library, axioms = set(), set(), set()
    for n in names:
        if n in fw:
            framework.add(n)
        elif n in th.definitions:
            library.add(n)
        else:
            axioms.add(n)
    return Ingredients(frozenset(framework), frozenset(library), frozenset(axioms))


@dataclass(frozen=True)
class AnalysisReport:
    subject: str
    in_s: bool
    violations: tuple
    ingredients: Ingredients
    theory_id: str
    # verdict on the normal form of the subject; None if normalization ran out of fuel
    nf_in_s: Optional[bool] = None
    # earlier declarations of the same file, used by this one, that are not in S
    tainted_by: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "theory": self.theory_id,
            "inS": self.in_s,
            "nfInS": self.nf_in_s,
            "violations": [v.to_json() for v in self.violations],
            "ingredients": self.ingredients.to_json(),
            "taintedBy": list(self.tainted_by),
        }


# ---------------------------------------------------------------------------
# Violation scan

def _arg_path(path: tuple, i: int, n: int) -> tuple:
    return path + ("fun",) * (n - 1 - i) + ("arg",)


def scan(t: Term, path: tuple = ()) -> list[Violation]:
    """All S-violations in ``t``, in pre-order."""
    out: list[Violation] = []
    _scan(t, path, out)
    return out


def _scan(t, path, out):
    tp = type(t)
    if tp is Lam:
        _scan(t.type, path + ("binderType",), out)
        _scan(t.body, path + ("body",), out)
        return
    if tp is Pi:
        _scan(t.domain, path + ("domain",), out)
        _scan(t.codomain, path + ("codomain",), out)
        return
    if tp is not App and tp is not Const:
        return
    head, args = unapply(t)
    n = len(args)
    if type(head) is Const:
        if head.name in FORBIDDEN:
            out.append(Violation(ViolationKind.USES_PI, path))
        elif head.name in DEPENDENT:
            dep, partial = DEPENDENT[head.name]
            if n < 2 or type(args[1]) is not Lam:
                out.append(Violation(ViolationKind(partial), path))
            elif occurs_bound(args[1].body):
                out.append(Violation(ViolationKind(dep), path))
    else:
        _scan(head, path + ("fun",) * n, out)
    for i, a in enumerate(args):
        _scan(a, _arg_path(path, i, n), out)


def _parts(d: Declaration) -> list[tuple[str, Term]]:
    if isinstance(d, ConstDecl):
        return [("type", d.type)]
    if isinstance(d, Definition):
        return [("type", d.type), ("body", d.body)]
    parts = [(f"ctx{i}", ty) for i, ty in enumerate(d.types) if ty is not None]
    return parts + [("lhs", d.lhs), ("rhs", d.rhs)]


def _ensure_elaborated(th: Theory, d: Declaration) -> Theory:
    """Theory in which ``d`` is known to be well-typed."""
    if not isinstance(d, Rule) and th.constants.get(d.name) == d.type:
        if not isinstance(d, Definition) or th.bodies.get(d.name) == d.body:
            return th
    if isinstance(d, Rule) and d in th.declarations:
        return th
    try:
        return elaborate([d], base=th)
    except DkmError as err:
        raise DkmError(E.ILL_TYPED_SUBJECT,
                       f"{d.name} does not type-check: {err.diagnostic.message}",
                       err.span) from err


def analyze(th: Theory, subject: Declaration) -> AnalysisReport:
    """Decide S-membership of ``subject`` (its type and, if any, its body)."""
    th2 = _ensure_elaborated(th, subject)
    parts = _parts(subject)
    violations = []
    consts: set[str] = set()
    for label, t in parts:
        violations.extend(scan(t, (label,)))
        consts |= free_constants(t)
    consts.discard(getattr(subject, "name", None))
    try:
        nf_in_s = all(not scan(th2.reducer.nf(t)) for _, t in parts)
    except DkmError as err:
        if err.code != E.FUEL_EXHAUSTED:
            raise
        nf_in_s = None
    return AnalysisReport(subject.name, not violations, tuple(violations),
                          classify(th2, consts), th.id, nf_in_s)


def analyze_file(th: Theory, decls: Iterable[Declaration]) -> tuple[Theory, list[AnalysisReport]]:
    """Elaborate ``decls`` over ``th`` and analyze each, tracking tainted dependencies."""
    decls = list(decls)
    try:
        full = elaborate(decls, base=th)
    except DkmError as err:
        raise DkmError(E.ILL_TYPED_SUBJECT, err.diagnostic.message, err.span) from err
    reports = []
    bad: dict[str, tuple] = {}
    for d in decls:
        r = analyze(full, d)
        used = set()
        for _, t in _parts(d):
            used |= free_constants(t)
        tainted = sorted(n for n in used if n in bad and n != getattr(d, "name", None))
        if tainted:
            r = AnalysisReport(r.subject, r.in_s, r.violations, r.ingredients,
                               r.theory_id, r.nf_in_s, tuple(tainted))
        if not r.in_s or tainted:
            bad[r.subject] = tuple(tainted)
        reports.append(r)
    return full, reports


# ---------------------------------------------------------------------------
# Erasure and translation

def erase_to_stt(t: Term) -> Term:
    """Replace ``arrow A (\\x => B)`` by ``arrow A B`` (and likewise for
    ``imp``) when ``x`` does not occur in ``B``; recurses everywhere,
    binder annotations included.

    Other uses of ``arrow``/``imp`` are left as they are, so erasure is
    idempotent; ``pi`` and dependent uses raise NOT_IN_S.
    """
    tp = type(t)
    if tp is Lam:
        return Lam(t.name, erase_to_stt(t.type), erase_to_stt(t.body))
    if tp is Pi:
        return Pi(t.name, erase_to_stt(t.domain), erase_to_stt(t.codomain))
    if tp is not App and tp is not Const:
        return t
    head, args = unapply(t)
    if type(head) is Const:
        if head.name in FORBIDDEN:
            raise DkmError(E.NOT_IN_S, f"{head.name} has no counterpart in simple type theory")
        if head.name in DEPENDENT and len(args) >= 2 and type(args[1]) is Lam:
            if occurs_bound(args[1].body):
                raise DkmError(E.NOT_IN_S, f"{head.name} is used dependently")
            args = [args[0], strengthen(args[1].body)] + args[2:]
    else:
        head = erase_to_stt(head)
    return apply(head, [erase_to_stt(a) for a in args])


def erase_declaration(d: Declaration) -> Declaration:
    if isinstance(d, ConstDecl):
        return ConstDecl(d.name, erase_to_stt(d.type), d.span)
    if isinstance(d, Definition):
        return Definition(d.name, erase_to_stt(d.type), erase_to_stt(d.body), d.span)
    return Rule(d.names, tuple(None if ty is None else erase_to_stt(ty) for ty in d.types),
                erase_to_stt(d.lhs), erase_to_stt(d.rhs), d.span)


@dataclass(frozen=True)
class TranslationResult:
    declarations: tuple
    names: dict          # original name -> translated name (the identity)
    reports: tuple
    theory: Theory       # sttTheory extended with the translated declarations


def translate_file(coc_decls: Iterable[Declaration], source: Optional[Theory] = None,
                   target: Optional[Theory] = None) -> TranslationResult:
    """Translate declarations checked over the CoC theory into simple type theory."""
    source = source or coc_theory()
    target = target or stt_theory()
    coc_decls = list(coc_decls)
    _, reports = analyze_file(source, coc_decls)
    rejected = [r for r in reports if not r.in_s]
    if rejected:
        detail = "; ".join(
            f"{r.subject}: " + ", ".join(sorted({v.kind.value for v in r.violations}))
            for r in rejected)
        span = next(d.span for d in coc_decls if d.name == rejected[0].subject)
        raise DkmError(E.NOT_IN_S, f"not in S: {detail}", span, payload=tuple(reports))
    erased = tuple(erase_declaration(d) for d in coc_decls)
    try:
        out = elaborate(erased, base=target)
    except DkmError as err:
        raise DkmError(E.TRANSLATION_UNSOUND,
                       f"translated file does not re-check: {err.diagnostic.format()}",
                       err.span, payload=tuple(reports)) from err
    names = {d.name: d.name for d in erased if not isinstance(d, Rule)}
    return TranslationResult(erased, names, tuple(reports), out)


def ingredient_report(th: Theory, decls: Iterable[Declaration]) -> dict[str, Ingredients]:
    """Per declaration, the constants it uses, closed under definition unfolding."""
    decls = list(decls)
    try:
        full = elaborate(decls, base=th) if decls else th
    except DkmError as err:
        raise DkmError(E.ILL_TYPED_SUBJECT, err.diagnostic.message, err.span) from err
    fw = full.framework_names or frozenset()
    cache: dict[str, frozenset] = {}

    def closure(name: str) -> frozenset:
        if name in cache:
            return cache[name]
        cache[name] = frozenset()   # cycles cannot occur in an elaborated theory
        acc = set()
        if name in full.definitions and name not in fw:
            ty, body = full.definitions[name]
            for c in free_constants(ty) | free_constants(body):
                acc.add(c)
                acc |= closure(c)
        cache[name] = frozenset(acc)
        return cache[name]

    report = {}
    for d in decls:
        direct = set()
        for _, t in _parts(d):
            direct |= free_constants(t)
        acc = set(direct)
        for c in direct:
            acc |= closure(c)
        acc.discard(getattr(d, "name", None))
        report[d.name] = classify(full, acc)
    return report
