"""Concrete syntax of ``.dkm`` files: declarations, parser and printer.

Grammar (whitespace-insensitive between tokens, ``//`` comments)::

    file    := { decl }
    decl    := IDENT ":" term "."
             | "def" IDENT ":" term ":=" term "."
             | "[" ctx "]" term "-->" term "."
    ctx     := [ IDENT [":" term] { "," IDENT [":" term] } ]
    term    := "\\" IDENT ":" term "=>" term
             | IDENT ":" app "->" term
             | app [ "->" term ]
    app     := atom { atom }
    atom    := IDENT | "Type" | "(" term ")"

The domain of a dependent product is parsed at application level, so a
domain that is itself a product must be parenthesized.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import PARSE, SCOPE, DkmError, SourceSpan
from .terms import (KIND, TYPE, App, Const, FVar, Lam, Pi, Sort, Term, Var,
                    free_constants, free_vars, occurs_bound, unapply)

__all__ = [
    "ConstDecl", "Definition", "Rule", "Declaration", "parse", "parse_term",
    "print_term", "print_decl", "print_decls", "pretty",
]

RESERVED = frozenset({"def", "Type", "Kind"})


@dataclass(frozen=True)
class ConstDecl:
    name: str
    type: Term
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Rule:
    """``[ctx] lhs --> rhs``.

    ``types[i]`` is the optional annotation of the i-th context variable,
    scoped over the variables before it.  ``lhs`` and ``rhs`` are scoped
    over the whole context: ``Var(k)`` at the top refers to context entry
    ``len(names) - 1 - k``.
    """
    names: tuple = field(compare=False)
    types: tuple
    lhs: Term
    rhs: Term
    span: Optional[SourceSpan] = field(default=None, compare=False)

    @property
    def name(self) -> str:
        head, _ = unapply(self.lhs)
        label = head.name if type(head) is Const else "?"
        where = f"@{self.span.start_line}" if self.span else ""
        return f"rule:{label}{where}"


Declaration = Union[ConstDecl, Definition, Rule]


# ---------------------------------------------------------------------------
# Lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<sym>-->|->|=>|:=|[:.\\()\[\],])
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<bad>.)
""", re.VERBOSE | re.DOTALL)

_EOF = "<end of file>"


class _Parser:
    """Recursive-descent parser.  Tokens are kept as parallel lists; line and
    column numbers are only computed for spans and errors."""

    def __init__(self, text: str, file: str, known: Optional[Iterable[str]]):
        self.file = file
        self.text = text
        kinds, texts, offs = [], [], []
        bad = None
        for m in _TOKEN.finditer(text):
            kind = m.lastgroup
            if kind == "ws":
                continue
            if kind == "bad":
                bad = len(offs)
                kinds.append(kind)
                texts.append(m.group())
                offs.append(m.start())
                break
            kinds.append(kind)
            texts.append(m.group())
            offs.append(m.start())
        kinds.append("eof")
        texts.append(_EOF)
        offs.append(len(text))
        self.kinds, self.texts, self.offs = kinds, texts, offs
        self._newlines = None
        if bad is not None:
            self.error(f"unexpected character {texts[bad]!r}", bad)
        self.i = 0
        self.lenient = known is None
        self.known = set(known or ())
        self.scope: list = []          # bound names, innermost last
        self.bound: dict = {}          # name -> stack of positions in scope

    # positions
    def linecol(self, k: int) -> tuple[int, int]:
        if self._newlines is None:
            self._newlines = [m.start() for m in re.finditer("\n", self.text)]
        off = self.offs[k]
        line = bisect.bisect_left(self._newlines, off)
        start = self._newlines[line - 1] + 1 if line else 0
        return line + 1, off - start + 1

    def span(self, first: int, last: int) -> SourceSpan:
        l1, c1 = self.linecol(first)
        l2, c2 = self.linecol(last)
        return SourceSpan(self.file, l1, c1, l2, c2)

    def error(self, msg: str, k: Optional[int] = None, code: str = PARSE):
        k = self.i if k is None else k
        line, col = self.linecol(k)
        width = len(self.texts[k]) if k < len(self.texts) and self.kinds[k] != "eof" else 1
        raise DkmError(code, msg, SourceSpan(self.file, line, col, line, col + width - 1))

    # token helpers
    def at(self, text: str) -> bool:
        return self.kinds[self.i] == "sym" and self.texts[self.i] == text

    def expect(self, text: str) -> int:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.texts[self.i]!r}")
        self.i += 1
        return self.i - 1

    def ident(self) -> str:
        i = self.i
        if self.kinds[i] != "ident":
            self.error(f"expected identifier, found {self.texts[i]!r}")
        if self.texts[i] in RESERVED:
            self.error(f"{self.texts[i]!r} is reserved")
        self.i += 1
        return self.texts[i]

    def push(self, name) -> None:
        self.bound.setdefault(name, []).append(len(self.scope))
        self.scope.append(name)

    def pop(self) -> None:
        name = self.scope.pop()
        self.bound[name].pop()

    # declarations
    def declarations(self) -> list[Declaration]:
        decls = []
        while self.kinds[self.i] != "eof":
            d = self.decl()
            if not isinstance(d, Rule):
                # duplicates are reported by elaboration, with the span
                self.known.add(d.name)
            decls.append(d)
        return decls

    def decl(self) -> Declaration:
        start = self.i
        if self.at("["):
            return self.rule()
        if self.kinds[start] == "ident" and self.texts[start] == "def":
            self.i += 1
            name = self.ident()
            self.expect(":")
            ty = self.term()
            self.expect(":=")
            body = self.term()
            end = self.expect(".")
            return Definition(name, ty, body, self.span(start, end))
        name = self.ident()
        self.expect(":")
        ty = self.term()
        end = self.expect(".")
        return ConstDecl(name, ty, self.span(start, end))

    def rule(self) -> Rule:
        start = self.expect("[")
        names: list[str] = []
        types: list[Optional[Term]] = []
        if not self.at("]"):
            while True:
                k = self.i
                name = self.ident()
                if name in names:
                    self.error(f"context variable {name!r} declared twice", k)
                ty = None
                if self.at(":"):
                    self.i += 1
                    ty = self.term()
                self.push(name)
                names.append(name)
                types.append(ty)
                if self.at(","):
                    self.i += 1
                    continue
                break
        self.expect("]")
        lhs = self.term()
        self.expect("-->")
        rhs = self.term()
        end = self.expect(".")
        for _ in names:
            self.pop()
        n = len(names)
        used = {n - 1 - k for k in free_vars(lhs)}
        for pos, nm in enumerate(names):
            if pos not in used:
                self.error(f"context variable {nm!r} does not occur in the "
                           f"left-hand side", start, SCOPE)
        return Rule(tuple(names), tuple(types), lhs, rhs, self.span(start, end))

    def term(self) -> Term:
        i = self.i
        kinds, texts = self.kinds, self.texts
        if kinds[i] == "sym" and texts[i] == "\\":
            self.i += 1
            name = self.ident()
            self.expect(":")
            ty = self.term()
            self.expect("=>")
            self.push(name)
            body = self.term()
            self.pop()
            return Lam(name, ty, body)
        if kinds[i] == "ident" and kinds[i + 1] == "sym" and texts[i + 1] == ":" \
                and texts[i] not in RESERVED:
            name = self.ident()
            self.i += 1
            dom = self.app()
            self.expect("->")
            self.push(name)
            cod = self.term()
            self.pop()
            return Pi(name, dom, cod)
        a = self.app()
        if self.at("->"):
            self.i += 1
            self.push(None)
            b = self.term()
            self.pop()
            return Pi("x", a, b)
        return a

    def _atom_start(self) -> bool:
        i = self.i
        kind = self.kinds[i]
        if kind == "ident":
            return not (self.kinds[i + 1] == "sym" and self.texts[i + 1] == ":")
        return kind == "sym" and self.texts[i] == "("

    def app(self) -> Term:
        if not self._atom_start():
            self.error(f"expected a term, found {self.texts[self.i]!r}")
        t = self.atom()
        while self._atom_start():
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        i = self.i
        text = self.texts[i]
        if self.kinds[i] == "sym" and text == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if self.kinds[i] != "ident":
            self.error(f"expected a term, found {text!r}")
        self.i += 1
        if text == "Type":
            return TYPE
        if text == "Kind":
            self.error("'Kind' cannot be written in source", i)
        if text == "def":
            self.error("'def' is reserved", i)
        stack = self.bound.get(text)
        if stack:
            return Var(len(self.scope) - 1 - stack[-1])
        if self.lenient or text in self.known:
            return Const(text)
        self.error(f"unbound identifier {text!r}", i, SCOPE)


def parse(text: str, file: str = "<input>", known: Iterable[str] = ()) -> list[Declaration]:
    """Parse a ``.dkm`` file into declarations, in file order.

    ``known`` names the constants already in scope (e.g. those of the
    theory the file is checked against); constants declared earlier in the
    file are added as parsing proceeds.
    """
    return _Parser(text, file, known).declarations()


def parse_term(text: str, known: Optional[Iterable[str]] = None,
               scope: Sequence[str] = (), file: str = "<term>") -> Term:
    """Parse a single term.

    With ``known=None`` every unbound identifier is read as a constant.
    ``scope`` lists names of free variables, innermost last.
    """
    p = _Parser(text, file, known)
    for name in scope:
        p.push(name)
    t = p.term()
    if p.kinds[p.i] != "eof":
        p.error(f"unexpected {p.texts[p.i]!r} after term")
    return t


# ---------------------------------------------------------------------------
# Printer

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")


def _fresh(hint: str, avoid: set) -> str:
    base = hint if hint and _IDENT.match(hint) and hint not in RESERVED else "x"
    name = base
    while name in avoid:
        name += "'"
    return name


class _Printer:
    def __init__(self, names: Sequence):
        self.names = list(names)

    def var(self, i: int) -> str:
        k = len(self.names) - 1 - i
        if 0 <= k < len(self.names) and self.names[k] is not None:
            return self.names[k]
        return f"#{i}"

    def binder_name(self, hint: str, body: Term) -> str:
        avoid = {n for n in self.names if n is not None}
        avoid |= free_constants(body)
        return _fresh(hint, avoid)

    def term(self, t: Term) -> str:
        tp = type(t)
        if tp is Lam:
            name = self.binder_name(t.name, t.body)
            ty = self.term(t.type)
            self.names.append(name)
            body = self.term(t.body)
            self.names.pop()
            return f"\\{name} : {ty} => {body}"
        if tp is Pi:
            dom = self.app(t.domain)
            if not occurs_bound(t.codomain):
                self.names.append(None)
                cod = self.term(t.codomain)
                self.names.pop()
                return f"{dom} -> {cod}"
            name = self.binder_name(t.name, t.codomain)
            self.names.append(name)
            cod = self.term(t.codomain)
            self.names.pop()
            return f"{name} : {dom} -> {cod}"
        return self.app(t)

    def app(self, t: Term) -> str:
        if type(t) is App:
            head, args = unapply(t)
            return " ".join([self.atom(head)] + [self.atom(a) for a in args])
        return self.atom(t)

    def atom(self, t: Term) -> str:
        tp = type(t)
        if tp is Var:
            return self.var(t.index)
        if tp is Const:
            return t.name
        if tp is Sort or tp is FVar:
            return t.name
        return f"({self.term(t)})"


def print_term(t: Term, names: Sequence = ()) -> str:
    """Render ``t``; ``names`` are the names of its free variables, innermost last."""
    return _Printer(names).term(t)


def print_decl(d: Declaration) -> str:
    if isinstance(d, ConstDecl):
        return f"{d.name} : {print_term(d.type)}."
    if isinstance(d, Definition):
        return f"def {d.name} : {print_term(d.type)} := {print_term(d.body)}."
    consts = free_constants(d.lhs) | free_constants(d.rhs)
    for ty in d.types:
        if ty is not None:
            consts |= free_constants(ty)
    names: list[str] = []
    parts = []
    for hint, ty in zip(d.names, d.types):
        name = _fresh(hint, set(names) | consts)
        if ty is None:
            parts.append(name)
        else:
            parts.append(f"{name} : {print_term(ty, names)}")
        names.append(name)
    return f"[{', '.join(parts)}] {print_term(d.lhs, names)} --> {print_term(d.rhs, names)}."


def print_decls(decls: Iterable[Declaration]) -> str:
    return "".join(print_decl(d) + "\n" for d in decls)


def pretty(obj: Union[Declaration, Term]) -> str:
    if isinstance(obj, (ConstDecl, Definition, Rule)):
        return print_decl(obj)
    return print_term(obj)
