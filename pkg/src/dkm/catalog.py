"""Built-in theories (simple type theory and the calculus of constructions)
and the golden corpus of worked examples that ships with them."""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import UNKNOWN_THEORY, DkmError
from .kernel import EMPTY_CONTEXT, Theory, check, elaborate
from .syntax import parse, parse_term

THEORY_IDS = ("stt", "coc")


@dataclass(frozen=True)
class GoldenExample:
    name: str
    theory: str
    kind: str              # "type": term checks at expected; "nf": term normalizes to expected
    term: str
    expected: str
    file: Optional[str] = None

    def verify(self, th: Optional[Theory] = None) -> None:
        """Raise :class:`DkmError` or ``AssertionError`` if the example fails."""
        th = th or load_theory(self.theory)
        t = parse_term(self.term, th.names)
        want = parse_term(self.expected, th.names)
        if self.kind == "type":
            check(th, EMPTY_CONTEXT, want, _sort_of(th, want))
            check(th, EMPTY_CONTEXT, t, want)
        elif self.kind == "nf":
            got = th.reducer.nf(t)
            if got != want:
                raise AssertionError(f"{self.name}: normal form mismatch")
        else:
            raise ValueError(f"unknown golden kind {self.kind!r}")


def _sort_of(th: Theory, ty):
    from .kernel import infer
    return infer(th, EMPTY_CONTEXT, ty)


@dataclass(frozen=True)
class TheoryCatalogEntry:
    id: str
    source: str
    theory: Theory
    goldens: tuple


def _data_dir(name: str):
    return resources.files("dkm") / name


def theory_source(theory_id: str) -> str:
    if theory_id not in THEORY_IDS:
        raise DkmError(UNKNOWN_THEORY, f"unknown theory {theory_id!r}")
    return (_data_dir("theories") / f"{theory_id}.dkm").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def load_theory(theory_id: str) -> Theory:
    src = theory_source(theory_id)
    return elaborate(parse(src, f"theories/{theory_id}.dkm"), theory_id=theory_id)


def stt_theory() -> Theory:
    return load_theory("stt")


def coc_theory() -> Theory:
    return load_theory("coc")


@functools.lru_cache(maxsize=None)
def _index() -> tuple:
    raw = json.loads((_data_dir("corpus") / "index.json").read_text(encoding="utf-8"))
    return tuple(GoldenExample(**e) for e in raw["entries"])


def golden_corpus(theory_id: str) -> list[GoldenExample]:
    if theory_id not in THEORY_IDS:
        raise DkmError(UNKNOWN_THEORY, f"unknown theory {theory_id!r}")
    return [g for g in _index() if g.theory == theory_id]


def corpus_text(filename: str) -> str:
    return (_data_dir("corpus") / filename).read_text(encoding="utf-8")


def corpus_path(filename: str) -> Path:
    """Filesystem path of a corpus file (the package must be installed unzipped)."""
    return Path(str(_data_dir("corpus") / filename))


def theory_path(theory_id: str) -> Path:
    theory_source(theory_id)
    return Path(str(_data_dir("theories") / f"{theory_id}.dkm"))


def catalog_entry(theory_id: str) -> TheoryCatalogEntry:
    return TheoryCatalogEntry(theory_id, theory_source(theory_id),
                              load_theory(theory_id), tuple(golden_corpus(theory_id)))
