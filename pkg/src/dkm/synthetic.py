"""Generator of a synthetic lemma library over simple type theory.

Used as a performance regression guard: the lemmas are iterated
implication/quantifier statements, with proofs that both build terms
directly and reuse earlier lemmas.
"""

from __future__ import annotations

import random


def _forall(vars_, body: str) -> str:
    for v in reversed(vars_):
        body = f"all o (\\{v} : eta o => {body})"
    return body


def _imps(hyps, concl: str) -> str:
    for h in reversed(hyps):
        concl = f"imp ({h}) ({concl})"
    return concl


def _lams(binders, body: str) -> str:
    return "".join(f"\\{n} : {t} => " for n, t in binders) + body


def projection_lemma(name: str, width: int, pick: int) -> tuple[str, str]:
    """``forall X1..Xn, X1 => ... => Xn => X_pick`` and its proof."""
    xs = [f"X{i}" for i in range(1, width + 1)]
    hs = [f"h{i}" for i in range(1, width + 1)]
    stmt = _forall(xs, _imps(xs, xs[pick]))
    proof = _lams([(x, "eta o") for x in xs] + [(h, f"eps {x}") for h, x in zip(hs, xs)],
                  hs[pick])
    return stmt, f"def {name} : eps ({stmt}) :=\n  {proof}.\n"


def reuse_lemma(name: str, base: str, width: int, pick: int) -> str:
    """Same statement as ``base``, proved by instantiating it."""
    xs = [f"Y{i}" for i in range(1, width + 1)]
    hs = [f"k{i}" for i in range(1, width + 1)]
    stmt = _forall(xs, _imps(xs, xs[pick]))
    proof = _lams([(x, "eta o") for x in xs] + [(h, f"eps {x}") for h, x in zip(hs, xs)],
                  f"{base} {' '.join(xs)} {' '.join(hs)}")
    return f"def {name} : eps ({stmt}) :=\n  {proof}.\n"


def syllogism_lemma(name: str, length: int) -> str:
    """``forall A0..An, (A0 => A1) => ... => (An-1 => An) => A0 => An``."""
    xs = [f"A{i}" for i in range(length + 1)]
    steps = [f"imp {xs[i]} {xs[i + 1]}" for i in range(length)]
    stmt = _forall(xs, _imps(steps + [xs[0]], xs[-1]))
    fs = [f"f{i}" for i in range(length)]
    body = "a"
    for f in fs:
        body = f"{f} ({body})"
    proof = _lams([(x, "eta o") for x in xs]
                  + [(f, f"eps ({s})") for f, s in zip(fs, steps)]
                  + [("a", f"eps {xs[0]}")], body)
    return f"def {name} : eps ({stmt}) :=\n  {proof}.\n"


def generate_library(n_lemmas: int = 360, seed: int = 0,
                     min_width: int = 12, max_width: int = 24) -> str:
    """Source text of ``n_lemmas`` lemmas, each well-typed over simple type theory."""
    rng = random.Random(seed)
    out = ["// synthetic lemma library\n"]
    projections: list[tuple[str, int, int]] = []
    for k in range(n_lemmas):
        kind = k % 3
        if kind == 0 or not projections:
            width = rng.randint(min_width, max_width)
            pick = rng.randrange(width)
            name = f"proj{k}"
            _, text = projection_lemma(name, width, pick)
            projections.append((name, width, pick))
        elif kind == 1:
            base, width, pick = rng.choice(projections)
            text = reuse_lemma(f"reuse{k}", base, width, pick)
        else:
            text = syllogism_lemma(f"chain{k}", rng.randint(min_width, max_width))
        out.append(text)
    return "".join(out)
