"""Which constants does each lemma really depend on?"""

from dkm import parse, stt_theory
from dkm.analysis import ingredient_report

stt = stt_theory()

src = r"""
p : eta o.
q : eta o.
hp : eps p.
def id_p : eps (imp p p) := \h : eps p => h.
def use : eps p := id_p hp.
def k : eps (imp q (imp p q)) := \a : eps q => \b : eps p => a.
"""
decls = parse(src, "lemmas.dkm", stt.names)

for name, ing in ingredient_report(stt, decls).items():
    print(name)
    print("  framework:", ", ".join(sorted(ing.framework)) or "-")
    print("  library:  ", ", ".join(sorted(ing.library)) or "-")
    print("  axioms:   ", ", ".join(sorted(ing.axioms)) or "-")

# use only mentions id_p and hp, but unfolding id_p pulls in imp and p as well.
