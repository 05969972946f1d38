"""Watching the simple type theory rewrite rules at work."""

from dkm import elaborate, parse, parse_term, print_term, stt_theory

# A predicate on numbers and a number to apply it to, on top of the theory.
base = stt_theory()
stt = elaborate(parse("g : eta (arrow nat o).\nzero : eta nat.", known=base.names), base=base)
red = stt.reducer


def show(text):
    t = parse_term(text, stt.names)
    print(f"{text}\n  whnf: {print_term(red.whnf(t))}\n  nf:   {print_term(red.nf(t))}\n")


# Codes of simple types decode into framework types.
show("eta (arrow nat nat)")
show("eta (arrow (arrow nat o) o)")

# Propositions decode into the types of their proofs. Only the head is
# unfolded by whnf; nf rewrites under binders too.
show("eps (imp (all nat (\\n : eta nat => g n)) (g zero))")
show("eps (all o (\\X : eta o => imp X X))")

# Conversion compares normal forms, so two spellings of one type agree.
a = parse_term("eta (arrow o o) -> eta o", stt.names)
b = parse_term("eta (arrow (arrow o o) o)", stt.names)
print("eta (arrow o o) -> eta o  ==  eta (arrow (arrow o o) o)?", red.conv(a, b))
