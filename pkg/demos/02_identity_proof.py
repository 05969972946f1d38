"""The polymorphic identity as a proof, in both built-in theories."""

from dkm import EMPTY_CONTEXT, DkmError, check, coc_theory, infer, parse_term, print_term, stt_theory

proof = "\\X : eta o => \\a : eps X => a"

stt = stt_theory()
t = parse_term(proof, stt.names)
print("proof:   ", print_term(t))
print("inferred:", print_term(infer(stt, EMPTY_CONTEXT, t)))

# The inferred type is convertible with the proposition "for all X, X implies X".
check(stt, EMPTY_CONTEXT, t, parse_term("eps (all o (\\X : eta o => imp X X))", stt.names))
print("checks against eps (all o (\\X : eta o => imp X X))")

# In the CoC theory implication is dependent, so the second argument is a lambda
# over proofs of the premise. The same proof term checks.
coc = coc_theory()
T = parse_term("eps (all o (\\X : eta o => imp X (\\p : eps X => X)))", coc.names)
check(coc, EMPTY_CONTEXT, parse_term(proof, coc.names), T)
print("and over coc against", print_term(T))

# A proof of the wrong proposition is reported with both normal forms.
try:
    check(stt, EMPTY_CONTEXT, t, parse_term("eps (all o (\\X : eta o => X))", stt.names))
except DkmError as err:
    print()
    print(err.diagnostic.format())
