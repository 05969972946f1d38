"""Moving CoC proofs into simple type theory, and what stops it."""

from dkm import DkmError, coc_theory, parse, print_decl
from dkm.analysis import analyze_file, translate_file
from dkm.catalog import corpus_text

coc = coc_theory()

src = corpus_text("nat_identity_coc.dkm") + corpus_text("identity_coc.dkm")
decls = parse(src, "demo.dkm", coc.names)

_, reports = analyze_file(coc, decls)
for r in reports:
    print(f"{r.subject}: in S = {r.in_s}")

result = translate_file(decls)
print("\ntranslated, and re-checked over stt:")
for d in result.declarations:
    print(" ", print_decl(d))

# A declaration that quantifies over a dependent product cannot be erased.
for name in ("uses_pi.dkm", "dependent_imp.dkm"):
    bad = parse(corpus_text(name), name, coc.names)
    try:
        translate_file(bad)
    except DkmError as err:
        print()
        print(err.diagnostic.format())
        for r in err.payload:
            for v in r.violations:
                print(f"  {r.subject}: {v.kind.value} at {'/'.join(v.position) or '(root)'}")
