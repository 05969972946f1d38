import pytest

from dkm import DkmError, Lam, golden_corpus, load_theory, parse_term
from dkm import errors as E
from dkm.catalog import catalog_entry, corpus_path, theory_path, theory_source
from dkm.terms import Pi, occurs_bound, strengthen


def ty(th, text):
    return parse_term(text, th.names)


def test_stt_signature(stt):
    assert list(stt.constants) == ["type", "eta", "o", "nat", "arrow", "eps", "imp", "all"]
    assert stt.constants["arrow"] == ty(stt, "type -> type -> type")
    assert stt.constants["imp"] == ty(stt, "eta o -> eta o -> eta o")
    assert stt.constants["all"] == ty(stt, "a : type -> (eta a -> eta o) -> eta o")
    assert len(stt.rules) == 3


def test_coc_signature(coc):
    assert set(coc.constants) == {"type", "eta", "o", "nat", "arrow", "eps", "imp", "all", "pi"}
    assert coc.constants["imp"] == ty(coc, "x : eta o -> (eps x -> eta o) -> eta o")
    assert coc.constants["arrow"] == ty(coc, "x : type -> (eta x -> type) -> type")
    assert coc.constants["pi"] == ty(coc, "x : eta o -> (eps x -> type) -> type")
    assert len(coc.rules) == 4


def test_reduction_examples(stt, coc):
    assert stt.reducer.nf(ty(stt, "eta (arrow nat nat)")) == ty(stt, "eta nat -> eta nat")
    assert coc.reducer.nf(ty(coc, "eta (arrow nat (\\z : eta nat => nat))")) == \
        ty(coc, "eta nat -> eta nat")


def _nondependent_form(t):
    """Replace the second argument type ``(P x -> R)`` of a declared type by ``R``."""
    assert type(t) is Pi
    fam = t.codomain.domain          # the type of the second argument
    assert type(fam) is Pi and not occurs_bound(fam.codomain)
    return fam


def test_alignment(stt, coc):
    # all: identical
    assert stt.constants["all"] == coc.constants["all"]
    # arrow and imp: differ exactly by the dependency of the second argument
    for name in ("arrow", "imp"):
        s, c = stt.constants[name], coc.constants[name]
        assert s.domain == c.domain
        fam = _nondependent_form(c)
        # in coc the second argument is a family over the first; its codomain,
        # lowered out of that family, is what stt takes directly
        assert strengthen(fam.codomain) == s.codomain.domain
        assert strengthen(c.codomain.codomain) == s.codomain.codomain
    # pi: only in coc
    assert "pi" in coc.constants and "pi" not in stt.constants
    shared = set(stt.constants) - {"arrow", "imp"}
    assert all(stt.constants[n] == coc.constants[n] for n in shared)


@pytest.mark.parametrize("theory_id", ["stt", "coc"])
def test_goldens(theory_id):
    goldens = golden_corpus(theory_id)
    assert goldens
    for g in goldens:
        g.verify()


def test_golden_contents():
    stt_names = {g.name: g for g in golden_corpus("stt")}
    ident = stt_names["identity"]
    assert ident.term == "\\X : eta o => \\a : eps X => a"
    assert ident.expected == "eps (all o (\\X : eta o => imp X X))"
    coc_ident = {g.name: g for g in golden_corpus("coc")}["identity_coc"]
    imp_arg = parse_term(coc_ident.expected).arg.arg.body.arg
    assert type(imp_arg) is Lam


def test_unknown_theory():
    for fn in (golden_corpus, theory_source, load_theory):
        with pytest.raises(DkmError) as ei:
            fn("zfc")
        assert ei.value.code == E.UNKNOWN_THEORY


def test_files_installed():
    assert theory_path("stt").read_text() == theory_source("stt")
    assert corpus_path("identity.dkm").exists()
    entry = catalog_entry("coc")
    assert entry.id == "coc" and len(entry.theory.rules) == 4 and entry.goldens
