import pytest
from hypothesis import given

import gen
from dkm import (EMPTY_CONTEXT, KIND, TYPE, Const, Context, DkmError, Var,
                 check, check_rule, elaborate, infer, parse, parse_term)
from dkm import errors as E
from oracles import reducts, rules_of


def term(th, text, ctx=EMPTY_CONTEXT):
    return parse_term(text, th.names, ctx.names)


def code_of(fn):
    with pytest.raises(DkmError) as ei:
        fn()
    return ei.value.code


def test_infer_examples(stt):
    assert infer(stt, EMPTY_CONTEXT, term(stt, "\\x : eta nat => x")) == \
        term(stt, "eta nat -> eta nat")
    assert infer(stt, EMPTY_CONTEXT, Const("o")) == Const("type")
    assert infer(stt, EMPTY_CONTEXT, term(stt, "all o (\\X : eta o => imp X X)")) == \
        term(stt, "eta o")
    assert infer(stt, EMPTY_CONTEXT, TYPE) == KIND


def test_check_examples(stt, coc):
    proof = "\\X : eta o => \\a : eps X => a"
    check(stt, EMPTY_CONTEXT, term(stt, proof),
          term(stt, "eps (all o (\\X : eta o => imp X X))"))
    check(coc, EMPTY_CONTEXT, term(coc, proof),
          term(coc, "eps (all o (\\X : eta o => imp X (\\p : eps X => X)))"))
    assert code_of(lambda: check(stt, EMPTY_CONTEXT, Const("o"), Const("o"))) == E.CONV_FAIL


def test_conv_fail_shows_normal_forms(stt):
    with pytest.raises(DkmError) as ei:
        check(stt, EMPTY_CONTEXT, term(stt, "\\x : eta nat => x"), term(stt, "eta (arrow o o)"))
    assert "eta o" in ei.value.diagnostic.message


def test_context_lookup(stt):
    ctx = Context().push("A", term(stt, "type")).push("a", Var(0))
    assert ctx.names == ["A", "a"]
    assert infer(stt, ctx, Var(0)) == Var(1)
    assert infer(stt, ctx, Var(1)) == Const("type")


@pytest.mark.parametrize("text, code", [
    ("nat nat", E.NOT_A_FUNCTION),
    ("\\x : eta => x", E.SORT_ERROR),
    ("\\x : Type => x", E.SORT_ERROR),
    ("eta o o", E.NOT_A_FUNCTION),
    ("eta nat -> Type -> Type", E.SORT_ERROR),
    ("imp o", E.CONV_FAIL),
])
def test_infer_errors(stt, text, code):
    assert code_of(lambda: infer(stt, EMPTY_CONTEXT, term(stt, text))) == code


def test_unbound_and_kind(stt):
    assert code_of(lambda: infer(stt, EMPTY_CONTEXT, Var(0))) == E.UNBOUND
    assert code_of(lambda: infer(stt, EMPTY_CONTEXT, Const("zzz"))) == E.UNBOUND
    assert code_of(lambda: infer(stt, EMPTY_CONTEXT, KIND)) == E.SORT_ERROR


def test_elaborate_theories(stt, coc):
    assert len(stt.constants) == 8 and len(stt.rules) == 3
    assert len(coc.constants) == 9 and len(coc.rules) == 4
    assert list(stt.constants)[0] == "type"
    assert stt.frozen and coc.frozen
    with pytest.raises(RuntimeError):
        stt._add_constant(parse("q : type.", known=stt.names)[0])


def test_duplicate_name(stt):
    ds = parse("A : Type.\nA : Type.", "dup.dkm")
    with pytest.raises(DkmError) as ei:
        elaborate(ds)
    assert ei.value.code == E.DUPLICATE_NAME and ei.value.span.start_line == 2
    assert code_of(lambda: elaborate(parse("o : type.", known=stt.names), base=stt)) == \
        E.DUPLICATE_NAME


def test_check_rule_builtin_rules(stt, coc):
    ctx = check_rule(stt, rules_of(stt)[1])
    assert [t for _, t in ctx.entries] == [term(stt, "eta o")] * 2
    pi_rule = [r for r in rules_of(coc) if "pi" in str(r.lhs)][0]
    ctx = check_rule(coc, pi_rule)
    assert ctx.entries[0][1] == term(coc, "eta o")
    assert ctx.entries[1][1] == parse_term("eps x -> type", coc.names, ["x"])


def test_rule_errors(stt):
    base = elaborate(parse("A : Type.\nB : Type.\na : A.\nb : B.\nf : A -> A.\n"),
                     theory_id="t")
    cases = {
        "[x] f x --> b.": E.RULE_ILL_TYPED,
        "[x : B] f x --> x.": E.RULE_ILL_TYPED,
        "[x] f a --> a.": E.SCOPE,
    }
    for text, code in cases.items():
        def go():
            elaborate(parse(text, known=base.names), base=base)
        assert code_of(go) == code, text


def test_rule_context_inference_fail():
    base = elaborate(parse("A : Type.\nc : A.\ng : A -> A.\n"))
    # g c is not a function, so the spine walk cannot type y
    r = parse("[y] g c y --> c.", known=base.names)[0]
    assert code_of(lambda: check_rule(base, r)) == E.RULE_CONTEXT_INFERENCE_FAIL


def test_rule_context_typed_through_subpattern():
    base = elaborate(parse("A : Type.\nc : A.\nK : A -> Type.\nk : x : A -> K x.\n"
                           "g : K c -> A.\n"))
    # y : A is inferred from k, but then k y : K y is not a K c
    r = parse("[y] g (k y) --> c.", known=base.names)[0]
    assert code_of(lambda: check_rule(base, r)) == E.RULE_ILL_TYPED


def test_rule_context_not_lowerable():
    base = elaborate(parse("A : Type.\nB : A -> Type.\nh : x : A -> B x -> A.\n"))
    # y's type mentions x, which is declared after it
    r = parse("[y, x] h x y --> x.", known=base.names)[0]
    assert code_of(lambda: check_rule(base, r)) == E.RULE_CONTEXT_INFERENCE_FAIL
    r = parse("[x, y] h x y --> x.", known=base.names)[0]
    check_rule(base, r)


def test_fuel_propagates_through_elaboration():
    src = ("A : Type.\nc : A.\nc2 : A.\nloop : A -> Type.\n[x] loop x --> loop x.\n"
           "d : loop c2.\ndef e : loop c := d.\n")
    with pytest.raises(DkmError) as ei:
        elaborate(parse(src), fuel=500)
    assert ei.value.code == E.FUEL_EXHAUSTED


def test_with_fuel(stt):
    th = stt.with_fuel(3)
    assert th.fuel == 3 and stt.fuel != 3


def test_prefix_property(stt, coc):
    for th in (stt, coc):
        decls = th.declarations
        for i, d in enumerate(decls):
            prefix = elaborate(decls[:i])
            elaborate([d], base=prefix)


# ---------------------------------------------------------------------------
# Properties over generated proofs


def _setup(theory, pair):
    name, th = theory
    P, p = pair
    ctx = gen.context(th, name)
    t = gen.term(th, ctx, gen.proof_text(p, name))
    T = gen.term(th, ctx, "eps " + gen.obj_text(P, name))
    return th, ctx, t, T


@given(gen.typed_proofs())
def test_subject_reduction(theory, pair):
    th, ctx, t, T = _setup(theory, pair)
    ty = infer(th, ctx, t)
    assert th.reducer.conv(ty, T)
    for s in reducts(th, t, 3):
        check(th, ctx, s, ty)


@given(gen.typed_proofs())
def test_infer_is_deterministic(theory, pair):
    th, ctx, t, _ = _setup(theory, pair)
    assert infer(th, ctx, t) == infer(th, ctx, t)


@given(gen.typed_proofs())
def test_conversion_closure(theory, pair):
    th, ctx, t, T = _setup(theory, pair)
    check(th, ctx, t, T)
    for T2 in reducts(th, T, 2) + [th.reducer.nf(T)]:
        check(th, ctx, t, T2)
