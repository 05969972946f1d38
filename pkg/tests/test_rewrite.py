import pytest
from hypothesis import given
from hypothesis import strategies as st

import gen
from dkm import (App, Const, DkmError, Lam, Var, compile_rules, conv,
                 match_rule, nf, parse, parse_term, whnf)
from dkm import errors as E
from dkm.rewrite import Reducer, compile_rule
from dkm.terms import instantiate, unapply
from oracles import nf_oracle, reducts, rules_of

NAT = Const("nat")


def rule(text, known=("f", "g", "c", "eta", "arrow", "eps", "imp", "all", "nat", "o")):
    [r] = parse(text, known=known)
    return r


def test_compile_stt_rules(stt):
    rs = compile_rules(rules_of(stt))
    assert rs.heads() == {"eta": 1, "eps": 2}
    assert [r.source for r in rs.get("eps")] == rules_of(stt)[1:]
    assert len(compile_rules([])) == 0


@pytest.mark.parametrize("text, code", [
    ("[x] f x x --> x.", E.NONLINEAR_PATTERN),
    ("[x] f (\\y : c => x) --> x.", E.HIGHER_ORDER_PATTERN),
    ("[x, y] f (x y) --> y.", E.HIGHER_ORDER_PATTERN),
    ("[x] f (Type x) --> x.", E.HIGHER_ORDER_PATTERN),
    ("[x] x c --> c.", E.NO_HEAD_CONSTANT),
])
def test_compile_errors(text, code):
    with pytest.raises(DkmError) as ei:
        compile_rule(rule(text))
    assert ei.value.code == code


def test_match_rule(stt):
    eta_rule, imp_rule, all_rule = (compile_rule(r) for r in rules_of(stt))
    m = match_rule(eta_rule, parse_term("eta (arrow nat nat)"))
    assert m == {"x": NAT, "y": NAT}
    assert match_rule(imp_rule, parse_term("eta nat")) is None
    t = parse_term("eps (all o (\\X : eta o => imp X X))")
    m = match_rule(all_rule, t)
    assert m["x"] == Const("o") and type(m["y"]) is Lam


def test_match_soundness(stt):
    for r in rules_of(stt):
        cr = compile_rule(r)
        t = instantiate(r.lhs, [Const(f"k{i}") for i in range(len(r.names))])
        m = match_rule(cr, t)
        assert instantiate(r.lhs, [m[n] for n in r.names]) == t


def test_whnf_examples(stt):
    R, D = stt.rules, stt.bodies
    assert whnf(R, D, parse_term("eta (arrow nat nat)")) == parse_term("eta nat -> eta nat")
    assert whnf(R, D, Var(0)) == Var(0)
    assert whnf(R, D, parse_term("(\\x : eta nat => x) c")) == Const("c")
    # whnf stops at the head: arguments stay unreduced
    t = parse_term("f ((\\x : eta nat => x) c)")
    assert whnf(R, D, t) == t


def test_nf_examples(stt):
    R, D = stt.rules, stt.bodies
    assert nf(R, D, parse_term("eps (all o (\\X : eta o => imp X X))")) == \
        parse_term("X : eta o -> eps X -> eps X")
    assert nf(R, D, parse_term("eta (arrow nat (arrow nat nat))")) == \
        parse_term("eta nat -> eta nat -> eta nat")
    normal = parse_term("X : eta o -> eps X")
    assert nf(R, D, normal) == normal


def test_conv_examples(stt):
    R, D = stt.rules, stt.bodies
    assert conv(R, D, parse_term("eta (arrow nat nat)"), parse_term("eta nat -> eta nat"))
    t = parse_term("eps (all o (\\X : eta o => X))")
    assert conv(R, D, t, t)
    assert not conv(R, D, Const("o"), Const("nat"))


def test_delta_unfolds_lazily():
    defs = {"two": parse_term("s (s z)")}
    red = Reducer(compile_rules([]), defs)
    assert red.whnf(Const("two")) == parse_term("s (s z)")
    assert red.conv(App(Const("s"), Const("two")), parse_term("s (s (s z))"))


def test_rule_order_first_match():
    r1 = rule("[x] f x --> c.")
    r2 = rule("[x] f x --> g.")
    red = Reducer(compile_rules([r1, r2]), {})
    assert red.whnf(parse_term("f nat")) == Const("c")


def test_fuel_exhausted():
    loop = rule("[x] loop x --> loop x.", known=("loop",))
    red = Reducer(compile_rules([loop]), {}, fuel=1000)
    with pytest.raises(DkmError) as ei:
        red.whnf(parse_term("loop c"))
    assert ei.value.code == E.FUEL_EXHAUSTED


def test_fuel_from_environment(monkeypatch):
    from dkm.rewrite import default_fuel, DEFAULT_FUEL
    monkeypatch.delenv("DKM_FUEL", raising=False)
    assert default_fuel() == DEFAULT_FUEL
    monkeypatch.setenv("DKM_FUEL", "77")
    assert default_fuel() == 77


# ---------------------------------------------------------------------------
# Oracle agreement on generated well-typed terms


def _spell(th_name, th, pair, proof):
    P, p = pair
    ctx = gen.context(th, th_name)
    text = gen.proof_text(p, th_name) if proof else gen.obj_text(p, th_name)
    return ctx, gen.term(th, ctx, text)


@given(gen.typed_proofs(), st.booleans())
def test_nf_matches_oracle_and_is_idempotent(theory, pair, use_type):
    name, th = theory
    ctx, t = _spell(name, th, pair, True)
    if use_type:
        t = gen.term(th, ctx, "eps " + gen.obj_text(pair[0], name))
    n = th.reducer.nf(t)
    assert n == nf_oracle(th, t)
    assert th.reducer.nf(n) == n


@given(gen.typed_proofs(), gen.typed_proofs(), st.integers(0, 6))
def test_conv_agrees_with_nf_equality(theory, a, b, k):
    name, th = theory
    _, t = _spell(name, th, a, True)
    # a reduct of t (convertible) or an unrelated proof (usually not)
    steps = reducts(th, t, k)
    u = steps[-1] if steps and k % 2 == 0 else _spell(name, th, b, True)[1]
    assert th.reducer.conv(t, u) == (nf_oracle(th, t) == nf_oracle(th, u))


@given(gen.typed_objects(), gen.typed_objects())
def test_conv_agrees_on_types(theory, a, b):
    name, th = theory
    ctx = gen.context(th, name)
    ta = gen.term(th, ctx, "eta " + gen.code(a[0], name))
    tb = gen.term(th, ctx, "eta " + gen.code(b[0], name))
    assert th.reducer.conv(ta, tb) == (nf_oracle(th, ta) == nf_oracle(th, tb))
    assert (a[0] == b[0]) == th.reducer.conv(ta, tb)


@given(gen.typed_proofs())
def test_whnf_head_is_stable(theory, pair):
    name, th = theory
    _, t = _spell(name, th, pair, True)
    w = th.reducer.whnf(t)
    head, args = unapply(w)
    assert not (args and type(head) is Lam)
    if type(head) is Const:
        assert head.name not in th.bodies
        assert all(match_rule(r, w) is None for r in compile_rules(rules_of(th)).get(head.name))
