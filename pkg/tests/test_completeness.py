import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from mallbes.base import AtomicDerivation, atomic_sequent, verify_atomic
from mallbes.completeness import (TranslationError, Verdict, build_simulation_base, decide, make_mapping,
                                  mapping_domain, translate)
from mallbes.nd import NdRule, check_nd, normal_form_check, search_nd
from mallbes.oracle import OracleVerdict, prove_sequent
from mallbes.syntax import BOT, ONE, Atom, Lolli, Sequent, Tensor, atoms_of, negate, parse_sequent, sequent
from conftest import formulas

p, q = Atom("p"), Atom("q")
small = formulas(3)


def _decide(text, **kw):
    s = parse_sequent(text)
    return s, decide(list(s.context), s.conclusion, **kw)


def _schemas(sim, name):
    return [sc for sc in sim.base.schemas if sc.name == name]


def test_mapping_for_an_atom():
    m = make_mapping([p])
    assert set(m.domain) == {p, negate(p), BOT, negate(BOT)}
    assert m(p) == p and m(BOT) == BOT
    assert m(negate(p)) != m(negate(BOT))
    assert m.is_injective()


def test_mapping_for_a_tensor():
    m = make_mapping([Tensor(p, q)])
    assert len(m) == 8  # the six closure members plus bot and its negation
    for f in (Tensor(p, q), negate(p), negate(q), negate(Tensor(p, q))):
        assert m(f) not in atoms_of(Tensor(p, q)) | {BOT}


def test_negation_is_not_duplicated():
    assert Lolli(p, BOT) == negate(p)
    m = make_mapping([Lolli(p, BOT), negate(p)])
    assert len(m) == len(make_mapping([negate(p)]))


def test_fresh_names_avoid_existing_atoms():
    x1 = Atom("x1")
    m = make_mapping([Tensor(x1, p)])
    assert m(x1) == x1
    assert all(m(f) != x1 for f in m.domain if f != x1)
    assert m.is_injective()


@given(st.lists(small, min_size=1, max_size=3), st.integers(0, 50))
def test_mapping_invariants(fs, seed):
    m = make_mapping(fs, seed)
    assert m.is_injective()
    assert set(m.domain) == set(mapping_domain(fs))
    for f in m.domain:
        if isinstance(f, Atom):
            assert m(f) == f
        assert m.inverse(m(f)) == f


def test_simulation_base_for_an_atom():
    sim = build_simulation_base([p])
    assert {sc.name for sc in sim.base.schemas} <= {"Raa", "LolliI", "LolliE"}
    assert {sc.conclusion.conclusion for sc in _schemas(sim, "Raa")} >= {p, BOT}


def test_simulation_base_for_a_tensor():
    sim = build_simulation_base([Tensor(p, q)])
    s = sim.mapping
    (intro,) = _schemas(sim, "TensorI")
    (elim,) = _schemas(sim, "TensorE")
    assert intro.conclusion.conclusion == s(Tensor(p, q))
    assert [x.conclusion for x in intro.premises] == [p, q]
    # minor premise concludes bot
    assert elim.premises[1].conclusion == BOT and elim.conclusion.conclusion == BOT
    assert sorted(elim.premises[1].atoms, key=str) == [p, q]


def test_simulation_base_for_one():
    sim = build_simulation_base([ONE])
    (one,) = [r for r in sim.base.rules if r.name == "OneI"]
    assert one.premises == () and one.conclusion == Sequent(one.conclusion.context, sim.mapping(ONE))
    assert not one.conclusion.context


@pytest.mark.parametrize("text,verdict", [
    ("~~p |- p", Verdict.PROVABLE),
    ("p |- p * p", Verdict.NOT_PROVABLE),
    ("|- p | ~p", Verdict.PROVABLE),
    ("p * q |- q * p", Verdict.PROVABLE),
    ("p & q |- p + q", Verdict.PROVABLE),
    ("p + q |- p & q", Verdict.NOT_PROVABLE),
    ("0 |- p * q", Verdict.PROVABLE),
    ("bot |- p", Verdict.NOT_PROVABLE),
])
def test_decide_examples(text, verdict):
    s, r = _decide(text)
    assert r.verdict is verdict
    # the independent oracle agrees
    assert (prove_sequent(s) is OracleVerdict.PROVABLE) == (verdict is Verdict.PROVABLE)


def test_double_negation_translates_with_raa():
    s, r = _decide("~~p |- p")
    d = translate(r.derivation, r.mapping)
    assert d.conclusion == s
    assert NdRule.Raa in d.rules()
    assert check_nd(d).ok and normal_form_check(d)


def test_translate_axiom():
    sim = build_simulation_base([Tensor(p, q)])
    a = sim.mapping(Tensor(p, q))
    d = translate(AtomicDerivation(atomic_sequent([a], a), "Ax"), sim.mapping)
    assert d.rule is NdRule.Ax and d.conclusion == sequent([Tensor(p, q)], Tensor(p, q))


def test_translate_tensor_elimination():
    s, r = _decide("p * q |- q * p")
    d = translate(r.derivation, r.mapping)
    elims = [n for n in d.nodes() if n.rule is NdRule.TensorE]
    assert elims and all(n.premises[1].conclusion.conclusion == BOT for n in elims)
    assert check_nd(d).ok and normal_form_check(d)


def test_translate_errors():
    sim = build_simulation_base([p])
    with pytest.raises(TranslationError, match="unmapped atom"):
        translate(AtomicDerivation(atomic_sequent(["zz"], "zz"), "Ax"), sim.mapping)
    with pytest.raises(TranslationError, match="no simulation schema"):
        translate(AtomicDerivation(atomic_sequent([], "p"), "rule0"), sim.mapping)


def test_budget_exhaustion_is_unknown():
    _, r = _decide("p * q, r |- r * (q * p)", depth=2)
    assert r.verdict is Verdict.UNKNOWN
    with pytest.raises(ValueError):
        decide([], p, depth=0)


sequents = st.builds(lambda ctx, c: sequent(ctx, c), st.lists(small, max_size=2), small)


@settings(max_examples=150)
@given(sequents)
def test_decide_agrees_with_oracle(s):
    r = decide(list(s.context), s.conclusion)
    assert r.verdict is not Verdict.UNKNOWN
    assert r.provable == (prove_sequent(s) is OracleVerdict.PROVABLE)


@settings(max_examples=150)
@given(sequents)
def test_decide_output_verifies_and_translates(s):
    r = decide(list(s.context), s.conclusion)
    if not r.provable:
        return
    assert verify_atomic(r.simulation.base, r.derivation).ok
    d = translate(r.derivation, r.mapping)
    assert d.conclusion == s
    assert check_nd(d).ok
    assert normal_form_check(d)


@settings(max_examples=100)
@given(sequents, st.integers(1, 1000))
def test_verdict_independent_of_fresh_names(s, seed):
    a = decide(list(s.context), s.conclusion, seed=0)
    b = decide(list(s.context), s.conclusion, seed=seed)
    assert a.verdict is b.verdict
    if a.provable:
        assert translate(a.derivation, a.mapping).conclusion == translate(b.derivation, b.mapping).conclusion


@pytest.mark.parametrize("text", ["p * q |- q * p", "p & q |- q & p", "p -o q, p |- q", "~~p |- p",
                                  "p | q |- q | p", "0, q |- p", "|- 1", "1, p |- p", "p |- p + q"])
def test_soundness_round_trip(text):
    # any checked ND derivation's sequent is decided provable, and the result re-checks
    found = search_nd(parse_sequent(text), depth=8)
    assert found.derivation is not None and check_nd(found.derivation).ok
    s, r = _decide(text)
    assert r.provable
    d = translate(r.derivation, r.mapping)
    assert check_nd(d).ok and normal_form_check(d) and d.conclusion == s
