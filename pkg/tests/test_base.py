import random
from itertools import product

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from mallbes.base import (AtomicDerivation, AtomicRule, Base, Pattern, RuleSchema, Status, atomic_sequent, ax,
                          derive_atomic, is_extension, parse_base, parse_rule, structural_base, subs,
                          umbrella_base, verify_atomic)
from mallbes.multiset import Multiset, multisets_up_to
from mallbes.support import FamilyConfig, random_base, random_rule
from mallbes.syntax import BOT, Atom, ParseError, Sequent

S = atomic_sequent
seeds = st.integers(0, 10_000)
CFG = FamilyConfig()


def saturate(base: Base, atoms, bound: int) -> set[Sequent]:
    """Forward closure under Ax, the rules and Subs, for contexts up to ``bound``."""
    known = {Sequent(Multiset([a]), a) for a in atoms}
    changed = True
    while changed:
        changed = False
        new = {r.conclusion for r in base.rules if all(p in known for p in r.premises)}
        for left, right in product(list(known), repeat=2):
            cut = left.conclusion
            if cut in right.context:
                ctx = left.context + right.context.remove(cut)
                if len(ctx) <= bound:
                    new.add(Sequent(ctx, right.conclusion))
        if not new <= known:
            known |= new
            changed = True
    return known


def test_structural_base():
    s = structural_base()
    assert len(s) == 0 and s.rules == () and s.schemas == ()
    assert derive_atomic(s, S(["p"], "p")).found
    assert derive_atomic(s, S([], "p")).status is Status.REFUTED
    assert derive_atomic(s, S(["q"], "p")).status is Status.REFUTED


@given(seeds)
def test_every_base_extends_structural(seed):
    b = random_base(random.Random(seed))
    assert is_extension(b, structural_base())
    assert is_extension(b, b)
    assert is_extension(b.extend([random_rule(random.Random(seed + 1), CFG)]), b)


def test_extension_examples():
    assert not is_extension(structural_base(), umbrella_base())
    assert is_extension(umbrella_base(), structural_base())


def test_umbrella_deduction():
    r = derive_atomic(umbrella_base(), S([], "u"))
    assert r.status is Status.FOUND
    d = r.derivation
    assert d.rule == "rule2"
    (mid,) = d.premises
    assert mid.rule == "Subs" and mid.conclusion == S(["l"], "p")
    assert [p.conclusion for p in mid.premises] == [S(["l"], "r"), S(["r"], "p")]
    assert verify_atomic(umbrella_base(), d).ok


def test_subs_node_verifies():
    b = parse_base("g |- p.\npi, p |- r.\n")
    d = subs(AtomicDerivation(S(["g"], "p"), "rule0"), AtomicDerivation(S(["p", "pi"], "r"), "rule1"))
    assert d.conclusion == S(["g", "pi"], "r")
    assert verify_atomic(b, d).ok


def test_fixed_context_discipline():
    b = parse_base("l |- p ==> |- u.\nl, l |- p.\n")
    d = AtomicDerivation(S([], "u"), "rule1", (AtomicDerivation(S(["l", "l"], "p"), "rule0"),))
    report = verify_atomic(b, d)
    assert not report.ok
    assert report.violations[0].path == ()
    assert "l |- p ==> |- u" in report.violations[0].nearest
    assert derive_atomic(b, S([], "u")).status is Status.REFUTED


def test_verify_rejects_bad_subs_and_ax():
    bad_ax = AtomicDerivation(S(["p", "q"], "p"), "Ax")
    assert not verify_atomic(structural_base(), bad_ax).ok
    bad_subs = AtomicDerivation(S(["q"], "p"), "Subs", (ax(Atom("p")), ax(Atom("p"))))
    assert not verify_atomic(structural_base(), bad_subs).ok


def test_schema_instances():
    b = parse_base("?T, p |- bot ==> ?T |- bot.\nq, p |- bot.\n")
    r = derive_atomic(b, S(["q"], "bot"))
    assert r.found and verify_atomic(b, r.derivation).ok
    assert derive_atomic(b, S([], "p")).status is Status.REFUTED


def test_premise_only_metavariable_is_not_exhaustive():
    b = parse_base("?D, p |- q ==> |- q.\n")
    assert b.schemas[0].fresh_metas == ("D",)
    assert derive_atomic(b, S([], "q"), depth=6).status is Status.UNKNOWN


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        derive_atomic(structural_base(), S(["p"], "p"), depth=0)


def test_parse_base_format():
    b = parse_base("# comment\nl |- r.\n\nl |- p ; r |- q ==> |- u.   # trailing\n?G, p |- bot ==> ?G |- bot.\n")
    assert len(b.rules) == 2 and len(b.schemas) == 1
    assert parse_base(b.to_text()) == b
    assert isinstance(parse_rule("?G |- p ==> ?G, q |- p."), RuleSchema)
    assert isinstance(parse_rule("|- bot."), AtomicRule)


@pytest.mark.parametrize("text", ["l |- r", "l - r.", "l |- r * s.", "L |- r."])
def test_parse_base_errors(text):
    with pytest.raises(ParseError, match="line 1"):
        parse_base(text)


def test_schema_conclusion_metas_distinct():
    with pytest.raises(ValueError):
        RuleSchema((), Pattern(Multiset(), ("G", "G"), BOT))


def test_derivation_text_round_trip():
    d = derive_atomic(umbrella_base(), S([], "u")).derivation
    assert AtomicDerivation.from_sexpr(d.to_sexpr()) == d


@settings(max_examples=60)
@given(seeds)
def test_found_derivations_verify_and_survive_extension(seed):
    rng = random.Random(seed)
    b = random_base(rng)
    c = b.extend([random_rule(rng, CFG, "x")])
    goal = Sequent(Multiset(rng.choice([Atom(a) for a in "ab"] + [BOT]) for _ in range(rng.randint(0, 2))),
                   rng.choice([Atom("a"), Atom("b"), BOT]))
    r = derive_atomic(b, goal, depth=10, nodes=20_000)
    if r.found:
        assert r.derivation.conclusion == goal
        assert verify_atomic(b, r.derivation).ok
        assert verify_atomic(c, r.derivation).ok
        for n in r.derivation.nodes():
            if n.rule == "Subs":
                cut = n.premises[0].conclusion.conclusion
                assert n.premises[1].conclusion.context.count(cut) == n.conclusion.context.count(cut) + 1 \
                    - n.premises[0].conclusion.context.count(cut)


@settings(max_examples=40)
@given(seeds)
def test_search_agrees_with_forward_saturation(seed):
    rng = random.Random(seed)
    cfg = FamilyConfig(pool=("a", "b", "c"), max_context=2)
    b = random_base(rng, cfg)
    atoms = sorted(b.atoms() | {Atom("a"), Atom("b"), BOT}, key=str)
    closed = saturate(b, atoms, 3)
    for ctx in multisets_up_to(atoms, 2):
        for concl in atoms:
            goal = Sequent(ctx, concl)
            r = derive_atomic(b, goal, depth=10, nodes=20_000)
            if goal in closed:
                assert r.found, goal
            if r.found:
                assert verify_atomic(b, r.derivation).ok
            if r.status is Status.REFUTED:
                assert goal not in closed
