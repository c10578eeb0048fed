import random

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from mallbes.base import Status, atomic_sequent, derive_atomic, is_extension, parse_base, structural_base
from mallbes.multiset import Multiset
from mallbes.support import (ExtensionFamily, FamilyConfig, SupportEvaluator, counterexample_base, eval_clause,
                             family_of, generate_family, judgment, parse_judgment, random_base, verify_witness)
from mallbes.syntax import BOT, TOP, ZERO, Atom, ParseError, Sequent, parse_formula
from conftest import formulas

p = Atom("p")
CFG = FamilyConfig(size=3, ctx_bound=2)
seeds = st.integers(0, 10_000)
atom_bags = st.lists(st.sampled_from([Atom("a"), Atom("b"), BOT]), max_size=2).map(Multiset)


def _family(seed, cfg=CFG):
    root = random_base(random.Random(seed), cfg)
    return generate_family(root, cfg, seed)


def test_top_holds():
    s = structural_base()
    assert eval_clause(judgment(TOP, base=s), family_of([s])).holds


def test_atom_in_its_own_context():
    s = structural_base()
    r = eval_clause(judgment(p, superscript=[p], base=s), generate_family(s, CFG, 1))
    assert r.verdict == "holds-relative-to-family"


def test_bot_refuted_on_structural_base():
    s = structural_base()
    fam = family_of([s])
    r = eval_clause(judgment(BOT, base=s), fam)
    assert r.verdict == "refuted"
    facts = {(str(f.sequent), f.derivable) for f in r.witness.all_facts()}
    assert ("bot |- bot", True) in facts and ("|- bot", False) in facts
    assert r.witness.genuine()
    assert verify_witness(r.witness, fam)


def test_zero_refuted_on_structural_base():
    s = structural_base()
    assert not eval_clause(judgment(ZERO, base=s), generate_family(s, CFG, 3)).holds


@settings(max_examples=30)
@given(seeds, atom_bags)
def test_top_never_refuted(seed, delta):
    fam = _family(seed)
    assert eval_clause(judgment(TOP, superscript=delta, base=fam.root), fam).holds


@settings(max_examples=40)
@given(seeds, atom_bags)
def test_bottom_support_matches_derivability(seed, gamma):
    fam = _family(seed)
    r = eval_clause(judgment(BOT, superscript=gamma, base=fam.root), fam)
    d = derive_atomic(fam.root, Sequent(gamma, BOT), CFG.depth, CFG.nodes)
    assert r.holds == d.found


@settings(max_examples=40)
@given(seeds, formulas(3), atom_bags)
def test_refutations_verify(seed, phi, delta):
    fam = _family(seed)
    r = eval_clause(judgment(phi, superscript=delta, base=fam.root), fam)
    if not r.holds:
        assert r.witness is not None
        assert verify_witness(r.witness, fam)


@settings(max_examples=25)
@given(seeds, formulas(3), atom_bags)
def test_smaller_family_cannot_refute_more(seed, phi, delta):
    cfg = FamilyConfig(size=4, ctx_bound=2)
    fam = _family(seed, cfg)
    prefix = ExtensionFamily(fam.bases[:2], fam.seed, cfg)
    vocab = fam.atoms() | {Atom(a) for a in cfg.pool}
    if SupportEvaluator(fam, vocab).supports(0, delta, phi):
        assert SupportEvaluator(prefix, vocab).supports(0, delta, phi)


@given(seeds)
def test_family_members_extend_root(seed):
    fam = _family(seed)
    assert len(fam.bases) == CFG.size
    assert all(is_extension(b, fam.root) for b in fam.bases)
    assert _family(seed) == fam


def test_family_of_rejects_non_extensions():
    with pytest.raises(ValueError):
        family_of([parse_base("|- a."), parse_base("|- b.")])


def test_counterexample_base():
    b = counterexample_base(p)
    assert len(b.schemas) == 1 and not b.rules
    (sc,) = b.schemas
    assert sc.conclusion.conclusion == BOT and list(sc.premises[0].atoms) == [p]
    assert derive_atomic(b, atomic_sequent([], "p")).status is Status.REFUTED
    with pytest.raises(ValueError):
        counterexample_base(BOT)


@pytest.mark.parametrize("seed", range(5))
def test_counterexample_base_supports_p(seed):
    b = counterexample_base(p)
    assert eval_clause(judgment(p, base=b), generate_family(b, FamilyConfig(), seed)).holds


def test_family_must_be_rooted_at_the_judgment_base():
    with pytest.raises(ValueError):
        eval_clause(judgment(p, base=counterexample_base(p)), family_of([structural_base()]))


def test_judgment_text():
    j = parse_judgment("~p, q ||-^{p, bot} p * q")
    assert j.antecedents == Multiset([parse_formula("~p"), parse_formula("q")])
    assert j.superscript == Multiset([p, BOT])
    assert j.conclusion == parse_formula("p * q")
    assert parse_judgment(str(j)) == j
    assert str(parse_judgment("||- top")) == "||-^{} top"
    with pytest.raises(ParseError, match="position"):
        parse_judgment("||-^{p * q} p")
    with pytest.raises(ParseError):
        parse_judgment("p |- q")
