import hypothesis.strategies as st
import pytest
from hypothesis import given

from mallbes.syntax import (BOT, ONE, TOP, ZERO, Atom, Lolli, Par, ParseError, Plus, Sequent, Tensor, With,
                            negate, parse_formula, parse_formula_list, parse_sequent, print_formula,
                            subformula_closure, sequent)
from conftest import atoms, formulas, small_formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text,expected", [
    ("p * q", Tensor(p, q)),
    ("~p", Lolli(p, BOT)),
    ("p -o q -o r", Lolli(p, Lolli(q, r))),
    ("p * q | r", Par(Tensor(p, q), r)),
    ("p | q & r + 1", Plus(With(Par(p, q), r), ONE)),
    ("p + q -o r", Lolli(Plus(p, q), r)),
    ("p * q * r", Tensor(Tensor(p, q), r)),
    ("~p * q", Tensor(negate(p), q)),
    ("~(p * q)", negate(Tensor(p, q))),
    ("top & 0", With(TOP, ZERO)),
    ("bot", BOT),
    ("  ( p )  ", p),
])
def test_parse_examples(text, expected):
    assert parse_formula(text) == expected


def test_bottom_is_the_reserved_atom():
    assert parse_formula("bot") is not None and parse_formula("bot") == Atom("bot")
    assert BOT.is_bottom and not p.is_bottom


def test_atoms_compare_by_name():
    assert Atom("p") == Atom("p") and Atom("p") != Atom("q")


@pytest.mark.parametrize("text", ["!p", "p * ?q"])
def test_exponentials_rejected(text):
    with pytest.raises(ParseError, match="exponentials out of scope"):
        parse_formula(text)


@pytest.mark.parametrize("text,pos", [("p * ", 4), ("p q", 2), ("(p", 2), ("P", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse_formula(text)
    assert e.value.pos == pos
    assert f"position {pos}" in str(e.value)


def test_negate_does_not_collapse():
    assert negate(p) == Lolli(p, BOT)
    assert negate(BOT) == Lolli(BOT, BOT)
    assert negate(negate(p)) == Lolli(Lolli(p, BOT), BOT)


def test_closure_examples():
    assert subformula_closure([Tensor(p, q)]) == {p, q, Tensor(p, q), negate(p), negate(q),
                                                  negate(Tensor(p, q))}
    assert subformula_closure([p]) == {p, negate(p)}
    # ~p is p -o bot, so its own negation ~p and the subformula coincide
    assert subformula_closure([negate(p)]) == {p, BOT, negate(p), negate(BOT), negate(negate(p))}


@given(st.lists(small_formulas, max_size=3), st.lists(small_formulas, max_size=3))
def test_closure_monotone_and_extensive(a, b):
    ca = subformula_closure(a)
    assert set(a) <= ca
    assert ca <= subformula_closure(a + b)
    assert ca <= subformula_closure(ca)


@given(formulas())
def test_print_parse_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@given(formulas())
def test_printing_is_whitespace_insensitive(f):
    text = print_formula(f)
    assert parse_formula(text.replace(" ", "")) == f
    assert parse_formula("  " + text.replace(" ", "   ") + " ") == f


@given(st.lists(small_formulas, max_size=3), small_formulas)
def test_sequent_round_trip(ctx, concl):
    s = sequent(ctx, concl)
    assert parse_sequent(str(s)) == s


@given(st.lists(atoms, max_size=4), st.randoms())
def test_sequent_context_order_free(ctx, rnd):
    other = list(ctx)
    rnd.shuffle(other)
    assert sequent(ctx, p) == sequent(other, p)


def test_sequent_text():
    assert str(parse_sequent("|- r")) == "|- r"
    assert parse_sequent("q, p |- r") == Sequent(parse_sequent("p, q |- r").context, r)
    assert parse_formula_list("") == []
    assert parse_formula_list("p, q * r") == [p, Tensor(q, r)]
