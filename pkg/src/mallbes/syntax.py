"""MALL formulas, sequents, and their ASCII concrete syntax.

Grammar (loosest binding last)::

    atom  ::= [a-z][a-z0-9_]*      (``bot`` is the distinguished atom)
    unit  ::= 1 | 0 | top | bot
    f     ::= ~f | f * f | f | f | f & f | f + f | f -o f | (f)

Precedence, tightest first: ``~``, ``*``, ``|``, ``&``, ``+``, ``-o``.
``-o`` associates to the right, the other binary connectives to the left.
``~f`` is sugar for ``f -o bot``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .multiset import Multiset

BOTTOM_NAME = "bot"
_RESERVED = {"bot", "top"}
_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}")


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    name: str

    @property
    def is_bottom(self) -> bool:
        return self.name == BOTTOM_NAME

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class One:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "top"


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class _Binary:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


class Tensor(_Binary):
    pass


class Par(_Binary):
    pass


class With(_Binary):
    pass


class Plus(_Binary):
    pass


class Lolli(_Binary):
    pass


Formula = Union[Atom, One, Top, Zero, Tensor, Par, With, Plus, Lolli]

BOT = Atom(BOTTOM_NAME)
ONE = One()
TOP = Top()
ZERO = Zero()
# ``Bottom`` is the reserved atom; there is deliberately no separate class.
Bottom = BOT

BINARY = (Tensor, Par, With, Plus, Lolli)
_SYMBOL = {Tensor: "*", Par: "|", With: "&", Plus: "+", Lolli: "-o"}
_PREC = {Lolli: 1, Plus: 2, With: 3, Par: 4, Tensor: 5}
_NEG_PREC = 6
_ATOMIC_PREC = 7


def atom(name: str) -> Atom:
    return Atom(name)


def atoms(names: str) -> list[Atom]:
    return [Atom(n) for n in names.replace(",", " ").split()]


def negate(phi: Formula) -> Formula:
    """``phi -o bot``; double negations are kept as they are."""
    return Lolli(phi, BOT)


def is_negation(phi: Formula) -> bool:
    return isinstance(phi, Lolli) and phi.right == BOT


def size(phi: Formula) -> int:
    """Number of constructor nodes (atoms and units count 1)."""
    if isinstance(phi, _Binary):
        return 1 + size(phi.left) + size(phi.right)
    return 1


def subformulas(phi: Formula) -> set[Formula]:
    out = {phi}
    if isinstance(phi, _Binary):
        out |= subformulas(phi.left)
        out |= subformulas(phi.right)
    return out


def atoms_of(phi: Formula) -> set[Atom]:
    return {f for f in subformulas(phi) if isinstance(f, Atom)}


def subformula_closure(gamma: Iterable[Formula]) -> frozenset[Formula]:
    """Subformulas of the members of ``gamma`` together with their negations."""
    subs: set[Formula] = set()
    for phi in gamma:
        subs |= subformulas(phi)
    return frozenset(subs | {negate(s) for s in subs})


def formula_key(phi: Formula) -> tuple[int, str]:
    """Deterministic total order used wherever formulas are enumerated."""
    return (size(phi), print_formula(phi))


# ---------------------------------------------------------------------------
# Printing


def _prec(phi: Formula) -> int:
    if is_negation(phi):
        return _NEG_PREC
    if isinstance(phi, _Binary):
        return _PREC[type(phi)]
    return _ATOMIC_PREC


def print_formula(phi: Formula) -> str:
    if is_negation(phi):
        inner = phi.left
        s = print_formula(inner)
        return "~" + (s if _prec(inner) >= _NEG_PREC else f"({s})")
    if isinstance(phi, _Binary):
        p = _PREC[type(phi)]
        right_assoc = isinstance(phi, Lolli)
        ls, rs = print_formula(phi.left), print_formula(phi.right)
        lp, rp = _prec(phi.left), _prec(phi.right)
        if lp < p or (lp == p and right_assoc):
            ls = f"({ls})"
        if rp < p or (rp == p and not right_assoc):
            rs = f"({rs})"
        return f"{ls} {_SYMBOL[type(phi)]} {rs}"
    return str(phi)


# ---------------------------------------------------------------------------
# Sequents


@dataclass(frozen=True)
class Sequent:
    context: Multiset
    conclusion: Formula

    def __str__(self) -> str:
        ctx = ", ".join(print_formula(f) for f in self.context)
        return f"{ctx} |- {print_formula(self.conclusion)}" if ctx else f"|- {print_formula(self.conclusion)}"

    @property
    def is_atomic(self) -> bool:
        return isinstance(self.conclusion, Atom) and all(isinstance(f, Atom) for f in self.context)


def sequent(context: Iterable[Formula], conclusion: Formula) -> Sequent:
    return Sequent(Multiset(context), conclusion)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<turnstile>\|-)|(?P<lolli>-o)|(?P<name>[a-z][a-z0-9_]*)"
                       r"|(?P<num>[0-9]+)|(?P<sym>[~*|&+(),!?]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text_len = len(text)
    while pos < text_len:
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", text,
                             pos + len(text[pos:]) - len(text[pos:].lstrip()))
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "sym" and value in "!?":
            raise ParseError("exponentials out of scope", text, start)
        if kind == "num" and value not in ("0", "1"):
            raise ParseError(f"unexpected number {value!r}", text, start)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", text_len))
    return tokens


_BINOPS = [("lolli", "-o", Lolli), ("sym", "+", Plus), ("sym", "&", With),
           ("sym", "|", Par), ("sym", "*", Tensor)]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def eat(self, kind: str, value: str | None = None) -> bool:
        k, v, _ = self.tok
        if k == kind and (value is None or v == value):
            self.i += 1
            return True
        return False

    def fail(self, msg: str):
        _, v, pos = self.tok
        found = repr(v) if v else "end of input"
        raise ParseError(f"{msg}, found {found}", self.text, pos)

    def formula(self, level: int = 0) -> Formula:
        if level == len(_BINOPS):
            return self.unary()
        kind, sym, cls = _BINOPS[level]
        left = self.formula(level + 1)
        if cls is Lolli:
            if self.eat(kind, sym):
                return Lolli(left, self.formula(level))
            return left
        while self.eat(kind, sym):
            left = cls(left, self.formula(level + 1))
        return left

    def unary(self) -> Formula:
        k, v, _ = self.tok
        if self.eat("sym", "~"):
            return negate(self.unary())
        if self.eat("sym", "("):
            inner = self.formula()
            if not self.eat("sym", ")"):
                self.fail("expected ')'")
            return inner
        if k == "num":
            self.i += 1
            return ONE if v == "1" else ZERO
        if k == "name":
            self.i += 1
            if v == "top":
                return TOP
            return Atom(v)
        self.fail("expected a formula")

    def context(self) -> list[Formula]:
        out: list[Formula] = []
        if self.tok[0] == "turnstile":
            return out
        out.append(self.formula())
        while self.eat("sym", ","):
            out.append(self.formula())
        return out

    def end(self):
        if self.tok[0] != "eof":
            self.fail("unexpected trailing input")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    p.end()
    return phi


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    ctx = p.context()
    if not p.eat("turnstile"):
        p.fail("expected '|-'")
    concl = p.formula()
    p.end()
    return sequent(ctx, concl)


def parse_formula_list(text: str) -> list[Formula]:
    """Comma separated formulas; the empty string is the empty list."""
    if not text.strip():
        return []
    p = _Parser(text)
    out = [p.formula()]
    while p.eat("sym", ","):
        out.append(p.formula())
    p.end()
    return out


def is_atom_name(name: str) -> bool:
    return bool(_ATOM_RE.fullmatch(name)) and name != "top"
