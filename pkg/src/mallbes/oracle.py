"""Independent provability oracle: one-sided cut-free MALL, searched exhaustively.

The distinguished atom ``bot`` is read as the multiplicative unit ⊥ here.
Par, with, ⊥ and ⊤ are applied eagerly (their rules are invertible); tensor
and plus are tried in every way, with all context splits for tensor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Union

from .multiset import Multiset
from .syntax import Atom, Formula, Lolli, One, Par, Plus, Sequent, Tensor, Top, With, Zero


@dataclass(frozen=True)
class Lit:
    name: str
    positive: bool = True

    def __str__(self) -> str:
        return self.name if self.positive else f"{self.name}^"


@dataclass(frozen=True)
class Unit:
    name: str  # one of "1", "bot", "top", "0"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Bin:
    op: str  # one of "*", "|", "&", "+"
    left: "Nnf"
    right: "Nnf"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


Nnf = Union[Lit, Unit, Bin]

_DUAL_OP = {"*": "|", "|": "*", "&": "+", "+": "&"}
_DUAL_UNIT = {"1": "bot", "bot": "1", "top": "0", "0": "top"}
ONE_U, BOT_U, TOP_U, ZERO_U = Unit("1"), Unit("bot"), Unit("top"), Unit("0")


def dual(f: Nnf) -> Nnf:
    if isinstance(f, Lit):
        return Lit(f.name, not f.positive)
    if isinstance(f, Unit):
        return Unit(_DUAL_UNIT[f.name])
    return Bin(_DUAL_OP[f.op], dual(f.left), dual(f.right))


def to_nnf(phi: Formula) -> Nnf:
    if isinstance(phi, Atom):
        return BOT_U if phi.is_bottom else Lit(phi.name)
    if isinstance(phi, One):
        return ONE_U
    if isinstance(phi, Top):
        return TOP_U
    if isinstance(phi, Zero):
        return ZERO_U
    if isinstance(phi, Lolli):
        return Bin("|", dual(to_nnf(phi.left)), to_nnf(phi.right))
    op = {Tensor: "*", Par: "|", With: "&", Plus: "+"}[type(phi)]
    return Bin(op, to_nnf(phi.left), to_nnf(phi.right))


def to_one_sided(s: Sequent) -> Multiset:
    """``Γ ⊢ φ`` becomes ``⊢ Γ^⊥, φ``."""
    return Multiset([dual(to_nnf(g)) for g in s.context] + [to_nnf(s.conclusion)])


class OracleVerdict(enum.Enum):
    PROVABLE = "provable"
    REFUTED = "refuted"


class ExhaustionOverflow(RuntimeError):
    """The resource cap was reached before the search space was exhausted."""


DEFAULT_CAP = 2_000_000


class _Search:
    def __init__(self, cap: int):
        self.cap = cap
        self.steps = 0
        self.memo: dict[Multiset, bool] = {}

    def prove(self, goal: Multiset) -> bool:
        if goal in self.memo:
            return self.memo[goal]
        self.steps += 1
        if self.steps > self.cap:
            raise ExhaustionOverflow(f"oracle exceeded {self.cap} steps")
        r = self._prove(goal)
        self.memo[goal] = r
        return r

    def _prove(self, goal: Multiset) -> bool:
        if TOP_U in goal:
            return True
        for f in goal.distinct():
            rest = goal.remove(f)
            if f == BOT_U:
                return self.prove(rest)
            if isinstance(f, Bin) and f.op == "|":
                return self.prove(rest.add(f.left, f.right))
            if isinstance(f, Bin) and f.op == "&":
                return self.prove(rest.add(f.left)) and self.prove(rest.add(f.right))
        if len(goal) == 1 and goal.distinct()[0] == ONE_U:
            return True
        if len(goal) == 2:
            a, b = list(goal)
            if isinstance(a, Lit) and dual(a) == b:
                return True
        for f in goal.distinct():
            if not isinstance(f, Bin):
                continue
            rest = goal.remove(f)
            if f.op == "+":
                if self.prove(rest.add(f.left)) or self.prove(rest.add(f.right)):
                    return True
            elif f.op == "*":
                for x, y in rest.splits():
                    if self.prove(x.add(f.left)) and self.prove(y.add(f.right)):
                        return True
        return False


def prove(goal: Iterable[Nnf], cap: int = DEFAULT_CAP) -> OracleVerdict:
    """Exhaustive verdict; raises :class:`ExhaustionOverflow` past ``cap`` steps."""
    ok = _Search(cap).prove(Multiset(goal))
    return OracleVerdict.PROVABLE if ok else OracleVerdict.REFUTED


def prove_sequent(s: Sequent, cap: int = DEFAULT_CAP) -> OracleVerdict:
    return prove(to_one_sided(s), cap)
