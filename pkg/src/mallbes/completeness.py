"""Atomic mappings, simulation bases, and the decision route through them.

``decide`` looks for a deduction of ``σ(Γ) ⊢ σ(φ)`` in the simulation base
``U`` for ``Γ ∪ {φ}``.  Blind search over ``U`` thrashes, so the search is
steered by the shape of the formulas behind each atom; every step it takes is
an instance of a schema of ``U`` (or Ax/Subs), and the result is checked by
``verify_atomic`` in the tests.

Two kinds of search state exist: a goal ``Γ ⊢ χ`` with ``χ ≠ ⊥``, and a
refutation state ``Γ ⊢ ⊥``.  Goals are closed by an introduction schema or
by Raa; refutation states by eliminating one hypothesis whose major premise
is an axiom.  A goal reached by eliminating a hypothesis ``¬χ`` may not use
Raa again, which is what makes the search terminate.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .base import (DEFAULT_DEPTH, DEFAULT_NODES, AtomicDerivation, AtomicRule, Base, Pattern,
                   RuleSchema, ax, subs)
from .multiset import EMPTY, Multiset
from .nd import NdDerivation, NdRule
from .syntax import (BOT, ONE, TOP, ZERO, Atom, Formula, Lolli, One, Par, Plus, Sequent, Tensor,
                     Top, With, Zero, atoms_of, formula_key, is_negation, negate,
                     subformula_closure)


class TranslationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Atomic mapping


@dataclass(frozen=True)
class AtomicMapping:
    table: tuple[tuple[Formula, Atom], ...]

    def __post_init__(self):
        object.__setattr__(self, "_fwd", dict(self.table))
        object.__setattr__(self, "_inv", {a: f for f, a in self.table})

    def __call__(self, phi: Formula) -> Atom:
        try:
            return self._fwd[phi]
        except KeyError:
            raise KeyError(f"{phi} is outside the mapping's domain") from None

    def inverse(self, a: Atom) -> Formula:
        try:
            return self._inv[a]
        except KeyError:
            raise TranslationError(f"unmapped atom {a}") from None

    @property
    def domain(self) -> list[Formula]:
        return [f for f, _ in self.table]

    def __contains__(self, phi) -> bool:
        return phi in self._fwd

    def __len__(self) -> int:
        return len(self.table)

    def is_injective(self) -> bool:
        return len(self._inv) == len(self._fwd)


def mapping_domain(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(subformula_closure(list(formulas) + [BOT]), key=formula_key)


def make_mapping(formulas: Iterable[Formula], seed: int = 0, prefix: str = "x") -> AtomicMapping:
    """Atoms map to themselves; every other member of the domain gets a fresh atom.

    ``seed`` permutes which fresh name goes to which formula.
    """
    domain = mapping_domain(formulas)
    taken = {a.name for f in domain for a in atoms_of(f)}
    composite = [f for f in domain if not isinstance(f, Atom)]
    names: list[str] = []
    i = 1
    while len(names) < len(composite):
        n = f"{prefix}{i}"
        if n not in taken:
            names.append(n)
        i += 1
    if seed:
        random.Random(seed).shuffle(names)
    fresh = dict(zip(composite, names))
    return AtomicMapping(tuple((f, f if isinstance(f, Atom) else Atom(fresh[f])) for f in domain))


# ---------------------------------------------------------------------------
# Simulation base


@dataclass(frozen=True)
class SimulationBase:
    base: Base
    mapping: AtomicMapping
    formulas: tuple[Formula, ...]


def _pat(metas: str, atoms: Iterable[Atom], concl: Atom) -> Pattern:
    return Pattern(Multiset(atoms), tuple(metas.split()), concl)


def _schema(name: str, prems: list[Pattern], concl: Pattern) -> RuleSchema:
    return RuleSchema(tuple(prems), concl, name=name)


def build_simulation_base(formulas: Iterable[Formula], mapping: Optional[AtomicMapping] = None,
                          seed: int = 0) -> SimulationBase:
    formulas = tuple(formulas)
    sigma = mapping or make_mapping(formulas, seed)
    p = sigma
    dom = set(sigma.domain)
    schemas: list[RuleSchema] = []
    rules: list[AtomicRule] = []
    bot = BOT
    for phi in sigma.domain:
        if negate(phi) in dom:
            schemas.append(_schema("Raa", [_pat("G", [p(negate(phi))], bot)], _pat("G", [], p(phi))))
        if ONE in dom:
            schemas.append(_schema("OneE", [_pat("G", [], p(phi)), _pat("D", [], p(ONE))],
                                   _pat("G D", [], p(phi))))
        if phi == TOP:
            schemas.append(_schema("TopI", [], _pat("G", [], p(TOP))))
        elif phi == ZERO:
            schemas.append(_schema("ZeroE", [_pat("G", [], p(ZERO))], _pat("G D", [], bot)))
        elif phi == ONE:
            rules.append(AtomicRule((), Sequent(EMPTY, p(ONE)), name="OneI"))
        elif isinstance(phi, Tensor):
            a, b, c = p(phi.left), p(phi.right), p(phi)
            schemas.append(_schema("TensorI", [_pat("G", [], a), _pat("D", [], b)], _pat("G D", [], c)))
            schemas.append(_schema("TensorE", [_pat("G", [], c), _pat("D", [a, b], bot)],
                                   _pat("G D", [], bot)))
        elif isinstance(phi, With):
            a, b, c = p(phi.left), p(phi.right), p(phi)
            schemas.append(_schema("WithI", [_pat("G", [], a), _pat("G", [], b)], _pat("G", [], c)))
            schemas.append(_schema("WithE1", [_pat("G", [], c)], _pat("G", [], a)))
            schemas.append(_schema("WithE2", [_pat("G", [], c)], _pat("G", [], b)))
        elif isinstance(phi, Lolli):
            a, b, c = p(phi.left), p(phi.right), p(phi)
            schemas.append(_schema("LolliI", [_pat("G", [a], b)], _pat("G", [], c)))
            schemas.append(_schema("LolliE", [_pat("G", [], c), _pat("D", [], a)], _pat("G D", [], b)))
        elif isinstance(phi, Par):
            a, b, c = p(phi.left), p(phi.right), p(phi)
            na, nb = p(negate(phi.left)), p(negate(phi.right))
            schemas.append(_schema("ParI", [_pat("G", [na, nb], bot)], _pat("G", [], c)))
            schemas.append(_schema("ParE", [_pat("G", [], c), _pat("D", [a], bot), _pat("T", [b], bot)],
                                   _pat("G D T", [], bot)))
        elif isinstance(phi, Plus):
            a, b, c = p(phi.left), p(phi.right), p(phi)
            schemas.append(_schema("PlusI1", [_pat("G", [], a)], _pat("G", [], c)))
            schemas.append(_schema("PlusI2", [_pat("G", [], b)], _pat("G", [], c)))
            schemas.append(_schema("PlusE", [_pat("G", [], c), _pat("D", [a], bot), _pat("D", [b], bot)],
                                   _pat("G D", [], bot)))
    return SimulationBase(Base(tuple(rules), tuple(schemas)), sigma, formulas)


# ---------------------------------------------------------------------------
# Decision


class Verdict(enum.Enum):
    PROVABLE = "provable"
    NOT_PROVABLE = "not-provable"
    UNKNOWN = "not-found-within-budget"


@dataclass
class DecideResult:
    verdict: Verdict
    derivation: Optional[AtomicDerivation]
    simulation: SimulationBase
    nodes: int = 0

    @property
    def provable(self) -> bool:
        return self.verdict is Verdict.PROVABLE

    @property
    def mapping(self) -> AtomicMapping:
        return self.simulation.mapping


class _Exhausted(Exception):
    pass


class _Strategy:
    def __init__(self, sigma: AtomicMapping, depth: int, nodes: int):
        self.s = sigma
        self.depth = depth
        self.budget = nodes
        self.nodes = 0
        self.cut = False
        self.memo: dict[tuple, Optional[AtomicDerivation]] = {}

    def mk(self, ctx: Multiset, goal: Formula, rule: str, *prem: AtomicDerivation) -> AtomicDerivation:
        return AtomicDerivation(Sequent(ctx.map(self.s), self.s(goal)), rule, prem)

    def ax(self, phi: Formula) -> AtomicDerivation:
        return ax(self.s(phi))

    def prove(self, ctx: Multiset, goal: Formula, no_raa: bool, depth: int) -> Optional[AtomicDerivation]:
        if goal == BOT:
            no_raa = False
        key = (ctx, goal, no_raa)
        if key in self.memo:
            return self.memo[key]
        if depth <= 0:
            self.cut = True
            return None
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Exhausted
        was_cut, self.cut = self.cut, False
        step = self.refute if goal == BOT else self.goal
        d = step(ctx, goal, no_raa, depth - 1)
        if d is not None or not self.cut:
            self.memo[key] = d
        self.cut = self.cut or was_cut
        return d

    def goal(self, ctx: Multiset, chi: Formula, no_raa: bool, depth: int) -> Optional[AtomicDerivation]:
        if ctx == Multiset([chi]):
            return self.ax(chi)
        if chi == TOP:
            return self.mk(ctx, chi, "TopI")
        if chi == ONE and not ctx:
            return self.mk(ctx, chi, "OneI")
        if isinstance(chi, Tensor):
            for a, b in ctx.splits():
                left = self.prove(a, chi.left, False, depth)
                if left is None:
                    continue
                right = self.prove(b, chi.right, False, depth)
                if right is not None:
                    return self.mk(ctx, chi, "TensorI", left, right)
        elif isinstance(chi, With):
            left = self.prove(ctx, chi.left, False, depth)
            right = left and self.prove(ctx, chi.right, False, depth)
            if right is not None and left is not None:
                return self.mk(ctx, chi, "WithI", left, right)
        elif isinstance(chi, Plus):
            for side, rule in ((chi.left, "PlusI1"), (chi.right, "PlusI2")):
                d = self.prove(ctx, side, False, depth)
                if d is not None:
                    return self.mk(ctx, chi, rule, d)
        elif isinstance(chi, Lolli):
            d = self.prove(ctx.add(chi.left), chi.right, False, depth)
            if d is not None:
                return self.mk(ctx, chi, "LolliI", d)
        elif isinstance(chi, Par):
            d = self.prove(ctx.add(negate(chi.left), negate(chi.right)), BOT, False, depth)
            if d is not None:
                return self.mk(ctx, chi, "ParI", d)
        if not no_raa:
            d = self.prove(ctx.add(negate(chi)), BOT, False, depth)
            if d is not None:
                return self.mk(ctx, chi, "Raa", d)
        return None

    def refute(self, ctx: Multiset, _bot: Formula, _no_raa: bool, depth: int) -> Optional[AtomicDerivation]:
        for g in ctx.distinct():
            d = self.eliminate(g, ctx.remove(g), ctx, depth)
            if d is not None:
                return d
        return None

    def eliminate(self, g: Formula, rest: Multiset, ctx: Multiset, depth: int) -> Optional[AtomicDerivation]:
        if g == BOT:
            return self.ax(BOT) if not rest else None
        if isinstance(g, Tensor):
            d = self.prove(rest.add(g.left, g.right), BOT, False, depth)
            return d and self.mk(ctx, BOT, "TensorE", self.ax(g), d)
        if isinstance(g, Par):
            for a, b in rest.splits():
                left = self.prove(a.add(g.left), BOT, False, depth)
                if left is None:
                    continue
                right = self.prove(b.add(g.right), BOT, False, depth)
                if right is not None:
                    return self.mk(ctx, BOT, "ParE", self.ax(g), left, right)
            return None
        if isinstance(g, Plus):
            left = self.prove(rest.add(g.left), BOT, False, depth)
            right = left and self.prove(rest.add(g.right), BOT, False, depth)
            if left is not None and right is not None:
                return self.mk(ctx, BOT, "PlusE", self.ax(g), left, right)
            return None
        if isinstance(g, With):
            for side, rule in ((g.left, "WithE1"), (g.right, "WithE2")):
                d = self.prove(rest.add(side), BOT, False, depth)
                if d is not None:
                    proj = self.mk(Multiset([g]), side, rule, self.ax(g))
                    return subs(proj, d)
            return None
        if isinstance(g, One):
            d = self.prove(rest, BOT, False, depth)
            return d and self.mk(ctx, BOT, "OneE", d, self.ax(ONE))
        if isinstance(g, Zero):
            return self.mk(ctx, BOT, "ZeroE", self.ax(ZERO))
        if isinstance(g, Lolli):
            if g.right == BOT:
                d = self.prove(rest, g.left, True, depth)
                return d and self.mk(ctx, BOT, "LolliE", self.ax(g), d)
            for a, b in rest.splits():
                arg = self.prove(a, g.left, False, depth)
                if arg is None:
                    continue
                cont = self.prove(b.add(g.right), BOT, False, depth)
                if cont is not None:
                    app = self.mk(a.add(g), g.right, "LolliE", self.ax(g), arg)
                    return subs(app, cont)
            return None
        return None  # atoms other than bot, and top


def decide(gamma: Iterable[Formula], phi: Formula, depth: int = DEFAULT_DEPTH,
           nodes: int = DEFAULT_NODES, seed: int = 0) -> DecideResult:
    """Search the simulation base for ``Γ ⊢ φ``.

    NOT_PROVABLE means the guided search space was exhausted; UNKNOWN means
    the depth or node budget ran out first.
    """
    if depth <= 0 or nodes <= 0:
        raise ValueError("budget must be positive")
    gamma = Multiset(gamma)
    sim = build_simulation_base(list(gamma.distinct()) + [phi], seed=seed)
    strat = _Strategy(sim.mapping, depth, nodes)
    try:
        d = strat.prove(gamma, phi, False, depth)
    except _Exhausted:
        return DecideResult(Verdict.UNKNOWN, None, sim, strat.nodes)
    if d is not None:
        return DecideResult(Verdict.PROVABLE, d, sim, strat.nodes)
    verdict = Verdict.UNKNOWN if strat.cut else Verdict.NOT_PROVABLE
    return DecideResult(verdict, None, sim, strat.nodes)


# ---------------------------------------------------------------------------
# Translation back to natural deduction


def translate(d: AtomicDerivation, sigma: AtomicMapping) -> NdDerivation:
    """Rewrite each atom ``p^ψ`` as ``ψ`` and each schema node as its ND rule."""
    try:
        rule = NdRule(d.rule)
    except ValueError:
        raise TranslationError(f"node {d.rule!r} matches no simulation schema") from None
    c = d.conclusion
    seq = Sequent(c.context.map(sigma.inverse), sigma.inverse(c.conclusion))
    return NdDerivation(seq, rule, tuple(translate(p, sigma) for p in d.premises))
