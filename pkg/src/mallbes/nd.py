"""Natural deduction for classical MALL in sequent style.

Derivations are immutable trees of :class:`NdDerivation`.  :func:`check_nd`
validates every node against its rule label; :func:`search_nd` is a bounded
exhaustive backward search used to probe (un)provability claims.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from . import sexpr
from .multiset import Multiset
from .syntax import (BOT, ONE, TOP, ZERO, Formula, Lolli, One, Par, Plus, Sequent, Tensor, Top,
                     With, Zero, formula_key, negate, parse_sequent, subformula_closure)


class NdRule(enum.Enum):
    Ax = "Ax"
    Raa = "Raa"
    TensorI = "TensorI"
    TensorE = "TensorE"
    OneI = "OneI"
    OneE = "OneE"
    WithI = "WithI"
    WithE1 = "WithE1"
    WithE2 = "WithE2"
    TopI = "TopI"
    LolliI = "LolliI"
    LolliE = "LolliE"
    ParI = "ParI"
    ParE = "ParE"
    PlusI1 = "PlusI1"
    PlusI2 = "PlusI2"
    PlusE = "PlusE"
    ZeroE = "ZeroE"
    Subs = "Subs"

    @property
    def admissible(self) -> bool:
        """Subs is admissible rather than primitive."""
        return self is NdRule.Subs


ARITY = {
    NdRule.Ax: 0, NdRule.OneI: 0, NdRule.TopI: 0,
    NdRule.Raa: 1, NdRule.WithE1: 1, NdRule.WithE2: 1, NdRule.LolliI: 1, NdRule.ParI: 1,
    NdRule.PlusI1: 1, NdRule.PlusI2: 1, NdRule.ZeroE: 1,
    NdRule.TensorI: 2, NdRule.TensorE: 2, NdRule.OneE: 2, NdRule.WithI: 2, NdRule.LolliE: 2,
    NdRule.Subs: 2,
    NdRule.ParE: 3, NdRule.PlusE: 3,
}


@dataclass(frozen=True)
class NdDerivation:
    conclusion: Sequent
    rule: NdRule
    premises: tuple["NdDerivation", ...] = ()

    def nodes(self) -> Iterator["NdDerivation"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def rules(self) -> list[NdRule]:
        return [n.rule for n in self.nodes()]

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)


def node(conclusion: Sequent, rule: NdRule, *premises: NdDerivation) -> NdDerivation:
    return NdDerivation(conclusion, rule, tuple(premises))


# ---------------------------------------------------------------------------
# Checking


@dataclass(frozen=True)
class Violation:
    path: tuple[int, ...]
    rule: NdRule
    message: str
    expected: str = ""
    found: str = ""

    def __str__(self) -> str:
        where = "root" if not self.path else "root." + ".".join(map(str, self.path))
        s = f"{where} [{self.rule.value}]: {self.message}"
        if self.expected or self.found:
            s += f" (expected {self.expected}; found {self.found})"
        return s


@dataclass
class CheckReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(map(str, self.violations))


def _expect_seq(expected: Sequent, found: Sequent) -> Optional[tuple[str, str, str]]:
    if expected != found:
        return ("premise does not match the rule", str(expected), str(found))
    return None


def _check_node(d: NdDerivation) -> Optional[tuple[str, str, str]]:
    """Return ``(message, expected, found)`` for a bad node, else ``None``."""
    r, c = d.rule, d.conclusion
    ctx, chi = c.context, c.conclusion
    ps = [p.conclusion for p in d.premises]
    if len(ps) != ARITY[r]:
        return (f"wrong number of premises", str(ARITY[r]), str(len(ps)))

    if r is NdRule.Ax:
        if ctx != Multiset([chi]):
            return ("axiom context must be exactly the conclusion", f"{chi} |- {chi}", str(c))
    elif r is NdRule.TopI:
        if chi != TOP:
            return ("conclusion must be top", "top", str(chi))
    elif r is NdRule.OneI:
        if chi != ONE or ctx:
            return ("conclusion must be |- 1", "|- 1", str(c))
    elif r is NdRule.Raa:
        return _expect_seq(Sequent(ctx.add(negate(chi)), BOT), ps[0])
    elif r is NdRule.LolliI:
        if not isinstance(chi, Lolli):
            return ("conclusion must be a linear implication", "A -o B", str(chi))
        return _expect_seq(Sequent(ctx.add(chi.left), chi.right), ps[0])
    elif r is NdRule.ParI:
        if not isinstance(chi, Par):
            return ("conclusion must be a par", "A | B", str(chi))
        return _expect_seq(Sequent(ctx.add(negate(chi.left), negate(chi.right)), BOT), ps[0])
    elif r in (NdRule.PlusI1, NdRule.PlusI2):
        if not isinstance(chi, Plus):
            return ("conclusion must be a plus", "A + B", str(chi))
        side = chi.left if r is NdRule.PlusI1 else chi.right
        return _expect_seq(Sequent(ctx, side), ps[0])
    elif r is NdRule.WithI:
        if not isinstance(chi, With):
            return ("conclusion must be a with", "A & B", str(chi))
        return (_expect_seq(Sequent(ctx, chi.left), ps[0])
                or _expect_seq(Sequent(ctx, chi.right), ps[1]))
    elif r in (NdRule.WithE1, NdRule.WithE2):
        major = ps[0].conclusion
        if not isinstance(major, With) or ps[0].context != ctx:
            return ("premise must be Γ |- A & B with the conclusion's context", f"{ctx} |- _ & _", str(ps[0]))
        side = major.left if r is NdRule.WithE1 else major.right
        if side != chi:
            return ("projection does not match the conclusion", str(side), str(chi))
    elif r is NdRule.TensorI:
        if not isinstance(chi, Tensor):
            return ("conclusion must be a tensor", "A * B", str(chi))
        if ps[0].conclusion != chi.left or ps[1].conclusion != chi.right:
            return ("premises must conclude the tensor components", f"{chi.left}; {chi.right}",
                    f"{ps[0].conclusion}; {ps[1].conclusion}")
        if ps[0].context + ps[1].context != ctx:
            return ("conclusion context must be the multiset union of the premise contexts",
                    str(ps[0].context + ps[1].context), str(ctx))
    elif r is NdRule.TensorE:
        major = ps[0].conclusion
        if not isinstance(major, Tensor):
            return ("major premise must conclude a tensor", "A * B", str(major))
        if ps[1].conclusion != chi:
            return ("minor premise must have the conclusion's formula", str(chi), str(ps[1].conclusion))
        hyps = Multiset([major.left, major.right])
        if not hyps <= ps[1].context:
            return ("minor premise must assume both tensor components", str(hyps), str(ps[1].context))
        if ps[0].context + (ps[1].context - hyps) != ctx:
            return ("context mismatch", str(ps[0].context + (ps[1].context - hyps)), str(ctx))
    elif r is NdRule.OneE:
        if ps[1].conclusion != ONE:
            return ("second premise must conclude 1", "1", str(ps[1].conclusion))
        if ps[0].conclusion != chi:
            return ("first premise must have the conclusion's formula", str(chi), str(ps[0].conclusion))
        if ps[0].context + ps[1].context != ctx:
            return ("context mismatch", str(ps[0].context + ps[1].context), str(ctx))
    elif r is NdRule.LolliE:
        major = ps[0].conclusion
        if not isinstance(major, Lolli) or major.right != chi:
            return ("major premise must be A -o C for the conclusion C", f"_ -o {chi}", str(major))
        if ps[1].conclusion != major.left:
            return ("minor premise must conclude the antecedent", str(major.left), str(ps[1].conclusion))
        if ps[0].context + ps[1].context != ctx:
            return ("context mismatch", str(ps[0].context + ps[1].context), str(ctx))
    elif r is NdRule.ParE:
        major = ps[0].conclusion
        if not isinstance(major, Par):
            return ("major premise must conclude a par", "A | B", str(major))
        if chi != BOT or ps[1].conclusion != BOT or ps[2].conclusion != BOT:
            return ("par elimination concludes bot from bot", "bot", str(chi))
        if major.left not in ps[1].context or major.right not in ps[2].context:
            return ("minor premises must assume the par components", f"{major.left}; {major.right}",
                    f"{ps[1].context}; {ps[2].context}")
        rest = ps[0].context + ps[1].context.remove(major.left) + ps[2].context.remove(major.right)
        if rest != ctx:
            return ("context mismatch", str(rest), str(ctx))
    elif r is NdRule.PlusE:
        major = ps[0].conclusion
        if not isinstance(major, Plus):
            return ("major premise must conclude a plus", "A + B", str(major))
        if ps[1].conclusion != chi or ps[2].conclusion != chi:
            return ("minor premises must have the conclusion's formula", str(chi),
                    f"{ps[1].conclusion}; {ps[2].conclusion}")
        if major.left not in ps[1].context or major.right not in ps[2].context:
            return ("minor premises must assume the plus components", f"{major.left}; {major.right}",
                    f"{ps[1].context}; {ps[2].context}")
        d1 = ps[1].context.remove(major.left)
        d2 = ps[2].context.remove(major.right)
        if d1 != d2:
            return ("minor premises must share one context", str(d1), str(d2))
        if ps[0].context + d1 != ctx:
            return ("context mismatch", str(ps[0].context + d1), str(ctx))
    elif r is NdRule.ZeroE:
        if ps[0].conclusion != ZERO:
            return ("premise must conclude 0", "0", str(ps[0].conclusion))
        if not ps[0].context <= ctx:
            return ("premise context must be contained in the conclusion's", str(ps[0].context), str(ctx))
    elif r is NdRule.Subs:
        cut = ps[0].conclusion
        if ps[1].conclusion != chi:
            return ("right premise must have the conclusion's formula", str(chi), str(ps[1].conclusion))
        if cut not in ps[1].context:
            return ("right premise must assume the cut formula", str(cut), str(ps[1].context))
        if ps[0].context + ps[1].context.remove(cut) != ctx:
            return ("context mismatch", str(ps[0].context + ps[1].context.remove(cut)), str(ctx))
    return None


def check_nd(d: NdDerivation, allow_subs: bool = True, allow_raa: bool = True) -> CheckReport:
    """Check every node; ``allow_raa=False`` is the intuitionistic fragment."""
    report = CheckReport()
    stack: list[tuple[NdDerivation, tuple[int, ...]]] = [(d, ())]
    while stack:
        n, path = stack.pop()
        if n.rule is NdRule.Subs and not allow_subs:
            report.violations.append(Violation(path, n.rule, "Subs is disabled"))
        elif n.rule is NdRule.Raa and not allow_raa:
            report.violations.append(Violation(path, n.rule, "Raa is disabled (intuitionistic mode)"))
        else:
            bad = _check_node(n)
            if bad:
                report.violations.append(Violation(path, n.rule, *bad))
        for i in reversed(range(len(n.premises))):
            stack.append((n.premises[i], path + (i,)))
    report.violations.sort(key=lambda v: v.path)
    return report


def compose(d1: NdDerivation, d2: NdDerivation) -> NdDerivation:
    """Substitute ``d1`` (of Γ |- A) for an assumption A of ``d2`` via Subs."""
    cut = d1.conclusion.conclusion
    right = d2.conclusion
    if cut not in right.context:
        raise ValueError(f"premise mismatch: {cut} is not assumed in {right}")
    concl = Sequent(d1.conclusion.context + right.context.remove(cut), right.conclusion)
    return node(concl, NdRule.Subs, d1, d2)


def normal_form_check(d: NdDerivation) -> bool:
    """Minor premises of tensor/plus/par eliminations all conclude bot.

    ZeroE has no minor premise and is accepted as is.
    """
    for n in d.nodes():
        if n.rule is NdRule.TensorE and n.premises[1].conclusion.conclusion != BOT:
            return False
        if n.rule in (NdRule.PlusE, NdRule.ParE) and any(
                p.conclusion.conclusion != BOT for p in n.premises[1:]):
            return False
    return True


# ---------------------------------------------------------------------------
# Text format


def to_sexpr(d: NdDerivation, pretty: bool = True, _indent: int = 0) -> str:
    children = [to_sexpr(p, pretty, _indent + 1) for p in d.premises]
    return sexpr.write(d.rule.value, str(d.conclusion), children, _indent, pretty)


def from_sexpr(text: str) -> NdDerivation:
    def build(n) -> NdDerivation:
        rule, seq, kids = n
        try:
            r = NdRule(rule)
        except ValueError:
            raise ValueError(f"unknown ND rule {rule!r}") from None
        return NdDerivation(parse_sequent(seq), r, tuple(build(k) for k in kids))

    return build(sexpr.read(text))


# ---------------------------------------------------------------------------
# Bounded search


@dataclass
class SearchResult:
    derivation: Optional[NdDerivation]
    exhaustive: bool
    nodes: int


def _splits(ctx: Multiset, k: int) -> Iterator[tuple[Multiset, ...]]:
    if k == 1:
        yield (ctx,)
        return
    for a, rest in ctx.splits():
        for tail in _splits(rest, k - 1):
            yield (a,) + tail


class _NdSearch:
    def __init__(self, universe: Iterable[Formula], allow_raa: bool, node_budget: int):
        self.universe = sorted(set(universe), key=formula_key)
        self.allow_raa = allow_raa
        self.budget = node_budget
        self.nodes = 0
        self.exhausted = False
        self.failed: dict[Sequent, int] = {}
        self.found: dict[Sequent, NdDerivation] = {}
        self.shapes = {cls: [f for f in self.universe if isinstance(f, cls)]
                       for cls in (Tensor, Par, With, Plus, Lolli)}
        self.has_one = ONE in self.universe
        self.has_zero = ZERO in self.universe

    def prove(self, s: Sequent, depth: int) -> Optional[NdDerivation]:
        if s in self.found:
            return self.found[s]
        if depth <= 0 or self.failed.get(s, -1) >= depth:
            return None
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return None
        for d in self._candidates(s, depth - 1):
            if d is not None:
                self.found[s] = d
                return d
        if not self.exhausted:
            self.failed[s] = max(self.failed.get(s, -1), depth)
        return None

    def _all(self, subgoals: list[Sequent], depth: int) -> Optional[list[NdDerivation]]:
        out = []
        for g in subgoals:
            d = self.prove(g, depth)
            if d is None:
                return None
            out.append(d)
        return out

    def _try(self, s: Sequent, rule: NdRule, subgoals: list[Sequent], depth: int):
        ps = self._all(subgoals, depth)
        return None if ps is None else NdDerivation(s, rule, tuple(ps))

    def _candidates(self, s: Sequent, d: int):
        ctx, chi = s.context, s.conclusion
        if ctx == Multiset([chi]):
            yield NdDerivation(s, NdRule.Ax)
        if chi == TOP:
            yield NdDerivation(s, NdRule.TopI)
        if chi == ONE and not ctx:
            yield NdDerivation(s, NdRule.OneI)
        # introductions
        if isinstance(chi, Tensor):
            for a, b in ctx.splits():
                yield self._try(s, NdRule.TensorI, [Sequent(a, chi.left), Sequent(b, chi.right)], d)
        if isinstance(chi, With):
            yield self._try(s, NdRule.WithI, [Sequent(ctx, chi.left), Sequent(ctx, chi.right)], d)
        if isinstance(chi, Lolli):
            yield self._try(s, NdRule.LolliI, [Sequent(ctx.add(chi.left), chi.right)], d)
        if isinstance(chi, Par):
            yield self._try(s, NdRule.ParI,
                            [Sequent(ctx.add(negate(chi.left), negate(chi.right)), BOT)], d)
        if isinstance(chi, Plus):
            yield self._try(s, NdRule.PlusI1, [Sequent(ctx, chi.left)], d)
            yield self._try(s, NdRule.PlusI2, [Sequent(ctx, chi.right)], d)
        if self.allow_raa and chi != BOT:
            yield self._try(s, NdRule.Raa, [Sequent(ctx.add(negate(chi)), BOT)], d)
        # eliminations with major premises drawn from the universe
        for m in self.shapes[Lolli]:
            if m.right == chi:
                for a, b in ctx.splits():
                    yield self._try(s, NdRule.LolliE, [Sequent(a, m), Sequent(b, m.left)], d)
        for m in self.shapes[With]:
            if m.left == chi:
                yield self._try(s, NdRule.WithE1, [Sequent(ctx, m)], d)
            if m.right == chi:
                yield self._try(s, NdRule.WithE2, [Sequent(ctx, m)], d)
        for m in self.shapes[Tensor]:
            for a, b in ctx.splits():
                yield self._try(s, NdRule.TensorE,
                                [Sequent(a, m), Sequent(b.add(m.left, m.right), chi)], d)
        for m in self.shapes[Plus]:
            for a, b in ctx.splits():
                yield self._try(s, NdRule.PlusE, [Sequent(a, m), Sequent(b.add(m.left), chi),
                                                  Sequent(b.add(m.right), chi)], d)
        if chi == BOT:
            for m in self.shapes[Par]:
                for a, b, c in _splits(ctx, 3):
                    yield self._try(s, NdRule.ParE, [Sequent(a, m), Sequent(b.add(m.left), BOT),
                                                     Sequent(c.add(m.right), BOT)], d)
        if self.has_one:
            for a, b in ctx.splits():
                if b:
                    yield self._try(s, NdRule.OneE, [Sequent(a, chi), Sequent(b, ONE)], d)
        if self.has_zero:
            for a in ctx.submultisets():
                yield self._try(s, NdRule.ZeroE, [Sequent(a, ZERO)], d)


def search_nd(goal: Sequent, depth: int = 12, allow_raa: bool = True,
              universe: Optional[Iterable[Formula]] = None, node_budget: int = 500_000) -> SearchResult:
    """Depth-bounded exhaustive search for a Subs-free ND derivation.

    Formulas are drawn from ``universe``, by default the subformulas of the
    goal, their negations, and bot.  ``exhaustive`` is False when the node
    budget ran out before the depth bound was fully explored.
    """
    if universe is None:
        universe = subformula_closure(list(goal.context) + [goal.conclusion, BOT])
    search = _NdSearch(universe, allow_raa, node_budget)
    d = None
    # iterative deepening keeps witnesses short
    for bound in range(1, depth + 1):
        d = search.prove(goal, bound)
        if d is not None or search.exhausted:
            break
    return SearchResult(d, not search.exhausted, search.nodes)
