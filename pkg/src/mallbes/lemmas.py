"""Randomised checks of the support lemmas.

Each check draws a base, an extension family and small formulas from a
per-trial seed, evaluates both sides with :class:`SupportEvaluator`, and
reports the first instance where the statement fails.  Trials where the
statement's hypothesis does not hold are counted as vacuous.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .base import Base, Pattern, RuleSchema, structural_base
from .multiset import Multiset
from .support import FamilyConfig, SupportEvaluator, generate_family, random_base
from .syntax import (BINARY, BOT, ONE, TOP, ZERO, Atom, Formula, Lolli, Plus, Sequent, Tensor,
                     atoms_of, negate, print_formula)

HARNESS_CONFIG = FamilyConfig(size=3, ext_rules=2, ctx_bound=3)


@dataclass
class Trial:
    rng: random.Random
    cfg: FamilyConfig
    root: Base
    ev: Optional[SupportEvaluator] = None
    note: dict = field(default_factory=dict)

    def atoms(self) -> list[Atom]:
        return [Atom(a) for a in self.cfg.pool]

    def atom(self, with_bot: bool = True) -> Atom:
        pool = self.atoms() + ([BOT] if with_bot else [])
        return self.rng.choice(pool)

    def atom_multiset(self, max_size: int) -> Multiset:
        return Multiset(self.atom() for _ in range(self.rng.randint(0, max_size)))

    def formula(self, max_size: int = 3) -> Formula:
        if max_size < 3 or self.rng.random() < 0.35:
            r = self.rng.random()
            if r < 0.8:
                return self.atom()
            return self.rng.choice([ONE, TOP, ZERO])
        left = self.formula(max_size // 2)
        right = self.formula(max_size - 1 - max_size // 2)
        return self.rng.choice(BINARY)(left, right)

    def evaluator(self, *formulas: Formula, extra: Multiset = Multiset()) -> SupportEvaluator:
        fam = generate_family(self.root, self.cfg, self.rng.randrange(2 ** 31))
        used: set[Atom] = set(extra.distinct())
        for f in formulas:
            used |= atoms_of(f)
        self.ev = SupportEvaluator(fam, used)
        return self.ev


# each check returns None when vacuous, True on pass, False on a counterexample


def _derivability_implies_support(t: Trial):
    base_rules = [r for r in t.root.rules if not r.premises]
    if base_rules and t.rng.random() < 0.6:
        s = t.rng.choice(base_rules).conclusion
    else:
        s = Sequent(t.atom_multiset(2), t.atom())
    ev = t.evaluator(s.conclusion, extra=s.context)
    t.note.update(sequent=str(s))
    found = ev.derive(0, s)[0]
    if not found:
        return None
    return ev.supports(0, s.context, s.conclusion)


def _bottom_special(t: Trial):
    gamma = t.atom_multiset(2)
    ev = t.evaluator(extra=gamma)
    sup = ev.supports(0, gamma, BOT)
    der = ev.derive(0, Sequent(gamma, BOT))[0]
    t.note.update(gamma=str(gamma), supports=sup, derivable=der)
    return sup == der


def _monotonicity(t: Trial):
    ante = [t.formula(2)] if t.rng.random() < 0.5 else []
    delta = t.atom_multiset(1)
    phi = t.formula(3)
    ev = t.evaluator(phi, *ante, extra=delta)
    j = t.rng.randrange(len(ev.family.bases))
    t.note.update(antecedents=[print_formula(a) for a in ante], delta=str(delta),
                  phi=print_formula(phi), member=j)
    if not ev.infers(0, ante, delta, phi):
        return None
    return ev.infers(j, ante, delta, phi)


def _validity_via_s(t: Trial):
    t.root = structural_base()
    ante = [t.formula(2)] if t.rng.random() < 0.5 else []
    phi = t.formula(3)
    ev = t.evaluator(phi, *ante)
    at_s = ev.infers(0, ante, Multiset(), phi)
    everywhere = all(ev.infers(j, ante, Multiset(), phi) for j in range(len(ev.family.bases)))
    t.note.update(antecedents=[print_formula(a) for a in ante], phi=print_formula(phi),
                  at_s=at_s, at_all=everywhere)
    return at_s == everywhere


def _floating_atom(t: Trial):
    gamma = Multiset(t.atom() for _ in range(t.rng.randint(1, 2)))
    delta = t.atom_multiset(1)
    ev = t.evaluator(extra=gamma + delta)
    left = ev.infers(0, list(gamma), delta, BOT)
    right = ev.supports(0, gamma + delta, BOT)
    t.note.update(gamma=str(gamma), delta=str(delta), lifted=left, merged=right)
    return left == right


def _negating_formula(t: Trial):
    phi = t.formula(3)
    gamma = t.atom_multiset(1)
    ev = t.evaluator(phi, extra=gamma)
    left = ev.infers(0, [phi], gamma, BOT)
    right = ev.supports(0, gamma, negate(phi))
    t.note.update(phi=print_formula(phi), gamma=str(gamma), infers_bot=left, supports_neg=right)
    return left == right


def _interchangeable_sets(t: Trial):
    gamma = Multiset(t.atom() for _ in range(t.rng.randint(1, 2)))
    phi = t.formula(3)
    ev = t.evaluator(phi, extra=gamma)
    left = ev.infers(0, list(gamma), Multiset(), phi)
    right = ev.supports(0, gamma, phi)
    t.note.update(gamma=str(gamma), phi=print_formula(phi), antecedent=left, superscript=right)
    return left == right


def _generic_tensor(t: Trial):
    a, b, chi = t.formula(1), t.formula(1), t.formula(3)
    gamma, delta = t.atom_multiset(1), t.atom_multiset(1)
    ev = t.evaluator(a, b, chi, extra=gamma + delta)
    t.note.update(phi=print_formula(a), psi=print_formula(b), chi=print_formula(chi),
                  gamma=str(gamma), delta=str(delta))
    if not (ev.supports(0, gamma, Tensor(a, b)) and ev.infers(0, [a, b], delta, chi)):
        return None
    return ev.supports(0, gamma + delta, chi)


def _generic_implication(t: Trial):
    a, b, chi = t.formula(1), t.formula(1), t.formula(3)
    gamma, delta, theta = t.atom_multiset(1), t.atom_multiset(1), t.atom_multiset(1)
    ev = t.evaluator(a, b, chi, extra=gamma + delta + theta)
    t.note.update(phi=print_formula(a), psi=print_formula(b), chi=print_formula(chi),
                  gamma=str(gamma), delta=str(delta), theta=str(theta))
    if not (ev.supports(0, gamma, Lolli(a, b)) and ev.supports(0, delta, a)
            and ev.infers(0, [b], theta, chi)):
        return None
    return ev.supports(0, gamma + delta + theta, chi)


def _generic_one(t: Trial):
    chi = t.formula(3)
    gamma, delta = t.atom_multiset(1), t.atom_multiset(1)
    ev = t.evaluator(chi, extra=gamma + delta)
    t.note.update(chi=print_formula(chi), gamma=str(gamma), delta=str(delta))
    if not (ev.supports(0, gamma, ONE) and ev.supports(0, delta, chi)):
        return None
    return ev.supports(0, gamma + delta, chi)


def _generic_plus(t: Trial):
    a, b, chi = t.formula(1), t.formula(1), t.formula(3)
    gamma, delta = t.atom_multiset(1), t.atom_multiset(1)
    ev = t.evaluator(a, b, chi, extra=gamma + delta)
    t.note.update(phi=print_formula(a), psi=print_formula(b), chi=print_formula(chi),
                  gamma=str(gamma), delta=str(delta))
    if not (ev.supports(0, gamma, Plus(a, b)) and ev.infers(0, [a], delta, chi)
            and ev.infers(0, [b], delta, chi)):
        return None
    return ev.supports(0, gamma + delta, chi)


def _generic_zero(t: Trial):
    if t.rng.random() < 0.5:
        # an explosive atom makes the hypothesis satisfiable
        g = t.atom(with_bot=False)
        t.root = t.root.extend(schemas=[RuleSchema((), Pattern(Multiset([g]), ("T",), BOT), "boom")])
    chi = t.formula(3)
    gamma, delta = t.atom_multiset(1), t.atom_multiset(1)
    ev = t.evaluator(chi, extra=gamma + delta)
    t.note.update(chi=print_formula(chi), gamma=str(gamma), delta=str(delta))
    if not ev.supports(0, gamma, ZERO):
        return None
    return ev.supports(0, gamma + delta, chi)


def _semantic_raa(t: Trial):
    ante = [t.formula(1)] if t.rng.random() < 0.5 else []
    phi = t.formula(3)
    ev = t.evaluator(phi, *ante)
    t.note.update(antecedents=[print_formula(a) for a in ante], phi=print_formula(phi))
    if not ev.infers(0, ante + [negate(phi)], Multiset(), BOT):
        return None
    return ev.infers(0, ante, Multiset(), phi)


LEMMAS: dict[str, Callable[[Trial], Optional[bool]]] = {
    "derivability-implies-support": _derivability_implies_support,
    "bottom-special": _bottom_special,
    "monotonicity": _monotonicity,
    "validity-via-S": _validity_via_s,
    "floating-atom": _floating_atom,
    "negating-formula": _negating_formula,
    "interchangeable-sets": _interchangeable_sets,
    "generic-tensor": _generic_tensor,
    "generic-implication": _generic_implication,
    "generic-one": _generic_one,
    "generic-plus": _generic_plus,
    "generic-zero": _generic_zero,
    "semantic-raa": _semantic_raa,
}

CORE_LEMMAS = ("bottom-special", "monotonicity", "validity-via-S", "derivability-implies-support",
               "floating-atom", "negating-formula")


@dataclass
class LemmaReport:
    lemma: str
    trials: int
    seed: int
    passed: int = 0
    vacuous: int = 0
    counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def summary(self) -> str:
        verdict = "pass" if self.ok else "counterexample"
        return (f"{self.lemma}: {verdict} (trials={self.trials} seed={self.seed} "
                f"checked={self.passed} vacuous={self.vacuous})")


def check_lemma(lemma: str, trials: int = 200, seed: int = 7,
                config: FamilyConfig = HARNESS_CONFIG) -> LemmaReport:
    if lemma not in LEMMAS:
        raise KeyError(f"unknown lemma {lemma!r}; known: {', '.join(LEMMAS)}")
    check = LEMMAS[lemma]
    report = LemmaReport(lemma, trials, seed)
    for i in range(trials):
        rng = random.Random(f"{seed}:{lemma}:{i}")
        t = Trial(rng, config, random_base(rng, config))
        outcome = check(t)
        if outcome is None:
            report.vacuous += 1
        elif outcome:
            report.passed += 1
        else:
            report.counterexample = {"trial": i, "root": t.root.to_text().strip().splitlines(),
                                     **{k: v for k, v in t.note.items()}}
            if t.ev is not None:
                report.counterexample["family"] = [b.to_text().strip().splitlines()
                                                   for b in t.ev.family.bases]
            break
    return report
