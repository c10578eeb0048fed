"""Bounded evaluation of the support relation over a finite extension family.

Every "for all C ⊇ B" ranges over the family members that extend the
current base, and every "for all Δ" over atom multisets up to
``ctx_bound`` drawn from the family vocabulary.  Derivability means found
by :class:`~mallbes.base.AtomicProver` within its budget.  A verdict of
"holds" is therefore only relative to the family and bounds; a refutation
comes with the derivability facts behind it.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .base import AtomicDerivation, AtomicProver, AtomicRule, Base, Pattern, RuleSchema, Status, \
    is_extension, verify_atomic
from .multiset import EMPTY, Multiset, multisets_up_to
from .syntax import (BOT, ParseError, parse_formula, parse_formula_list, Atom, Formula, Lolli, One, Par, Plus, Sequent, Tensor, Top, With, Zero,
                     atoms_of, formula_key, print_formula)

SUPPORT_DEPTH = 10
SUPPORT_NODES = 20_000


@dataclass(frozen=True)
class FamilyConfig:
    size: int = 4              # members, the root included
    ext_rules: int = 2         # rules added per extension step
    ctx_bound: int = 3         # largest Δ enumerated for "for all Δ"
    pool: tuple[str, ...] = ("a", "b", "c", "d")
    max_premises: int = 2
    max_context: int = 2       # context size of generated rule sequents
    depth: int = SUPPORT_DEPTH
    nodes: int = SUPPORT_NODES


# ---------------------------------------------------------------------------
# Random bases and families


def random_sequent(rng: random.Random, atoms: list[Atom], max_context: int) -> Sequent:
    ctx = [rng.choice(atoms) for _ in range(rng.randint(0, max_context))]
    return Sequent(Multiset(ctx), rng.choice(atoms))


def random_rule(rng: random.Random, cfg: FamilyConfig, name: str = "") -> AtomicRule:
    atoms = [Atom(a) for a in cfg.pool] + [BOT]
    n = rng.choice([0, 0, 1, 1, 2][: cfg.max_premises * 2 + 1])
    prem = tuple(random_sequent(rng, atoms, cfg.max_context) for _ in range(n))
    return AtomicRule(prem, random_sequent(rng, atoms, cfg.max_context), name=name)


def random_base(rng: random.Random, cfg: FamilyConfig = FamilyConfig(), max_rules: int = 4) -> Base:
    k = rng.randint(1, max_rules)
    return Base(tuple(random_rule(rng, cfg, f"r{i}") for i in range(k)))


@dataclass(frozen=True)
class ExtensionFamily:
    bases: tuple[Base, ...]
    seed: int = 0
    config: FamilyConfig = FamilyConfig()

    @property
    def root(self) -> Base:
        return self.bases[0]

    def atoms(self) -> set[Atom]:
        out: set[Atom] = set()
        for b in self.bases:
            out |= b.atoms()
        return out


def generate_family(root: Base, cfg: FamilyConfig = FamilyConfig(), seed: int = 0) -> ExtensionFamily:
    """A random tree of extensions grown from ``root``; member 0 is ``root``."""
    rng = random.Random(f"family:{seed}")
    members = [root]
    for i in range(1, cfg.size):
        parent = members[rng.randrange(len(members))]
        extra = [random_rule(rng, cfg, f"e{i}_{k}") for k in range(rng.randint(1, cfg.ext_rules))]
        members.append(parent.extend(extra))
    return ExtensionFamily(tuple(members), seed, cfg)


def family_of(bases: Iterable[Base], cfg: FamilyConfig = FamilyConfig()) -> ExtensionFamily:
    bases = tuple(bases)
    for b in bases[1:]:
        if not is_extension(b, bases[0]):
            raise ValueError("every family member must extend the root")
    return ExtensionFamily(bases, 0, cfg)


# ---------------------------------------------------------------------------
# Judgments and witnesses


@dataclass(frozen=True)
class SupportJudgment:
    antecedents: Multiset
    superscript: Multiset
    base: Base
    conclusion: Formula

    def __str__(self) -> str:
        ante = ", ".join(print_formula(f) for f in self.antecedents)
        sup = ", ".join(map(str, self.superscript))
        return f"{ante + ' ' if ante else ''}||-^{{{sup}}} {print_formula(self.conclusion)}"


def judgment(conclusion: Formula, superscript: Iterable[Atom] = (), antecedents: Iterable[Formula] = (),
             base: Base = Base()) -> SupportJudgment:
    return SupportJudgment(Multiset(antecedents), Multiset(superscript), base, conclusion)


_JUDGMENT_RE = re.compile(r"(?P<ante>.*?)\|\|-(?:\^\{(?P<sup>[^}]*)\})?(?P<phi>.*)", re.S)


def _shifted(fn, text: str, offset: int, whole: str):
    try:
        return fn(text)
    except ParseError as e:
        raise ParseError(str(e).rsplit(" at position", 1)[0], whole, offset + e.pos) from None


def parse_judgment(text: str, base: Base = Base()) -> SupportJudgment:
    """Read ``A, B ||-^{p, q} phi``; antecedents and the superscript are optional."""
    m = _JUDGMENT_RE.fullmatch(text)
    if m is None:
        raise ParseError("expected '||-'", text, len(text))
    ante = _shifted(parse_formula_list, m["ante"], 0, text)
    sup = _shifted(parse_formula_list, m["sup"] or "", m.start("sup") if m["sup"] else 0, text)
    for a in sup:
        if not isinstance(a, Atom):
            raise ParseError("superscript must list atoms", text, m.start("sup"))
    phi = _shifted(parse_formula, m["phi"], m.start("phi"), text)
    return SupportJudgment(Multiset(ante), Multiset(sup), base, phi)


@dataclass
class Fact:
    member: int
    sequent: Sequent
    derivable: bool
    status: Status
    derivation: Optional[AtomicDerivation] = None

    def __str__(self) -> str:
        verb = "derivable" if self.derivable else f"not derivable ({self.status.value})"
        return f"[C{self.member}] {self.sequent} {verb}"


@dataclass
class Witness:
    clause: str
    member: int
    instance: tuple[Multiset, ...]
    facts: list[Fact] = field(default_factory=list)
    sub: list["Witness"] = field(default_factory=list)

    def all_facts(self) -> list[Fact]:
        out = list(self.facts)
        for w in self.sub:
            out.extend(w.all_facts())
        return out

    def render(self, indent: int = 0) -> str:
        inst = "; ".join("{" + str(m) + "}" for m in self.instance)
        lines = ["  " * indent + f"{self.clause} fails at C{self.member}" + (f" with {inst}" if inst else "")]
        lines += ["  " * (indent + 1) + str(f) for f in self.facts]
        lines += [w.render(indent + 1) for w in self.sub]
        return "\n".join(lines)

    def genuine(self) -> bool:
        """True when every negative fact was refuted exhaustively."""
        return all(f.derivable or f.status is Status.REFUTED for f in self.all_facts())


@dataclass
class SupportResult:
    holds: bool
    witness: Optional[Witness] = None

    @property
    def verdict(self) -> str:
        return "holds-relative-to-family" if self.holds else "refuted"


# ---------------------------------------------------------------------------
# Evaluator


class SupportEvaluator:
    def __init__(self, family: ExtensionFamily, extra_atoms: Iterable[Atom] = (),
                 ctx_bound: Optional[int] = None, depth: Optional[int] = None,
                 nodes: Optional[int] = None):
        cfg = family.config
        self.family = family
        self.ctx_bound = cfg.ctx_bound if ctx_bound is None else ctx_bound
        depth = cfg.depth if depth is None else depth
        nodes = cfg.nodes if nodes is None else nodes
        self.provers = [AtomicProver(b, depth, nodes) for b in family.bases]
        n = len(family.bases)
        self.ext = [[j for j in range(n) if is_extension(family.bases[j], family.bases[i])]
                    for i in range(n)]
        self.vocab = sorted(family.atoms() | set(extra_atoms) | {BOT}, key=str)
        self.deltas = multisets_up_to(self.vocab, self.ctx_bound)
        self.memo: dict[tuple, bool] = {}
        self.why: dict[tuple, Witness] = {}
        self.der_memo: dict[tuple[int, Sequent], tuple[bool, Status, Optional[AtomicDerivation]]] = {}

    def index(self, base: Base) -> int:
        for i, b in enumerate(self.family.bases):
            if b == base:
                return i
        raise ValueError("base is not a member of the family")

    # -- derivability -------------------------------------------------------

    def derive(self, i: int, s: Sequent) -> tuple[bool, Status, Optional[AtomicDerivation]]:
        key = (i, s)
        if key not in self.der_memo:
            r = self.provers[i].derive(s)
            self.der_memo[key] = (r.found, r.status, r.derivation)
        return self.der_memo[key]

    def fact(self, i: int, s: Sequent) -> Fact:
        ok, st, d = self.derive(i, s)
        return Fact(i, s, ok, st, d)

    # -- support ------------------------------------------------------------

    def supports(self, i: int, delta: Multiset, phi: Formula) -> bool:
        """``⊩^Δ_{C_i} φ``."""
        key = ("sup", i, delta, phi)
        if key in self.memo:
            return self.memo[key]
        w = self._sup(i, delta, phi)
        self.memo[key] = w is None
        if w is not None:
            self.why[key] = w
        return w is None

    def infers(self, i: int, antecedents: Iterable[Formula], theta: Multiset, phi: Formula) -> bool:
        """``Γ ⊩^Θ_{C_i} φ`` for a multiset Γ of formulas (the Inf clause)."""
        ante = tuple(sorted(antecedents, key=formula_key))
        if not ante:
            return self.supports(i, theta, phi)
        key = ("inf", i, ante, theta, phi)
        if key in self.memo:
            return self.memo[key]
        w = self._inf(i, ante, theta, phi)
        self.memo[key] = w is None
        if w is not None:
            self.why[key] = w
        return w is None

    def witness_for(self, key: tuple) -> Optional[Witness]:
        return self.why.get(key)

    def _sub_sup(self, i, delta, phi) -> list[Witness]:
        w = self.why.get(("sup", i, delta, phi))
        return [w] if w else []

    def _inf(self, i: int, ante: tuple, theta: Multiset, phi: Formula) -> Optional[Witness]:
        for j in self.ext[i]:
            pools = [[d for d in self.deltas if self.supports(j, d, psi)] for psi in ante]
            for choice in product(*pools):
                total = sum(choice, EMPTY) + theta
                if not self.supports(j, total, phi):
                    return Witness("Inf", j, choice, sub=self._sub_sup(j, total, phi))
        return None

    def _sup(self, i: int, delta: Multiset, phi: Formula) -> Optional[Witness]:
        if isinstance(phi, Atom):
            for j in self.ext[i]:
                for d in self.deltas:
                    pre = self.fact(j, Sequent(d.add(phi), BOT))
                    if not pre.derivable:
                        continue
                    post = self.fact(j, Sequent(delta + d, BOT))
                    if not post.derivable:
                        return Witness("At", j, (d,), [pre, post])
            return None
        if isinstance(phi, Top):
            return None
        if isinstance(phi, With):
            for side in (phi.left, phi.right):
                if not self.supports(i, delta, side):
                    return Witness("&", i, (), sub=self._sub_sup(i, delta, side))
            return None
        if isinstance(phi, Zero):
            for d in self.deltas:
                if not self.supports(i, delta + d, BOT):
                    return Witness("0", i, (d,), sub=self._sub_sup(i, delta + d, BOT))
            return None
        for j in self.ext[i]:
            for inst in self._instances(j, phi):
                total = delta + sum(inst, EMPTY)
                if not self.supports(j, total, BOT):
                    return Witness(_CLAUSE[type(phi)], j, inst, sub=self._sub_sup(j, total, BOT))
        return None

    def _instances(self, j: int, phi: Formula):
        """Superscript tuples satisfying the antecedent of ``phi``'s clause at ``C_j``."""
        ds = self.deltas
        if isinstance(phi, Tensor):
            return [(d,) for d in ds if self.infers(j, (phi.left, phi.right), d, BOT)]
        if isinstance(phi, One):
            return [(d,) for d in ds if self.supports(j, d, BOT)]
        if isinstance(phi, Plus):
            return [(d,) for d in ds
                    if self.infers(j, (phi.left,), d, BOT) and self.infers(j, (phi.right,), d, BOT)]
        if isinstance(phi, Par):
            left = [d for d in ds if self.infers(j, (phi.left,), d, BOT)]
            right = [d for d in ds if self.infers(j, (phi.right,), d, BOT)]
            return list(product(left, right))
        if isinstance(phi, Lolli):
            arg = [d for d in ds if self.supports(j, d, phi.left)]
            cont = [d for d in ds if self.infers(j, (phi.right,), d, BOT)]
            return list(product(arg, cont))
        raise TypeError(f"no support clause for {phi!r}")


_CLAUSE = {Tensor: "⊗", One: "1", Plus: "⊕", Par: "⅋", Lolli: "⊸"}


def eval_clause(j: SupportJudgment, fam: ExtensionFamily, ctx_bound: Optional[int] = None,
                depth: Optional[int] = None, nodes: Optional[int] = None,
                evaluator: Optional[SupportEvaluator] = None) -> SupportResult:
    """Evaluate ``Γ ⊩^Δ_B φ`` relative to ``fam``, whose root must be ``B``."""
    if fam.root != j.base:
        raise ValueError("the family must be rooted at the judgment's base")
    extra = set(j.superscript.distinct())
    for f in (*j.antecedents, j.conclusion):
        extra |= atoms_of(f)
    ev = evaluator or SupportEvaluator(fam, extra, ctx_bound, depth, nodes)
    ante = tuple(sorted(j.antecedents, key=formula_key))
    ok = ev.infers(0, ante, j.superscript, j.conclusion)
    if ok:
        return SupportResult(True)
    key = ("inf", 0, ante, j.superscript, j.conclusion) if ante else ("sup", 0, j.superscript, j.conclusion)
    return SupportResult(False, ev.witness_for(key))


def verify_witness(w: Witness, fam: ExtensionFamily, depth: Optional[int] = None,
                   nodes: Optional[int] = None) -> bool:
    """Re-check every derivability fact of a refutation witness independently."""
    cfg = fam.config
    for f in w.all_facts():
        base = fam.bases[f.member]
        if f.derivable:
            if f.derivation is None or not verify_atomic(base, f.derivation).ok:
                return False
            if f.derivation.conclusion != f.sequent:
                return False
        else:
            r = AtomicProver(base, depth or cfg.depth, nodes or cfg.nodes).derive(f.sequent)
            if r.found:
                return False
    return True


# ---------------------------------------------------------------------------
# The base behind "support without derivability"


def counterexample_base(p: Atom) -> Base:
    """The base whose only rule is ``Θ, p ⊢ ⊥ / Θ ⊢ ⊥`` for every Θ."""
    if p.is_bottom:
        raise ValueError("the atom must differ from bot")
    schema = RuleSchema((Pattern(Multiset([p]), ("T",), BOT),), Pattern(EMPTY, ("T",), BOT),
                        name="drop_" + p.name)
    return Base((), (schema,))
