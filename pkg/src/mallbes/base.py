"""Atomic bases, their extensions, and deducibility over atomic sequents.

A base holds concrete atomic rules and rule schemas whose contexts may
contain metavariables (written ``?G``).  Ax and Subs are never stored: the
engine supplies them.

Search uses a normal form for deductions.  Any deduction of ``Γ ⊢ r`` is
either Ax, or a rule whose conclusion ``Σ ⊢ r`` is followed by one Subs per
atom ``s`` of ``Σ``, each discharging ``s`` with a deduction of ``Γ_s ⊢ s``
where the ``Γ_s`` partition ``Γ``.  Cut atoms therefore only ever come from
rule conclusions, so no separate cut vocabulary is needed.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional

from . import sexpr
from .multiset import EMPTY, Multiset
from .syntax import Atom, ParseError, Sequent, is_atom_name, parse_sequent

DEFAULT_DEPTH = 24
DEFAULT_NODES = 200_000


def atomic_sequent(context: Iterable[Atom | str], conclusion: Atom | str) -> Sequent:
    ctx = [a if isinstance(a, Atom) else Atom(a) for a in context]
    concl = conclusion if isinstance(conclusion, Atom) else Atom(conclusion)
    return Sequent(Multiset(ctx), concl)


def _check_atomic(s: Sequent) -> Sequent:
    if not s.is_atomic:
        raise ValueError(f"not an atomic sequent: {s}")
    return s


# ---------------------------------------------------------------------------
# Rules and schemas


@dataclass(frozen=True)
class AtomicRule:
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for s in (*self.premises, self.conclusion):
            _check_atomic(s)

    def __str__(self) -> str:
        if not self.premises:
            return f"{self.conclusion}."
        return "; ".join(map(str, self.premises)) + f" ==> {self.conclusion}."


@dataclass(frozen=True)
class Pattern:
    """A sequent pattern: concrete atoms plus context metavariables."""

    atoms: Multiset
    metas: tuple[str, ...]
    conclusion: Atom

    def __str__(self) -> str:
        parts = [f"?{m}" for m in self.metas] + [str(a) for a in self.atoms]
        ctx = ", ".join(parts)
        return f"{ctx} |- {self.conclusion}" if ctx else f"|- {self.conclusion}"

    def instantiate(self, binding: dict[str, Multiset]) -> Sequent:
        ctx = self.atoms
        for m in self.metas:
            ctx = ctx + binding[m]
        return Sequent(ctx, self.conclusion)


@dataclass(frozen=True)
class RuleSchema:
    premises: tuple[Pattern, ...]
    conclusion: Pattern
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(set(self.conclusion.metas)) != len(self.conclusion.metas):
            raise ValueError(f"metavariable repeated in schema conclusion: {self.conclusion}")

    @property
    def fresh_metas(self) -> tuple[str, ...]:
        """Metavariables that occur in premises only."""
        seen = set(self.conclusion.metas)
        out: list[str] = []
        for p in self.premises:
            for m in p.metas:
                if m not in seen:
                    seen.add(m)
                    out.append(m)
        return tuple(out)

    def __str__(self) -> str:
        if not self.premises:
            return f"==> {self.conclusion}."
        return "; ".join(map(str, self.premises)) + f" ==> {self.conclusion}."


def _sort_key(r) -> tuple[str, str]:
    return (str(r), r.name)


@dataclass(frozen=True)
class Base:
    rules: tuple[AtomicRule, ...] = ()
    schemas: tuple[RuleSchema, ...] = ()

    def __post_init__(self):
        # canonical order keeps every search deterministic
        object.__setattr__(self, "rules", tuple(sorted(set(self.rules), key=_sort_key)))
        object.__setattr__(self, "schemas", tuple(sorted(set(self.schemas), key=_sort_key)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Base) and set(self.rules) == set(other.rules)
                and set(self.schemas) == set(other.schemas))

    def __hash__(self) -> int:
        return hash((frozenset(self.rules), frozenset(self.schemas)))

    def extend(self, rules: Iterable[AtomicRule] = (), schemas: Iterable[RuleSchema] = ()) -> "Base":
        return Base(self.rules + tuple(rules), self.schemas + tuple(schemas))

    def atoms(self) -> set[Atom]:
        out: set[Atom] = set()
        for r in self.rules:
            for s in (*r.premises, r.conclusion):
                out |= set(s.context.distinct()) | {s.conclusion}
        for sc in self.schemas:
            for p in (*sc.premises, sc.conclusion):
                out |= set(p.atoms.distinct()) | {p.conclusion}
        return out

    def __len__(self) -> int:
        return len(self.rules) + len(self.schemas)

    def to_text(self) -> str:
        return "".join(f"{r}\n" for r in (*self.rules, *self.schemas))


def structural_base() -> Base:
    return Base()


def is_extension(c: Base, b: Base) -> bool:
    """True iff ``c`` contains every rule and schema of ``b``."""
    return set(b.rules) <= set(c.rules) and set(b.schemas) <= set(c.schemas)


# ---------------------------------------------------------------------------
# Base file format

_META_RE = re.compile(r"\?([A-Za-z][A-Za-z0-9_]*)")


def _parse_pattern(text: str, lineno: int) -> Pattern:
    if "|-" not in text:
        raise ParseError(f"line {lineno}: expected '|-' in {text.strip()!r}")
    left, right = text.split("|-", 1)
    concl = right.strip()
    if not is_atom_name(concl):
        raise ParseError(f"line {lineno}: conclusion must be an atom, found {concl!r}")
    atoms: list[Atom] = []
    metas: list[str] = []
    for item in (x.strip() for x in left.split(",")) if left.strip() else []:
        m = _META_RE.fullmatch(item)
        if m:
            metas.append(m.group(1))
        elif is_atom_name(item):
            atoms.append(Atom(item))
        else:
            raise ParseError(f"line {lineno}: bad context item {item!r}")
    return Pattern(Multiset(atoms), tuple(metas), Atom(concl))


def parse_rule(text: str, lineno: int = 1, index: int = 0) -> AtomicRule | RuleSchema:
    body = text.strip()
    if not body.endswith("."):
        raise ParseError(f"line {lineno}: rule must end with '.'")
    body = body[:-1]
    if "==>" in body:
        prem_text, concl_text = body.split("==>", 1)
        prems = [_parse_pattern(p, lineno) for p in prem_text.split(";") if p.strip()]
    else:
        prems, concl_text = [], body
    concl = _parse_pattern(concl_text, lineno)
    if concl.metas or any(p.metas for p in prems):
        return RuleSchema(tuple(prems), concl, name=f"schema{index}")
    return AtomicRule(tuple(Sequent(p.atoms, p.conclusion) for p in prems),
                      Sequent(concl.atoms, concl.conclusion), name=f"rule{index}")


def parse_base(text: str) -> Base:
    """One rule per line; blank lines and ``#`` comments are ignored."""
    rules: list[AtomicRule] = []
    schemas: list[RuleSchema] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        r = parse_rule(line, lineno, len(rules) + len(schemas))
        (schemas if isinstance(r, RuleSchema) else rules).append(r)
    return Base(tuple(rules), tuple(schemas))


def umbrella_base() -> Base:
    return parse_base("l |- r.\nr |- p.\nl |- p ==> |- u.\n")


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class AtomicDerivation:
    conclusion: Sequent
    rule: str
    premises: tuple["AtomicDerivation", ...] = ()

    def nodes(self) -> Iterator["AtomicDerivation"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def to_sexpr(self, pretty: bool = True, _indent: int = 0) -> str:
        kids = [p.to_sexpr(pretty, _indent + 1) for p in self.premises]
        return sexpr.write(self.rule, str(self.conclusion), kids, _indent, pretty)

    @staticmethod
    def from_sexpr(text: str) -> "AtomicDerivation":
        def build(n):
            rule, seq, kids = n
            return AtomicDerivation(_check_atomic(parse_sequent(seq)), rule, tuple(build(k) for k in kids))
        return build(sexpr.read(text))


def ax(a: Atom) -> AtomicDerivation:
    return AtomicDerivation(Sequent(Multiset([a]), a), "Ax")


def subs(left: AtomicDerivation, right: AtomicDerivation) -> AtomicDerivation:
    cut = left.conclusion.conclusion
    ctx = left.conclusion.context + right.conclusion.context.remove(cut)
    return AtomicDerivation(Sequent(ctx, right.conclusion.conclusion), "Subs", (left, right))


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class AtomicViolation:
    path: tuple[int, ...]
    rule: str
    message: str
    nearest: str = ""

    def __str__(self) -> str:
        where = "root" if not self.path else "root." + ".".join(map(str, self.path))
        s = f"{where} [{self.rule}]: {self.message}"
        return s + (f" (nearest rule: {self.nearest})" if self.nearest else "")


@dataclass
class AtomicReport:
    violations: list[AtomicViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(map(str, self.violations))


def _multi_splits(ms: Multiset, k: int) -> Iterator[tuple[Multiset, ...]]:
    if k == 0:
        if not ms:
            yield ()
        return
    if k == 1:
        yield (ms,)
        return
    for a, rest in ms.splits():
        for tail in _multi_splits(rest, k - 1):
            yield (a,) + tail


def match_schema(schema: RuleSchema, premises: tuple[Sequent, ...], conclusion: Sequent) -> bool:
    """Whether some instantiation of ``schema`` is exactly ``premises / conclusion``."""
    if len(premises) != len(schema.premises) or conclusion.conclusion != schema.conclusion.conclusion:
        return False
    if not schema.conclusion.atoms <= conclusion.context:
        return False
    rest = conclusion.context - schema.conclusion.atoms
    for pat, s in zip(schema.premises, premises):
        if pat.conclusion != s.conclusion or not pat.atoms <= s.context:
            return False
    cm = schema.conclusion.metas
    for shares in _multi_splits(rest, len(cm)):
        if _match_premises(schema, premises, dict(zip(cm, shares))):
            return True
    return False


def _match_premises(schema: RuleSchema, premises, binding: dict[str, Multiset]) -> bool:
    # bind premise-only metavariables, preferring premises with a single unknown
    pending = list(zip(schema.premises, premises))
    binding = dict(binding)
    while pending:
        pending.sort(key=lambda ps: sum(m not in binding for m in ps[0].metas))
        pat, s = pending[0]
        unknown = [m for m in pat.metas if m not in binding]
        known = Multiset()
        for m in pat.metas:
            if m in binding:
                known = known + binding[m]
        need = pat.atoms + known
        if not need <= s.context:
            return False
        left = s.context - need
        if not unknown:
            if left:
                return False
            pending.pop(0)
            continue
        distinct = list(dict.fromkeys(unknown))
        if len(distinct) == 1 and len(unknown) == 1:
            binding[distinct[0]] = left
            pending.pop(0)
            continue
        for shares in _multi_splits(left, len(unknown)):
            trial = dict(binding)
            okay = True
            for m, sh in zip(unknown, shares):
                if m in trial and trial[m] != sh:
                    okay = False
                    break
                trial[m] = sh
            if okay and _match_premises(schema, premises, trial):
                return True
        return False
    return True


def _node_ok(base: Base, d: AtomicDerivation, by_name: dict) -> Optional[tuple[str, str]]:
    c = d.conclusion
    ps = tuple(p.conclusion for p in d.premises)
    if d.rule == "Ax":
        if ps or c.context != Multiset([c.conclusion]):
            return ("Ax must conclude p |- p with no premises", "")
        return None
    if d.rule == "Subs":
        if len(ps) != 2:
            return ("Subs takes two premises", "")
        cut = ps[0].conclusion
        if cut not in ps[1].context:
            return (f"cut atom {cut} missing from the right premise's context", "")
        if ps[1].conclusion != c.conclusion or ps[0].context + ps[1].context.remove(cut) != c.context:
            return ("Subs conclusion must be Γ, Π |- r", "")
        return None
    # the label is a hint; any rule of the base may license the node
    candidates = [*by_name.get(d.rule, ()), *base.rules, *base.schemas]
    for r in candidates:
        if isinstance(r, AtomicRule):
            if r.premises == ps and r.conclusion == c:
                return None
        elif match_schema(r, ps, c):
            return None
    same = [r for r in (*base.rules, *base.schemas)
            if (r.conclusion.conclusion == c.conclusion)]
    nearest = str(same[0]) if same else ""
    return (f"no rule of the base yields {c} from the given premises", nearest)


def verify_atomic(base: Base, d: AtomicDerivation) -> AtomicReport:
    by_name: dict[str, list] = {}
    for r in (*base.rules, *base.schemas):
        if r.name:
            by_name.setdefault(r.name, []).append(r)
    report = AtomicReport()
    stack = [(d, ())]
    while stack:
        n, path = stack.pop()
        try:
            _check_atomic(n.conclusion)
            bad = _node_ok(base, n, by_name)
        except ValueError as exc:
            bad = (str(exc), "")
        if bad:
            report.violations.append(AtomicViolation(path, n.rule, *bad))
        for i in reversed(range(len(n.premises))):
            stack.append((n.premises[i], path + (i,)))
    report.violations.sort(key=lambda v: v.path)
    return report


# ---------------------------------------------------------------------------
# Search


class Status(enum.Enum):
    FOUND = "found"
    REFUTED = "refuted"        # exhaustive: no deduction exists
    UNKNOWN = "not-found-within-budget"


@dataclass
class DeriveResult:
    status: Status
    derivation: Optional[AtomicDerivation] = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


class _Budget(Exception):
    pass


_INF = float("inf")


class AtomicProver:
    """Reusable deducibility engine for one base with a persistent memo."""

    def __init__(self, base: Base, depth: int = DEFAULT_DEPTH, nodes: int = DEFAULT_NODES):
        self.base = base
        self.depth = depth
        self.node_budget = nodes
        self.nodes = 0
        self.found: dict[Sequent, AtomicDerivation] = {}
        self.failed: dict[Sequent, float] = {}
        self.by_concl: dict[Atom, list] = {}
        for r in (*base.rules, *base.schemas):
            self.by_concl.setdefault(r.conclusion.conclusion, []).append(r)

    def producible(self, a: Atom) -> bool:
        return a in self.by_concl

    def derive(self, goal: Sequent) -> DeriveResult:
        _check_atomic(goal)
        self.nodes = 0
        try:
            for bound in range(1, self.depth + 1):
                d, exhaustive = self._prove(goal, bound)
                if d is not None:
                    return DeriveResult(Status.FOUND, d, self.nodes)
                if exhaustive:
                    return DeriveResult(Status.REFUTED, None, self.nodes)
        except _Budget:
            pass
        return DeriveResult(Status.UNKNOWN, None, self.nodes)

    def derivable(self, goal: Sequent) -> Optional[bool]:
        """True, False (exhaustively refuted) or None (unknown)."""
        r = self.derive(goal)
        return {Status.FOUND: True, Status.REFUTED: False}.get(r.status)

    # -- core ---------------------------------------------------------------

    def _prove(self, s: Sequent, depth: int) -> tuple[Optional[AtomicDerivation], bool]:
        hit = self.found.get(s)
        if hit is not None:
            return hit, True
        f = self.failed.get(s)
        if f is not None and f >= depth:
            return None, f == _INF
        if depth <= 0:
            return None, False
        if s.context.count(s.conclusion) == 1 and len(s.context) == 1:
            d = ax(s.conclusion)
            self.found[s] = d
            return d, True
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise _Budget
        exhaustive = True
        for r in self.by_concl.get(s.conclusion, ()):
            d, ex = (self._apply_rule(r, s, depth - 1) if isinstance(r, AtomicRule)
                     else self._apply_schema(r, s, depth - 1))
            if d is not None:
                self.found[s] = d
                return d, True
            exhaustive &= ex
        self.failed[s] = _INF if exhaustive else max(self.failed.get(s, 0), depth)
        return None, exhaustive

    def _premises(self, seqs: Iterable[Sequent], depth: int):
        out = []
        for p in seqs:
            d, ex = self._prove(p, depth)
            if d is None:
                return None, ex
            out.append(d)
        return out, True

    def _discharge(self, targets: list[Atom], ctx: Multiset, depth: int, exact: bool, ex: list):
        """Yield ``(parts, rest)``: deductions of ``Γ_t ⊢ t`` with ``Γ_t`` taken from ``ctx``.

        ``ex[0]`` is cleared when some share failed only for lack of depth.
        """
        if not targets:
            if not exact or not ctx:
                yield [], ctx
            return
        t, more = targets[0], targets[1:]
        # identity share first, then larger shares for producible atoms
        options: list[Multiset] = []
        if t in ctx:
            options.append(Multiset([t]))
        if self.producible(t):
            options.extend(sub for sub in ctx.submultisets() if sub != Multiset([t]))
        for share in options:
            d, e = self._prove(Sequent(share, t), depth)
            if d is None:
                ex[0] = ex[0] and e
                continue
            for parts, rest in self._discharge(more, ctx - share, depth, exact, ex):
                yield [d] + parts, rest

    def _wrap(self, core: AtomicDerivation, parts: list[AtomicDerivation]) -> AtomicDerivation:
        d = core
        for p in parts:
            d = d if p.rule == "Ax" else subs(p, d)
        return d

    def _apply_rule(self, r: AtomicRule, s: Sequent, depth: int):
        prem, ex = self._premises(r.premises, depth)
        if prem is None:
            return None, ex
        core = AtomicDerivation(r.conclusion, r.name or "rule", tuple(prem))
        flag = [True]
        for parts, _ in self._discharge(list(r.conclusion.context), s.context, depth, True, flag):
            return self._wrap(core, parts), True
        return None, flag[0]

    def _apply_schema(self, sc: RuleSchema, s: Sequent, depth: int):
        pat = sc.conclusion
        metas = pat.metas
        exhaustive = True
        flag = [True]
        for parts, rest in self._discharge(list(pat.atoms), s.context, depth, not metas, flag):
            if not metas:
                shares_iter: Iterable[tuple[Multiset, ...]] = [()]
            else:
                shares_iter = _multi_splits(rest, len(metas))
            for shares in shares_iter:
                binding = dict(zip(metas, shares))
                fresh = sc.fresh_metas
                fresh_iter = product(*(list(s.context.submultisets()) for _ in fresh)) if fresh else [()]
                for fr in fresh_iter:
                    b = {**binding, **dict(zip(fresh, fr))}
                    seqs = [p.instantiate(b) for p in sc.premises]
                    prem, ex = self._premises(seqs, depth)
                    if prem is None:
                        exhaustive &= ex
                        continue
                    concl = Sequent(pat.atoms + sum(shares, EMPTY), pat.conclusion)
                    core = AtomicDerivation(concl, sc.name or "schema", tuple(prem))
                    return self._wrap(core, parts), True
        # premise-only metavariables were tried on goal submultisets only
        return None, exhaustive and flag[0] and not sc.fresh_metas


def derive_atomic(base: Base, goal: Sequent, depth: int = DEFAULT_DEPTH,
                  nodes: int = DEFAULT_NODES) -> DeriveResult:
    if depth <= 0 or nodes <= 0:
        raise ValueError("budget must be positive")
    return AtomicProver(base, depth, nodes).derive(goal)
