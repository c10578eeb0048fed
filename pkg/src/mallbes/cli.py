"""Command-line front end.

Reports are line oriented.  Every command prints a ``VERDICT:`` line; other
lines carry a ``KEY:`` prefix so scripts can grep them.  Exit codes:

    0   success, provable, holds
    1   refuted, not provable, violation
    2   inconclusive (a budget ran out)
    64  usage error, unreadable input
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from . import base as base_mod
from . import nd
from .completeness import TranslationError, Verdict, build_simulation_base, decide, translate
from .lemmas import HARNESS_CONFIG, LEMMAS, check_lemma
from .oracle import DEFAULT_CAP, ExhaustionOverflow, OracleVerdict, prove_sequent
from .support import FamilyConfig, eval_clause, generate_family, parse_judgment, verify_witness
from .syntax import ParseError, parse_formula, parse_sequent, print_formula, size

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"ERROR: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None


def _rule_counts(d: nd.NdDerivation) -> str:
    counts = Counter(r.value for r in d.rules())
    return " ".join(f"{k}={counts[k]}" for k in sorted(counts))


def _load_base(path: Optional[str]) -> base_mod.Base:
    return base_mod.structural_base() if path is None else base_mod.parse_base(_read(path))


def _family_config(args, default: FamilyConfig) -> FamilyConfig:
    over = {k: v for k, v in (("size", args.fam_size), ("ctx_bound", args.ctx_bound),
                              ("ext_rules", args.ext_rules), ("depth", args.budget_depth),
                              ("nodes", args.budget_nodes)) if v is not None}
    return FamilyConfig(**{**default.__dict__, **over})


# ---------------------------------------------------------------------------
# Commands


def cmd_parse(args) -> int:
    try:
        if "|-" in args.text:
            s = parse_sequent(args.text)
            print("VERDICT: ok")
            print(f"SEQUENT: {s}")
        else:
            phi = parse_formula(args.text)
            print("VERDICT: ok")
            print(f"FORMULA: {print_formula(phi)}")
            print(f"SIZE: {size(phi)}")
    except ParseError as e:
        print("VERDICT: syntax-error")
        print(f"ERROR: {e}")
        return EXIT_REFUTED
    return EXIT_OK


def cmd_check_nd(args) -> int:
    d = nd.from_sexpr(_read(args.file))
    report = nd.check_nd(d, allow_subs=not args.no_subs, allow_raa=not args.no_raa)
    normal = nd.normal_form_check(d) if args.normal_form else True
    ok = report.ok and normal
    print(f"VERDICT: {'valid' if ok else 'invalid'}")
    print(f"CONCLUSION: {d.conclusion}")
    print(f"RULES: {_rule_counts(d)}")
    for v in report.violations:
        print(f"VIOLATION: {v}")
    if not normal:
        print("VIOLATION: a minor premise of an elimination does not conclude bot")
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_prove(args) -> int:
    s = parse_sequent(args.sequent)
    kw = {k: v for k, v in (("depth", args.budget_depth), ("nodes", args.budget_nodes)) if v is not None}
    r = decide(list(s.context), s.conclusion, seed=args.seed or 0, **kw)
    print(f"VERDICT: {r.verdict.value}")
    print(f"SEARCH-NODES: {r.nodes}")
    if r.verdict is Verdict.UNKNOWN:
        return EXIT_INCONCLUSIVE
    if not r.provable:
        return EXIT_REFUTED
    d = translate(r.derivation, r.mapping)
    print(f"ATOMIC: {r.derivation.to_sexpr(pretty=False)}")
    print(f"ND: {nd.to_sexpr(d, pretty=False)}")
    print(f"RULES: {_rule_counts(d)}")
    if args.out:
        Path(args.out).write_text(nd.to_sexpr(d) + "\n")
        print(f"DERIVATION-FILE: {args.out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    s = parse_sequent(args.sequent)
    try:
        v = prove_sequent(s, cap=args.budget_nodes or DEFAULT_CAP)
    except ExhaustionOverflow as e:
        print("VERDICT: inconclusive")
        print(f"ERROR: {e}")
        return EXIT_INCONCLUSIVE
    print(f"VERDICT: {v.value}")
    return EXIT_OK if v is OracleVerdict.PROVABLE else EXIT_REFUTED


def cmd_support(args) -> int:
    b = _load_base(args.base)
    j = parse_judgment(args.judgment, b)
    cfg = _family_config(args, FamilyConfig())
    fam = generate_family(b, cfg, args.seed or 0)
    r = eval_clause(j, fam)
    print(f"VERDICT: {r.verdict}")
    print(f"FAMILY: size={cfg.size} ext_rules={cfg.ext_rules} ctx_bound={cfg.ctx_bound} "
          f"seed={args.seed or 0}")
    if r.holds:
        return EXIT_OK
    for line in r.witness.render().splitlines():
        print(f"WITNESS: {line}")
    print(f"WITNESS-GENUINE: {str(r.witness.genuine()).lower()}")
    print(f"WITNESS-VERIFIED: {str(verify_witness(r.witness, fam)).lower()}")
    return EXIT_REFUTED


def cmd_base_derive(args) -> int:
    b = base_mod.parse_base(_read(args.base))
    s = parse_sequent(args.sequent)
    kw = {k: v for k, v in (("depth", args.budget_depth), ("nodes", args.budget_nodes)) if v is not None}
    r = base_mod.derive_atomic(b, s, **kw)
    print(f"VERDICT: {r.status.value}")
    if r.status is base_mod.Status.UNKNOWN:
        return EXIT_INCONCLUSIVE
    if not r.found:
        return EXIT_REFUTED
    print(f"DERIVATION: {r.derivation.to_sexpr(pretty=False)}")
    if args.out:
        Path(args.out).write_text(r.derivation.to_sexpr() + "\n")
        print(f"DERIVATION-FILE: {args.out}")
    return EXIT_OK


def cmd_translate(args) -> int:
    s = parse_sequent(args.sequent)
    d = base_mod.AtomicDerivation.from_sexpr(_read(args.file))
    sim = build_simulation_base(list(s.context.distinct()) + [s.conclusion], seed=args.seed or 0)
    atomic = base_mod.verify_atomic(sim.base, d)
    for v in atomic.violations:
        print(f"VIOLATION: {v}")
    try:
        out = translate(d, sim.mapping)
    except TranslationError as e:
        print("VERDICT: invalid")
        print(f"ERROR: {e}")
        return EXIT_REFUTED
    report = nd.check_nd(out)
    ok = atomic.ok and report.ok and out.conclusion == s
    print(f"VERDICT: {'valid' if ok else 'invalid'}")
    print(f"ND: {nd.to_sexpr(out, pretty=False)}")
    print(f"NORMAL-FORM: {str(nd.normal_form_check(out)).lower()}")
    for v in report.violations:
        print(f"VIOLATION: {v}")
    if out.conclusion != s:
        print(f"VIOLATION: derivation concludes {out.conclusion}, expected {s}")
    if args.out:
        Path(args.out).write_text(nd.to_sexpr(out) + "\n")
        print(f"DERIVATION-FILE: {args.out}")
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_lemmas(args) -> int:
    names = args.names or list(LEMMAS)
    unknown = [n for n in names if n not in LEMMAS]
    if unknown:
        raise UsageError(f"unknown lemma(s): {', '.join(unknown)}")
    cfg = _family_config(args, HARNESS_CONFIG)
    seed = 7 if args.seed is None else args.seed
    failed = False
    for name in names:
        rep = check_lemma(name, args.trials, seed, cfg)
        print(f"LEMMA: {rep.summary()}")
        if not rep.ok:
            failed = True
            for k, v in rep.counterexample.items():
                print(f"WITNESS: {name} {k}={v}")
    print(f"VERDICT: {'counterexample' if failed else 'pass'}")
    return EXIT_REFUTED if failed else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--budget-depth", type=int, help="search depth limit")
    shared.add_argument("--budget-nodes", type=int, help="search node limit")
    shared.add_argument("--seed", type=int, help="master seed")
    shared.add_argument("--fam-size", type=int, help="extension family members, root included")
    shared.add_argument("--ctx-bound", type=int, help="largest context enumerated by support")
    shared.add_argument("--ext-rules", type=int, help="rules added per extension step")

    p = _Parser(prog="mallbes", description="MALL natural deduction, atomic bases and support.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("parse", parents=[shared], help="parse and pretty-print a formula or sequent")
    c.add_argument("text")
    c.set_defaults(run=cmd_parse)

    c = sub.add_parser("check-nd", parents=[shared], help="check a natural deduction derivation file")
    c.add_argument("file")
    c.add_argument("--no-subs", action="store_true", help="reject Subs nodes")
    c.add_argument("--no-raa", action="store_true", help="reject Raa nodes")
    c.add_argument("--normal-form", action="store_true", help="also require bot-shaped minor premises")
    c.set_defaults(run=cmd_check_nd)

    c = sub.add_parser("prove", parents=[shared], help="decide a MALL sequent through its simulation base")
    c.add_argument("sequent")
    c.add_argument("--out", help="write the natural deduction derivation here")
    c.set_defaults(run=cmd_prove)

    c = sub.add_parser("oracle", parents=[shared], help="decide a sequent with the one-sided calculus")
    c.add_argument("sequent")
    c.set_defaults(run=cmd_oracle)

    c = sub.add_parser("support", parents=[shared], help="evaluate a support judgment over a family")
    c.add_argument("judgment", help="e.g. 'p, q ||-^{r} p * q'")
    c.add_argument("--base", help="base file for the root (default: structural base)")
    c.set_defaults(run=cmd_support)

    c = sub.add_parser("base-derive", parents=[shared], help="search an atomic sequent in a base")
    c.add_argument("base")
    c.add_argument("sequent")
    c.add_argument("--out", help="write the atomic derivation here")
    c.set_defaults(run=cmd_base_derive)

    c = sub.add_parser("translate", parents=[shared],
                       help="turn a simulation-base derivation into natural deduction")
    c.add_argument("file", help="atomic derivation file")
    c.add_argument("sequent", help="the MALL sequent the simulation base was built for")
    c.add_argument("--out", help="write the natural deduction derivation here")
    c.set_defaults(run=cmd_translate)

    c = sub.add_parser("lemmas", parents=[shared], help="run the randomised lemma harness")
    c.add_argument("names", nargs="*", help=f"subset of: {', '.join(LEMMAS)}")
    c.add_argument("--trials", type=int, default=200)
    c.set_defaults(run=cmd_lemmas)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, ValueError) as e:
        # ValueError covers parse errors in formulas, bases and derivation files
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
