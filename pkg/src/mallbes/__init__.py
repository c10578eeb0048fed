"""Base-extension semantics for MALL: natural deduction, atomic bases, support and a decision procedure."""

from .base import (AtomicDerivation, AtomicRule, Base, RuleSchema, Status, derive_atomic, parse_base,
                   structural_base, umbrella_base, verify_atomic)
from .completeness import AtomicMapping, Verdict, build_simulation_base, decide, make_mapping, translate
from .lemmas import CORE_LEMMAS, LEMMAS, check_lemma
from .multiset import Multiset
from .nd import NdDerivation, NdRule, check_nd, compose, normal_form_check, search_nd
from .oracle import ExhaustionOverflow, OracleVerdict, prove, prove_sequent
from .support import (ExtensionFamily, FamilyConfig, SupportJudgment, counterexample_base, eval_clause,
                      generate_family, judgment, parse_judgment, verify_witness)
from .syntax import (BOT, ONE, TOP, ZERO, Atom, Formula, Lolli, ParseError, Par, Plus, Sequent, Tensor,
                     With, negate, parse_formula, parse_sequent, print_formula)

__version__ = "0.1.0"
