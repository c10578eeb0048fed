"""Enumeration of the small-sequent envelope used for cross-validation."""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterator

from .multiset import Multiset
from .syntax import BINARY, BOT, ONE, TOP, ZERO, Atom, Formula, Sequent, formula_key, size


def formulas_of_size(n: int, atom_names: tuple[str, ...] = ("p", "q")) -> list[Formula]:
    """Every formula with exactly ``n`` constructor nodes, in a fixed order."""
    leaves: list[Formula] = [Atom(a) for a in atom_names] + [ONE, BOT, TOP, ZERO]
    table: dict[int, list[Formula]] = {1: leaves}
    for k in range(2, n + 1):
        out: list[Formula] = []
        for i in range(1, k - 1):
            for left in table.get(i, []):
                for right in table.get(k - 1 - i, []):
                    out.extend(cls(left, right) for cls in BINARY)
        table[k] = out
    return list(table.get(n, []))


def envelope_sequents(max_size: int = 5, max_context: int = 2,
                      atom_names: tuple[str, ...] = ("p", "q")) -> Iterator[Sequent]:
    """Sequents whose formulas have at most ``max_size`` nodes in total."""
    pool = sorted((f for k in range(1, max_size + 1) for f in formulas_of_size(k, atom_names)),
                  key=formula_key)
    for width in range(max_context + 1):
        # each other hypothesis and the conclusion take at least one node
        fits = [f for f in pool if size(f) <= max_size - width]
        for ctx in combinations_with_replacement(fits, width):
            used = sum(size(f) for f in ctx)
            if used >= max_size:
                continue
            ms = Multiset(ctx)
            for concl in pool:
                if used + size(concl) <= max_size:
                    yield Sequent(ms, concl)
