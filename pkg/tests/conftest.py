import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from mallbes.syntax import BINARY, BOT, ONE, TOP, ZERO, Atom

# derandomized so repeated runs are byte-identical
settings.register_profile("repo", derandomize=True, deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

atom_names = st.sampled_from(["p", "q", "r", "s1", "x_2"])
atoms = atom_names.map(Atom)
atoms_or_bot = st.one_of(atoms, st.just(BOT))
leaves = st.one_of(atoms_or_bot, st.sampled_from([ONE, TOP, ZERO]))


def formulas(max_leaves: int = 12):
    return st.recursive(leaves, lambda sub: st.builds(lambda c, a, b: c(a, b), st.sampled_from(BINARY), sub, sub),
                        max_leaves=max_leaves)


small_formulas = formulas(4)
