"""Seeded generators shared by the unit and acceptance suites."""
from enayat.corpus import FormulaSampler
from enayat.syntax import Eq, Or, unwind_terms, var
from enayat.theories import W_SIG
from enayat.translation import Translation


def random_translation(seed: int, dim: int, sig=W_SIG) -> Translation:
    """A relativized self-translation of ``sig`` with random relational clauses."""
    s = FormulaSampler(seed, max_const=2, names=6)

    def clause(width: int):
        return unwind_terms(s.formula(1, list(range(width)), size=3))

    delta = Or(clause(dim), Eq(var(0), var(0)))
    symbols = {r: clause(a * dim) for r, a in sig.relations}
    equality = clause(2 * dim) if s.rng.random() < 0.5 else None
    return Translation(f"random{seed}", dim, sig, sig, delta, symbols, equality)


def random_relational(sampler: FormulaSampler, free, rank: int = 2, size: int = 5):
    return unwind_terms(sampler.formula(rank, list(free), size=size))
