"""Formula corpora: exhaustive enumeration by code length and seeded sampling.

Enumeration produces exactly the canonical forms (desugared, bound variables
numbered by depth above the free ones), so every item is its own
serialization fixed point.  Random sampling uses ``random.Random`` (Mersenne
Twister) seeded explicitly, which is portable across Python builds.
"""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, Optional

from .syntax import (
    And, Atom, Eq, Exists, Forall, Formula, Iff, Implies, Lt, Not, Or, Term,
    free_vars, normalize_bound, quantifier_rank,
)

W_RELATIONS = (("Z", 1), ("S", 2))
WPRIME_RELATIONS = (("Z", 1), ("S", 2), ("E", 1))


def _index_len(i: int) -> int:
    return i.bit_length() + 1 if i else 2


@lru_cache(maxsize=None)
def _terms(length: int, nvars: int) -> tuple[Term, ...]:
    out = []
    # S^n(0): n + 1 letters
    if length >= 1:
        out.append(Term(None, length - 1))
    for i in range(nvars):
        n = length - _index_len(i)
        if n >= 0:
            out.append(Term(i, n))
    return tuple(out)


@lru_cache(maxsize=None)
def _formulas(length: int, nvars: int, relations: tuple) -> tuple[Formula, ...]:
    out: list[Formula] = []
    if length < 2:
        return ()
    rest = length - 1
    # atoms
    for name, arity in relations:
        if arity == 1:
            out.extend(Atom(name, (t,)) for t in _terms(rest, nvars))
        else:
            for a in range(1, rest):
                for s in _terms(a, nvars):
                    for t in _terms(rest - a, nvars):
                        out.append(Atom(name, (s, t)))
    for cls in (Eq, Lt):
        for a in range(1, rest):
            for s in _terms(a, nvars):
                for t in _terms(rest - a, nvars):
                    out.append(cls(s, t))
    out.extend(Not(g) for g in _formulas(rest, nvars, relations))
    for cls in (And, Or):
        for a in range(2, rest - 1):
            lefts = _formulas(a, nvars, relations)
            if not lefts:
                continue
            rights = _formulas(rest - a, nvars, relations)
            out.extend(cls(p, q) for p in lefts for q in rights)
    body = rest - _index_len(nvars)
    for cls in (Exists, Forall):
        out.extend(cls(nvars, g) for g in _formulas(body, nvars + 1, relations))
    return tuple(out)


def enumerate_formulas(length: int, free: int = 0, relations: tuple = W_RELATIONS) -> tuple[Formula, ...]:
    """Canonical formulas of exactly ``length`` letters whose free variables are ``x0..x(free-1)``.

    Formulas in which some of those variables do not occur are included.
    """
    return _formulas(length, free, relations)


def sentences_up_to(max_len: int, relations: tuple = W_RELATIONS) -> list[Formula]:
    out = []
    for n in range(1, max_len + 1):
        out.extend(enumerate_formulas(n, 0, relations))
    return out


def one_variable_formulas(max_len: int, relations: tuple = W_RELATIONS) -> Iterator[Formula]:
    """Canonical formulas with exactly the free variable x0."""
    for n in range(1, max_len + 1):
        for f in enumerate_formulas(n, 1, relations):
            if free_vars(f) == {0}:
                yield f


# ------------------------------------------------------------ random

class FormulaSampler:
    """Seeded random formulas over the W (optionally W') language.

    Variables are drawn from a pool of ``names`` indices; quantifiers rebind
    them, so a deep formula keeps at most ``names`` variables live.
    """

    def __init__(self, seed: int, max_const: int = 8, names: int = 3, evenness: bool = False,
                 implications: bool = False):
        self.rng = random.Random(seed)
        self.max_const = max_const
        self.names = names
        self.evenness = evenness
        self.implications = implications

    def term(self, scope: list[int]) -> Term:
        r = self.rng
        off = r.choice([0, 0, 0, 1, 1, 2, r.randint(0, self.max_const)])
        if scope and r.random() < 0.8:
            return Term(r.choice(scope), off)
        return Term(None, off)

    def atom(self, scope: list[int]) -> Formula:
        r = self.rng
        kinds = ["lt", "lt", "eq", "eq", "z", "s"] + (["e", "e"] if self.evenness else [])
        k = r.choice(kinds)
        if k == "lt":
            return Lt(self.term(scope), self.term(scope))
        if k == "eq":
            return Eq(self.term(scope), self.term(scope))
        if k == "z":
            return Atom("Z", (self.term(scope),))
        if k == "e":
            return Atom("E", (self.term(scope),))
        return Atom("S", (self.term(scope), self.term(scope)))

    def formula(self, rank: int, scope: list[int], size: int = 4) -> Formula:
        r = self.rng
        if size <= 1 or (rank == 0 and r.random() < 0.4):
            if rank > 0:
                return self.quantified(rank, scope, size)
            return self.atom(scope)
        choice = r.random()
        if rank > 0 and choice < 0.45:
            return self.quantified(rank, scope, size)
        if choice < 0.6:
            return Not(self.formula(rank, scope, size - 1))
        ops = [And, Or] + ([Implies, Iff] if self.implications else [])
        op = r.choice(ops)
        left_rank = rank if r.random() < 0.5 else r.randint(0, rank)
        right_rank = rank if left_rank < rank else r.randint(0, rank)
        return op(self.formula(left_rank, scope, size // 2), self.formula(right_rank, scope, size // 2))

    def quantified(self, rank: int, scope: list[int], size: int) -> Formula:
        r = self.rng
        v = r.randrange(self.names)
        inner = sorted(set(scope) | {v})
        body = self.formula(rank - 1, inner, max(size - 1, 2))
        return (Exists if r.random() < 0.5 else Forall)(v, body)

    def sentence(self, rank: int, size: int = 6) -> Formula:
        while True:
            f = self.formula(rank, [], size)
            if not free_vars(f) and quantifier_rank(f) <= rank:
                return f

    def with_free(self, free: list[int], rank: int, size: int = 6) -> Formula:
        while True:
            f = self.formula(rank, list(free), size)
            if free_vars(f) == set(free):
                return f


def random_sentences(seed: int, count: int, max_rank: int = 3, evenness: bool = False,
                     max_const: int = 8, names: int = 3) -> list[Formula]:
    s = FormulaSampler(seed, max_const=max_const, names=names, evenness=evenness)
    return [s.sentence(s.rng.randint(0, max_rank)) for _ in range(count)]


def gen_corpus(seed: int, max_len: int, count: int, max_rank: int = 3) -> list[Formula]:
    """All canonical W-sentences of at most ``max_len`` letters, then ``count`` random ones."""
    base = sentences_up_to(max_len)
    seen = set(base)
    extra = []
    sampler = FormulaSampler(seed)
    while len(extra) < count:
        f = normalize_bound(sampler.sentence(sampler.rng.randint(1, max_rank)))
        if f not in seen:
            seen.add(f)
            extra.append(f)
    return base + extra
