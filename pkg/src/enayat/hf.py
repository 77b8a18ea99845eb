"""Hereditarily finite sets as a model of weak set theory.

Two kinds of evaluation live here.  ``hf_eval`` evaluates membership formulas
with quantifiers ranging over an explicit pool; quantifiers guarded by
membership (``exists v. (v in a & ...)``) range over the actual elements of
``a`` and are therefore exact.  The semantic deciders settle the cardinal
arithmetic notions directly by counting, which is what makes instances with
large numerals tractable.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Iff, Implies, Lt, Not, Or, Top,
    conj, free_vars, size,
)


class HFSet:
    """An interned hereditarily finite set; equal sets are the same object."""

    __slots__ = ("members", "_key", "__weakref__")
    _table: dict = {}
    _insert = threading.Lock()

    def __new__(cls, members: Iterable["HFSet"] = ()):
        fs = frozenset(members)
        hit = cls._table.get(fs)
        if hit is not None:
            return hit
        with cls._insert:
            hit = cls._table.get(fs)
            if hit is None:
                hit = super().__new__(cls)
                hit.members = fs
                hit._key = None
                cls._table[fs] = hit
        return hit

    def __iter__(self):
        return iter(self.sorted_members())

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: "HFSet") -> bool:
        return x in self.members

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other) -> bool:
        return self is other

    def __reduce__(self):
        return (HFSet, (tuple(self.members),))

    @property
    def key(self) -> tuple:
        """Deterministic total order: by rank, then by the sorted keys of the members."""
        if self._key is None:
            ks = sorted(m.key for m in self.members)
            rank = max((k[0] + 1 for k in ks), default=0)
            self._key = (rank, len(ks), tuple(ks))
        return self._key

    @property
    def rank(self) -> int:
        return self.key[0]

    def sorted_members(self) -> list["HFSet"]:
        return sorted(self.members, key=lambda m: m.key)

    def __lt__(self, other: "HFSet") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return "{" + ",".join(str(m) for m in self.sorted_members()) + "}"

    __repr__ = __str__


EMPTY = HFSet()


def hf(*members: HFSet) -> HFSet:
    return HFSet(members)


def parse_hf(text: str) -> HFSet:
    """Read nested-brace notation such as ``{{},{{}}}``."""
    s = "".join(text.split())
    pos = 0

    def item() -> HFSet:
        nonlocal pos
        if pos >= len(s) or s[pos] != "{":
            raise ValueError(f"expected '{{' at position {pos} in {text!r}")
        pos += 1
        out = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return HFSet()
        while True:
            out.append(item())
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == "}":
                pos += 1
                return HFSet(out)
            raise ValueError(f"expected ',' or '}}' at position {pos} in {text!r}")

    v = item()
    if pos != len(s):
        raise ValueError(f"trailing text in HF literal {text!r}")
    return v


def von_neumann(n: int) -> HFSet:
    x = EMPTY
    for _ in range(n):
        x = HFSet(x.members | {x})
    return x


def kpair(a: HFSet, b: HFSet) -> HFSet:
    """Kuratowski pair {{a}, {a, b}}."""
    return hf(hf(a), hf(a, b))


def tuple_code(xs: Sequence[HFSet]) -> HFSet:
    if len(xs) == 1:
        return xs[0]
    return kpair(xs[0], tuple_code(xs[1:]))


# ------------------------------------------------------------------ pools

@dataclass(frozen=True)
class Pool:
    """Quantifier ranges: ``items`` for universal, ``items + witnesses`` for existential."""
    items: tuple
    tag: str
    witnesses: tuple = ()

    def __post_init__(self):
        if len(set(self.items)) != len(self.items):
            raise ValueError("pool items must be distinct")

    @cached_property
    def existential(self) -> tuple:
        seen = set(self.items)
        extra = tuple(w for w in self.witnesses if w not in seen and not seen.add(w))
        return self.items + extra

    def __len__(self) -> int:
        return len(self.items)

    def with_witnesses(self, more: Iterable[HFSet], tag: Optional[str] = None) -> "Pool":
        return Pool(self.items, tag or f"{self.tag}+witnesses", tuple(dict.fromkeys(self.witnesses + tuple(more))))


def _sorted_unique(xs: Iterable[HFSet]) -> tuple:
    return tuple(sorted(set(xs), key=lambda m: m.key))


def rank_pool(k: int) -> Pool:
    """All sets of rank at most ``k``: 1, 2, 4, 16 sets for k = 0..3."""
    level = [EMPTY]
    for _ in range(k):
        level = [HFSet(c) for r in range(len(level) + 1) for c in itertools.combinations(level, r)]
    return Pool(_sorted_unique(level), f"rank-{k}")


def power_pool(pool: Pool) -> Pool:
    items = [HFSet(c) for r in range(len(pool.items) + 1) for c in itertools.combinations(pool.items, r)]
    return Pool(_sorted_unique(items), f"{pool.tag}-power")


def pair_closure(pool: Pool, kuratowski_only: bool = False) -> Pool:
    """Add Kuratowski pairs of members, along with the singletons and doubletons they are built from."""
    extra = []
    for a in pool.items:
        for b in pool.items:
            extra.append(kpair(a, b))
            if not kuratowski_only:
                extra.append(hf(a, b))
    return Pool(_sorted_unique(list(pool.items) + extra), f"{pool.tag}-pairs")


def bijections_between(x: HFSet, y: HFSet) -> list[HFSet]:
    xs, ys = x.sorted_members(), y.sorted_members()
    if len(xs) != len(ys):
        return []
    return [HFSet(kpair(a, b) for a, b in zip(xs, perm)) for perm in itertools.permutations(ys)]


def bijection_witnesses(base: Sequence[HFSet]) -> list[HFSet]:
    """Every bijection between two subsets of ``base``, as a set of Kuratowski pairs."""
    subsets = [HFSet(c) for r in range(len(base) + 1) for c in itertools.combinations(base, r)]
    out = []
    for x in subsets:
        for y in subsets:
            if len(x) == len(y):
                out.extend(bijections_between(x, y))
    return _sorted_unique(out)


def relation_near_misses(base: Sequence[HFSet]) -> list[HFSet]:
    """Pair sets that fail to be bijections: a repeated first or second component, or a gap."""
    out = []
    for a, b, c in itertools.product(base, repeat=3):
        if b is not c:
            out.append(hf(kpair(a, b), kpair(a, c)))
            out.append(hf(kpair(b, a), kpair(c, a)))
    return _sorted_unique(out)


POOLS: dict[str, Callable[[], Pool]] = {
    "rank2": lambda: rank_pool(2),
    "rank2-power": lambda: power_pool(rank_pool(2)),
    "rank2-pairs": lambda: pair_closure(rank_pool(2)),
    "rank3": lambda: rank_pool(3),
}


def get_pool(name: str) -> Pool:
    if name not in POOLS:
        raise KeyError(f"unknown pool {name!r}; known: {', '.join(POOLS)}")
    return POOLS[name]()


def representatives(n: int) -> Pool:
    """One set of each cardinality 0..n: the von Neumann numerals."""
    return Pool(tuple(von_neumann(k) for k in range(n + 1)), f"von-neumann-{n}")


# ------------------------------------------------------------ evaluation

class UncoveredVariable(ValueError):
    pass


def miniscope(f: Formula) -> Formula:
    """Shrink quantifier scopes across conjunctions and guarded implications.

    Conjuncts of an existential body that do not mention the bound variable
    move out; so do antecedent conjuncts of a universal implication.  The
    remaining conjuncts are ordered smallest first.
    """
    if isinstance(f, (Top, Bot, Atom, Eq, Lt)):
        return f
    if isinstance(f, Not):
        return Not(miniscope(f.body))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(miniscope(f.left), miniscope(f.right))
    body = miniscope(f.body)
    v = f.var
    if isinstance(f, Exists):
        parts = _conjuncts(body)
        outer = [p for p in parts if v not in free_vars(p)]
        inner = [p for p in parts if v in free_vars(p)]
        inner.sort(key=lambda p: (not _guard_of(p, v), size(p)))
        core = Exists(v, conj(*inner)) if inner else Top()
        return conj(*outer, core) if outer else core
    if isinstance(body, Implies):
        parts = _conjuncts(body.left)
        outer = [p for p in parts if v not in free_vars(p)]
        inner = [p for p in parts if v in free_vars(p)]
        inner.sort(key=lambda p: (not _guard_of(p, v), size(p)))
        core = Forall(v, Implies(conj(*inner), body.right) if inner else body.right)
        return Implies(conj(*outer), core) if outer else core
    return Forall(v, body)


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _guard_of(p: Formula, v: int) -> Optional[int]:
    """The set variable ``a`` when ``p`` is ``In(v, a)`` with ``a`` different from ``v``."""
    if isinstance(p, Atom) and p.rel == "In" and len(p.args) == 2:
        a, b = p.args
        if a.var == v and b.var is not None and b.var != v and not a.offset and not b.offset:
            return b.var
    return None


class _Compiler:
    def __init__(self, pool: Pool, predicates: dict):
        self.pool = pool
        self.predicates = predicates

    def compile(self, f: Formula):
        if isinstance(f, Top):
            return lambda env: True
        if isinstance(f, Bot):
            return lambda env: False
        if isinstance(f, Eq):
            a, b = f.left.var, f.right.var
            return lambda env: env[a] is env[b]
        if isinstance(f, Atom):
            vs = [t.var for t in f.args]
            if f.rel == "In" and len(vs) == 2:
                a, b = vs
                return lambda env: env[a] in env[b].members
            pred = self.predicates.get(f.rel)
            if pred is None:
                raise ValueError(f"no interpretation for {f.rel}/{len(vs)}")
            return lambda env: pred(*(env[v] for v in vs))
        if isinstance(f, Lt):
            raise ValueError("< has no meaning over sets")
        if isinstance(f, Not):
            b = self.compile(f.body)
            return lambda env: not b(env)
        if isinstance(f, And):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda env: l(env) and r(env)
        if isinstance(f, Or):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda env: l(env) or r(env)
        if isinstance(f, Implies):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda env: (not l(env)) or r(env)
        if isinstance(f, Iff):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda env: l(env) == r(env)
        return self.quantifier(f)

    def quantifier(self, f: Formula):
        v = f.var
        is_ex = isinstance(f, Exists)
        if is_ex:
            first = _conjuncts(f.body)[0]
        else:
            first = _conjuncts(f.body.left)[0] if isinstance(f.body, Implies) else None
        guard = _guard_of(first, v) if first is not None else None
        body = self.compile(f.body)
        fv = tuple(sorted(free_vars(f)))
        memo: dict = {}
        pool_range = self.pool.existential if is_ex else self.pool.items

        def run(env):
            key = tuple(env[w] for w in fv)
            hit = memo.get(key)
            if hit is not None:
                return hit
            rng = env[guard].members if guard is not None else pool_range
            had = v in env
            old = env.get(v)
            result = not is_ex
            for val in rng:
                env[v] = val
                if body(env) == is_ex:
                    result = is_ex
                    break
            if had:
                env[v] = old
            else:
                env.pop(v, None)
            memo[key] = result
            return result

        return run


def hf_eval(f: Formula, pool: Pool, assignment: Optional[dict] = None,
            predicates: Optional[dict] = None, scope: bool = True) -> bool:
    """Evaluate a membership formula with unguarded quantifiers ranging over the pool.

    Existential quantifiers also range over ``pool.witnesses``.  Defined atoms
    such as ``Sim`` are evaluated by the callables in ``predicates``.
    """
    env = dict(assignment or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise UncoveredVariable(f"no value for {sorted('x%d' % v for v in missing)}")
    g = miniscope(f) if scope else f
    return bool(_Compiler(pool, predicates or {}).compile(g)(env))


# ------------------------------------------------------- semantic deciders

def equinum(x: HFSet, y: HFSet) -> bool:
    return len(x) == len(y)


def s0(x: HFSet, y: HFSet) -> bool:
    return x.members <= y.members and len(y.members - x.members) == 1


def a0(x: HFSet, y: HFSet, z: HFSet) -> bool:
    return not (x.members & y.members) and z.members == x.members | y.members


def m0(x: HFSet, y: HFSet, z: HFSet) -> bool:
    return z.members == frozenset(kpair(u, v) for u in x.members for v in y.members)


def s1(x: HFSet, y: HFSet) -> bool:
    return len(y) == len(x) + 1


def a1(x: HFSet, y: HFSet, z: HFSet) -> bool:
    return len(z) == len(x) + len(y)


def m1(x: HFSet, y: HFSet, z: HFSet) -> bool:
    return len(z) == len(x) * len(y)


SEMANTIC = {
    "S0": s0, "A0": a0, "M0": m0,
    "S1": s1, "A1": a1, "M1": m1,
    "S2": s1, "A2": a1, "M2": m1,
    "S_rho": s1, "A_rho": a1, "M_rho": m1,
    "PC0": lambda x: True,
    "PC1": lambda x: True,
    "Sim": equinum,
    "Empty": lambda x: len(x) == 0,
}
"""In HF every cardinal witness exists, so the second-level notions coincide
with the first and the fallback clauses never fire; equinumerosity is a global
equivalence and a bijection has as many pairs as its domain has elements."""


def semantic_decide(pred: str, *args: HFSet) -> bool:
    if pred not in SEMANTIC:
        raise KeyError(f"unknown predicate {pred!r}")
    return SEMANTIC[pred](*args)


MACRO_PREDICATES = {
    "Empty": SEMANTIC["Empty"],
    "Succ": s1,
    "Add": a1,
    "Mul": m1,
    "Sim": equinum,
}


def verify_r_instance(kind: str, n: int, m: Optional[int] = None) -> bool:
    """Translate an R instance by cardinal arithmetic and evaluate it over HF.

    The defined atoms are decided by counting and quantifiers range over one
    von Neumann numeral per cardinality up to the largest numeral plus two.
    Every atom is invariant under replacing a set by an equinumerous one, so
    this representative pool is exact here.
    """
    from .theories import axioms_r
    from .translation import builtin, translate
    if n > 64 or (m is not None and m > 64):
        raise ValueError("indices above 64 are not supported")
    sentence = axioms_r(kind, n, m)
    value = {"add": n + (m or 0), "mul": n * (m or 0)}.get(kind, 0)
    top = max(n, m or 0, value)
    pool = representatives(top + 2)
    return hf_eval(translate(builtin("rho_macro"), sentence), pool, predicates=MACRO_PREDICATES)
