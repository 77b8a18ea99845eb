"""Bounded brute-force evaluation in the standard model (N; 0, S, <, E).

This is the independent oracle for the quantifier-elimination decider and
shares no code with it.  A quantifier nested under ``d`` others ranges over
``{0 .. bound * (d + 1)}`` (one level further in when the formula has free
variables), so inner quantifiers always have room above every value chosen
further out; ``forall x. exists y. x < y`` is therefore true at every bound.
Evaluation is vectorized: each bound variable owns a numpy axis.  An
existential whose body has a conjunct fixing the variable outright (``Z(y)``,
``S(t, y)``, ``S(y, t)``, ``y = t``) takes that value directly, masked to the
quantifier's range, which keeps unwound successor chains cheap; disjunctions
below the existential are distributed first when that exposes such a conjunct.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Iff, Implies, Lt, Not, Or,
    Term, Top, free_vars, max_constant, quantifier_rank,
)

_CELL_LIMIT = 1 << 21
_BIG = 1 << 60
_ALTERNATIVES = 16
_LITERAL = (Atom, Eq, Lt, Top, Bot)


class UncoveredVariable(ValueError):
    pass


def bounded_eval(f: Formula, bound: int, assignment: Optional[dict] = None) -> bool:
    assignment = dict(assignment or {})
    missing = free_vars(f) - set(assignment)
    if missing:
        raise UncoveredVariable(f"no value for {sorted('x%d' % v for v in missing)}")
    ev = _Evaluator(bound, quantifier_rank(f), 1 if free_vars(f) else 0)
    env = {v: ("val", n) for v, n in assignment.items()}
    out = ev.run(f, env, 0)
    return bool(np.all(out)) if isinstance(out, np.ndarray) else bool(out)


def oracle_bound(f: Formula) -> int:
    """The harness bound ``maxconst + 2^(q+2)`` for a formula of rank ``q``."""
    return max_constant(f) + 2 ** (quantifier_rank(f) + 2)


def stable_eval(f: Formula, assignment: Optional[dict] = None, bound: Optional[int] = None) -> Optional[bool]:
    """Evaluate at ``B`` and ``2B``; ``None`` when the two disagree."""
    b = oracle_bound(f) if bound is None else bound
    first = bounded_eval(f, b, assignment)
    second = bounded_eval(f, 2 * b, assignment)
    return first if first == second else None


class _Evaluator:
    def __init__(self, bound: int, rank: int, level0: int):
        self.bound = bound
        self.ndim = max(rank, 1)
        self.level0 = level0

    def size(self, depth: int) -> int:
        return self.bound * (depth + self.level0 + 1) + 1

    def term(self, t: Term, env):
        if t.var is None:
            return t.offset
        kind, x = env[t.var]
        if kind in ("val", "arr"):
            return x + t.offset
        axis, n = x
        shape = [1] * self.ndim
        shape[axis] = n
        base = np.arange(n, dtype=np.int64).reshape(shape)
        if t.offset >= _BIG:
            return base.astype(object) + t.offset
        return base + t.offset

    def cells(self, f: Formula, env) -> int:
        total = 1
        for v in free_vars(f):
            kind, x = env[v]
            if kind == "axis":
                total *= x[1]
            elif kind == "arr":
                total *= int(np.size(x))
        return total

    def run(self, f: Formula, env, depth: int):
        if isinstance(f, Top):
            return True
        if isinstance(f, Bot):
            return False
        if isinstance(f, Eq):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Lt):
            return self.term(f.left, env) < self.term(f.right, env)
        if isinstance(f, Atom):
            args = [self.term(t, env) for t in f.args]
            if f.rel == "Z" and len(args) == 1:
                return args[0] == 0
            if f.rel == "S" and len(args) == 2:
                return args[0] + 1 == args[1]
            if f.rel == "E" and len(args) == 1:
                return args[0] % 2 == 0
            raise ValueError(f"no standard interpretation for {f.rel}/{len(args)}")
        if isinstance(f, Not):
            return np.logical_not(self.run(f.body, env, depth))
        if isinstance(f, And):
            parts, stack = [], [f]
            while stack:
                g = stack.pop()
                if isinstance(g, And):
                    stack += [g.right, g.left]
                else:
                    parts.append(g)
            parts.sort(key=lambda g: not isinstance(g.body if isinstance(g, Not) else g, _LITERAL))
            acc = True
            for g in parts:
                acc = np.logical_and(acc, self.run(g, env, depth))
                if not isinstance(acc, np.ndarray) and not acc:
                    return False
            return acc
        if isinstance(f, Or):
            a = self.run(f.left, env, depth)
            if a is True or (not isinstance(a, np.ndarray) and a):
                return True
            return np.logical_or(a, self.run(f.right, env, depth))
        if isinstance(f, Implies):
            return self.run(Or(Not(f.left), f.right), env, depth)
        if isinstance(f, Iff):
            return np.equal(np.asarray(self.run(f.left, env, depth), dtype=bool),
                            np.asarray(self.run(f.right, env, depth), dtype=bool))
        return self.quantifier(f, env, depth)

    @staticmethod
    def _pin_atom(y: int, g: Formula, inner: frozenset):
        """``(term, delta)`` when the atom forces ``y = term + delta``; the term avoids ``inner``."""
        if isinstance(g, Atom) and g.rel == "Z" and len(g.args) == 1 and g.args[0].var == y:
            return None, -g.args[0].offset
        if isinstance(g, Eq):
            (s, t), step = (g.left, g.right), 0
        elif isinstance(g, Atom) and g.rel == "S" and len(g.args) == 2:
            (s, t), step = g.args, 1
        else:
            return None
        if t.var == y and s.var != y and s.var not in inner:
            return s, step - t.offset
        if s.var == y and t.var != y and t.var not in inner:
            return t, -step - s.offset
        return None

    def _find_pin(self, y: int, body: Formula, inner: frozenset = frozenset()):
        """A conjunct fixing ``y``, possibly below further existentials."""
        stack = [(body, inner)]
        while stack:
            g, inner = stack.pop()
            if isinstance(g, And):
                stack += [(g.right, inner), (g.left, inner)]
            elif isinstance(g, Exists):
                if g.var != y:
                    stack.append((g.body, inner | {g.var}))
            else:
                found = self._pin_atom(y, g, inner)
                if found is not None:
                    return found
        return None

    def _split_or(self, y: int, g: Formula, inner: frozenset = frozenset()):
        """Halves of the first disjunction, reachable through conjunctions and existentials,
        with a disjunct that fixes ``y``."""
        if isinstance(g, Or):
            if any(self._find_pin(y, h, inner) is not None for h in (g.left, g.right)):
                return g.left, g.right
            return None
        if isinstance(g, And):
            r = self._split_or(y, g.left, inner)
            if r is not None:
                return And(r[0], g.right), And(r[1], g.right)
            r = self._split_or(y, g.right, inner)
            if r is not None:
                return And(g.left, r[0]), And(g.left, r[1])
        if isinstance(g, Exists) and g.var != y:
            r = self._split_or(y, g.body, inner | {g.var})
            if r is not None:
                return Exists(g.var, r[0]), Exists(g.var, r[1])
        return None

    def _alternatives(self, y: int, body: Formula, budget: int = _ALTERNATIVES):
        """Bodies whose disjunction under ``exists y`` matches ``body``, each with a pin for ``y``."""
        todo, done = [body], []
        while todo:
            g = todo.pop()
            if self._find_pin(y, g) is not None:
                done.append(g)
                continue
            halves = self._split_or(y, g)
            if halves is None or len(done) + len(todo) + 2 > budget:
                return None
            todo += [halves[1], halves[0]]
        return done

    def pinned(self, y: int, body: Formula, env, depth: int, n: int):
        alts = self._alternatives(y, body)
        if alts is None:
            return None
        acc = False
        for alt in alts:
            term, delta = self._find_pin(y, alt)
            v = (0 if term is None else self.term(term, env)) + delta
            if not isinstance(v, np.ndarray):
                if not 0 <= v < n:
                    continue
                r = self.run(alt, {**env, y: ("val", v)}, depth + 1)
            else:
                ok = (v >= 0) & (v < n)
                r = ok & np.asarray(self.run(alt, {**env, y: ("arr", np.where(ok, v, 0))}, depth + 1), dtype=bool)
            acc = acc | r
            if not isinstance(acc, np.ndarray) and acc:
                return True
        return acc if isinstance(acc, np.ndarray) and acc.ndim else bool(acc)

    def quantifier(self, f, env, depth: int):
        n = self.size(depth)
        is_ex = isinstance(f, Exists)
        if is_ex:
            r = self.pinned(f.var, f.body, env, depth, n)
            if r is not None:
                return r
        vec_env = {**env, f.var: ("axis", (depth, n))}
        if self.cells(f.body, vec_env) <= _CELL_LIMIT:
            r = self.run(f.body, vec_env, depth + 1)
            if not isinstance(r, np.ndarray):
                return bool(r)
            return r.any(axis=depth, keepdims=True) if is_ex else r.all(axis=depth, keepdims=True)
        acc = None
        for value in range(n):
            r = self.run(f.body, {**env, f.var: ("val", value)}, depth + 1)
            r = np.asarray(r, dtype=bool)
            acc = r if acc is None else (acc | r if is_ex else acc & r)
            if is_ex and acc.all():
                break
            if not is_ex and not acc.any():
                break
        return acc
