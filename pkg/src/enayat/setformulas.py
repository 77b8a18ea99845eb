"""Defined notions of weak set theory written out as pure membership formulas.

Membership is the relation ``In(x, y)`` (x is an element of y).  Wherever a
definition has the shape ``forall u. (u in z <-> ...)`` it is emitted in the
logically equivalent bounded form (each direction as a quantifier guarded by
membership), which is what makes pool evaluation tractable.

``SetFormulas`` hands out fresh variables from a counter, so every call
returns a formula whose bound variables do not clash with its arguments.
With ``sim_atoms=True`` equinumerosity is left as the defined atom
``Sim(x, y)`` instead of being unravelled.
"""
from __future__ import annotations

from .syntax import (
    And, Eq, Exists, Forall, Formula, Implies, Not, Or, conj, disj, rel, var,
)


def mem(a: int, b: int) -> Formula:
    return rel("In", a, b)


def eq(a: int, b: int) -> Formula:
    return Eq(var(a), var(b))


class SetFormulas:
    def __init__(self, start: int, sim_atoms: bool = False):
        self.next = start
        self.sim_atoms = sim_atoms

    def fresh(self) -> int:
        self.next += 1
        return self.next - 1

    # bounded quantifiers
    def ex_in(self, a: int, body) -> Formula:
        v = self.fresh()
        return Exists(v, And(mem(v, a), body(v)))

    def all_in(self, a: int, body) -> Formula:
        v = self.fresh()
        return Forall(v, Implies(mem(v, a), body(v)))

    def ex(self, body) -> Formula:
        v = self.fresh()
        return Exists(v, body(v))

    def all(self, body) -> Formula:
        v = self.fresh()
        return Forall(v, body(v))

    # ------------------------------------------------------------- basics
    def empty(self, x: int) -> Formula:
        return self.all(lambda y: Not(mem(y, x)))

    def pair(self, x: int, y: int, z: int) -> Formula:
        """z codes the Kuratowski pair {{x}, {x, y}}."""
        return self.ex_in(z, lambda a: self.ex_in(z, lambda b: conj(
            self.all_in(z, lambda w: Or(eq(w, a), eq(w, b))),
            mem(x, a),
            self.all_in(a, lambda t: eq(t, x)),
            mem(x, b),
            mem(y, b),
            self.all_in(b, lambda t: Or(eq(t, x), eq(t, y))),
        )))

    def is_pair(self, u: int) -> Formula:
        return self.ex_in(u, lambda w: self.ex_in(w, lambda x: self.ex_in(
            u, lambda w2: self.ex_in(w2, lambda y: self.pair(x, y, u)))))

    def first(self, x: int, u: int) -> Formula:
        return self.ex_in(u, lambda w: self.ex_in(w, lambda y: self.pair(x, y, u)))

    def second(self, y: int, u: int) -> Formula:
        return self.ex_in(u, lambda w: self.ex_in(w, lambda x: self.pair(x, y, u)))

    def same_first(self, u: int, v: int) -> Formula:
        return self.ex_in(u, lambda w: self.ex_in(w, lambda x: And(self.first(x, u), self.first(x, v))))

    def same_second(self, u: int, v: int) -> Formula:
        return self.ex_in(u, lambda w: self.ex_in(w, lambda y: And(self.second(y, u), self.second(y, v))))

    def function(self, f: int) -> Formula:
        """Every element is a pair and equal first components force the same pair."""
        return self.all_in(f, lambda u: self.all_in(f, lambda v: conj(
            self.is_pair(u), self.is_pair(v), Implies(self.same_first(u, v), eq(u, v)))))

    def bijection(self, f: int, x: int, y: int) -> Formula:
        """f : x ~ y."""
        return conj(
            self.all_in(f, lambda u: self.ex_in(x, lambda a: self.ex_in(y, lambda b: self.pair(a, b, u)))),
            self.all_in(x, lambda a: self.ex_in(f, lambda u: self.first(a, u))),
            self.all_in(y, lambda b: self.ex_in(f, lambda u: self.second(b, u))),
            self.function(f),
            self.all_in(f, lambda u: self.all_in(f, lambda v: Implies(self.same_second(u, v), eq(u, v)))),
        )

    def sim(self, x: int, y: int) -> Formula:
        if self.sim_atoms:
            return rel("Sim", x, y)
        return self.ex(lambda f: self.bijection(f, x, y))

    def sim_expanded(self, x: int, y: int) -> Formula:
        return self.ex(lambda f: self.bijection(f, x, y))

    # ---------------------------------------------------- set operations
    def adj(self, x: int, y: int, z: int) -> Formula:
        """z = x with y adjoined."""
        return conj(
            self.all_in(z, lambda u: Or(mem(u, x), eq(u, y))),
            self.all_in(x, lambda u: mem(u, z)),
            mem(y, z),
        )

    def union(self, x: int, y: int, z: int) -> Formula:
        return conj(
            self.all_in(z, lambda u: Or(mem(u, x), mem(u, y))),
            self.all_in(x, lambda u: mem(u, z)),
            self.all_in(y, lambda u: mem(u, z)),
        )

    # ------------------------------------------- cardinal arithmetic
    def s0(self, x: int, y: int) -> Formula:
        return self.ex_in(y, lambda z: And(Not(mem(z, x)), self.adj(x, z, y)))

    def a0(self, x: int, y: int, z: int) -> Formula:
        return And(self.all_in(x, lambda u: Not(mem(u, y))), self.union(x, y, z))

    def m0(self, x: int, y: int, z: int) -> Formula:
        return conj(
            self.all_in(x, lambda u: self.all_in(y, lambda v: self.ex_in(z, lambda w: self.pair(u, v, w)))),
            self.all_in(z, lambda w: self.ex_in(x, lambda u: self.ex_in(y, lambda v: self.pair(u, v, w)))),
            self.all_in(z, lambda p: self.all_in(z, lambda q: self.all_in(x, lambda u: self.all_in(
                y, lambda v: Implies(And(self.pair(u, v, p), self.pair(u, v, q)), eq(p, q)))))),
        )

    def s1(self, x: int, y: int) -> Formula:
        return self.ex(lambda u: self.ex(lambda v: conj(self.s0(u, v), self.sim(x, u), self.sim(v, y))))

    def s2(self, x: int, y: int) -> Formula:
        return And(self.s1(x, y), self.all(lambda z: Implies(self.s1(x, z), self.sim(y, z))))

    def s_rho(self, x: int, y: int) -> Formula:
        return Or(self.s2(x, y), And(self.all(lambda z: Not(self.s2(x, z))), self.sim(x, y)))

    def _lift1(self, base, x: int, y: int, z: int) -> Formula:
        return self.ex(lambda u: self.ex(lambda v: self.ex(lambda w: conj(
            base(u, v, w), self.sim(x, u), self.sim(y, v), self.sim(z, w)))))

    def _lift2(self, lifted, x: int, y: int, z: int) -> Formula:
        return And(lifted(x, y, z), self.all(lambda u: Implies(lifted(x, y, u), self.sim(z, u))))

    def _lift_rho(self, two, x: int, y: int, z: int) -> Formula:
        return Or(two(x, y, z), And(self.all(lambda u: Not(two(x, y, u))), self.sim(z, y)))

    def a1(self, x, y, z):
        return self._lift1(self.a0, x, y, z)

    def a2(self, x, y, z):
        return self._lift2(self.a1, x, y, z)

    def a_rho(self, x, y, z):
        return self._lift_rho(self.a2, x, y, z)

    def m1(self, x, y, z):
        return self._lift1(self.m0, x, y, z)

    def m2(self, x, y, z):
        return self._lift2(self.m1, x, y, z)

    def m_rho(self, x, y, z):
        return self._lift_rho(self.m2, x, y, z)

    # ------------------------------------------------------- pre-cardinals
    def pc0(self, x: int) -> Formula:
        return conj(
            self.sim(x, x),
            self.all(lambda y: self.all(lambda z: Implies(And(self.sim(x, y), self.sim(x, z)), self.sim(y, z)))),
            self.all(lambda y: self.all(lambda z: Implies(And(self.sim(x, y), self.sim(y, z)), self.sim(x, z)))),
        )

    def pc1(self, x: int) -> Formula:
        return And(self.pc0(x), self.all(lambda u: self.all(lambda v: self.all(lambda f: Implies(
            conj(self.sim(x, u), self.sim(u, v), self.bijection(f, u, v)), self.sim(u, f))))))

    # ------------------------------------------------------- tuples
    def tuple_code(self, c: int, xs: list[int]) -> Formula:
        """c codes the tuple xs as iterated pairs <x0, <x1, ...>>; a 1-tuple is its element."""
        if len(xs) == 1:
            return eq(c, xs[0])
        return self.ex_in(c, lambda w: self.ex_in(w, lambda r: And(
            self.pair(xs[0], r, c), self.tuple_code(r, xs[1:]))))

    def tuple_pair(self, xs: list[int], ys: list[int], u: int) -> Formula:
        """u codes the pair of the tuple codes of xs and ys."""
        if len(xs) == 1 and len(ys) == 1:
            return self.pair(xs[0], ys[0], u)
        return self.ex_in(u, lambda w: self.ex_in(w, lambda c: self.ex_in(
            u, lambda w2: self.ex_in(w2, lambda e: conj(
                self.pair(c, e, u), self.tuple_code(c, xs), self.tuple_code(e, ys))))))
