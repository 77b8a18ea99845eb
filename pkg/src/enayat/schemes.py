"""Emitters for truth schemes and for the numeral-comparison relation between interpretations."""
from __future__ import annotations

from typing import Callable, Optional

from .numbering import Numbering
from .setformulas import SetFormulas, eq
from .syntax import (
    And, Atom, Eq, Exists, Forall, Formula, Iff, Implies, Top, conj, exists_block,
    free_vars, max_var, num, numeral_formula, rel, rename_free, var,
)
from .theories import SET_SIG, SUCC0
from .translation import Translation, instantiate, translate


class FreeVariableViolation(ValueError):
    pass


def von_neumann() -> Translation:
    """Numerals as von Neumann ordinals: 0 is the empty set, S adjoins a set to itself."""
    b = SetFormulas(2)
    return Translation("von_neumann", 1, SUCC0, SET_SIG, Top(),
                       {"Z": b.empty(0), "S": b.adj(0, 0, 1)})


def _counter(start: int) -> Callable[[], int]:
    box = [start]

    def fresh() -> int:
        box[0] += 1
        return box[0] - 1
    return fresh


def _place(phi: Formula, groups: list[list[int]], d: int, fresh) -> Formula:
    mapping = {k * d + j: g[j] for k, g in enumerate(groups) for j in range(d)}
    return instantiate(phi, mapping, fresh)


def numeral_through(n: int, n_interp: Translation, style: str = "offset") -> Formula:
    """The numeral for ``n`` as a formula in the ``d`` coordinates ``x0..x(d-1)``."""
    if style == "offset":
        return translate(n_interp, Eq(var(0), num(n)))
    return translate(n_interp, numeral_formula(n, "unfolded"), hooks=False)


def named_numeral(n: int, n_interp: Translation, coords: list[int], fresh, style: str = "offset") -> Formula:
    """``delta(c) & numeral_n(c)`` placed on the coordinates ``coords``."""
    d = n_interp.dim
    parts = []
    if not isinstance(n_interp.delta, Top):
        parts.append(_place(n_interp.delta, [coords], d, fresh))
    parts.append(_place(numeral_through(n, n_interp, style), [coords], d, fresh))
    return conj(*parts)


def emit_scheme(kind: str, numbering: Numbering, n_interp: Translation, item: Formula,
                style: str = "offset", truth: str = "T", sat: str = "sat") -> Formula:
    """A Tarski biconditional (``TB``) or a one-variable satisfaction instance (``USB1``)."""
    d = n_interp.dim
    fv = free_vars(item)
    if kind == "TB":
        if fv:
            raise FreeVariableViolation(f"TB needs a sentence, {item} has free {sorted(fv)}")
        code = numbering.encode(item)
        coords = list(range(d))
        fresh = _counter(d)
        body = And(named_numeral(code, n_interp, coords, fresh, style), rel(truth, *coords))
        return Iff(item, exists_block(coords, body))
    if kind == "USB1":
        if len(fv) != 1:
            raise FreeVariableViolation(f"USB1 needs exactly one free variable, {item} has {sorted(fv)}")
        (v,) = fv
        code = numbering.encode(item)
        x = max_var(item) + 1
        coords = [x + 1 + j for j in range(d)]
        fresh = _counter(x + 1 + d)
        body = And(named_numeral(code, n_interp, coords, fresh, style), rel(sat, x, *coords))
        return Forall(x, Iff(exists_block(coords, body), rename_free(item, {v: x})))
    raise ValueError(f"unknown scheme {kind!r}")


def emit_pudlak_F(n_interp: Translation, m_interp: Translation, membership: str = "In") -> Formula:
    """``x F y``: a partial bijection between the two numeral domains links x to y.

    The bijection sends the zero of the first interpretation to the zero of the
    second and is closed downwards along successor steps.  Free variables are
    ``x0..x(dN-1)`` for x and the next ``dM`` for y.
    """
    if n_interp.target.relations != m_interp.target.relations or \
            membership not in [r for r, _ in n_interp.target.relations]:
        raise ValueError("both interpretations must target the same membership signature")
    dn, dm = n_interp.dim, m_interp.dim
    xs = list(range(dn))
    ys = list(range(dn, dn + dm))
    b = SetFormulas(dn + dm)
    fresh = b.fresh

    def dom(interp: Translation, coords: list[int]) -> Formula:
        if isinstance(interp.delta, Top):
            return Top()
        return _place(interp.delta, [coords], interp.dim, fresh)

    def zero(interp: Translation, coords: list[int]) -> Formula:
        return _place(translate(interp, rel("Z", 0)), [coords], interp.dim, fresh)

    def succ(interp: Translation, a: list[int], c: list[int]) -> Formula:
        return _place(translate(interp, rel("S", 0, 1)), [a, c], interp.dim, fresh)

    def depth(j: int, d: int) -> int:
        inside = 0 if d == 1 else (2 * (j + 1) if j < d - 1 else 2 * (d - 1))
        return 2 + inside

    def within(u: int, d_left: int, d_right: int, body: Callable[[list[int], list[int]], Formula],
               quant: str) -> Formula:
        """Quantify the components of the pair coded by ``u`` through membership chains."""
        comps = [depth(j, d_left) for j in range(d_left)] + [depth(j, d_right) for j in range(d_right)]
        names = [fresh() for _ in comps]
        f = body(names[:d_left], names[d_left:])
        for name, k in reversed(list(zip(names, comps))):
            chain = [fresh() for _ in range(k - 1)]
            links = [u] + chain + [name]
            inner = f
            for i in range(len(links) - 1, 0, -1):
                guard = rel(membership, links[i], links[i - 1])
                if quant == "exists":
                    inner = Exists(links[i], And(guard, inner))
                else:
                    inner = Forall(links[i], Implies(guard, inner))
            f = inner
        return f

    def tp(a: list[int], c: list[int], u: int) -> Formula:
        return b.tuple_pair(a, c, u)

    f = fresh()
    u, v = fresh(), fresh()
    between = Forall(u, Implies(rel(membership, u, f), within(
        u, dn, dm, lambda a, c: conj(dom(n_interp, a), dom(m_interp, c), tp(a, c, u)), "exists")))
    functional = Forall(u, Implies(rel(membership, u, f), Forall(v, Implies(rel(membership, v, f), within(
        u, dn, dm, lambda a, c: within(v, dn, dm, lambda a2, c2: Implies(
            conj(*(eq(p, q) for p, q in zip(a, a2)), tp(a, c, u), tp(a2, c2, v)), eq(u, v)), "forall"),
        "forall")))))
    injective = Forall(u, Implies(rel(membership, u, f), Forall(v, Implies(rel(membership, v, f), within(
        u, dn, dm, lambda a, c: within(v, dn, dm, lambda a2, c2: Implies(
            conj(*(eq(p, q) for p, q in zip(c, c2)), tp(a, c, u), tp(a2, c2, v)), eq(u, v)), "forall"),
        "forall")))))
    u0 = fresh()
    zero_to_zero = Exists(u0, And(rel(membership, u0, f), within(
        u0, dn, dm, lambda a, c: conj(zero(n_interp, a), zero(m_interp, c), tp(a, c, u0)), "exists")))
    u1, u2 = fresh(), fresh()

    def closed(a1: list[int], c1: list[int]) -> Formula:
        a = [fresh() for _ in range(dn)]
        body = Implies(conj(dom(n_interp, a), succ(n_interp, a, a1)), Exists(u2, And(
            rel(membership, u2, f), within(u2, dn, dm, lambda a3, c3: conj(
                *(eq(p, q) for p, q in zip(a3, a)), tp(a3, c3, u2), succ(m_interp, c3, c1)), "exists"))))
        for name in reversed(a):
            body = Forall(name, body)
        return body

    downward = Forall(u1, Implies(rel(membership, u1, f), within(
        u1, dn, dm, lambda a1, c1: Implies(tp(a1, c1, u1), closed(a1, c1)), "forall")))
    u3 = fresh()
    links = Exists(u3, And(rel(membership, u3, f), tp(xs, ys, u3)))
    return Exists(f, conj(links, between, functional, injective, zero_to_zero, downward))
