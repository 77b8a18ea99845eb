"""Quantifier elimination for Th(N; 0, S, <).

Quantifier-free material is kept as a DNF: a set of conjuncts, each a
frozenset of normalized difference atoms ``(op, lbase, loff, rbase, roff)``
with ``op`` in ``<``/``=`` and ``base`` a variable index or ``None`` for 0.
Quantifiers are eliminated innermost first; ``forall`` goes through
``~exists~``.  Conjuncts are pruned by a negative-cycle test on the
difference-constraint graph, so unsatisfiable branches never accumulate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Iff, Implies, Lt, Not, Or,
    Term, Top, BOT, TOP, conj, disj, fold_numerals, free_vars, unwind_terms,
)


class SignatureViolation(ValueError):
    pass


class NotASentence(ValueError):
    pass


DnfAtom = tuple  # (op, lbase, loff, rbase, roff)
Conjunct = frozenset
TRUE_DNF = frozenset({frozenset()})
FALSE_DNF = frozenset()


def _key(base) -> int:
    return -1 if base is None else base


def norm_atom(op: str, lb, lo: int, rb, ro: int):
    """Normalize a difference atom; returns ``True``/``False`` for decided atoms."""
    if lb == rb:
        return lo < ro if op == "<" else lo == ro
    m = min(lo, ro)
    lo, ro = lo - m, ro - m
    if op == "<":
        if rb is None and ro == 0:
            return False  # nothing is below 0
        if lb is None and lo == 0 and ro > 0:
            return True  # 0 < S(t)
        return ("<", lb, lo, rb, ro)
    if (lb is None and lo == 0 and ro > 0) or (rb is None and ro == 0 and lo > 0):
        return False  # S(t) = 0
    if (_key(lb), lo) > (_key(rb), ro):
        lb, lo, rb, ro = rb, ro, lb, lo
    return ("=", lb, lo, rb, ro)


def _negations(a: DnfAtom):
    op, lb, lo, rb, ro = a
    if op == "<":
        return [norm_atom("<", rb, ro, lb, lo), norm_atom("=", lb, lo, rb, ro)]
    return [norm_atom("<", lb, lo, rb, ro), norm_atom("<", rb, ro, lb, lo)]


def satisfiable(conjunct) -> bool:
    """Difference constraints over the naturals: feasible iff no negative cycle."""
    edges = []
    nodes = {None}
    for op, lb, lo, rb, ro in conjunct:
        nodes.add(lb)
        nodes.add(rb)
        # l + lo < r + ro  <=>  l - r <= ro - lo - 1 : edge r -> l
        if op == "<":
            edges.append((rb, lb, ro - lo - 1))
        else:
            edges.append((rb, lb, ro - lo))
            edges.append((lb, rb, lo - ro))
    for v in nodes:
        if v is not None:
            edges.append((v, None, 0))  # 0 - v <= 0
    dist = {v: 0 for v in nodes}
    for _ in range(len(nodes)):
        changed = False
        for u, v, w in edges:
            d = dist[u] + w
            if d < dist[v]:
                dist[v] = d
                changed = True
        if not changed:
            return True
    return False


def _clean(conjuncts) -> frozenset:
    out = set()
    for c in conjuncts:
        if not c:
            return TRUE_DNF
        if satisfiable(c):
            out.add(c)
    if 1 < len(out) <= 400:
        ordered = sorted(out, key=len)
        kept = []
        for c in ordered:
            if not any(k <= c for k in kept):
                kept.append(c)
        out = kept
    return frozenset(out)


def _conjoin(c: frozenset, atoms) -> Optional[frozenset]:
    """Add atoms (possibly already-decided booleans) to a conjunct."""
    extra = []
    for a in atoms:
        if a is False:
            return None
        if a is not True:
            extra.append(a)
    return c | frozenset(extra)


def dnf_and(p: frozenset, q: frozenset) -> frozenset:
    if not p or not q:
        return FALSE_DNF
    return _clean(a | b for a in p for b in q)


def dnf_or(p: frozenset, q: frozenset) -> frozenset:
    return _clean(p | q)


def dnf_not(p: frozenset) -> frozenset:
    result = TRUE_DNF
    for c in p:
        alternatives = []
        for a in c:
            for n in _negations(a):
                if n is True:
                    alternatives.append(frozenset())
                elif n is not False:
                    alternatives.append(frozenset({n}))
        result = dnf_and(result, frozenset(alternatives))
        if not result:
            return FALSE_DNF
    return result


def _eliminate_conjunct(x: int, c: frozenset) -> list:
    rest, eqs, lows, ups = [], [], [], []
    for a in c:
        op, lb, lo, rb, ro = a
        if lb != x and rb != x:
            rest.append(a)
        elif op == "=":
            eqs.append(a)
        elif rb == x:
            lows.append((lb, lo, ro))  # lb + lo < x + ro
        else:
            ups.append((lo, rb, ro))  # x + lo < rb + ro
    if eqs:
        op, lb, lo, rb, ro = eqs[0]
        # orient as x + a = u + b
        if lb == x:
            a, u, b = lo, rb, ro
        else:
            a, u, b = ro, lb, lo
        new = [norm_atom("<", None, a - b - 1, u, 0)] if b < a else []
        for e in c:
            if e is eqs[0] or e in rest:
                continue
            eop, elb, elo, erb, ero = e
            if elb == x:
                new.append(norm_atom(eop, u, elo + b, erb, ero + a))
            else:
                new.append(norm_atom(eop, elb, elo + a, u, ero + b))
        out = _conjoin(frozenset(rest), new)
        return [out] if out is not None else []
    new = []
    for (u, b, a) in lows:
        for (a2, w, e) in ups:
            new.append(norm_atom("<", u, b + a2 + 1, w, e + a))
    for (a2, w, e) in ups:
        new.append(norm_atom("<", None, a2, w, e))
    out = _conjoin(frozenset(rest), new)
    return [out] if out is not None else []


def dnf_exists(x: int, p: frozenset) -> frozenset:
    out = []
    for c in p:
        out.extend(_eliminate_conjunct(x, c))
    return _clean(out)


def _atom_dnf(f: Formula) -> frozenset:
    if isinstance(f, Top):
        return TRUE_DNF
    if isinstance(f, Bot):
        return FALSE_DNF
    if isinstance(f, Atom):
        raise SignatureViolation(f"relation {f.rel}/{len(f.args)} is not in the language of W")
    op = "<" if isinstance(f, Lt) else "="
    a = norm_atom(op, f.left.var, f.left.offset, f.right.var, f.right.offset)
    if a is True:
        return TRUE_DNF
    if a is False:
        return FALSE_DNF
    return frozenset({frozenset({a})})


def to_dnf(f: Formula, memo: Optional[dict] = None) -> frozenset:
    """Quantifier-free DNF equivalent over N of a formula in the W language."""
    memo = {} if memo is None else memo
    return _qe(fold_numerals(f), memo)


def _qe(f: Formula, memo: dict) -> frozenset:
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, (Atom, Eq, Lt, Top, Bot)):
        r = _atom_dnf(f)
    elif isinstance(f, Not):
        r = dnf_not(_qe(f.body, memo))
    elif isinstance(f, And):
        r = dnf_and(_qe(f.left, memo), _qe(f.right, memo))
    elif isinstance(f, Or):
        r = dnf_or(_qe(f.left, memo), _qe(f.right, memo))
    elif isinstance(f, Implies):
        r = dnf_or(dnf_not(_qe(f.left, memo)), _qe(f.right, memo))
    elif isinstance(f, Iff):
        a, b = _qe(f.left, memo), _qe(f.right, memo)
        r = dnf_or(dnf_and(a, b), dnf_and(dnf_not(a), dnf_not(b)))
    elif isinstance(f, Exists):
        r = dnf_exists(f.var, _qe(f.body, memo))
    elif isinstance(f, Forall):
        r = dnf_not(dnf_exists(f.var, dnf_not(_qe(f.body, memo))))
    else:
        raise TypeError(f)
    memo[f] = r
    return r


def _term(base, off) -> Term:
    return Term(base, off)


def dnf_to_formula(p: frozenset) -> Formula:
    if not p:
        return BOT
    if frozenset() in p:
        return TOP
    def atom(a):
        op, lb, lo, rb, ro = a
        cls = Lt if op == "<" else Eq
        return cls(Term(lb, lo), Term(rb, ro))
    def order(a):
        return (a[0], _key(a[1]), a[2], _key(a[3]), a[4])
    cs = sorted((sorted(c, key=order) for c in p), key=lambda c: [order(a) for a in c])
    return disj(*(conj(*(atom(a) for a in c)) for c in cs))


def eval_dnf(p: frozenset, env: dict) -> bool:
    def val(base, off):
        return off if base is None else env[base] + off
    for c in p:
        ok = True
        for op, lb, lo, rb, ro in c:
            l, r = val(lb, lo), val(rb, ro)
            if not (l < r if op == "<" else l == r):
                ok = False
                break
        if ok:
            return True
    return False


@dataclass(frozen=True)
class QeResult:
    input: Formula
    normal_form: Formula
    decision: Optional[bool]
    dnf: frozenset = frozenset()


def qe_eliminate(f: Formula) -> QeResult:
    p = to_dnf(f)
    decision = None
    if not free_vars(f):
        decision = eval_dnf(p, {})
    return QeResult(f, dnf_to_formula(p), decision, p)


def decide_w(s: Formula) -> bool:
    if free_vars(s):
        raise NotASentence(f"free variables {sorted(free_vars(s))} in {s}")
    return eval_dnf(to_dnf(s), {})


def decide_wprime(s: Formula) -> bool:
    """Decide a sentence of (N; 0, S, <, E) through the pair-doubling coding."""
    from .translation import builtin, translate
    if free_vars(s):
        raise NotASentence(f"free variables {sorted(free_vars(s))} in {s}")
    return decide_w(translate(builtin("iota"), unwind_terms(s)))


@dataclass(frozen=True)
class DefinableSet:
    """A finite set, or a cofinite one given by a threshold and the exceptions below it."""
    cofinite: bool
    members: frozenset = frozenset()
    threshold: int = 0
    exceptions: frozenset = frozenset()

    def __contains__(self, n: int) -> bool:
        if self.cofinite:
            return n >= self.threshold or (n not in self.exceptions)
        return n in self.members

    def __str__(self):
        if self.cofinite:
            ex = ", ".join(map(str, sorted(self.exceptions)))
            return f"Cofinite({self.threshold}, {{{ex}}})"
        return "Finite{" + ", ".join(map(str, sorted(self.members))) + "}"


def definable_set(f: Formula, dnf: Optional[frozenset] = None) -> DefinableSet:
    fv = free_vars(f)
    if len(fv) != 1:
        raise ValueError(f"expected exactly one free variable, found {sorted(fv)}")
    (x,) = fv
    p = to_dnf(f) if dnf is None else dnf
    top = max((max(a[2], a[4]) for c in p for a in c), default=0) + 2
    values = [eval_dnf(p, {x: n}) for n in range(top + 1)]
    tail = values[top]
    t = top
    while t > 0 and values[t - 1] == tail:
        t -= 1
    if tail:
        return DefinableSet(True, threshold=t, exceptions=frozenset(n for n in range(t) if not values[n]))
    return DefinableSet(False, members=frozenset(n for n in range(t) if values[n]))
