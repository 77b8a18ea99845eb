"""Named theories: signatures and axiom enumerators."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Callable, Iterator, Optional

from .setformulas import SetFormulas, eq, mem
from .syntax import (
    And, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, Signature, ZERO, conj, disj,
    exists_block, forall_block, num, numeral_formula, parse, rel, var,
)

SUCC0 = Signature("Succ0", (("Z", 1), ("S", 2)))
R_SIG = Signature("R", (("Z", 1), ("S", 2), ("A", 3), ("M", 3)))
SET_SIG = Signature("In", (("In", 2),))
W_SIG = Signature("W", (("Z", 1), ("S", 2), ("Lt", 2)))
WPRIME_SIG = W_SIG.extend("Wprime", ("E", 1))


def truth_extended(sig: Signature, arity: int, name: str = "T") -> Signature:
    return sig.extend(f"{sig.name}+{name}{arity}", (name, arity))


class IndexViolation(ValueError):
    pass


def _numeral(n: int, v: int, fresh: int) -> Formula:
    return numeral_formula(n, "unfolded", v=v, fresh=fresh)


# ------------------------------------------------------------------ Succ0

def axioms_succ0(kind: str, *idx: int) -> Formula:
    """Closed instances of the three numeral schemes."""
    if kind == "A1":
        (n,) = idx
        return Exists(0, _numeral(n, 0, 1))
    if kind == "A2":
        m, n = idx
        if not m < n:
            raise IndexViolation(f"A2 needs m < n, got m={m}, n={n}")
        return Forall(0, Not(And(_numeral(m, 0, 1), _numeral(n, 0, 1 + m))))
    if kind == "A3":
        (n,) = idx
        return Forall(0, Forall(1, Implies(And(_numeral(n, 0, 2), _numeral(n, 1, 2 + n)), Eq(var(0), var(1)))))
    raise IndexViolation(f"unknown Succ0 axiom kind {kind!r}")


def _succ0_stream() -> Iterator[Formula]:
    for k in count():
        yield axioms_succ0("A1", k)
        for m in range(k):
            yield axioms_succ0("A2", m, k)
        yield axioms_succ0("A3", k)


# --------------------------------------------------------------- set theory

def axioms_vs(n: int) -> Formula:
    """VS1 for n = 0, otherwise the VS2 instance with n parameters."""
    if n < 0:
        raise IndexViolation("n must be a natural number")
    if n == 0:
        return Exists(0, Forall(1, Not(mem(1, 0))))
    x, y = n, n + 1
    body = Iff(mem(y, x), disj(*(eq(y, i) for i in range(n))))
    return forall_block(range(n), Exists(x, Forall(y, body)))


def axioms_as() -> list[Formula]:
    as2 = Forall(0, Forall(1, Exists(2, Forall(3, Iff(mem(3, 2), Or(mem(3, 0), eq(3, 1)))))))
    return [axioms_vs(0), as2]


def sim_axioms() -> list[Formula]:
    """Equinumerosity is an equivalence relation and f : x ~ y gives x ~ f."""
    b = SetFormulas(10)
    return [
        Forall(0, b.sim(0, 0)),
        Forall(0, Forall(1, Implies(b.sim(0, 1), b.sim(1, 0)))),
        Forall(0, Forall(1, Forall(2, Implies(And(b.sim(0, 1), b.sim(1, 2)), b.sim(0, 2))))),
        Forall(0, Forall(1, Forall(2, Implies(b.bijection(0, 1, 2), b.sim(1, 0))))),
    ]


def axioms_vs_plus(max_params: int = 2) -> list[Formula]:
    """VS instances with at most ``max_params`` parameters, then the four ~-axioms."""
    return [axioms_vs(n) for n in range(max_params + 1)] + sim_axioms()


def _vs_stream() -> Iterator[Formula]:
    for n in count():
        yield axioms_vs(n)


def _vs_plus_stream() -> Iterator[Formula]:
    yield from sim_axioms()
    yield from _vs_stream()


# ---------------------------------------------------------------------- R

def _le(x: int, y: int, z: int) -> Formula:
    """x <= y, i.e. z + x = y for some z (z is the bound witness)."""
    return Exists(z, rel("A", z, x, y))


def axioms_r(kind: str, n: int, m: Optional[int] = None) -> Formula:
    """Closed relational instances of the five arithmetic schemes."""
    if n < 0 or (m is not None and m < 0):
        raise IndexViolation("numeral indices must be natural numbers")
    if kind in ("add", "mul"):
        if m is None:
            raise IndexViolation(f"{kind} needs two indices")
        value = n + m if kind == "add" else n * m
        symbol = "A" if kind == "add" else "M"
        f = 3
        parts = [_numeral(n, 0, f), _numeral(m, 1, f + n), _numeral(value, 2, f + n + m)]
        return exists_block([0, 1, 2], conj(*parts, rel(symbol, 0, 1, 2)))
    if kind == "neq":
        if m is None or n == m:
            raise IndexViolation(f"neq needs two different indices, got {n}, {m}")
        return Not(Exists(0, And(_numeral(n, 0, 1), _numeral(m, 0, 1 + n))))
    if kind == "le_cases":
        # forall x0. (exists x1. (n(x1) & x0 <= x1)) <-> OR_k k(x0)
        le = Exists(1, And(_numeral(n, 1, 3), _le(0, 1, 2)))
        cases = disj(*(_numeral(k, 0, 3) for k in range(n + 1)))
        return Forall(0, Iff(le, cases))
    if kind == "le_total":
        return Forall(0, Exists(1, And(_numeral(n, 1, 3), Or(_le(0, 1, 2), _le(1, 0, 2)))))
    raise IndexViolation(f"unknown R axiom kind {kind!r}")


def _r_stream() -> Iterator[Formula]:
    for k in count():
        for n in range(k + 1):
            for m in range(k + 1):
                if max(n, m) != k:
                    continue
                yield axioms_r("add", n, m)
                yield axioms_r("mul", n, m)
                if n != m:
                    yield axioms_r("neq", n, m)
        yield axioms_r("le_cases", k)
        yield axioms_r("le_total", k)


# ---------------------------------------------------------------------- W

_W_TEXT = [
    "forall x0. ~(x0 < x0)",
    "forall x0. forall x1. forall x2. (x0 < x1 & x1 < x2 -> x0 < x2)",
    "forall x0. forall x1. (x0 < x1 | x0 = x1 | x1 < x0)",
    "forall x0. (0 = x0 | 0 < x0)",
    "forall x0. (x0 < S(x0) & (forall x1. (x0 < x1 -> x1 = S(x0) | S(x0) < x1)))",
    "forall x0. (~(x0 = 0) -> (exists x1. S(x1) = x0))",
]
_WPRIME_EXTRA = [
    "E(0)",
    "forall x0. (E(S(x0)) <-> ~E(x0))",
]


def axioms_w() -> list[Formula]:
    return [parse(t, W_SIG) for t in _W_TEXT]


def axioms_wprime() -> list[Formula]:
    return axioms_w() + [parse(t, WPRIME_SIG) for t in _WPRIME_EXTRA]


# ----------------------------------------------------------------- registry

@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    enumerate: Callable[[], Iterator[Formula]]
    finitely_axiomatized: bool
    decidable_by: Optional[str] = None

    def axioms(self, limit: Optional[int] = None) -> list[Formula]:
        out = []
        for f in self.enumerate():
            if limit is not None and len(out) >= limit:
                break
            out.append(f)
        return out


THEORIES: dict[str, Theory] = {
    t.name: t for t in (
        Theory("Succ0", SUCC0, _succ0_stream, False),
        Theory("R", R_SIG, _r_stream, False),
        Theory("VS", SET_SIG, _vs_stream, False),
        Theory("VS+", SET_SIG, _vs_plus_stream, False),
        Theory("AS", SET_SIG, lambda: iter(axioms_as()), True),
        Theory("W", W_SIG, lambda: iter(axioms_w()), True, "qe-w"),
        Theory("W'", WPRIME_SIG, lambda: iter(axioms_wprime()), True, "qe-w-via-iota"),
    )
}


def get_theory(name: str) -> Theory:
    """Look a theory up by name, ignoring case; ``Wprime`` and ``VSplus`` are accepted too."""
    aliases = {"wprime": "W'", "vsplus": "VS+", "vs_plus": "VS+"}
    aliases.update((k.lower(), k) for k in THEORIES)
    name = aliases.get(name.lower(), name)
    if name not in THEORIES:
        raise KeyError(f"unknown theory {name!r}; known: {', '.join(THEORIES)}")
    return THEORIES[name]
