"""Goedel numberings of sentences.

Sentences are serialized in Polish prefix form over a fixed 14-letter
alphabet and read as bijective base-14 numerals, so shorter strings always
get smaller codes.  In term position the letters for ``Z`` and ``S`` stand
for the constant 0 and for successor; in formula position they are the
relations ``Z/1`` and ``S/2``.  Variable indices are written in binary
behind a quantifier or in argument position, closed by an end marker.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Lt, Not, Or, Term, Top,
    desugar, free_vars, normalize_bound,
)

NOT, AND, OR, EXISTS, FORALL, EQ, Z, S, LT, E, T, BIT0, BIT1, END = range(1, 15)
BASE = 14
LETTERS = {NOT: "~", AND: "&", OR: "|", EXISTS: "E!", FORALL: "A!", EQ: "=", Z: "Z", S: "S",
           LT: "<", E: "E", T: "T", BIT0: "0", BIT1: "1", END: "."}
_REL_CODES = {"Z": (Z, 1), "S": (S, 2), "Lt": (LT, 2), "E": (E, 1)}


class UnregisteredSymbol(ValueError):
    pass


class DecodeError(ValueError):
    pass


# ---------------------------------------------------------- serialization

def _index(i: int, out: list[int]) -> None:
    out.extend(BIT1 if b == "1" else BIT0 for b in format(i, "b"))
    out.append(END)


def _term(t: Term, out: list[int]) -> None:
    out.extend([S] * t.offset)
    if t.var is None:
        out.append(Z)
    else:
        _index(t.var, out)


def _emit(f: Formula, out: list[int]) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            out.append(NOT)
            stack.append(g.body)
        elif isinstance(g, (And, Or)):
            out.append(AND if isinstance(g, And) else OR)
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Exists, Forall)):
            out.append(EXISTS if isinstance(g, Exists) else FORALL)
            _index(g.var, out)
            stack.append(g.body)
        elif isinstance(g, (Eq, Lt)):
            out.append(EQ if isinstance(g, Eq) else LT)
            _term(g.left, out)
            _term(g.right, out)
        elif isinstance(g, Atom):
            if g.rel == "T":
                code = T
            elif g.rel in _REL_CODES and _REL_CODES[g.rel][1] == len(g.args):
                code = _REL_CODES[g.rel][0]
            else:
                raise UnregisteredSymbol(f"{g.rel}/{len(g.args)} has no letter in the alphabet")
            out.append(code)
            if code == T:
                _index(len(g.args), out)
            for t in g.args:
                _term(t, out)
        elif isinstance(g, (Top, Bot)):
            raise UnregisteredSymbol("true/false have no letter in the alphabet")
        else:
            raise TypeError(g)


def serialize(f: Formula) -> tuple[int, ...]:
    """Letters of the canonical form: desugared, bound variables renumbered."""
    out: list[int] = []
    _emit(normalize_bound(desugar(f)), out)
    return tuple(out)


def render(codes: Sequence[int]) -> str:
    return " ".join(LETTERS[c] for c in codes)


class _Reader:
    def __init__(self, codes: Sequence[int]):
        self.codes = codes
        self.pos = 0

    def take(self) -> int:
        if self.pos >= len(self.codes):
            raise DecodeError("unexpected end of code string")
        c = self.codes[self.pos]
        self.pos += 1
        return c

    def index(self) -> int:
        bits = []
        while True:
            c = self.take()
            if c == END:
                break
            if c not in (BIT0, BIT1):
                raise DecodeError(f"bad letter {c} inside a variable index")
            bits.append("1" if c == BIT1 else "0")
        if not bits or (len(bits) > 1 and bits[0] == "0"):
            raise DecodeError("non-canonical variable index")
        return int("".join(bits), 2)

    def term(self) -> Term:
        k = 0
        while True:
            c = self.take()
            if c == S:
                k += 1
            elif c == Z:
                return Term(None, k)
            elif c in (BIT0, BIT1):
                self.pos -= 1
                return Term(self.index(), k)
            else:
                raise DecodeError(f"letter {c} cannot start a term")

    def formula(self) -> Formula:
        c = self.take()
        if c == NOT:
            return Not(self.formula())
        if c in (AND, OR):
            left = self.formula()
            return (And if c == AND else Or)(left, self.formula())
        if c in (EXISTS, FORALL):
            v = self.index()
            return (Exists if c == EXISTS else Forall)(v, self.formula())
        if c in (EQ, LT):
            left = self.term()
            return (Eq if c == EQ else Lt)(left, self.term())
        if c == T:
            arity = self.index()
            return Atom("T", tuple(self.term() for _ in range(arity)))
        for name, (code, arity) in _REL_CODES.items():
            if code == c and name != "Lt":
                return Atom(name, tuple(self.term() for _ in range(arity)))
        raise DecodeError(f"letter {c} cannot start a formula")


def deserialize(codes: Sequence[int]) -> Formula:
    r = _Reader(codes)
    f = r.formula()
    if r.pos != len(codes):
        raise DecodeError("trailing letters after a complete formula")
    return f


# ------------------------------------------------------------ bijective base

def to_bijective(codes: Sequence[int]) -> int:
    n = 0
    for c in codes:
        n = n * BASE + c
    return n


def from_bijective(n: int) -> tuple[int, ...]:
    out = []
    while n > 0:
        n, r = divmod(n - 1, BASE)
        out.append(r + 1)
    return tuple(reversed(out))


def nu(f: Formula) -> int:
    return to_bijective(serialize(f))


def nu_inverse(n: int) -> Optional[Formula]:
    """The canonical formula coded by ``n``, or ``None`` off the range."""
    try:
        f = deserialize(from_bijective(n))
    except DecodeError:
        return None
    return f if serialize(f) == from_bijective(n) else None


def nu_star(s: Formula, decide: Optional[Callable[[Formula], bool]] = None, flip: bool = False) -> int:
    """Twice the code, plus one exactly for false sentences (``flip`` swaps parity)."""
    from .qe import decide_w
    truth = (decide or decide_w)(s)
    return 2 * nu(s) + ((0 if truth else 1) ^ int(flip))


# ----------------------------------------------------------------- objects

@dataclass(frozen=True, eq=False)
class Numbering:
    name: str
    kind: str
    encode: Callable[[Formula], int]
    decode: Callable[[int], Optional[Formula]]

    def __call__(self, s: Formula) -> int:
        return self.encode(s)


def lengthlex() -> Numbering:
    return Numbering("nu", "lengthlex", nu, nu_inverse)


def star(base: Optional[Numbering] = None, decide: Optional[Callable[[Formula], bool]] = None,
         flip: bool = False) -> Numbering:
    """Truth-parity doubling of ``base``: even codes exactly for true sentences."""
    from .qe import decide_w
    base = base or lengthlex()
    oracle = decide or decide_w

    def enc(s: Formula) -> int:
        return 2 * base.encode(s) + ((0 if oracle(s) else 1) ^ int(flip))

    def dec(n: int) -> Optional[Formula]:
        f = base.decode(n // 2)
        if f is None or free_vars(f):
            return None
        return f if enc(f) == n else None

    tag = "flipped" if flip else "star"
    return Numbering(f"{base.name}*{'~' if flip else ''}", f"{tag}({base.kind})", enc, dec)


class DuplicateSentence(ValueError):
    pass


def corpus_numbering(corpus: Sequence[Formula]) -> Numbering:
    """Position in the list, counted from 1."""
    keyed = [normalize_bound(desugar(s)) for s in corpus]
    index: dict[Formula, int] = {}
    for i, s in enumerate(keyed):
        if s in index:
            raise DuplicateSentence(f"{s} occurs twice")
        index[s] = i + 1

    def enc(s: Formula) -> int:
        return index[normalize_bound(desugar(s))]

    def dec(n: int) -> Optional[Formula]:
        return corpus[n - 1] if 1 <= n <= len(corpus) else None

    return Numbering("corpus", "corpus", enc, dec)
