"""First-order syntax: terms, formulas, parsing, printing and normal forms.

Terms are canonical: a base (the constant 0 or a variable) plus a successor
offset of arbitrary size, so ``S(S(x3))`` is ``Term(3, 2)``.  Variables are
indexed, ``x0, x1, ...``.  All nodes are immutable and hash-cached.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from typing import Callable, Iterator, Optional


class ParseError(ValueError):
    pass


class FormulaSyntaxError(ParseError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


@dataclass(frozen=True)
class Signature:
    name: str
    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [r for r, _ in self.relations] + list(self.constants) + [f for f, _ in self.functions]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol in signature {self.name}")
        if "=" in names:
            raise ValueError("equality is built in")
        for r, a in self.relations:
            if a < 1:
                raise ValueError(f"relation {r} needs arity >= 1")

    def arity(self, rel: str) -> Optional[int]:
        for r, a in self.relations:
            if r == rel:
                return a
        return None

    @property
    def has_numerals(self) -> bool:
        """Whether the surface terms 0 and S(t) may be used."""
        return (self.arity("Z") == 1 and self.arity("S") == 2) or (
            "0" in self.constants and ("S", 1) in self.functions)

    def extend(self, name: str, *relations: tuple[str, int]) -> "Signature":
        return Signature(name, self.relations + tuple(relations), self.constants, self.functions)


# --------------------------------------------------------------------- nodes

class _Node:
    __slots__ = ()

    def __hash__(self):
        try:
            return object.__getattribute__(self, "_h")
        except AttributeError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
            object.__setattr__(self, "_h", h)
            return h

    def __str__(self):
        return print_canonical(self)


@dataclass(frozen=True, eq=True)
class Term(_Node):
    var: Optional[int]  # None is the constant 0
    offset: int = 0
    _fields = ("var", "offset")

    @property
    def is_zero_based(self) -> bool:
        return self.var is None

    def shift(self, k: int) -> "Term":
        return Term(self.var, self.offset + k)


def var(i: int) -> Term:
    return Term(i, 0)


def num(n: int) -> Term:
    return Term(None, n)


ZERO = Term(None, 0)


class Formula(_Node):
    __slots__ = ()


@dataclass(frozen=True, eq=True)
class Top(Formula):
    _fields = ()


@dataclass(frozen=True, eq=True)
class Bot(Formula):
    _fields = ()


TOP = Top()
BOT = Bot()


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...]
    _fields = ("rel", "args")


@dataclass(frozen=True, eq=True)
class Eq(Formula):
    left: Term
    right: Term
    _fields = ("left", "right")


@dataclass(frozen=True, eq=True)
class Lt(Formula):
    left: Term
    right: Term
    _fields = ("left", "right")


@dataclass(frozen=True, eq=True)
class Not(Formula):
    body: Formula
    _fields = ("body",)


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@dataclass(frozen=True, eq=True)
class Iff(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@dataclass(frozen=True, eq=True)
class Exists(Formula):
    var: int
    body: Formula
    _fields = ("var", "body")


@dataclass(frozen=True, eq=True)
class Forall(Formula):
    var: int
    body: Formula
    _fields = ("var", "body")


for _cls in (Term, Top, Bot, Atom, Eq, Lt, Not, And, Or, Implies, Iff, Exists, Forall):
    _cls.__hash__ = _Node.__hash__

ATOMIC = (Atom, Eq, Lt, Top, Bot)
BINARY = (And, Or, Implies, Iff)
QUANT = (Exists, Forall)


def rel(name: str, *args: int | Term) -> Atom:
    """Shorthand: ``rel("S", 0, 1)`` is ``S(x0, x1)``."""
    return Atom(name, tuple(a if isinstance(a, Term) else var(a) for a in args))


def conj(*fs: Formula) -> Formula:
    """Left-associated conjunction; the empty conjunction is ``true``."""
    out = None
    for f in fs:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def disj(*fs: Formula) -> Formula:
    out = None
    for f in fs:
        out = f if out is None else Or(out, f)
    return BOT if out is None else out


def exists_block(vs, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


def forall_block(vs, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


# ------------------------------------------------------------ basic queries

def atom_terms(f: Formula) -> tuple[Term, ...]:
    if isinstance(f, Atom):
        return f.args
    if isinstance(f, (Eq, Lt)):
        return (f.left, f.right)
    return ()


@cache
def free_vars(f: Formula) -> frozenset[int]:
    if isinstance(f, ATOMIC):
        return frozenset(t.var for t in atom_terms(f) if t.var is not None)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def all_vars(f: Formula) -> set[int]:
    out = set()
    for g in subformulas(f):
        if isinstance(g, QUANT):
            out.add(g.var)
        out.update(t.var for t in atom_terms(g) if t.var is not None)
    return out


def max_var(f: Formula) -> int:
    vs = all_vars(f)
    return max(vs) if vs else -1


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, BINARY):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, QUANT):
            stack.append(g.body)


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, BINARY):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 1 + quantifier_rank(f.body)


def max_constant(f: Formula) -> int:
    """Largest successor offset occurring in any term of ``f``."""
    return max((t.offset for g in subformulas(f) for t in atom_terms(g)), default=0)


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def relations_used(f: Formula) -> set[tuple[str, int]]:
    return {(g.rel, len(g.args)) for g in subformulas(f) if isinstance(g, Atom)}


def map_formula(f: Formula, on_atom: Callable[[Formula], Formula]) -> Formula:
    """Rebuild ``f`` bottom-up, replacing every atomic node by ``on_atom(node)``."""
    if isinstance(f, ATOMIC):
        return on_atom(f)
    if isinstance(f, Not):
        return Not(map_formula(f.body, on_atom))
    if isinstance(f, BINARY):
        return type(f)(map_formula(f.left, on_atom), map_formula(f.right, on_atom))
    return type(f)(f.var, map_formula(f.body, on_atom))


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<op><->|->|[()~&|=<,.])
  | (?P<var>x\d+)\b
  | (?P<zero>0)\b
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

_KEYWORDS = {"exists", "forall", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, value: Optional[str] = None, kind: Optional[str] = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            raise FormulaSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "ident" and value in ("exists", "forall"):
            self.i += 1
            v = int(self.take(kind="var")[1][1:])
            self.take(".")
            body = self.formula()
            return Exists(v, body) if value == "exists" else Forall(v, body)
        return self.binary(0)

    _LEVELS = (("<->", Iff), ("->", Implies), ("|", Or), ("&", And))

    def binary(self, level: int) -> Formula:
        if level == len(self._LEVELS):
            return self.neg()
        op, cls = self._LEVELS[level]
        left = self.binary(level + 1)
        while self.peek()[1] == op:
            self.i += 1
            left = cls(left, self.binary(level + 1))
        return left

    def neg(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "~":
            self.i += 1
            return Not(self.neg())
        if value == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        if kind == "ident" and value in ("true", "false"):
            self.i += 1
            return TOP if value == "true" else BOT
        if kind == "ident" and value in ("exists", "forall"):
            return self.formula()
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.peek()
        if kind in ("var", "zero") or (kind == "ident" and value == "S"):
            save = self.i
            try:
                left = self.term()
                op = self.peek()[1]
            except FormulaSyntaxError:
                if value != "S":
                    raise
                op = None
            if op in ("=", "<"):
                self.i += 1
                right = self.term()
                if op == "<":
                    self._check_rel("Lt", 2, pos)
                    return Lt(left, right)
                return Eq(left, right)
            if value != "S":
                raise FormulaSyntaxError("expected '=' or '<'", self.peek()[2])
            self.i = save
        if kind != "ident" or value in _KEYWORDS:
            raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", pos)
        self.i += 1
        self.take("(")
        args = [self.term()]
        while self.peek()[1] == ",":
            self.i += 1
            args.append(self.term())
        self.take(")")
        if value == "Lt" and len(args) == 2:
            self._check_rel("Lt", 2, pos)
            return Lt(args[0], args[1])
        self._check_rel(value, len(args), pos)
        return Atom(value, tuple(args))

    def _check_rel(self, name: str, arity: int, pos: int):
        if self.sig is None:
            return
        a = self.sig.arity(name)
        if a is None:
            raise UnknownSymbolError(f"unknown relation {name!r} at position {pos} (signature {self.sig.name})")
        if a != arity:
            raise ArityError(f"{name} has arity {a}, used with {arity} arguments at position {pos}")

    def term(self) -> Term:
        kind, value, pos = self.peek()
        if kind == "var":
            self.i += 1
            return Term(int(value[1:]), 0)
        if kind in ("zero", "ident") and value in ("0", "S"):
            if self.sig is not None and not self.sig.has_numerals:
                raise UnknownSymbolError(f"term symbol {value!r} not in signature {self.sig.name} at position {pos}")
            self.i += 1
            if value == "0":
                return ZERO
            self.take("(")
            t = self.term()
            self.take(")")
            return t.shift(1)
        raise FormulaSyntaxError(f"expected a term, found {value or 'end of input'!r}", pos)


def parse(text: str, sig: Optional[Signature] = None) -> Formula:
    p = _Parser(text, sig)
    f = p.formula()
    if p.peek()[0] != "eof":
        raise FormulaSyntaxError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    return f


# ----------------------------------------------------------------- printing

def print_term(t: Term) -> str:
    core = "0" if t.var is None else f"x{t.var}"
    return "S(" * t.offset + core + ")" * t.offset


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def print_canonical(f) -> str:
    if isinstance(f, Term):
        return print_term(f)
    return _pr(f)


def _pr(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Eq):
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if isinstance(f, Lt):
        return f"{print_term(f.left)} < {print_term(f.right)}"
    if isinstance(f, Atom):
        return f"{f.rel}({', '.join(print_term(t) for t in f.args)})"
    if isinstance(f, Not):
        b = f.body
        inner = _pr(b)
        if isinstance(b, (BINARY, QUANT, Eq, Lt)):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(f, QUANT):
        q = "exists" if isinstance(f, Exists) else "forall"
        return f"{q} x{f.var}. {_pr(f.body)}"
    p = _PREC[type(f)]
    left, right = _pr(f.left), _pr(f.right)
    if isinstance(f.left, QUANT) or (isinstance(f.left, BINARY) and _PREC[type(f.left)] < p) or \
            (isinstance(f.left, BINARY) and _PREC[type(f.left)] == p and type(f.left) is not type(f)):
        left = f"({left})"
    if isinstance(f.right, QUANT) or (isinstance(f.right, BINARY) and _PREC[type(f.right)] <= p):
        right = f"({right})"
    return f"{left} {_OPS[type(f)]} {right}"


# -------------------------------------------------------------- rewriting

def rename_free(f: Formula, mapping: dict[int, int]) -> Formula:
    """Rename free variables by ``mapping``; the caller guarantees no capture."""
    def tm(t: Term) -> Term:
        return Term(mapping.get(t.var, t.var), t.offset) if t.var is not None else t

    def go(g: Formula, bound: frozenset) -> Formula:
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, ATOMIC):
            def tb(t):
                return t if t.var in bound else tm(t)
            if isinstance(g, Atom):
                return Atom(g.rel, tuple(tb(t) for t in g.args))
            return type(g)(tb(g.left), tb(g.right))
        if isinstance(g, Not):
            return Not(go(g.body, bound))
        if isinstance(g, BINARY):
            return type(g)(go(g.left, bound), go(g.right, bound))
        return type(g)(g.var, go(g.body, bound | {g.var}))

    return go(f, frozenset())


def substitute(f: Formula, v: int, t: Term) -> Formula:
    """Capture-avoiding substitution of ``t`` for the free variable ``v``."""
    counter = [max(max_var(f), t.var if t.var is not None else -1, v) + 1]

    def st(s: Term) -> Term:
        if s.var == v:
            return t.shift(s.offset)
        return s

    def go(g: Formula) -> Formula:
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, Atom):
            return Atom(g.rel, tuple(st(s) for s in g.args))
        if isinstance(g, (Eq, Lt)):
            return type(g)(st(g.left), st(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        if g.var == v or v not in free_vars(g.body):
            return g
        if t.var is not None and g.var == t.var:
            fresh = counter[0]
            counter[0] += 1
            return type(g)(fresh, go(rename_free(g.body, {g.var: fresh})))
        return type(g)(g.var, go(g.body))

    return go(f)


def normalize_bound(f: Formula) -> Formula:
    """Rename bound variables to de Bruijn levels above the free variables.

    A binder nested under ``k`` other binders becomes ``x(base + k)`` where
    ``base`` is one more than the largest free variable.  Alpha-equivalent
    formulas normalize to the same AST.
    """
    fv = free_vars(f)
    base = max(fv) + 1 if fv else 0

    def go(g: Formula, env: dict[int, int], depth: int) -> Formula:
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, ATOMIC):
            def tm(t):
                return Term(env.get(t.var, t.var), t.offset) if t.var is not None else t
            if isinstance(g, Atom):
                return Atom(g.rel, tuple(tm(t) for t in g.args))
            return type(g)(tm(g.left), tm(g.right))
        if isinstance(g, Not):
            return Not(go(g.body, env, depth))
        if isinstance(g, BINARY):
            return type(g)(go(g.left, env, depth), go(g.right, env, depth))
        nv = base + depth
        return type(g)(nv, go(g.body, {**env, g.var: nv}, depth + 1))

    return go(f, {}, 0)


def desugar(f: Formula) -> Formula:
    """Eliminate -> and <-> in favour of ~, &, |."""
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, Implies):
        return Or(Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, Iff):
        a, b = desugar(f.left), desugar(f.right)
        return Or(And(a, b), And(Not(a), Not(b)))
    if isinstance(f, BINARY):
        return type(f)(desugar(f.left), desugar(f.right))
    return type(f)(f.var, desugar(f.body))


def nnf(f: Formula) -> Formula:
    """Negation normal form (after desugaring); negations sit on atoms only."""
    return _nnf(desugar(f), False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Top):
        return BOT if neg else TOP
    if isinstance(f, Bot):
        return TOP if neg else BOT
    if isinstance(f, ATOMIC):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.body, not neg)
    if isinstance(f, And):
        return (Or if neg else And)(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Or):
        return (And if neg else Or)(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Exists):
        return (Forall if neg else Exists)(f.var, _nnf(f.body, neg))
    if isinstance(f, Forall):
        return (Exists if neg else Forall)(f.var, _nnf(f.body, neg))
    raise TypeError(f)


def rho(f: Formula) -> int:
    """Depth of quantifier alternations, measured on the negation normal form.

    A maximal block of like quantifiers counts 1 and every switch between
    existential and universal blocks along a branch adds 1.
    """
    return _rho(nnf(f))[0]


def _rho(f: Formula) -> tuple[int, frozenset]:
    if isinstance(f, ATOMIC) or isinstance(f, Not):
        return 0, frozenset()
    if isinstance(f, (And, Or)):
        (ra, ka), (rb, kb) = _rho(f.left), _rho(f.right)
        if ra == rb:
            return ra, ka | kb
        return (ra, ka) if ra > rb else (rb, kb)
    q = type(f)
    r, kinds = _rho(f.body)
    if r == 0:
        return 1, frozenset({q})
    if kinds == {q}:
        return r, kinds
    return r + 1, frozenset({q})


# ---------------------------------------------------------------- numerals

def numeral_formula(n: int, style: str = "unfolded", v: int = 0, fresh: Optional[int] = None) -> Formula:
    """A formula with free variable ``x{v}`` defining the number ``n``.

    ``unfolded`` is the recursive relational form: ``Z(x)`` for 0 and
    ``exists y. (numeral_n(y) & S(y, x))`` for n+1.  ``offset`` is the single
    atom ``x = S^n(0)``.
    """
    if style == "offset":
        return Eq(var(v), num(n))
    if style != "unfolded":
        raise ValueError(f"unknown numeral style {style!r}")
    start = v + 1 if fresh is None else fresh
    names = [v] + [start + i for i in range(n)]
    f: Formula = rel("Z", names[n])
    for i in range(n, 0, -1):
        f = Exists(names[i], And(f, rel("S", names[i], names[i - 1])))
    return f


# --------------------------------------------------------------- unwinding

def unwind_terms(f: Formula, keep: Optional[Callable[[Formula], bool]] = None) -> Formula:
    """Replace 0 and successor offsets by relational Z/S chains.

    Each atom with non-variable terms becomes nested existentials over fresh
    variables linked by ``S`` edges and anchored at ``Z`` for 0-based terms.
    Ground atoms fold to ``true``/``false``.  Atoms for which ``keep`` holds
    are left alone.
    """
    counter = [max_var(f) + 1]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def chain(base: int, k: int, cont: Callable[[int], Formula]) -> Formula:
        if k == 0:
            return cont(base)
        y = fresh()
        return Exists(y, And(rel("S", base, y), chain(y, k - 1, cont)))

    def value(t: Term, cont: Callable[[int], Formula]) -> Formula:
        if t.var is None:
            z = fresh()
            return Exists(z, And(rel("Z", z), chain(z, t.offset, cont)))
        return chain(t.var, t.offset, cont)

    def eq_chain(base: int, k: int, target: int) -> Formula:
        # base + k = target
        if k == 0:
            return Eq(var(base), var(target))
        if k == 1:
            return rel("S", base, target)
        y = fresh()
        return Exists(y, And(rel("S", base, y), eq_chain(y, k - 1, target)))

    def on_atom(a: Formula) -> Formula:
        terms = atom_terms(a)
        if all(t.var is not None and t.offset == 0 for t in terms):
            return a
        if keep is not None and keep(a):
            return a
        if isinstance(a, (Eq, Lt)):
            s, t = a.left, a.right
            m = min(s.offset, t.offset)
            s, t = s.shift(-m), t.shift(-m)
            if s.var is None and t.var is None:
                ok = s.offset == t.offset if isinstance(a, Eq) else s.offset < t.offset
                return TOP if ok else BOT
            if isinstance(a, Eq):
                if s.var is not None and t.var is not None:
                    if t.offset:
                        s, t = t, s
                    return eq_chain(s.var, s.offset, t.var)
                if s.var is None:
                    s, t = t, s
                # s is variable based, t is 0 + c; one offset is zero
                if s.offset:
                    return BOT
                if t.offset == 0:
                    return rel("Z", s.var)
                z = fresh()
                return Exists(z, And(rel("Z", z), eq_chain(z, t.offset, s.var)))
            return value(s, lambda u: value(t, lambda w: Lt(var(u), var(w))))
        args = list(terms)

        def build(i: int, acc: list[int]) -> Formula:
            if i == len(args):
                return Atom(a.rel, tuple(var(x) for x in acc))
            return value(args[i], lambda u: build(i + 1, acc + [u]))

        return build(0, [])

    return map_formula(f, on_atom)


def fold_numerals(f: Formula) -> Formula:
    """Inverse direction of unwinding for the W language: Z/S atoms become
    offset equations (``Z(t)`` is ``t = 0``, ``S(s, t)`` is ``S(s) = t``)."""
    def on_atom(a: Formula) -> Formula:
        if isinstance(a, Atom) and a.rel == "Z" and len(a.args) == 1:
            return Eq(a.args[0], ZERO)
        if isinstance(a, Atom) and a.rel == "S" and len(a.args) == 2:
            return Eq(a.args[0].shift(1), a.args[1])
        return a
    return map_formula(f, on_atom)
