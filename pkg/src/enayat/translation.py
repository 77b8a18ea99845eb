"""Multidimensional relative translations between relational signatures.

Source variable ``xi`` of a ``d``-dimensional translation becomes the target
tuple ``x(i*d) .. x(i*d + d - 1)``.  Per-symbol formulas for an ``a``-ary
relation use the free variables ``0 .. a*d - 1`` in argument order, the domain
formula uses ``0 .. d - 1`` and the equality formula ``0 .. 2d - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .setformulas import SetFormulas
from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Iff, Implies, Lt, Not, Or, Signature,
    Term, Top, BOT, TOP, ATOMIC, BINARY, atom_terms, conj, disj, exists_block,
    forall_block, free_vars, max_var, normalize_bound, num, parse, print_canonical,
    rel, unwind_terms, var,
)
from .theories import SET_SIG, R_SIG, W_SIG, WPRIME_SIG, truth_extended

Hook = Callable[[Formula], Optional[Formula]]


class SignatureMismatch(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


class UnknownTranslation(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class Translation:
    name: str
    dim: int
    source: Signature
    target: Signature
    delta: Formula
    symbols: dict = field(default_factory=dict)
    equality: Optional[Formula] = None
    fujimoto: bool = False
    shared: frozenset = frozenset()
    hook: Optional[Hook] = None

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise ValueError("dimension must be at least 1")
        if not free_vars(self.delta) <= set(range(d)):
            raise ArityMismatch(f"domain formula of {self.name} uses variables beyond {d}")
        if self.equality is not None and not free_vars(self.equality) <= set(range(2 * d)):
            raise ArityMismatch(f"equality formula of {self.name} uses variables beyond {2 * d}")
        for r, a in self.source.relations:
            if r in self.symbols:
                if not free_vars(self.symbols[r]) <= set(range(a * d)):
                    raise ArityMismatch(f"formula for {r} uses variables beyond {a * d}")
            elif r not in self.shared:
                raise SignatureMismatch(f"{self.name} has no formula for {r}/{a}")
        if self.fujimoto:
            if d != 1 or not isinstance(self.delta, Top):
                raise ValueError("a Fujimoto translation is one-dimensional and unrelativized")
            if self.equality is not None:
                raise ValueError("a Fujimoto translation keeps equality")

    def keeps(self, a: Formula) -> bool:
        """Whether the atom is passed through literally."""
        if not self.fujimoto:
            return False
        if isinstance(a, Eq):
            return True
        name = "Lt" if isinstance(a, Lt) else getattr(a, "rel", None)
        return name in self.shared

    def equality_formula(self) -> Formula:
        if self.equality is not None:
            return self.equality
        d = self.dim
        return conj(*(Eq(var(j), var(d + j)) for j in range(d)))


# ----------------------------------------------------------------- helpers

def instantiate(f: Formula, mapping: dict[int, int], fresh: Callable[[], int]) -> Formula:
    """Rename free variables by ``mapping`` and every binder to a fresh variable."""
    def go(g: Formula, env: dict[int, int]) -> Formula:
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, ATOMIC):
            def tm(t: Term) -> Term:
                if t.var is None:
                    return t
                if t.var in env:
                    return Term(env[t.var], t.offset)
                return Term(mapping.get(t.var, t.var), t.offset)
            if isinstance(g, Atom):
                return Atom(g.rel, tuple(tm(t) for t in g.args))
            return type(g)(tm(g.left), tm(g.right))
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, BINARY):
            return type(g)(go(g.left, env), go(g.right, env))
        v = fresh()
        return type(g)(v, go(g.body, {**env, g.var: v}))

    return go(f, {})


def _coords(i: int, d: int) -> list[int]:
    return [i * d + j for j in range(d)]


# --------------------------------------------------------------- translate

def translate(tau: Translation, f: Formula, hooks: bool = True) -> Formula:
    d = tau.dim
    hook = tau.hook if hooks else None

    def keep(a: Formula) -> bool:
        return tau.keeps(a) or (hook is not None and hook(a) is not None)

    g = unwind_terms(f, keep)
    counter = [(max_var(g) + 1) * d]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def place(phi: Formula, groups: list[int]) -> Formula:
        mapping = {}
        for k, i in enumerate(groups):
            for j in range(d):
                mapping[k * d + j] = i * d + j
        return instantiate(phi, mapping, fresh)

    def atom(a: Formula) -> Formula:
        if isinstance(a, (Top, Bot)):
            return a
        if isinstance(a, Atom):
            arity = tau.source.arity(a.rel)
            if arity is None:
                raise SignatureMismatch(f"{a.rel} is not in the source signature {tau.source.name}")
            if arity != len(a.args):
                raise ArityMismatch(f"{a.rel} has arity {arity}, used with {len(a.args)} arguments")
        if tau.keeps(a):
            return a
        terms = atom_terms(a)
        if any(t.var is None or t.offset for t in terms):
            out = hook(a) if hook is not None else None
            if out is None:
                raise SignatureMismatch(f"cannot translate {a} with {tau.name}")
            return instantiate(out, {}, fresh)
        groups = [t.var for t in terms]
        if isinstance(a, Eq):
            return place(tau.equality_formula(), groups)
        name = "Lt" if isinstance(a, Lt) else a.rel
        arity = tau.source.arity(name)
        if arity is None:
            raise SignatureMismatch(f"{name} is not in the source signature {tau.source.name}")
        if arity != len(groups):
            raise ArityMismatch(f"{name} has arity {arity}, used with {len(groups)} arguments")
        if name not in tau.symbols:
            return a  # shared symbol of a Fujimoto translation
        return place(tau.symbols[name], groups)

    def go(h: Formula) -> Formula:
        if isinstance(h, ATOMIC):
            return atom(h)
        if isinstance(h, Not):
            return Not(go(h.body))
        if isinstance(h, BINARY):
            return type(h)(go(h.left), go(h.right))
        vs = _coords(h.var, d)
        body = go(h.body)
        if isinstance(tau.delta, Top):
            block = exists_block if isinstance(h, Exists) else forall_block
            return block(vs, body)
        dom = place(tau.delta, [h.var])
        if isinstance(h, Exists):
            return exists_block(vs, And(dom, body))
        return forall_block(vs, Implies(dom, body))

    return go(g)


# ----------------------------------------------------------------- compose

def compose(sigma: Translation, tau: Translation) -> Translation:
    """The translation that applies ``sigma`` first and then ``tau``."""
    if set(sigma.target.relations) != set(tau.source.relations):
        raise SignatureMismatch(f"{sigma.name} targets {sigma.target.name}, {tau.name} reads {tau.source.name}")
    ds, dt = sigma.dim, tau.dim
    D = ds * dt

    def through(phi: Formula) -> Formula:
        return translate(tau, phi)

    symbols = {}
    for r, a in sigma.source.relations:
        phi = sigma.symbols.get(r)
        if phi is None:
            phi = Lt(var(0), var(1)) if r == "Lt" else rel(r, *range(a))
        symbols[r] = through(phi)

    parts = []
    if not isinstance(tau.delta, Top):
        counter = [D]

        def fresh() -> int:
            counter[0] += 1
            return counter[0] - 1
        for j in range(ds):
            parts.append(instantiate(tau.delta, {k: j * dt + k for k in range(dt)}, fresh))
    if not isinstance(sigma.delta, Top):
        parts.append(through(sigma.delta))
    delta = conj(*parts) if parts else TOP

    equality = None
    if sigma.equality is not None or tau.equality is not None:
        equality = through(sigma.equality_formula())

    fujimoto = sigma.fujimoto and tau.fujimoto
    shared = (sigma.shared & tau.shared) if fujimoto else frozenset()
    if fujimoto:
        symbols = {r: phi for r, phi in symbols.items() if r not in shared}

    hook = None
    if sigma.hook is not None or tau.hook is not None:
        def hook(a: Formula) -> Optional[Formula]:
            return translate(tau, translate(sigma, a))

    return Translation(f"{sigma.name};{tau.name}", D, sigma.source, tau.target, delta,
                       symbols, equality, fujimoto, shared, hook)


# ----------------------------------------------------------- disjunctive

def pad(tau: Translation, dim: int) -> Translation:
    """Raise the dimension by repeating the last coordinate."""
    d = tau.dim
    if dim == d:
        return tau
    if dim < d:
        raise ValueError("padding cannot lower the dimension")

    def remap(phi: Formula, groups: int) -> Formula:
        mapping = {k * d + j: k * dim + j for k in range(groups) for j in range(d)}
        counter = [groups * dim]

        def fresh() -> int:
            counter[0] += 1
            return counter[0] - 1
        return instantiate(phi, mapping, fresh)

    extra = [Eq(var(j), var(d - 1)) for j in range(d, dim)]
    delta = conj(*([] if isinstance(tau.delta, Top) else [remap(tau.delta, 1)]), *extra)
    symbols = {r: remap(phi, tau.source.arity(r)) for r, phi in tau.symbols.items()}
    for r, a in tau.source.relations:
        if r not in symbols:
            base = Lt(var(0), var(1)) if r == "Lt" else rel(r, *range(a))
            symbols[r] = remap(base, a)
    equality = remap(tau.equality_formula(), 2)
    return Translation(f"{tau.name}^{dim}", dim, tau.source, tau.target, delta, symbols, equality)


def disjunctive(k: Translation, a: Formula, m: Translation) -> Translation:
    """Translate by ``k`` where the target sentence ``a`` holds and by ``m`` elsewhere."""
    if free_vars(a):
        raise ValueError("the switching formula must be a sentence")
    if set(k.source.relations) != set(m.source.relations) or set(k.target.relations) != set(m.target.relations):
        raise SignatureMismatch(f"{k.name} and {m.name} differ in signature")
    dim = max(k.dim, m.dim)
    k, m = pad(k, dim), pad(m, dim)
    k_full, m_full = pad_full(k), pad_full(m)

    def choose(p: Formula, q: Formula) -> Formula:
        return Or(And(a, p), And(Not(a), q))

    symbols = {r: choose(k_full.symbols[r], m_full.symbols[r]) for r, _ in k.source.relations}
    return Translation(f"{k.name}<{a}>{m.name}", dim, k.source, k.target,
                       choose(k_full.delta, m_full.delta), symbols,
                       choose(k.equality_formula(), m.equality_formula()))


def pad_full(tau: Translation) -> Translation:
    """The same translation with every symbol, domain and equality made explicit."""
    symbols = dict(tau.symbols)
    for r, a in tau.source.relations:
        if r not in symbols:
            symbols[r] = Lt(var(0), var(1)) if r == "Lt" else rel(r, *range(a))
    return Translation(tau.name, tau.dim, tau.source, tau.target, tau.delta, symbols,
                       tau.equality_formula(), hook=tau.hook)


# ------------------------------------------------------------ canonical

def canonical(f: Formula) -> Formula:
    """Normal form for comparing translations structurally.

    Conjunction and disjunction chains are flattened, adjacent existential
    blocks joined across a trailing conjunct, guarded universal blocks joined
    and nested implications curried, then bound variables are renumbered.
    """
    return normalize_bound(_canon(f))


def _flat(cls, fs: list[Formula]) -> list[Formula]:
    out = []
    for g in fs:
        stack = [g]
        while stack:
            h = stack.pop()
            if isinstance(h, cls):
                stack.append(h.right)
                stack.append(h.left)
            else:
                out.append(h)
    return out


def _rebuild(cls, fs: list[Formula]) -> Formula:
    out = fs[0]
    for g in fs[1:]:
        out = cls(out, g)
    return out


def _peel(f: Formula, cls) -> tuple[list[int], Formula]:
    vs = []
    while isinstance(f, cls):
        vs.append(f.var)
        f = f.body
    return vs, f


def _canon(f: Formula) -> Formula:
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(_canon(f.body))
    if isinstance(f, (And, Or)):
        cls = type(f)
        return _rebuild(cls, _flat(cls, [_canon(f.left), _canon(f.right)]))
    if isinstance(f, Implies):
        a, b = _canon(f.left), _canon(f.right)
        if isinstance(b, Implies):
            return Implies(_rebuild(And, _flat(And, [a, b.left])), b.right)
        return Implies(a, b)
    if isinstance(f, Iff):
        return Iff(_canon(f.left), _canon(f.right))
    body = _canon(f.body)
    if isinstance(f, Exists) and isinstance(body, And):
        parts = _flat(And, [body])
        last = parts[-1]
        if isinstance(last, Exists):
            ys, inner = _peel(last, Exists)
            rest = parts[:-1]
            if f.var not in ys and not any(set(ys) & free_vars(p) for p in rest):
                return Exists(f.var, exists_block(ys, _rebuild(And, _flat(And, rest + [inner]))))
    if isinstance(f, Forall) and isinstance(body, Implies) and isinstance(body.right, Forall):
        ys, inner = _peel(body.right, Forall)
        if not set(ys) & free_vars(body.left) and f.var not in ys:
            if isinstance(inner, Implies):
                new = Implies(_rebuild(And, _flat(And, [body.left, inner.left])), inner.right)
            else:
                new = Implies(body.left, inner)
            return Forall(f.var, forall_block(ys, new))
    return type(f)(f.var, body)


def same_translation(s: Translation, t: Translation) -> bool:
    """Structural equality of two translations up to ``canonical``."""
    if s.dim != t.dim or set(s.source.relations) != set(t.source.relations):
        return False
    if canonical(s.delta) != canonical(t.delta):
        return False
    if canonical(s.equality_formula()) != canonical(t.equality_formula()):
        return False
    sf, tf = pad_full(s), pad_full(t)
    return all(canonical(sf.symbols[r]) == canonical(tf.symbols[r]) for r, _ in s.source.relations)


# -------------------------------------------------------------- built-ins

def _s(a: int, b: int) -> Formula:
    return rel("S", a, b)


def _e(a: int, b: int) -> Formula:
    return Eq(var(a), var(b))


def _pair_hook(a: Formula) -> Optional[Formula]:
    """Closed forms for numeral constraints and successor shifts on pairs."""
    if not isinstance(a, Eq):
        return None
    s, t = a.left, a.right
    m = min(s.offset, t.offset)
    s, t = s.shift(-m), t.shift(-m)
    if s.var is None and t.var is None:
        return TOP if s.offset == t.offset else BOT
    if s.var is None:
        s, t = t, s
    if t.var is None:
        n = t.offset - s.offset
        if n < 0:
            return BOT
        v = s.var
        return And(Eq(var(2 * v), num(n // 2)), Eq(var(2 * v + 1), num(n // 2 + n % 2)))
    if s.var == t.var:
        return TOP if s.offset == t.offset else BOT
    if s.offset == 0:
        s, t = t, s
    k, u, w = s.offset, s.var, t.var  # w = u + k
    if k == 0:
        return None
    u0, u1, w0, w1 = 2 * u, 2 * u + 1, 2 * w, 2 * w + 1
    if k % 2 == 0:
        return And(Eq(var(w0), Term(u0, k // 2)), Eq(var(w1), Term(u1, k // 2)))
    b = k // 2
    return Or(
        conj(_e(u1, u0), Eq(var(w0), Term(u0, b)), Eq(var(w1), Term(u1, b + 1))),
        conj(Eq(var(u1), Term(u0, 1)), Eq(var(w0), Term(u0, b + 1)), Eq(var(w1), Term(u1, b))),
    )


def _iota_symbols(with_e: bool) -> dict:
    out = {
        "Z": And(rel("Z", 0), rel("Z", 1)),
        "S": Or(conj(_e(1, 0), _e(2, 0), _s(0, 3)), conj(_s(0, 1), _s(0, 2), _s(0, 3))),
        "Lt": Or(And(_e(2, 0), Lt(var(1), var(3))), Lt(var(0), var(2))),
    }
    if with_e:
        out["E"] = _e(0, 1)
    return out


_IOTA_DELTA = Or(_e(1, 0), _s(0, 1))


def identity(sig: Signature) -> Translation:
    return Translation(f"id[{sig.name}]", 1, sig, sig, TOP,
                       fujimoto=True, shared=frozenset(r for r, _ in sig.relations))


def iota() -> Translation:
    return Translation("iota", 2, WPRIME_SIG, W_SIG, _IOTA_DELTA, _iota_symbols(True), hook=_pair_hook)


def nu_restriction() -> Translation:
    return Translation("nu_restriction", 2, W_SIG, W_SIG, _IOTA_DELTA, _iota_symbols(False), hook=_pair_hook)


def kappa() -> Translation:
    return Translation("kappa", 1, truth_extended(W_SIG, 1), WPRIME_SIG, TOP, {"T": rel("E", 0)},
                       fujimoto=True, shared=frozenset({"Z", "S", "Lt"}))


MACRO_SIG = Signature("VS-defined", (("In", 2), ("Empty", 1), ("Succ", 2), ("Add", 3), ("Mul", 3), ("Sim", 2)))


def rho_macro() -> Translation:
    """Cardinal arithmetic with the defined notions kept as atoms."""
    return Translation("rho_macro", 1, R_SIG, MACRO_SIG, _e(0, 0), {
        "Z": rel("Empty", 0), "S": rel("Succ", 0, 1), "A": rel("Add", 0, 1, 2), "M": rel("Mul", 0, 1, 2),
    }, equality=rel("Sim", 0, 1))


def expand_macros(f: Formula) -> Formula:
    """Replace the defined atoms of ``rho_macro`` by their membership definitions."""
    b = SetFormulas(max_var(f) + 1)
    table = {"Empty": b.empty, "Succ": b.s_rho, "Add": b.a_rho, "Mul": b.m_rho, "Sim": b.sim}

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom) and g.rel in table:
            return table[g.rel](*(t.var for t in g.args))
        if isinstance(g, ATOMIC):
            return g
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        return type(g)(g.var, go(g.body))

    return go(f)


def rho_app_a() -> Translation:
    """Cardinal arithmetic in pure membership: numbers are sets up to equinumerosity."""
    m = rho_macro()
    return Translation("rho_appA", 1, R_SIG, SET_SIG, m.delta,
                       {r: expand_macros(phi) for r, phi in m.symbols.items()},
                       equality=expand_macros(m.equality))


_BUILTINS = {
    "iota": iota,
    "kappa": kappa,
    "nu_restriction": nu_restriction,
    "rho_appA": rho_app_a,
    "rho_macro": rho_macro,
}


def builtin(name: str) -> Translation:
    if name.startswith("identity"):
        from .theories import get_theory
        inner = name[len("identity"):].strip("()[]: ") or "W"
        return identity(get_theory(inner).signature)
    if name not in _BUILTINS:
        raise UnknownTranslation(f"unknown translation {name!r}; known: {', '.join(sorted(_BUILTINS))}, identity(<theory>)")
    return _BUILTINS[name]()


# ---------------------------------------------------------- text format

def _sig_line(sig: Signature) -> str:
    return " ".join([sig.name] + [f"{r}/{a}" for r, a in sig.relations])


def _parse_sig(text: str) -> Signature:
    name, *rels = text.split()
    out = []
    for item in rels:
        r, a = item.split("/")
        out.append((r, int(a)))
    return Signature(name, tuple(out))


def dumps(tau: Translation) -> str:
    lines = [
        f"translation: {tau.name}",
        f"dimension: {tau.dim}",
        f"source: {_sig_line(tau.source)}",
        f"target: {_sig_line(tau.target)}",
        f"domain: {print_canonical(tau.delta)}",
    ]
    if tau.fujimoto:
        lines.append("fujimoto: " + " ".join(sorted(tau.shared)))
    if tau.equality is not None:
        lines.append(f"equality: {print_canonical(tau.equality)}")
    for r, _ in tau.source.relations:
        if r in tau.symbols:
            lines.append(f"{r}: {print_canonical(tau.symbols[r])}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Translation:
    """Read the ``key: value`` format written by ``dumps``; hooks are not carried."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"expected 'key: value', got {raw!r}")
        fields[key.strip()] = value.strip()
    for required in ("dimension", "source", "target"):
        if required not in fields:
            raise ValueError(f"missing {required!r} line")
    source, target = _parse_sig(fields["source"]), _parse_sig(fields["target"])
    symbols = {r: parse(fields[r], target) for r, _ in source.relations if r in fields}
    fujimoto = "fujimoto" in fields
    shared = frozenset(fields.get("fujimoto", "").split())
    return Translation(
        fields.get("translation", "anonymous"), int(fields["dimension"]), source, target,
        parse(fields.get("domain", "true"), target), symbols,
        parse(fields["equality"], target) if "equality" in fields else None,
        fujimoto, shared,
    )
