import pytest

from enayat.corpus import FormulaSampler
from enayat.oracle import UncoveredVariable, bounded_eval, oracle_bound, stable_eval
from enayat.syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Iff, Implies, Lt, Not, Or, Term, Top, free_vars, parse,
    quantifier_rank, unwind_terms,
)
from enayat.theories import WPRIME_SIG


def naive(f, bound, env, depth, level0):
    """Scalar recursion over the same depth-dependent ranges."""
    def t(x: Term):
        return x.offset + (0 if x.var is None else env[x.var])
    if isinstance(f, (Top, Bot)):
        return isinstance(f, Top)
    if isinstance(f, Eq):
        return t(f.left) == t(f.right)
    if isinstance(f, Lt):
        return t(f.left) < t(f.right)
    if isinstance(f, Atom):
        a = [t(x) for x in f.args]
        return {"Z": lambda: a[0] == 0, "S": lambda: a[0] + 1 == a[1], "E": lambda: a[0] % 2 == 0}[f.rel]()
    if isinstance(f, Not):
        return not naive(f.body, bound, env, depth, level0)
    if isinstance(f, And):
        return naive(f.left, bound, env, depth, level0) and naive(f.right, bound, env, depth, level0)
    if isinstance(f, Or):
        return naive(f.left, bound, env, depth, level0) or naive(f.right, bound, env, depth, level0)
    if isinstance(f, Implies):
        return (not naive(f.left, bound, env, depth, level0)) or naive(f.right, bound, env, depth, level0)
    if isinstance(f, Iff):
        return naive(f.left, bound, env, depth, level0) == naive(f.right, bound, env, depth, level0)
    n = bound * (depth + level0 + 1) + 1
    results = (naive(f.body, bound, {**env, f.var: v}, depth + 1, level0) for v in range(n))
    return any(results) if isinstance(f, Exists) else all(results)


def test_agrees_with_naive_recursion():
    s = FormulaSampler(11, max_const=3, evenness=True, implications=True)
    for _ in range(300):
        f = s.with_free([0], s.rng.randint(0, 2), size=5)
        for n in range(0, 7, 3):
            assert bounded_eval(f, 3, {0: n}) == naive(f, 3, {0: n}, 0, 1), str(f)


def test_pinned_chains_agree_with_naive_recursion():
    s = FormulaSampler(12, max_const=3)
    for _ in range(200):
        f = unwind_terms(s.with_free([0], s.rng.randint(0, 1), size=4))
        if quantifier_rank(f) > 4:
            continue
        for n in (0, 2, 5):
            assert bounded_eval(f, 2, {0: n}) == naive(f, 2, {0: n}, 0, 1), str(f)


@pytest.mark.parametrize("text, value", [
    ("forall x0. exists x1. x0 < x1", True),
    ("exists x0. forall x1. ~(x1 < x0)", True),
    ("forall x0. E(x0) | E(S(x0))", True),
    ("exists x0. forall x1. x1 < x0", False),
])
def test_small_sentences(text, value):
    f = parse(text, WPRIME_SIG)
    assert stable_eval(f) is value


def test_bound_formula_and_missing_values():
    f = parse("exists x1. x1 < S(S(S(x0)))", WPRIME_SIG)
    assert oracle_bound(f) == 3 + 2 ** 3
    with pytest.raises(UncoveredVariable):
        bounded_eval(f, 4)
    assert free_vars(f) == {0}


def test_split_disjunctions_agree_with_naive_recursion():
    from enayat.translation import builtin, translate
    s = FormulaSampler(13, max_const=2, evenness=True)
    iota = builtin("iota")
    checked = 0
    for _ in range(120):
        f = translate(iota, unwind_terms(s.with_free([0], 0, size=3)))
        if quantifier_rank(f) > 4:
            continue
        checked += 1
        for x0, x1 in [(0, 0), (0, 1), (1, 1), (2, 3)]:
            env = {0: x0, 1: x1}
            assert bounded_eval(f, 2, env) == naive(f, 2, env, 0, 1), str(f)
    assert checked > 50
