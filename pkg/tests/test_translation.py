import pytest

from helpers import random_relational, random_translation

from enayat.corpus import FormulaSampler
from enayat.oracle import bounded_eval, stable_eval
from enayat.qe import decide_w
from enayat.syntax import (
    And, BOT, Eq, Exists, Not, Or, TOP, Term, free_vars, normalize_bound, num, numeral_formula,
    parse, rel, unwind_terms, var,
)
from enayat.theories import R_SIG, SET_SIG, W_SIG, WPRIME_SIG, truth_extended
from enayat.translation import (
    ArityMismatch, SignatureMismatch, Translation, UnknownTranslation, builtin, canonical, compose,
    disjunctive, dumps, identity, loads, pad, same_translation, translate,
)

BUILTINS = ["iota", "kappa", "nu_restriction", "rho_macro", "rho_appA", "identity(W)"]


def test_iota_clauses():
    i = builtin("iota")
    assert i.dim == 2
    assert translate(i, parse("E(x0)", WPRIME_SIG)) == Eq(var(0), var(1))
    assert translate(i, parse("Z(x0)", WPRIME_SIG)) == And(rel("Z", 0), rel("Z", 1))
    assert i.symbols["Lt"] == parse("(x2 = x0 & x1 < x3) | x0 < x2", W_SIG)
    assert i.delta == parse("x1 = x0 | S(x0, x1)", W_SIG)


def test_iota_relativizes_quantifiers():
    f = translate(builtin("iota"), parse("exists x0. E(x0)", WPRIME_SIG))
    assert f == parse("exists x0. exists x1. ((x1 = x0 | S(x0, x1)) & x0 = x1)", W_SIG)


def test_kappa_is_fujimoto():
    k = builtin("kappa")
    assert k.fujimoto and k.dim == 1 and k.delta == TOP
    assert k.symbols == {"T": rel("E", 0)}


@pytest.mark.parametrize("name", BUILTINS)
def test_identity_laws_on_builtins(name):
    tau = builtin(name)
    assert same_translation(compose(identity(tau.source), tau), tau)
    assert same_translation(compose(tau, identity(tau.target)), tau)


def test_identity_translation_fixes_formulas():
    s = FormulaSampler(5)
    ident = identity(W_SIG)
    for _ in range(200):
        f = random_relational(s, [0, 1])
        assert translate(ident, f) == f


def test_fujimoto_fixes_base_sentences():
    s = FormulaSampler(6)
    for _ in range(200):
        f = s.sentence(3)
        assert translate(builtin("kappa"), f) == f


@pytest.mark.parametrize("a, b", [("kappa", "iota"), ("iota", "nu_restriction"),
                                  ("nu_restriction", "nu_restriction"), ("identity(W)", "nu_restriction")])
def test_dimension_law_builtins(a, b):
    s, t = builtin(a), builtin(b)
    assert compose(s, t).dim == s.dim * t.dim


def test_composition_law_random():
    s = FormulaSampler(99, names=3)
    for k in range(25):
        sigma, tau = random_translation(2 * k, 1 + k % 2), random_translation(2 * k + 1, 1 + (k // 2) % 2)
        c = compose(sigma, tau)
        assert c.dim == sigma.dim * tau.dim
        for _ in range(4):
            a = random_relational(s, [0])
            assert canonical(translate(c, a)) == canonical(translate(tau, translate(sigma, a)))


def test_composition_law_kappa_iota():
    s = FormulaSampler(7)
    ki = compose(builtin("kappa"), builtin("iota"))
    for _ in range(50):
        a = unwind_terms(s.sentence(2))
        assert canonical(translate(ki, a)) == canonical(translate(builtin("iota"), translate(builtin("kappa"), a)))


def test_commutation():
    tau = random_translation(3, 2)
    a, b = parse("Z(x0)", W_SIG), parse("exists x1. x0 < x1", W_SIG)
    ta, tb = translate(tau, a), translate(tau, b)
    assert canonical(translate(tau, And(a, b))) == canonical(And(ta, tb))
    assert canonical(translate(tau, Or(a, b))) == canonical(Or(ta, tb))
    assert translate(tau, Not(a)) == Not(ta)


@pytest.mark.parametrize("n", range(0, 33))
def test_iota_numeral_hook_matches_unfolding(n):
    i = builtin("iota")
    hooked = translate(i, Eq(var(0), num(n)))
    unfolded = translate(i, numeral_formula(n, "unfolded"), hooks=False)
    for x0 in range(0, 20):
        for x1 in range(x0, x0 + 2):
            env = {0: x0, 1: x1}
            assert bounded_eval(hooked, 20, env) == bounded_eval(unfolded, 20, env)
    assert bounded_eval(hooked, 20, {0: n // 2, 1: n // 2 + n % 2})


@pytest.mark.parametrize("k", range(0, 33, 3))
def test_iota_shift_hook_matches_unfolding(k):
    i = builtin("iota")
    shift = Eq(Term(0, k), var(1))
    hooked, unfolded = translate(i, shift), translate(i, shift, hooks=False)
    for u in [(a, a + e) for a in range(0, 6) for e in (0, 1)]:
        for v in [(b, b + e) for b in range(0, 24) for e in (0, 1)]:
            env = {0: u[0], 1: u[1], 2: v[0], 3: v[1]}
            assert bounded_eval(hooked, 24, env) == bounded_eval(unfolded, 24, env)


def test_iota_semantic_soundness():
    s = FormulaSampler(2024, evenness=True, max_const=6)
    for _ in range(500):
        a = s.sentence(s.rng.randint(0, 3), size=5)
        expected = stable_eval(a)
        if expected is None:
            continue
        assert decide_w(translate(builtin("iota"), unwind_terms(a))) == expected, str(a)


def test_nu_restriction_preserves_truth():
    s = FormulaSampler(31)
    nu_r = builtin("nu_restriction")
    for _ in range(150):
        a = s.sentence(s.rng.randint(0, 3))
        assert decide_w(translate(nu_r, a)) == decide_w(a), str(a)


@pytest.mark.parametrize("switch, chosen", [(TOP, "k"), (BOT, "m"),
                                            (parse("exists x0. Z(x0)", W_SIG), "k"),
                                            (parse("forall x0. Z(x0)", W_SIG), "m")])
def test_disjunctive_selects(switch, chosen):
    k, m = builtin("nu_restriction"), random_translation(8, 1)
    d = disjunctive(k, switch, m)
    assert d.dim == max(k.dim, m.dim)
    pick = k if chosen == "k" else m
    s = FormulaSampler(12)
    for _ in range(60):
        a = s.sentence(2, size=4)
        assert decide_w(translate(d, a)) == decide_w(translate(pick, a)), str(a)


def test_padding_keeps_truth():
    tau = random_translation(21, 1)
    padded = pad(tau, 3)
    assert padded.dim == 3
    s = FormulaSampler(22)
    for _ in range(50):
        a = s.sentence(2, size=4)
        assert decide_w(translate(padded, a)) == decide_w(translate(tau, a))


@pytest.mark.parametrize("name", ["iota", "kappa", "nu_restriction", "rho_macro", "identity(R)"])
def test_text_format_round_trip(name):
    tau = builtin(name)
    back = loads(dumps(tau))
    assert back.dim == tau.dim and back.fujimoto == tau.fujimoto
    assert back.symbols == tau.symbols and back.delta == tau.delta
    assert set(back.source.relations) == set(tau.source.relations)


def test_errors():
    with pytest.raises(UnknownTranslation):
        builtin("zeta")
    with pytest.raises(SignatureMismatch):
        compose(builtin("iota"), builtin("kappa"))
    with pytest.raises(SignatureMismatch):
        translate(builtin("kappa"), rel("In", 0, 1))
    with pytest.raises(ArityMismatch):
        translate(identity(W_SIG), rel("Z", 0, 1))
    with pytest.raises(ValueError):
        Translation("bad", 1, W_SIG, W_SIG, rel("Z", 3), {})
    with pytest.raises(ValueError):
        Translation("bad", 1, truth_extended(W_SIG, 1), W_SIG, rel("Z", 0), {"T": rel("Z", 0)},
                    fujimoto=True)


def test_rho_macro_shape():
    r = builtin("rho_macro")
    assert r.source == R_SIG and r.dim == 1
    assert r.equality_formula() == rel("Sim", 0, 1)
    assert set(builtin("rho_appA").target.relations) == set(SET_SIG.relations)
