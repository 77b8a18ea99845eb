import pytest
from hypothesis import given, strategies as st

from enayat.corpus import FormulaSampler
from enayat.oracle import bounded_eval
from enayat.syntax import (
    And, ArityError, Atom, Eq, Exists, Forall, FormulaSyntaxError, Lt, Not, Or, Signature, Term,
    UnknownSymbolError, free_vars, normalize_bound, num, numeral_formula, parse, print_canonical,
    rel, rho, size, substitute, unwind_terms, var,
)
from enayat.theories import W_SIG, WPRIME_SIG


@pytest.mark.parametrize("text, expected", [
    ("exists x0. Z(x0)", Exists(0, Atom("Z", (var(0),)))),
    ("0 < S(S(0))", Lt(Term(None, 0), Term(None, 2))),
    ("forall x1. (x1 = x1)  # trailing comment", Forall(1, Eq(var(1), var(1)))),
    ("S(S(x3)) = 0", Eq(Term(3, 2), Term(None, 0))),
])
def test_parse_examples(text, expected):
    assert parse(text, WPRIME_SIG) == expected


def test_free_variables_of_example():
    f = parse("exists x0. (x0 = S(x1) & ~E(x0))", WPRIME_SIG)
    assert free_vars(f) == {1}


@pytest.mark.parametrize("text, error", [
    ("exists x0 Z(x0)", FormulaSyntaxError),
    ("Z(x0) &", FormulaSyntaxError),
    ("Q(x0)", UnknownSymbolError),
    ("S(x0)", ArityError),
    ("Z(x0, x1)", ArityError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse(text, W_SIG)


def test_syntax_error_carries_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("Z(x0) & & Z(x1)", W_SIG)
    assert "position" in str(info.value)


@pytest.mark.parametrize("f, text", [
    (Exists(0, Atom("Z", (var(0),))), "exists x0. Z(x0)"),
    (And(rel("Z", 0), And(rel("Z", 1), rel("Z", 2))), "Z(x0) & (Z(x1) & Z(x2))"),
    (And(And(rel("Z", 0), rel("Z", 1)), rel("Z", 2)), "Z(x0) & Z(x1) & Z(x2)"),
    (Term(3, 2), "S(S(x3))"),
])
def test_print_examples(f, text):
    assert print_canonical(f) == text


def test_round_trip_sampled():
    s = FormulaSampler(1, evenness=True, implications=True)
    for _ in range(2000):
        f = s.formula(s.rng.randint(0, 3), [0, 1], size=8)
        assert parse(print_canonical(f), WPRIME_SIG) == f


@pytest.mark.parametrize("f, expected", [
    (Lt(num(0), var(0)), "exists x1. Z(x1) & x1 < x0"),
    (Eq(Term(0, 1), var(1)), "S(x0, x1)"),
    (Eq(var(0), num(2)), "exists x1. Z(x1) & (exists x2. S(x1, x2) & S(x2, x0))"),
])
def test_unwind_examples(f, expected):
    assert print_canonical(unwind_terms(f)) == expected


def _relational(f) -> bool:
    from enayat.syntax import atom_terms, subformulas
    return all(t.offset == 0 and t.var is not None for g in subformulas(f) for t in atom_terms(g))


def test_unwind_preserves_truth():
    s = FormulaSampler(2, max_const=4)
    for _ in range(150):
        f = s.with_free([0], s.rng.randint(0, 2), size=5)
        g = unwind_terms(f)
        assert _relational(g)
        for n in range(0, 33, 4):
            assert bounded_eval(f, 48, {0: n}) == bounded_eval(g, 48, {0: n}), print_canonical(f)


@pytest.mark.parametrize("text, value", [
    ("Z(0)", 0),
    ("exists x0. Z(x0)", 1),
    ("exists x0. forall x1. ~(x1 < x0)", 2),
    ("exists x0. exists x1. x0 < x1", 1),
    ("~(exists x0. forall x1. x0 < x1)", 2),
    ("forall x0. (exists x1. x0 < x1) -> Z(x0)", 1),
    ("forall x0. Z(x0) -> (exists x1. x0 < x1)", 2),
    ("(exists x0. Z(x0)) & (forall x0. Z(x0))", 1),
    ("forall x0. exists x1. forall x2. x0 < x1 | x2 = x2", 3),
])
def test_rho_table(text, value):
    assert rho(parse(text, W_SIG)) == value


@given(st.lists(st.sampled_from(["Z(x0)", "exists x1. S(x0, x1)", "forall x1. x1 < x0", "x0 = 0"]),
                min_size=3, max_size=3), st.sampled_from([And, Or]))
def test_rho_reassociation(parts, op):
    a, b, c = (parse(p, W_SIG) for p in parts)
    assert rho(op(a, op(b, c))) == rho(op(op(a, b), c))


@pytest.mark.parametrize("f, v, t, expected", [
    (Lt(var(0), var(1)), 0, num(1), Lt(Term(None, 1), var(1))),
    (Exists(0, Lt(var(0), var(1))), 0, num(0), Exists(0, Lt(var(0), var(1)))),
])
def test_substitute_examples(f, v, t, expected):
    assert substitute(f, v, t) == expected


def test_substitute_avoids_capture():
    g = substitute(Exists(1, Lt(var(0), var(1))), 0, var(1))
    assert isinstance(g, Exists) and g.var != 1
    assert g.body == Lt(var(1), var(g.var))


def test_numeral_examples():
    assert numeral_formula(0, "unfolded") == rel("Z", 0)
    two = numeral_formula(2, "unfolded")
    assert print_canonical(two) == "exists x1. (exists x2. Z(x2) & S(x2, x1)) & S(x1, x0)"
    big = numeral_formula(10 ** 6, "offset")
    assert big == Eq(var(0), Term(None, 10 ** 6))
    assert size(big) == size(numeral_formula(1, "offset"))


@pytest.mark.parametrize("n", range(0, 33))
def test_numeral_styles_agree(n):
    a, b = numeral_formula(n, "unfolded"), numeral_formula(n, "offset")
    for m in range(0, 40):
        assert bounded_eval(a, 40, {0: m}) == bounded_eval(b, 40, {0: m}) == (m == n)


@given(st.integers(0, 20), st.integers(0, 20))
def test_substituted_numeral(n, m):
    f = substitute(numeral_formula(n, "offset"), 0, num(m))
    assert bounded_eval(f, 24) == (n == m)


def test_normalize_bound_is_idempotent():
    s = FormulaSampler(3)
    for _ in range(300):
        f = normalize_bound(s.sentence(3))
        assert normalize_bound(f) == f


def test_signature_rejects_duplicates_and_equality():
    with pytest.raises(ValueError):
        Signature("bad", (("Z", 1), ("Z", 2)))
    with pytest.raises(ValueError):
        Signature("bad", (("=", 2),))
    assert Not(rel("Z", 0)) == Not(rel("Z", 0))
