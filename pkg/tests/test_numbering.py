import pytest
from hypothesis import given, strategies as st

from enayat.corpus import FormulaSampler, sentences_up_to
from enayat.qe import NotASentence, SignatureViolation, decide_w
from enayat.numbering import (
    AND, END, EXISTS, BIT0, BIT1, LT, Z, DecodeError, DuplicateSentence, UnregisteredSymbol,
    corpus_numbering, deserialize, from_bijective, lengthlex, nu, nu_inverse, nu_star, serialize,
    star, to_bijective,
)
from enayat.syntax import (
    TOP, Atom, normalize_bound, desugar, parse, rel, subformulas, free_vars,
)
from enayat.theories import W_SIG, WPRIME_SIG


def test_serialization_of_example():
    f = parse("exists x0. Z(x0)", W_SIG)
    assert serialize(f) == (EXISTS, BIT0, END, Z, BIT0, END)
    assert nu(f) == to_bijective((4, 12, 14, 7, 12, 14)) == 2652258
    assert len(serialize(parse("Z(x0)", W_SIG))) < len(serialize(f))


def test_indices_are_binary():
    f = parse("exists x0. exists x1. exists x2. exists x3. x0 < x3", W_SIG)
    assert serialize(f)[-6:] == (LT, BIT0, END, BIT1, BIT1, END)


@given(st.lists(st.integers(1, 14), max_size=20))
def test_bijective_base_round_trip(codes):
    assert from_bijective(to_bijective(codes)) == tuple(codes)


@given(st.lists(st.integers(1, 14), max_size=8), st.lists(st.integers(1, 14), max_size=8))
def test_bijective_base_is_length_first(a, b):
    if len(a) < len(b):
        assert to_bijective(a) < to_bijective(b)


def test_round_trip_and_injectivity_enumerated():
    sentences = sentences_up_to(10)
    codes = {}
    for s in sentences:
        n = nu(s)
        assert nu_inverse(n) == s
        assert n not in codes
        codes[n] = s


def test_round_trip_random():
    s = FormulaSampler(51, evenness=True, implications=True)
    for _ in range(1000):
        f = s.sentence(3)
        canon = normalize_bound(desugar(f))
        assert deserialize(serialize(f)) == canon
        assert nu_inverse(nu(f)) == canon


def test_subformulas_get_smaller_codes():
    s = FormulaSampler(52)
    pairs = 0
    while pairs < 1000:
        f = normalize_bound(desugar(s.sentence(3)))
        for g in subformulas(f):
            if g is not f and g != f:
                assert nu(g) < nu(f), (str(g), str(f))
                pairs += 1


def test_decode_rejects_junk():
    with pytest.raises(DecodeError):
        deserialize((AND, Z))
    assert nu_inverse(5) is None
    assert nu_inverse(to_bijective((EXISTS, BIT0, BIT0, END, Z, BIT0, END))) is None


def test_parity_examples():
    assert nu_star(parse("exists x0. Z(x0)", W_SIG)) % 2 == 0
    assert nu_star(parse("exists x0. x0 < 0", W_SIG)) % 2 == 1
    assert nu_star(parse("exists x0. Z(x0)", W_SIG), flip=True) % 2 == 1


def test_parity_law_on_corpus(corpus):
    st_ = star()
    for a in corpus:
        code = st_.encode(a)
        assert code == 2 * nu(a) + (0 if decide_w(a) else 1)
        assert st_.decode(code) == normalize_bound(desugar(a))
        assert st_.decode(code ^ 1) is None


def test_star_only_for_w_sentences():
    with pytest.raises(SignatureViolation):
        nu_star(parse("E(0)", WPRIME_SIG))
    with pytest.raises(NotASentence):
        nu_star(parse("Z(x0)", W_SIG))


def test_unregistered_symbols():
    with pytest.raises(UnregisteredSymbol):
        serialize(rel("In", 0, 1))
    with pytest.raises(UnregisteredSymbol):
        serialize(TOP)
    assert deserialize(serialize(Atom("T", ((rel("Z", 0).args[0]),)))) == rel("T", 0)


def test_corpus_numbering(corpus):
    small = corpus[:50]
    c = corpus_numbering(small)
    assert c.encode(small[0]) == 1
    assert [c.encode(a) for a in small] == list(range(1, 51))
    assert all(c.decode(c.encode(a)) == a for a in small)
    assert c.decode(0) is None and c.decode(51) is None
    st_ = star(c)
    for i, a in enumerate(small):
        assert st_.encode(a) == 2 * (i + 1) + (0 if decide_w(a) else 1)
    with pytest.raises(DuplicateSentence):
        corpus_numbering([small[0], small[1], small[0]])


def test_lengthlex_object():
    n = lengthlex()
    f = parse("forall x0. ~(x0 < x0)", W_SIG)
    assert n(f) == n.encode(f) == nu(f) and n.decode(n(f)) == f
    assert not free_vars(n.decode(n(f)))
