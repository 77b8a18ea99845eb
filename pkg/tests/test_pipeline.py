import random

import pytest

from enayat.corpus import random_sentences
from enayat.numbering import corpus_numbering, lengthlex, star
from enayat.pipeline import (
    DuplicateSentences, build_tb_sentence, finite_tb_translation, kappa_iota_route_sentence,
    negative_check, padding_sentence, verify_corpus, verify_enayat_fujimoto,
    verify_enayat_kappa_iota, verify_finite_tb,
)
from enayat.qe import decide_w
from enayat.schemes import FreeVariableViolation, emit_scheme, named_numeral, numeral_through, _counter
from enayat.syntax import (
    BOT, Atom, Exists, Iff, forall_block, free_vars, parse, relations_used, rho, subformulas,
)
from enayat.theories import W_SIG, axioms_w
from enayat.translation import builtin, identity

NU_R = builtin("nu_restriction")


def w(text):
    return parse(text, W_SIG)


def t_atoms(f, name="T"):
    return [g for g in subformulas(f) if isinstance(g, Atom) and g.rel == name]


def test_tb_shape():
    a = w("exists x0. Z(x0)")
    tb = build_tb_sentence(a, star(), NU_R)
    assert isinstance(tb, Iff) and tb.left == a and not free_vars(tb)
    (t,) = t_atoms(tb)
    assert len(t.args) == NU_R.dim == 2


def test_tb_numeral_rho_is_constant():
    values = {rho(build_tb_sentence(a, star(), NU_R).right) for a in random_sentences(3, 40)}
    assert len(values) == 1


@pytest.mark.parametrize("text, parity", [("exists x0. Z(x0)", 2), ("exists x0. x0 < 0", 3)])
def test_corpus_numeral_by_parity(text, parity):
    a = w(text)
    numbering = star(corpus_numbering([a]))
    tb = build_tb_sentence(a, numbering, NU_R, style="unfolded")
    fresh = _counter(2)
    expected = named_numeral(parity, NU_R, [0, 1], fresh, "unfolded")
    assert tb.right == Exists(0, Exists(1, type(tb.right.body.body)(expected, Atom("T", tb.right.body.body.right.args))))


def test_usb1_arity():
    f = emit_scheme("USB1", lengthlex(), NU_R, w("x0 < S(0)"), truth="T", sat="sat")
    assert not free_vars(f)
    (sat,) = t_atoms(f, "sat")
    assert len(sat.args) == 1 + NU_R.dim


def test_scheme_errors():
    with pytest.raises(FreeVariableViolation):
        emit_scheme("TB", star(), NU_R, w("Z(x0)"))
    with pytest.raises(FreeVariableViolation):
        emit_scheme("USB1", star(), NU_R, w("Z(0)"))
    with pytest.raises(ValueError):
        emit_scheme("UTB", star(), NU_R, w("Z(0)"))


def test_numeral_styles_through_translation_agree():
    for n in range(12):
        a, b = numeral_through(n, NU_R, "offset"), numeral_through(n, NU_R, "unfolded")
        assert decide_w(forall_block([0, 1], Iff(a, b)))


@pytest.mark.parametrize("text", ["exists x0. Z(x0)", "exists x0. x0 < 0", "forall x0. exists x1. x0 < x1"])
def test_routes_on_examples(text):
    a = w(text)
    assert verify_enayat_fujimoto(a, star())
    assert verify_enayat_kappa_iota(a, star())
    assert not verify_enayat_fujimoto(a, star(flip=True))
    assert not verify_enayat_kappa_iota(a, star(flip=True))


def test_routes_on_w_axioms():
    for a in axioms_w():
        assert verify_enayat_fujimoto(a, star()) and verify_enayat_kappa_iota(a, star())


def test_kappa_iota_output_is_pure_w():
    s = kappa_iota_route_sentence(w("exists x0. Z(x0)"), star())
    assert relations_used(s) <= set(W_SIG.relations) and not free_vars(s)


def test_routes_agree_on_random_sentences():
    sentences = random_sentences(7, 60)
    f, k = verify_corpus(sentences, "fujimoto"), verify_corpus(sentences, "kappa-iota")
    assert f.ok and k.ok
    assert [r.decision for r in f.records] == [r.decision for r in k.records]
    flipped = verify_corpus(sentences, "fujimoto", star(flip=True))
    assert flipped.passes == 0


def test_unfolded_pipeline_with_corpus_numbering(corpus):
    ten = corpus[:5] + corpus[-5:]
    numbering = star(corpus_numbering(ten))
    for route in ("fujimoto", "kappa-iota"):
        assert verify_corpus(ten, route, numbering, style="unfolded").ok


def test_report_schema():
    report = verify_corpus(random_sentences(8, 5), "fujimoto")
    data = report.to_json()
    assert set(data) == {"route", "corpus_size", "passes", "failures", "elapsed_ms"}
    assert data["corpus_size"] == 5 and data["passes"] == 5 and data["failures"] == []
    assert "elapsed_ms" not in report.to_json(timing=False)
    bad = verify_corpus([w("exists x0. Z(x0)")], "fujimoto", star(flip=True)).to_json()
    assert bad["failures"][0]["sentence"] == "exists x0. Z(x0)" and bad["failures"][0]["detail"]


def test_finite_tb_empty_and_single():
    tau = finite_tb_translation([], star(), NU_R)
    assert tau.symbols["T"] == BOT and tau.fujimoto
    assert verify_finite_tb([], star()) == []
    assert verify_finite_tb([w("exists x0. Z(x0)")], star()) == [True]


def test_finite_tb_random_lists():
    rng = random.Random(9)
    for k in range(10):
        sentences = list(dict.fromkeys(random_sentences(rng.randrange(10 ** 6), 5)))
        assert all(verify_finite_tb(sentences, star()))
        assert all(verify_finite_tb(sentences, lengthlex(), identity(W_SIG)))


def test_finite_tb_rejects_duplicates():
    a = w("exists x0. Z(x0)")
    with pytest.raises(DuplicateSentences):
        finite_tb_translation([a, a], star(), NU_R)


def test_padding_family():
    for k in range(4):
        assert decide_w(padding_sentence(k)) and not decide_w(padding_sentence(k, negate=True))
    codes = [lengthlex().encode(padding_sentence(k)) for k in range(5)]
    assert codes == sorted(codes)


@pytest.mark.parametrize("text", ["x0 = x0", "x0 < S(S(S(S(S(0)))))", "~Z(x0)", "exists x1. x1 < x0"])
def test_negative_named_candidates(text, corpus):
    phi = w(text)
    report, (ref,) = negative_check(corpus[:300], 0, candidates=[phi])
    assert report.ok
    assert ref.truth != (ref.code in ref.claimed)
    assert lengthlex().encode(ref.witness) == ref.code


def test_negative_small_bound(corpus):
    report, refutations = negative_check(corpus, 8)
    assert report.ok and len(refutations) == len(report.records) > 0
    for r in refutations:
        assert r.truth == decide_w(r.witness)
        assert r.truth != (r.code in r.claimed)
