"""Truth-biconditional constructions over W and their mechanical verification."""
from __future__ import annotations

import time
from functools import cache
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .corpus import one_variable_formulas
from .numbering import Numbering, lengthlex, nu, serialize, star
from .qe import DefinableSet, decide_w, definable_set, to_dnf
from .schemes import emit_scheme, named_numeral, _counter
from .syntax import (
    And, BOT, TOP, Eq, Exists, Formula, Iff, Not, Or, conj, disj, free_vars, print_canonical,
    rel, size, var,
)
from .theories import W_SIG, truth_extended
from .translation import (
    Translation, builtin, compose, identity, translate, _IOTA_DELTA,
)


def build_tb_sentence(a: Formula, numbering: Numbering, n_interp: Translation,
                      style: str = "offset") -> Formula:
    return emit_scheme("TB", numbering, n_interp, a, style=style)


def parity_truth() -> Translation:
    """W plus a binary T, with T true of a coded pair exactly when its coordinates agree."""
    return Translation("T=E_iota", 1, truth_extended(W_SIG, 2), W_SIG, TOP,
                       {"T": And(_IOTA_DELTA, Eq(var(0), var(1)))},
                       fujimoto=True, shared=frozenset({"Z", "S", "Lt"}))


@cache
def _route_translations() -> dict:
    return {
        "nu": builtin("nu_restriction"),
        "parity": parity_truth(),
        "id": identity(W_SIG),
        "kappa;iota": compose(builtin("kappa"), builtin("iota")),
    }


def fujimoto_route_sentence(a: Formula, numbering: Numbering, style: str = "offset") -> Formula:
    t = _route_translations()
    return translate(t["parity"], build_tb_sentence(a, numbering, t["nu"], style))


def verify_enayat_fujimoto(a: Formula, numbering: Numbering, style: str = "offset") -> bool:
    return decide_w(fujimoto_route_sentence(a, numbering, style))


def kappa_iota_route_sentence(a: Formula, numbering: Numbering, style: str = "offset") -> Formula:
    t = _route_translations()
    return translate(t["kappa;iota"], build_tb_sentence(a, numbering, t["id"], style))


def verify_enayat_kappa_iota(a: Formula, numbering: Numbering, style: str = "offset") -> bool:
    return decide_w(kappa_iota_route_sentence(a, numbering, style))


# ---------------------------------------------------------------- finite TB

class DuplicateSentences(ValueError):
    pass


def finite_tb_translation(sentences: Sequence[Formula], numbering: Numbering,
                          n_interp: Translation) -> Translation:
    """T holds of a coded tuple iff it codes one of the listed sentences and that sentence holds."""
    codes = [numbering.encode(s) for s in sentences]
    if len(set(codes)) != len(codes):
        raise DuplicateSentences("the listed sentences must be distinct")
    d = n_interp.dim
    coords = list(range(d))
    fresh = _counter(d)
    disjuncts = [And(named_numeral(c, n_interp, coords, fresh), s) for c, s in zip(codes, sentences)]
    target = n_interp.target
    return Translation("finite_tb", 1, truth_extended(target, d), target, TOP,
                       {"T": disj(*disjuncts) if disjuncts else BOT},
                       fujimoto=True, shared=frozenset(r for r, _ in target.relations))


def verify_finite_tb(sentences: Sequence[Formula], numbering: Numbering,
                     n_interp: Optional[Translation] = None) -> list[bool]:
    n_interp = n_interp or builtin("nu_restriction")
    tau = finite_tb_translation(sentences, numbering, n_interp)
    return [decide_w(translate(tau, build_tb_sentence(s, numbering, n_interp))) for s in sentences]


# ---------------------------------------------------------------- reports

@dataclass
class Record:
    sentence: str
    route: str
    passed: bool
    parity: Optional[int] = None
    size: Optional[int] = None
    decision: Optional[bool] = None
    detail: str = ""
    elapsed_ms: float = 0.0


@dataclass
class VerificationReport:
    route: str
    records: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def passes(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "route": self.route,
            "corpus_size": len(self.records),
            "passes": self.passes,
            "failures": [{"sentence": r.sentence, "detail": r.detail} for r in self.failures],
        }
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


_ROUTES = {
    "fujimoto": fujimoto_route_sentence,
    "kappa-iota": kappa_iota_route_sentence,
}


def verify_corpus(corpus: Sequence[Formula], route: str, numbering: Optional[Numbering] = None,
                  style: str = "offset") -> VerificationReport:
    numbering = numbering or star()
    build = _ROUTES[route]
    report = VerificationReport(route)
    start = time.perf_counter()
    for a in corpus:
        t0 = time.perf_counter()
        s = build(a, numbering, style)
        decision = decide_w(s)
        report.records.append(Record(
            print_canonical(a), route, decision, numbering.encode(a) % 2, size(s), decision,
            "" if decision else "translated biconditional decided false",
            (time.perf_counter() - t0) * 1000))
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


# --------------------------------------------------------------- negative

def padding_sentence(k: int, negate: bool = False) -> Formula:
    """``k + 1`` conjoined copies of ``exists x0. Z(x0)``, negated on request."""
    unit = Exists(0, rel("Z", 0))
    f = conj(*([unit] * (k + 1)))
    return Not(f) if negate else f


@dataclass(frozen=True)
class Refutation:
    candidate: Formula
    claimed: DefinableSet
    witness: Formula
    code: int
    truth: bool


class _WitnessPool:
    """Sentences with known code and truth, extended with padding when needed."""

    def __init__(self, corpus: Sequence[Formula], numbering: Numbering):
        self.numbering = numbering
        self.items = [(numbering.encode(a), decide_w(a), a) for a in corpus]
        self.items.sort(key=lambda t: t[0])
        self.pad = 0
        self.extended = 0

    def find(self, s: DefinableSet) -> tuple[int, bool, Formula]:
        while True:
            for code, truth, a in self.items:
                if truth != (code in s):
                    return code, truth, a
            self._extend()

    def _extend(self) -> None:
        for negate in (False, True):
            a = padding_sentence(self.pad, negate)
            self.items.append((self.numbering.encode(a), decide_w(a), a))
        self.pad += 1
        self.extended += 1
        self.items.sort(key=lambda t: t[0])


def negative_check(corpus: Sequence[Formula], size_bound: int, numbering: Optional[Numbering] = None,
                   candidates=None) -> tuple[VerificationReport, list[Refutation]]:
    """Try every short one-variable formula as a truth definition on codes and refute each."""
    numbering = numbering or lengthlex()
    pool = _WitnessPool(corpus, numbering)
    report = VerificationReport("negative")
    refutations = []
    memo: dict = {}
    seen: dict = {}
    start = time.perf_counter()
    for phi in (candidates if candidates is not None else one_variable_formulas(size_bound)):
        dnf = to_dnf(phi, memo)
        s = seen.get(dnf)
        if s is None:
            s = definable_set(phi, dnf=dnf)
            seen[dnf] = s
        code, truth, a = pool.find(s)
        refutations.append(Refutation(phi, s, a, code, truth))
        report.records.append(Record(
            print_canonical(phi), "negative", True, decision=truth,
            detail=f"claims {s}; {print_canonical(a)} has code {code} and is {str(truth).lower()}"))
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report, refutations
