"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import corpus as corpus_mod
from . import hf as hf_mod
from . import pipeline, qe, translation
from .numbering import corpus_numbering, lengthlex, nu, render, serialize, star
from .syntax import ParseError, free_vars, parse, print_canonical, quantifier_rank, rho, size
from .theories import W_SIG, WPRIME_SIG, get_theory

DEFAULT_SEED = 20251014
DEFAULT_COUNT = 200


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    bounds: dict = field(default_factory=dict)
    output: Optional[Path] = None
    format: str = "text"
    quiet: bool = False


class _Out:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def text(self, line: str) -> None:
        if not self.cfg.quiet and self.cfg.format == "text":
            print(line)

    def result(self, text: str, data) -> None:
        """The primary answer: shown even under ``--quiet``."""
        if self.cfg.format == "json":
            print(json.dumps(data, sort_keys=True))
        else:
            print(text)

    def report(self, data: dict) -> None:
        if self.cfg.output is not None:
            self.cfg.output.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        if self.cfg.format == "json":
            print(json.dumps(data, sort_keys=True))


def _formula(text: str, sig=None):
    try:
        return parse(text, sig)
    except ParseError as e:
        raise UsageError(f"cannot parse formula: {e}") from e


def _sentence(text: str, sig=None):
    f = _formula(text, sig)
    if free_vars(f):
        raise UsageError(f"expected a sentence, found free {', '.join('x%d' % v for v in sorted(free_vars(f)))}")
    return f


# ------------------------------------------------------------- commands

def cmd_theory(args, cfg: RunConfig, out: _Out) -> int:
    th = get_theory(args.name)
    if args.index:
        top = max(args.index) + 1
        axioms = th.axioms(top)
        if len(axioms) < top:
            raise UsageError(f"{th.name} has only {len(axioms)} axioms")
        picked = [(i, axioms[i]) for i in args.index]
    else:
        limit = args.limit if args.limit is not None else (None if th.finitely_axiomatized else 20)
        picked = list(enumerate(th.axioms(limit)))
    lines = [print_canonical(a) for _, a in picked]
    out.result("\n".join(lines), {"theory": th.name, "axioms": [{"index": i, "formula": s}
                                                               for (i, _), s in zip(picked, lines)]})
    return 0


def cmd_parse(args, cfg, out) -> int:
    f = _formula(args.formula)
    text = print_canonical(f)
    out.result(text, {"canonical": text, "free_vars": sorted(free_vars(f)),
                      "quantifier_rank": quantifier_rank(f), "rho": rho(f), "size": size(f)})
    return 0


def cmd_rho(args, cfg, out) -> int:
    value = rho(_formula(args.formula))
    out.result(str(value), {"rho": value})
    return 0


def _load_translation(source: str) -> translation.Translation:
    path = Path(source)
    if path.is_file():
        return translation.loads(path.read_text())
    try:
        return translation.builtin(source)
    except (translation.UnknownTranslation, KeyError) as e:
        raise UsageError(str(e).strip("'\"")) from e


def cmd_translate(args, cfg, out) -> int:
    tau = _load_translation(args.using)
    if args.show:
        out.result(translation.dumps(tau).rstrip("\n"), {"translation": translation.dumps(tau)})
        return 0
    if args.formula is None:
        raise UsageError("translate needs a formula unless --show is given")
    f = _formula(args.formula, tau.source)
    g = translation.translate(tau, f, hooks=not args.no_hooks)
    text = print_canonical(g)
    out.result(text, {"translation": tau.name, "input": print_canonical(f), "output": text, "size": size(g)})
    return 0


def cmd_goedel(args, cfg, out) -> int:
    f = _sentence(args.formula, W_SIG) if args.star else _formula(args.formula)
    value = star().encode(f) if args.star else nu(f)
    out.result(str(value), {"code": str(value), "letters": list(serialize(f)), "rendered": render(serialize(f))})
    if args.letters:
        out.text(render(serialize(f)))
    return 0


def cmd_decide(args, cfg, out) -> int:
    sig = W_SIG if args.theory == "w" else WPRIME_SIG
    f = _sentence(args.formula, sig)
    value = qe.decide_w(f) if args.theory == "w" else qe.decide_wprime(f)
    out.result(str(value).lower(), {"theory": args.theory, "sentence": print_canonical(f), "value": value})
    return 0


def cmd_defset(args, cfg, out) -> int:
    f = _formula(args.formula, W_SIG)
    if len(free_vars(f)) != 1:
        raise UsageError("defset needs exactly one free variable")
    s = qe.definable_set(f)
    data = {"cofinite": s.cofinite, "members": sorted(s.members), "threshold": s.threshold,
            "exceptions": sorted(s.exceptions)}
    out.result(str(s), data)
    return 0


def _corpus(cfg: RunConfig, max_len: int, count: int):
    return corpus_mod.gen_corpus(cfg.seed, max_len, count)


def _merge(reports: list) -> pipeline.VerificationReport:
    """A sentence passes the merged report only if it passes every route."""
    merged = pipeline.VerificationReport("+".join(r.route for r in reports))
    for recs in zip(*(r.records for r in reports)):
        bad = [r for r in recs if not r.passed]
        detail = "; ".join(f"{r.route}: {r.detail}" for r in bad)
        decisions = {r.decision for r in recs}
        if len(decisions) > 1:
            detail = (detail + "; " if detail else "") + "routes disagree"
        merged.records.append(pipeline.Record(recs[0].sentence, merged.route, not detail, detail=detail))
    merged.elapsed_ms = sum(r.elapsed_ms for r in reports)
    return merged


def cmd_enayat_verify(args, cfg, out) -> int:
    sentences = _corpus(cfg, args.max_len, args.count)
    if args.numbering == "star":
        numbering = star(flip=args.flip_parity)
    else:
        numbering = star(corpus_numbering(sentences), flip=args.flip_parity)
    style = "unfolded" if args.unfolded else "offset"
    routes = ["fujimoto", "kappa-iota"] if args.route == "both" else [args.route]
    reports = [pipeline.verify_corpus(sentences, r, numbering, style) for r in routes]
    for r in reports:
        out.text(f"{r.route}: {r.passes}/{len(r.records)} pass in {r.elapsed_ms / 1000:.1f}s")
    final = reports[0] if len(reports) == 1 else _merge(reports)
    for rec in final.failures[:10]:
        out.text(f"  FAIL {rec.sentence}: {rec.detail}")
    out.report(final.to_json(timing=not args.no_timing))
    return 0 if final.ok else 1


def cmd_enayat_negative(args, cfg, out) -> int:
    sentences = _corpus(cfg, args.max_len, args.count)
    report, refutations = pipeline.negative_check(sentences, args.size_bound, lengthlex())
    out.text(f"negative: {report.passes}/{len(report.records)} candidates refuted "
             f"in {report.elapsed_ms / 1000:.1f}s")
    if args.witnesses:
        for r in refutations:
            out.text(f"  {print_canonical(r.candidate)} defines {r.claimed}; "
                     f"{print_canonical(r.witness)} has code {r.code} and is {str(r.truth).lower()}")
    out.report(report.to_json(timing=not args.no_timing))
    return 0 if report.ok else 1


def cmd_enayat_finite_tb(args, cfg, out) -> int:
    path = Path(args.file)
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    lines = [ln.strip() for ln in path.read_text().splitlines()]
    sentences = [_sentence(ln, W_SIG) for ln in lines if ln and not ln.startswith("#")]
    try:
        results = pipeline.verify_finite_tb(sentences, star())
    except pipeline.DuplicateSentences as e:
        raise UsageError(str(e)) from e
    report = pipeline.VerificationReport("finite-tb")
    for s, ok in zip(sentences, results):
        report.records.append(pipeline.Record(print_canonical(s), "finite-tb", ok, decision=ok,
                                              detail="" if ok else "biconditional decided false"))
        out.text(f"{'ok  ' if ok else 'FAIL'} {print_canonical(s)}")
    out.report(report.to_json(timing=False))
    return 0 if report.ok else 1


def _hf_assignment(pairs: Sequence[str]) -> dict:
    env = {}
    for p in pairs:
        name, sep, value = p.partition("=")
        if not sep or not name.startswith("x") or not name[1:].isdigit():
            raise UsageError(f"bad --set {p!r}; expected x<i>=<set>")
        try:
            env[int(name[1:])] = hf_mod.parse_hf(value)
        except ValueError as e:
            raise UsageError(f"bad set literal {value!r}: {e}") from e
    return env


def cmd_hf_eval(args, cfg, out) -> int:
    try:
        pool = hf_mod.get_pool(args.pool)
    except KeyError as e:
        raise UsageError(str(e).strip("'\"")) from e
    f = _formula(args.formula)
    env = _hf_assignment(args.set or [])
    try:
        value = hf_mod.hf_eval(f, pool, env, hf_mod.MACRO_PREDICATES)
    except hf_mod.UncoveredVariable as e:
        raise UsageError(str(e)) from e
    out.result(str(value).lower(), {"pool": pool.tag, "pool_size": len(pool), "value": value})
    return 0


def cmd_hf_r_instance(args, cfg, out) -> int:
    try:
        value = hf_mod.verify_r_instance(args.kind, args.n, args.m)
    except ValueError as e:
        raise UsageError(str(e)) from e
    out.result(str(value).lower(), {"kind": args.kind, "n": args.n, "m": args.m, "value": value})
    return 0 if value else 1


def cmd_corpus(args, cfg, out) -> int:
    sentences = _corpus(cfg, args.max_len, args.count)
    texts = [print_canonical(s) for s in sentences]
    if cfg.format == "json":
        truths = [qe.decide_w(s) for s in sentences]
        out.report({"seed": cfg.seed, "max_len": args.max_len, "count": args.count,
                    "sentences": [{"sentence": t, "value": v} for t, v in zip(texts, truths)]})
    else:
        if cfg.output is not None:
            cfg.output.write_text("\n".join(texts) + "\n")
        else:
            print("\n".join(texts))
    return 0


# --------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="enayat", description="Interpretations, truth schemes and decision procedures.")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random corpora")
    p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    p.add_argument("--quiet", action="store_true", help="print only the result")
    quiet = _Parser(add_help=False)
    quiet.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print only the result")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(group, name, **kw):
        return group.add_parser(name, parents=[quiet], **kw)

    s = add(sub, "theory", help="print axioms")
    s.add_argument("name")
    s.add_argument("--index", type=int, nargs="+", help="positions in the axiom enumeration")
    s.add_argument("--limit", type=int)
    s.set_defaults(run=cmd_theory)

    for name, run, help_ in (("parse", cmd_parse, "print the canonical form"),
                             ("rho", cmd_rho, "quantifier alternation depth")):
        s = add(sub, name, help=help_)
        s.add_argument("formula")
        s.set_defaults(run=run)

    s = add(sub, "translate", help="apply a translation")
    s.add_argument("--using", required=True, help="builtin name or path to a translation file")
    s.add_argument("--no-hooks", action="store_true", help="translate unfolded atoms only")
    s.add_argument("--show", action="store_true", help="print the translation itself")
    s.add_argument("formula", nargs="?")
    s.set_defaults(run=cmd_translate)

    s = add(sub, "goedel", help="code of a formula")
    s.add_argument("--star", action="store_true", help="truth-parity doubled code of a W sentence")
    s.add_argument("--letters", action="store_true", help="also print the serialization")
    s.add_argument("formula")
    s.set_defaults(run=cmd_goedel)

    s = add(sub, "decide", help="decide a sentence")
    s.add_argument("--theory", choices=["w", "wprime"], default="w")
    s.add_argument("formula")
    s.set_defaults(run=cmd_decide)

    s = add(sub, "defset", help="set defined by a one-variable W formula")
    s.add_argument("formula")
    s.set_defaults(run=cmd_defset)

    en = add(sub, "enayat", help="truth-biconditional pipeline")
    esub = en.add_subparsers(dest="action", required=True, parser_class=_Parser)

    def corpus_args(q):
        q.add_argument("--max-len", type=int, default=9, help="exhaustive enumeration bound")
        q.add_argument("--count", type=int, default=DEFAULT_COUNT, help="random sentences added")
        q.add_argument("--json", dest="output", type=Path, metavar="PATH", help="write the report here")
        q.add_argument("--no-timing", action="store_true", help="omit elapsed_ms from reports")

    s = add(esub, "verify")
    s.add_argument("--route", choices=["fujimoto", "kappa-iota", "both"], default="both")
    s.add_argument("--numbering", choices=["star", "corpus-star"], default="star")
    s.add_argument("--unfolded", action="store_true", help="fully unfolded numerals")
    s.add_argument("--flip-parity", action="store_true", help="fault injection: swap code parity")
    corpus_args(s)
    s.set_defaults(run=cmd_enayat_verify)

    s = add(esub, "negative")
    s.add_argument("--size-bound", type=int, default=12)
    s.add_argument("--witnesses", action="store_true", help="print each refutation")
    corpus_args(s)
    s.set_defaults(run=cmd_enayat_negative)

    s = add(esub, "finite-tb")
    s.add_argument("--file", required=True, help="one W sentence per line")
    s.add_argument("--json", dest="output", type=Path, metavar="PATH")
    s.set_defaults(run=cmd_enayat_finite_tb)

    h = add(sub, "hf", help="hereditarily finite sets")
    hsub = h.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = add(hsub, "eval")
    s.add_argument("--pool", default="rank2", help=f"one of {', '.join(hf_mod.POOLS)}")
    s.add_argument("--set", action="append", metavar="xI=SET", help="value of a free variable")
    s.add_argument("formula")
    s.set_defaults(run=cmd_hf_eval)
    s = add(hsub, "r-instance")
    s.add_argument("kind", choices=["add", "mul", "neq", "le_cases", "le_total"])
    s.add_argument("n", type=int)
    s.add_argument("m", type=int, nargs="?")
    s.set_defaults(run=cmd_hf_r_instance)

    s = add(sub, "corpus", help="print the seeded sentence corpus")
    s.add_argument("--max-len", type=int, default=9)
    s.add_argument("--count", type=int, default=DEFAULT_COUNT)
    s.add_argument("--out", dest="output", type=Path, metavar="PATH")
    s.set_defaults(run=cmd_corpus)
    return p


def _deep(fn, *args):
    """Run ``fn`` on a thread with room for deeply nested formulas (unfolded numerals)."""
    box: list = []
    old = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 200_000))

    def target():
        try:
            box.append((True, fn(*args)))
        except BaseException as e:  # re-raised on the calling thread
            box.append((False, e))
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old)
        sys.setrecursionlimit(limit)
    ok, value = box[0]
    if not ok:
        raise value
    return value


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        bounds = {k: getattr(args, k) for k in ("max_len", "size_bound", "count") if hasattr(args, k)}
        cfg = RunConfig(args.command, args.seed, bounds, getattr(args, "output", None),
                        "json" if args.json else "text", args.quiet)
        return _deep(args.run, args, cfg, _Out(cfg))
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:
        return int(e.code or 0)
    except (KeyError, ValueError) as e:
        print(f"error: {str(e).strip(chr(39))}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
