import pytest
from hypothesis import settings

from enayat.corpus import gen_corpus

SEED = 20251014

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus():
    """Every canonical W sentence of at most 9 letters plus 200 seeded random ones."""
    return gen_corpus(SEED, 9, 200)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, whatever the verbosity."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::test_criterion_" not in getattr(rep, "nodeid", ""):
                continue
            n = int(rep.nodeid.rsplit("_", 1)[1])
            ok = outcome == "passed" and rows.get(n, (True,))[0]
            note = dict(getattr(rep, "user_properties", ())).get("summary", rows.get(n, (None, ""))[1])
            rows[n] = (ok, note)
    if rows:
        terminalreporter.section("acceptance criteria")
        for n in sorted(rows):
            ok, note = rows[n]
            terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {note}")
