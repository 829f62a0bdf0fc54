import json
import random
import time

import pytest

from conftest import SMALL_EXPRS
from polyexcess import dsl, harness
from polyexcess.constructions import simplex
from polyexcess.errors import InputError
from polyexcess.harness import (CHECK_IDS, MUST_HIT, CorpusSpec, Outcome, generate_corpus,
                                run_suite, select_checks)
from polyexcess.lattice import IncidencePolytope, Realizability, dumps, loads
from polyexcess.sanity import sanity_check

FIXTURE_EXPRS = [e for e in SMALL_EXPRS if dsl.evaluate(e).dim >= 2] + [
    "M(3,4)", "M(7,2)", "pyramid(delta(2,6))", "prism(M(2,6))", "cyclic(9,11)", "J(7)",
    "glue(simplex(6),facet(0),simplex(6),facet(0))", "stack(prism(simplex(6)),face(0,1,2,3,4,5,6))",
    "wedge(J(4),face(0,3,4,7,10))", "delta(3,3)", "prism(pyramid(delta(2,2)))",
]


def check(cid):
    return select_checks([cid])[0]


def test_single_check_examples():
    assert check("EXC-LOWER").evaluate(dsl.evaluate("M(2,3)")).outcome is Outcome.PASS
    assert check("XI-D+2").evaluate(dsl.evaluate("cyclic(9,11)")).outcome is Outcome.PASS
    assert check("EXC-GAP-HIGH").evaluate(dsl.evaluate("prism(simplex(5))")).outcome \
        is Outcome.VACUOUS


def test_checks_have_distinct_ids_and_anchors():
    checks = harness.builtin_checks()
    assert len(checks) == len(set(CHECK_IDS)) == 23
    assert all(c.anchor for c in checks)
    with pytest.raises(InputError):
        select_checks(["NOPE"])
    assert [c.id for c in select_checks(["XI-D", "EXC-LOWER"])] == ["XI-D", "EXC-LOWER"]


def test_fixtures_have_no_failures():
    report = run_suite([dsl.evaluate(e) for e in FIXTURE_EXPRS])
    assert report.failures == 0, report.lines()


def test_failing_check_reports_witness():
    wrong = harness.TheoremCheck("ALWAYS-WRONG", "deliberately false",
                                 lambda P, prof, rep: True, lambda P, prof, rep: "nope")
    report = run_suite([simplex(3)], checks=[wrong])
    t = report.tally("ALWAYS-WRONG")
    assert (t.failed, t.witnesses, t.details) == (1, ["simplex(3)"], ["nope"])
    assert not report.ok


def test_empty_corpus():
    report = run_suite([])
    assert report.size == 0
    assert all(t.passed == t.failed == t.vacuous == 0 for t in report.checks)
    assert report.ok
    assert not run_suite([], must_hit=MUST_HIT).ok


def test_sanity_gate_rejects_corrupted_member():
    s = simplex(5)
    broken = IncidencePolytope(5, 6, s.facets[1:], provenance="broken")
    assert not sanity_check(broken).ok
    with pytest.raises(InputError):
        run_suite([simplex(3), broken])


def test_must_hit_vacuity():
    report = run_suite([simplex(4), simplex(5)], must_hit=MUST_HIT)
    assert report.failures == 0 and not report.ok
    assert set(report.vacuous_must_hit) == set(MUST_HIT)
    assert run_suite([dsl.evaluate("cyclic(9,11)")], checks=select_checks(["XI-D+2"]),
                     must_hit=["XI-D+2"]).ok


def test_tallies_are_order_independent():
    members = [dsl.evaluate(e) for e in FIXTURE_EXPRS]
    a = run_suite(members).to_dict()
    random.Random(3).shuffle(members)
    b = run_suite(members).to_dict()
    a.pop("corpus_fingerprint"), b.pop("corpus_fingerprint")
    assert a == b


def test_report_json_shape():
    report = run_suite([dsl.evaluate("M(2,3)")], must_hit=["XI-D+2"])
    data = json.loads(report.to_json())
    assert list(data) == ["corpus_fingerprint", "size", "checks", "must_hit_vacuous", "observations"]
    assert [c["id"] for c in data["checks"]] == list(CHECK_IDS)
    assert set(data["checks"][0]) == {"id", "pass", "fail", "vacuous", "witnesses"}
    assert data["must_hit_vacuous"] == ["XI-D+2"]


def test_corpus_determinism():
    spec = CorpusSpec(seed=1, count=3)
    a, b = generate_corpus(spec), generate_corpus(spec)
    assert [dsl.to_text(e) for _, e in a] == [dsl.to_text(e) for _, e in b]
    assert run_suite(a).corpus_fingerprint == run_suite(b).corpus_fingerprint
    assert [dumps(P) for P in a.polytopes] == [dumps(P) for P in b.polytopes]


def test_members_rebuild_from_provenance():
    for P, e in generate_corpus(CorpusSpec(seed=11, count=40)):
        assert P.provenance == dsl.to_text(e)
        assert dsl.evaluate(P.provenance) == P
        assert loads(dumps(P)) == P


def test_zero_glue_weight_gives_no_asserted_members():
    corpus = generate_corpus(CorpusSpec(seed=5, count=150, max_dim=8, weights={"glue": 0}))
    assert len(corpus) == 150
    assert not any(P.realizability is Realizability.ASSERTED for P in corpus.polytopes)
    assert not any("glue" in P.provenance for P in corpus.polytopes)


def test_spec_validation():
    for bad in (CorpusSpec(seed=-1, count=1), CorpusSpec(seed=1, count=-1),
                CorpusSpec(seed=1, count=1, weights={"banana": 1}),
                CorpusSpec(seed=1, count=1, weights={k: 0 for k in harness.LEAVES}),
                CorpusSpec(seed=1, count=1, min_dim=5, max_dim=4)):
        with pytest.raises(InputError):
            generate_corpus(bad)


def test_members_respect_ranges():
    corpus = generate_corpus(CorpusSpec(seed=9, count=60, max_dim=6, max_vertices=20))
    assert all(3 <= P.dim <= 6 and P.n_vertices <= 20 for P in corpus.polytopes)


def test_seed_7_fills_a_thousand_members():
    t0 = time.perf_counter()
    corpus = generate_corpus(CorpusSpec(seed=7, count=1000, max_dim=12))
    elapsed = time.perf_counter() - t0
    assert len(corpus) >= 1000
    assert not any(r.startswith("sanity:") for _, r in corpus.rejections)
    assert elapsed < 150


def test_default_corpus_passes_every_check(default_report):
    assert default_report.size == 2000
    assert default_report.failures == 0, default_report.lines()
    for cid in CHECK_IDS:
        assert default_report.tally(cid).passed > 0, cid
    assert default_report.ok
