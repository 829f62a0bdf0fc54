import pytest

from polyexcess import harness

# Small polytopes (at most 12 vertices) used by the oracle tests.
SMALL_EXPRS = [
    "simplex(1)", "simplex(2)", "simplex(3)", "simplex(5)",
    "polygon(4)", "polygon(5)", "polygon(8)",
    "cyclic(3,6)", "cyclic(4,7)", "cyclic(4,8)", "cyclic(5,8)",
    "delta(1,2)", "delta(2,2)", "delta(1,3)", "delta(2,3)",
    "M(2,1)", "M(2,3)", "M(3,3)",
    "J(3)", "J(4)",
    "prism(polygon(5))", "pyramid(polygon(5))", "free_join(simplex(1),polygon(4))",
    "wedge(polygon(5),edge(0,1))", "truncate(simplex(3),vertex(0))",
    "truncate(M(2,2),edge(4,5))", "stack(simplex(4),facet(0))",
    "glue(simplex(4),facet(0),simplex(4),facet(0))", "dual(prism(simplex(3)))",
    "product(polygon(3),polygon(4))", "glue(prism(simplex(2)),facet(0),simplex(3),facet(1))",
]


@pytest.fixture(scope="session")
def default_corpus():
    return harness.generate_corpus(harness.DEFAULT_CORPUS)


@pytest.fixture(scope="session")
def default_report(default_corpus):
    return harness.run_suite(default_corpus, must_hit=harness.MUST_HIT)


# criterion number -> one-line verdict, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
