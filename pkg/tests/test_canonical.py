import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SMALL_EXPRS
from polyexcess import dsl
from polyexcess.canonical import canonical_form, invariants, is_isomorphic
from polyexcess.constructions import delta, j_poly, polygon, prism, simplex, wedge, FaceSelector
from polyexcess.errors import ResourceLimitError
from polyexcess.lattice import IncidencePolytope

FIXTURES = [dsl.evaluate(e) for e in SMALL_EXPRS] + [
    dsl.evaluate(e) for e in ("delta(3,3)", "J(6)", "cyclic(6,10)", "M(4,3)", "prism(delta(2,2))")]


def relabel(P, perm, rng=None):
    facets = [tuple(sorted(perm[v] for v in f)) for f in P.facets]
    if rng is not None:
        rng.shuffle(facets)
    return IncidencePolytope(P.dim, P.n_vertices, tuple(sorted(facets)))


def brute_isomorphic(P, Q):
    if (P.dim, P.n_vertices, len(P.facets)) != (Q.dim, Q.n_vertices, len(Q.facets)):
        return False
    target = {frozenset(f) for f in Q.facets}
    return any({frozenset(p[v] for v in f) for f in P.facets} == target
               for p in permutations(range(P.n_vertices)))


@pytest.mark.parametrize("P", FIXTURES, ids=lambda P: P.provenance)
def test_relabelling_invariance(P):
    rng = random.Random(P.n_vertices * 7919 + len(P.facets))
    form = canonical_form(P)
    for _ in range(100):
        perm = list(range(P.n_vertices))
        rng.shuffle(perm)
        Q = relabel(P, perm, rng)
        assert canonical_form(Q) == form


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIXTURES[:31]), st.randoms(use_true_random=False))
def test_relabelled_copies_are_isomorphic(P, rnd):
    perm = list(range(P.n_vertices))
    rnd.shuffle(perm)
    assert is_isomorphic(P, relabel(P, perm))


SMALL = [P for P in FIXTURES if P.n_vertices <= 8] + [
    prism(polygon(4)), j_poly(3), wedge(polygon(5), FaceSelector.edge(0, 1)),
    dsl.evaluate("truncate(simplex(3),edge(0,1))"), dsl.evaluate("cyclic(3,8)"),
    dsl.evaluate("stack(stack(simplex(3),facet(0)),facet(0))"),
    dsl.evaluate("stack(stack(simplex(3),facet(0)),facet(4))"),
    dsl.evaluate("cyclic(4,8)"), dsl.evaluate("delta(1,3)"), dsl.evaluate("pyramid(M(2,1))"),
]


def test_agrees_with_permutation_oracle():
    checked = 0
    for P, Q in combinations(SMALL, 2):
        if P.dim != Q.dim or invariants(P)[:3] != invariants(Q)[:3]:
            continue
        assert is_isomorphic(P, Q) == brute_isomorphic(P, Q), (P.provenance, Q.provenance)
        checked += 1
    assert checked >= 10


def test_equivalence_relation():
    forms = {}
    for P in FIXTURES:
        forms.setdefault(canonical_form(P), []).append(P)
    for group in forms.values():
        for P, Q in combinations(group, 2):
            assert is_isomorphic(P, Q) and is_isomorphic(Q, P)
        for P in group:
            assert is_isomorphic(P, P)


def test_examples():
    assert is_isomorphic(prism(simplex(2)), delta(1, 2))
    assert not is_isomorphic(j_poly(3), prism(polygon(4)))
    assert invariants(j_poly(3))[:3] == invariants(prism(polygon(4)))[:3]
    rng = random.Random(5)
    for _ in range(20):
        perm = list(range(6))
        rng.shuffle(perm)
        assert is_isomorphic(relabel(simplex(5), perm), simplex(5))


def test_node_budget():
    with pytest.raises(ResourceLimitError):
        canonical_form(simplex(6), node_budget=2)
