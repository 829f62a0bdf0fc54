from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SMALL_EXPRS
from polyexcess import dsl
from polyexcess import lattice as L
from polyexcess.bitset import sort_key
from polyexcess.canonical import is_isomorphic
from polyexcess.constructions import (FaceSelector, delta, glue, j_poly, m_poly, polygon, prism,
                                      pyramid, simplex, stack)
from polyexcess.errors import InputError, NonPolytopalError, ResourceLimitError
from polyexcess.sanity import sanity_check

FIXTURES = {e: dsl.evaluate(e) for e in SMALL_EXPRS}


def brute_ranks(P):
    """Faces as frozensets with ranks, from all 2^n subsets."""
    n = P.n_vertices
    facets = [frozenset(f) for f in P.facets]
    top = frozenset(range(n))
    faces = set()
    for bits in range(1 << n):
        S = frozenset(i for i in range(n) if bits >> i & 1)
        over = [F for F in facets if S <= F]
        if (frozenset.intersection(*over) if over else top) == S:
            faces.add(S)
    rank = {}
    for S in sorted(faces, key=len):
        below = [rank[T] for T in rank if T < S]
        rank[S] = 1 + max(below) if below else -1
    return rank


@pytest.mark.parametrize("expr", SMALL_EXPRS)
def test_lattice_matches_subset_enumeration(expr):
    P = FIXTURES[expr]
    assert P.n_vertices <= 12
    lat = L.face_lattice(P)
    got = {frozenset(f.vertices): f.rank for f in lat.all_faces()}
    assert got == brute_ranks(P)


@pytest.mark.parametrize("expr", SMALL_EXPRS)
def test_edge_criterion_agrees_with_closure(expr):
    P = FIXTURES[expr]
    by_closure = [(u, v) for u, v in combinations(range(P.n_vertices), 2)
                  if L.closure(P, {u, v}) == {u, v}]
    assert L._edges_by_criterion(P) == by_closure
    assert L.graph(P) == by_closure


@pytest.mark.parametrize("expr", SMALL_EXPRS)
def test_dual_reverses_f_vector(expr):
    P = FIXTURES[expr]
    D = L.dual(P)
    assert L.f_vector(D) == L.f_vector(P)[::-1]
    assert is_isomorphic(L.dual(D), P)


@pytest.mark.parametrize("expr", SMALL_EXPRS)
def test_faces_sorted_within_rank(expr):
    lat = L.face_lattice(FIXTURES[expr])
    for row in lat.faces_by_rank:
        assert list(row) == sorted(row, key=sort_key)


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(SMALL_EXPRS), st.integers(0, 2**12 - 1), st.integers(0, 2**12 - 1))
def test_closure_laws(expr, a, b):
    P = FIXTURES[expr]
    a &= P.full_mask
    b &= P.full_mask
    ca, cab = P.closure_mask(a), P.closure_mask(a | b)
    assert ca & a == a
    assert P.closure_mask(ca) == ca
    assert cab & ca == ca


def test_closure_examples():
    assert L.closure(simplex(3), {0, 1}) == {0, 1}
    assert L.closure(polygon(4), {0, 2}) == {0, 1, 2, 3}
    capped = stack(simplex(4), FaceSelector.facet(0))
    glued = set(simplex(4).facets[0])
    assert L.closure(capped, glued) == set(range(capped.n_vertices))
    with pytest.raises(InputError):
        L.closure(simplex(3), {7})


def _product_f_vector(f, g):
    # face counts including the polytope itself, then convolve
    a, b = f + [1], g + [1]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out[:-1]


def test_f_vectors():
    assert L.f_vector(simplex(3)) == [4, 6, 4]
    assert L.f_vector(polygon(5)) == [5, 5]
    assert L.f_vector(delta(2, 2)) == [9, 18, 15, 6]
    assert _product_f_vector([3, 3], [3, 3]) == [9, 18, 15, 6]
    assert L.f_vector(m_poly(2, 3))[0] == 7
    assert L.f_vector(j_poly(4))[0] == 11
    assert L.f_vector(prism(polygon(4))) == [8, 12, 6]


def test_graph_examples():
    assert len(L.graph(polygon(6))) == 6
    assert len(L.graph(simplex(5))) == 15
    s = simplex(5)
    assert len(L.graph(glue(s, FaceSelector.facet(0), s, FaceSelector.facet(0)))) == 20


def test_dual_examples():
    for d in range(1, 7):
        assert is_isomorphic(L.dual(simplex(d)), simplex(d))
    octa = L.dual(prism(polygon(4)))
    assert octa.n_vertices == 6
    assert len(octa.facets) == 8 and all(len(f) == 3 for f in octa.facets)
    assert is_isomorphic(L.dual(L.dual(j_poly(4))), j_poly(4))


@pytest.mark.parametrize("Q", [polygon(5), simplex(3), delta(1, 2), j_poly(3), m_poly(2, 1)])
def test_vertex_figure_of_apex(Q):
    P = pyramid(Q)
    apex = P.n_vertices - 1
    assert is_isomorphic(L.vertex_figure(P, apex), Q)


def test_vertex_figures():
    P = pyramid(delta(2, 4))
    assert is_isomorphic(L.vertex_figure(P, P.n_vertices - 1), delta(2, 4))
    cube = prism(polygon(4))
    for v in range(8):
        assert is_isomorphic(L.vertex_figure(cube, v), simplex(2))
    for expr in ("J(4)", "M(2,3)", "delta(2,2)"):
        P = FIXTURES[expr]
        degs = L.degrees(P)
        for v in range(P.n_vertices):
            F = L.vertex_figure(P, v)
            assert (F.dim, F.n_vertices) == (P.dim - 1, degs[v])
            assert sanity_check(F).ok
    with pytest.raises(InputError):
        L.vertex_figure(cube, 8)


def test_face_figures():
    P = FIXTURES["J(4)"]
    for v in range(P.n_vertices):
        assert L.face_figure(P, {v}) == L.vertex_figure(P, v)
    M72 = m_poly(7, 2)
    apexes = {14, 15}
    assert L.is_face(M72, apexes)
    assert is_isomorphic(L.face_figure(M72, apexes), prism(simplex(6)))
    Q = prism(m_poly(2, 6))
    from polyexcess.analysis import excess_profile
    N = set(excess_profile(Q).nonsimple)
    assert len(N) == 12
    assert is_isomorphic(L.face_figure(Q, N), polygon(4))
    with pytest.raises(InputError):
        L.face_figure(polygon(4), {0, 2})


def test_sanity_examples():
    assert sanity_check(simplex(6)).ok
    assert sanity_check(simplex(6)).summary() == "necessary conditions passed"
    dup = L.IncidencePolytope(2, 3, ((0, 1), (0, 1), (1, 2), (0, 2)))
    report = sanity_check(dup)
    assert not report["incidence"].passed


def test_invalid_merge_breaks_diamond():
    # two squares glued along an edge, with the two edges at vertex 0 merged:
    # vertex 0 then lies on three edges of a 2-dimensional incidence
    sq = polygon(4)
    with pytest.raises(NonPolytopalError):
        glue(sq, FaceSelector.facet(0), sq, FaceSelector.facet(0), merges=[(1, 1)])
    bad = L.IncidencePolytope(2, 6, ((0, 2), (1, 3), (2, 4), (3, 5), (4, 5), (0, 1), (0, 3)))
    report = sanity_check(bad)
    assert not report["diamond"].passed


def test_rank_and_covers():
    lat = L.face_lattice(simplex(3))
    assert lat.rank({0, 1}) == 1
    assert sorted(map(sorted, lat.covers({0}))) == [[0, 1], [0, 2], [0, 3]]
    with pytest.raises(InputError):
        L.face_lattice(polygon(4)).rank({0, 2})


def test_face_cap_raises():
    with pytest.raises(ResourceLimitError):
        L.face_lattice(delta(3, 3), max_faces=50)


def test_not_graded_is_non_polytopal():
    # a "triangle" whose second edge skips a vertex
    P = L.IncidencePolytope(2, 4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)))
    with pytest.raises(NonPolytopalError):
        L.face_lattice(P)


@pytest.mark.parametrize("expr", SMALL_EXPRS)
def test_file_round_trip(expr):
    P = FIXTURES[expr]
    text = L.dumps(P)
    Q = L.loads(text)
    assert Q == P and Q.provenance == P.provenance and Q.realizability == P.realizability
    assert L.dumps(Q) == text


def test_malformed_files():
    for text in ("[1, 2]", "{", '{"dim": 2}', '{"dim": 2, "n_vertices": 3, "facets": [[0, 5]]}'):
        with pytest.raises(InputError):
            L.loads(text)
