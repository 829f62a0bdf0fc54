import random

import pytest
from hypothesis import given, settings, strategies as st

from polyexcess import dsl
from polyexcess.analysis import excess_profile
from polyexcess.dsl import (ArityError, Call, DslError, DslSyntaxError, EvaluationError,
                            MapOption, MergeOption, Selector, UnknownConstructorError, parse,
                            to_text)
from polyexcess.errors import InputError
from polyexcess.harness import exemplar_expressions

LEAVES = [n for n, sig in dsl.SIGNATURES.items() if set(sig) <= {"I"}]
COMBINATORS = [n for n in dsl.SIGNATURES if n not in LEAVES]


def random_selector(rng):
    kind = rng.choice(dsl.SELECTORS)
    size = {"facet": 1, "vertex": 1, "edge": 2}.get(kind) or rng.randint(1, 5)
    return Selector(kind, tuple(rng.randint(0, 30) for _ in range(size)))


def random_ast(rng, depth=0):
    if depth >= 4 or rng.random() < 0.35:
        name = rng.choice(LEAVES)
    else:
        name = rng.choice(COMBINATORS)
    args = []
    for slot in dsl.SIGNATURES[name]:
        if slot.endswith("?") and rng.random() < 0.5:
            continue
        if slot[0] == "I":
            args.append(rng.randint(0, 99))
        elif slot[0] == "E":
            args.append(random_ast(rng, depth + 1))
        else:
            args.append(random_selector(rng))
    if name == "glue":
        opts = []
        if rng.random() < 0.5:
            opts.append(MapOption(tuple(rng.randint(0, 9) for _ in range(rng.randint(1, 4)))))
        if rng.random() < 0.5:
            opts.append(MergeOption(tuple((rng.randint(0, 9), rng.randint(0, 9))
                                          for _ in range(rng.randint(1, 3)))))
        rng.shuffle(opts)
        args += opts
    return Call(name, tuple(args))


def test_round_trip_500_random_asts():
    rng = random.Random(20240611)
    for _ in range(500):
        e = random_ast(rng)
        text = to_text(e)
        assert parse(text) == e
        assert to_text(parse(text)) == text


def test_canonical_strings_are_fixed_points():
    for text in exemplar_expressions(10):
        assert to_text(parse(text)) == text


def test_parse_examples():
    assert parse("pyramid(delta(2,3),2)") == Call("pyramid", (Call("delta", (2, 3)), 2))
    with pytest.raises(DslSyntaxError) as info:
        parse("delta(2,)")
    assert (info.value.line, info.value.column) == (1, 9)
    assert "integer" in info.value.expected


def test_whitespace_and_aliases():
    assert parse("  pyramid ( delta( 2 , 3 ) ,2 )\n") == parse("pyramid(delta(2,3),2)")
    assert to_text(parse("m(2,3)")) == "M(2,3)"
    assert to_text(parse("j(4)")) == "J(4)"
    assert to_text(parse("wedge(J(4),face(0 1,2))")) == "wedge(J(4),face(0,1,2))"


def test_glue_options_round_trip():
    text = "glue(simplex(3),facet(0),simplex(3),facet(1),map=[2,0,3],merge=[(1,2),(3,0)])"
    e = parse(text)
    assert isinstance(e.args[4], MapOption) and isinstance(e.args[5], MergeOption)
    assert to_text(e) == text


def test_error_positions():
    with pytest.raises(DslSyntaxError) as info:
        parse("pyramid(\n  delta(2,)\n)")
    assert (info.value.line, info.value.column) == (2, 11)
    with pytest.raises(UnknownConstructorError) as info:
        parse("prism(foo(3))")
    assert info.value.column == 7
    with pytest.raises(ArityError):
        parse("delta(2)")
    with pytest.raises(ArityError):
        parse("prism(3)")
    with pytest.raises(DslSyntaxError):
        parse("prism(simplex(3)) extra")
    with pytest.raises(DslError):
        parse("wedge(simplex(3),map=[0])")


def test_deep_nesting_is_an_error_not_a_crash():
    text = "prism(" * 5000 + "simplex(1)" + ")" * 5000
    with pytest.raises(DslError):
        parse(text)


@settings(max_examples=500, deadline=None)
@given(st.binary(max_size=200))
def test_arbitrary_bytes_never_crash(data):
    try:
        parse(data)
    except DslError as exc:
        assert exc.line >= 1 and exc.column >= 1


_SEEDS = ["glue(simplex(3),facet(0),simplex(3),facet(1),map=[2,0,3])",
          "wedge(J(4),face(0,1,3))", "pyramid(delta(2,3),2)", "truncate(M(2,3),edge(0,1))"]


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(_SEEDS), st.integers(0, 80), st.integers(0, 3),
       st.sampled_from(list("(),=[]0123 azM\n")))
def test_mutated_expressions_never_crash(seed, pos, cut, ch):
    text = seed[:pos] + ch + seed[pos + cut:]
    try:
        e = parse(text)
    except DslError as exc:
        assert exc.line >= 1 and exc.column >= 1
    else:
        assert parse(to_text(e)) == e


def test_evaluate_examples():
    P = dsl.evaluate("glue(simplex(5),facet(0),simplex(5),facet(0))")
    assert P.n_vertices == 7 and excess_profile(P).xi == 5
    assert dsl.evaluate("J(4)").n_vertices == 11
    W = dsl.evaluate("wedge(J(4),face(3,4,5,6))")
    assert W.dim == 5
    assert P.provenance == "glue(simplex(5),facet(0),simplex(5),facet(0))"
    assert dsl.evaluate("m( 2 , 3 )").provenance == "M(2,3)"


def test_wedge_over_pentagon_of_j4():
    from polyexcess.lattice import face_lattice
    J = dsl.evaluate("J(4)")
    pent = next(m for m in face_lattice(J).masks(2) if m.bit_count() == 5)
    verts = ",".join(str(v) for v in range(J.n_vertices) if pent >> v & 1)
    W = dsl.evaluate(f"wedge(J(4),face({verts}))")
    assert (W.dim, excess_profile(W).xi) == (5, 5)


def test_evaluation_errors_name_the_subexpression():
    with pytest.raises(EvaluationError) as info:
        dsl.evaluate("pyramid(wedge(polygon(5),face(0,2)))")
    assert info.value.subexpression == "wedge(polygon(5),face(0,2))"
    assert isinstance(info.value, InputError)
    with pytest.raises(EvaluationError) as info:
        dsl.evaluate("prism(polygon(2))")
    assert info.value.subexpression == "polygon(2)"
    with pytest.raises(EvaluationError):
        dsl.evaluate("glue(simplex(3),facet(0),simplex(3),facet(0),map=[9,9,9])")
