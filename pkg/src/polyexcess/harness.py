"""Executable structural statements, seeded corpora and suite reports.

Each :class:`TheoremCheck` pairs a hypothesis with a conclusion, both
evaluated on ``(polytope, excess profile, structure report)``.  A
conclusion returns ``True`` or a short string explaining the violation.
"""

from __future__ import annotations

import enum
import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import bitset
from . import dsl
from .analysis import (ExcessProfile, StructureReport, classify, excess_profile,
                       facet_intersection_spectrum, family_tags, is_simplex_face)
from .canonical import is_isomorphic
from .constructions import delta, m_poly, polygon, prism, pyramid, simplex
from .errors import InputError, NonPolytopalError, PolytopeError, ResourceLimitError
from .lattice import (IncidencePolytope, Realizability, face_figure, face_rank, graph,
                      neighbour_masks, sub_polytope, vertex_figure)
from .sanity import sanity_check

Conclusion = Union[bool, str]
Predicate = Callable[[IncidencePolytope, ExcessProfile, StructureReport], Conclusion]


class Outcome(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    VACUOUS = "vacuous"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Optional[str] = None
    detail: str = ""


@dataclass(frozen=True)
class TheoremCheck:
    id: str
    anchor: str
    hypothesis: Predicate
    conclusion: Predicate

    def evaluate(self, P: IncidencePolytope, prof: Optional[ExcessProfile] = None,
                 rep: Optional[StructureReport] = None) -> Verdict:
        prof = prof or excess_profile(P)
        rep = rep or classify(P)
        if not self.hypothesis(P, prof, rep):
            return Verdict(Outcome.VACUOUS)
        res = self.conclusion(P, prof, rep)
        if res is True:
            return Verdict(Outcome.PASS)
        detail = res if isinstance(res, str) else "conclusion does not hold"
        return Verdict(Outcome.FAIL, P.provenance or "?", detail)


# -- helpers for predicates -------------------------------------------------------------


def _within(x: int, lo: int, hi: int) -> bool:
    return lo <= x <= hi


def _excess_in_face(P: IncidencePolytope, face: int, k: int) -> int:
    """Excess degree of a face of rank ``k`` viewed as a polytope."""
    if k < 1:
        return 0
    nbrs = neighbour_masks(P)
    return sum((nbrs[v] & face).bit_count() - k for v in bitset.members(face))


def _pairs_of_rank(P: IncidencePolytope, rank: int):
    return [fp for fp in facet_intersection_spectrum(P) if fp.rank == rank]


def _is_simple_facet(P: IncidencePolytope, g: int) -> bool:
    return _excess_in_face(P, g, P.dim - 1) == 0


def _iso(P: IncidencePolytope, T: IncidencePolytope) -> bool:
    return P.dim == T.dim and is_isomorphic(P, T)


# -- conclusions --------------------------------------------------------------------------


def _nsv_neighbours(P, prof, rep) -> Conclusion:
    nbrs = neighbour_masks(P)
    N = prof.nonsimple_mask
    d = P.dim
    for v in prof.nonsimple:
        k = prof.excesses[v]
        have = (nbrs[v] & N).bit_count()
        if have < d - k - 2:
            return f"vertex {v} of excess {k} has {have} nonsimple neighbours"
    return True


def _facet_pair(P, prof, rep) -> Conclusion:
    d, xi = P.dim, prof.xi
    masks = P.facet_masks
    facet_xi = [_excess_in_face(P, g, d - 1) for g in masks]
    for fp in facet_intersection_spectrum(P):
        j = fp.rank
        if j < 0:
            continue
        m = bitset.from_iter(fp.vertices)
        for v in fp.vertices:
            if prof.excesses[v] < d - 2 - j:
                return f"vertex {v} in a {j}-dimensional facet meet has excess {prof.excesses[v]}"
        bound = max(facet_xi[fp.i], facet_xi[fp.j], _excess_in_face(P, m, j)) + (d - 2 - j) * (j + 1)
        if xi < bound:
            return f"facets {fp.i},{fp.j}: excess {xi} below {bound}"
        if j != d - 2 and xi < d - 2:
            return f"facets {fp.i},{fp.j} meet in a {j}-face but excess is {xi}"
        # the bound 2d-6 needs j <= d-4; at j = d-3 the product term is only d-2
        if 1 <= j <= d - 4 and xi < 2 * d - 6:
            return f"facets {fp.i},{fp.j} meet in a {j}-face but excess is {xi} < 2d-6"
    return True


def _semi_k(P, prof, rep) -> Conclusion:
    d, k = P.dim, len(prof.nonsimple)
    for v in prof.nonsimple:
        if prof.excesses[v] < 2 * (d - k - 2):
            return f"vertex {v} has excess {prof.excesses[v]} < 2(d-k-2) with k={k}"
    if P.n_vertices < 3 * d - 2 * k - 3:
        return f"f0={P.n_vertices} < 3d-2k-3 with k={k}"
    return True


def _simple_f0(P, prof, rep) -> Conclusion:
    d, n = P.dim, P.n_vertices
    return n in (d + 1, 2 * d, 3 * d - 3, 3 * d - 1) or n >= 4 * d - 8


def simple_catalogue_tags(d: int) -> set:
    """Families allowed for a simple d-polytope with fewer than 3d vertices.

    The prisms in this range are the simplicial prism and, for d = 3, the
    cube (the prism over a square).
    """
    tags = {f"Simplex({d})", f"Delta(1,{d - 1})", f"J({d})"}
    if d >= 4:
        tags.add(f"Delta(2,{d - 2})")
    if d == 6:
        tags.add("Delta(3,3)")
    if d == 7:
        tags.add("Delta(3,4)")
    if d == 3:
        tags.add("Cube")
    return tags


def _simple_cat(P, prof, rep) -> Conclusion:
    found = family_tags(P)
    if set(found) & simple_catalogue_tags(P.dim):
        return True
    return f"identified as {found or ['Unknown']}"


def _sk_small(P, prof, rep) -> Conclusion:
    return _iso(P, simplex(P.dim))


def _sk_d5(P, prof, rep) -> Conclusion:
    d = P.dim
    if d < 4:
        return f"dimension {d} is too small for a pyramid over delta(2,2)"
    T = delta(2, 2) if d == 4 else pyramid(delta(2, 2), d - 4)
    return _iso(P, T)


def _xi_d_minus_2(P, prof, rep) -> Conclusion:
    d = P.dim
    exc = [prof.excesses[v] for v in prof.nonsimple]
    if exc == [d - 2]:
        return True
    N = prof.nonsimple_mask
    if len(exc) == d - 2 and all(e == 1 for e in exc) and is_simplex_face(P, N):
        return True
    return f"nonsimple excesses {exc} fit neither pattern"


def _excess_one_clique(P, prof, count: int) -> Conclusion:
    exc = [prof.excesses[v] for v in prof.nonsimple]
    if len(exc) != count or any(e != 1 for e in exc):
        return f"nonsimple excesses {exc}, expected {count} ones"
    nbrs = neighbour_masks(P)
    N = prof.nonsimple_mask
    if any(N & ~nbrs[v] != 1 << v for v in prof.nonsimple):
        return "nonsimple vertices are not pairwise adjacent"
    return True


def _xi_d(P, prof, rep) -> Conclusion:
    d, n = P.dim, P.n_vertices
    if not (n in (d + 2, 2 * d + 1) or n >= 3 * d):
        return f"f0={n} not in {{d+2, 2d+1}} or >= 3d"
    return _excess_one_clique(P, prof, d)


def _xi_d5(P, prof, rep) -> Conclusion:
    exc = [prof.excesses[v] for v in prof.nonsimple]
    if len(exc) != 5 or any(e != 1 for e in exc):
        return f"nonsimple excesses {exc}, expected five ones"
    n = P.n_vertices
    if n in (7, 11) or (n >= 15 and n % 2 == 1):
        return True
    return f"f0={n} not in {{7, 11}} or odd >= 15"


def _xi_d_plus_2(P, prof, rep) -> Conclusion:
    if P.n_vertices != P.dim + 2:
        return f"f0={P.n_vertices}, expected d+2"
    return True if rep.is_2_neighbourly else "not 2-neighbourly"


def _xi_2d_6(P, prof, rep) -> Conclusion:
    d = P.dim
    N = prof.nonsimple_mask
    if len({prof.degrees[v] for v in prof.nonsimple}) > 1:
        return "nonsimple vertices have different degrees"
    if P.closure_mask(N) != N:
        return "nonsimple vertices do not form a face"
    if len(prof.nonsimple) == 1:
        v = prof.nonsimple[0]
        if prof.excesses[v] != 2 * d - 6:
            return "unique nonsimple vertex has the wrong excess"
        if not _iso(vertex_figure(P, v), delta(2, d - 3)):
            return "vertex figure of the unique nonsimple vertex is not delta(2,d-3)"
    if _pairs_of_rank(P, 0):
        return "two facets meet in a single vertex"
    for fp in _pairs_of_rank(P, 1):
        m = bitset.from_iter(fp.vertices)
        if sorted(prof.excesses[v] for v in fp.vertices) != [d - 3, d - 3] or N != m:
            return f"edge {fp.vertices} meeting: wrong excess pattern"
        if not _iso(face_figure(P, m), prism(simplex(d - 3))):
            return f"face figure of edge {fp.vertices} is not a (d-2)-prism"
    for fp in _pairs_of_rank(P, d - 4):
        m = bitset.from_iter(fp.vertices)
        if len(fp.vertices) != d - 3:
            return f"(d-4)-face {fp.vertices} is not a simplex"
        if any(prof.excesses[v] != 2 for v in fp.vertices):
            return f"(d-4)-face {fp.vertices} has a vertex of excess other than 2"
        if not _iso(face_figure(P, m), delta(1, 2)):
            return f"face figure of {fp.vertices} is not a 3-prism"
    for fp in _pairs_of_rank(P, d - 3):
        m = bitset.from_iter(fp.vertices)
        if not _iso(sub_polytope(P, m), prism(simplex(d - 4))):
            return f"subridge {fp.vertices} is not a (d-3)-prism"
        if any(prof.excesses[v] != 1 for v in fp.vertices):
            return f"subridge {fp.vertices} has a vertex of excess other than 1"
        if not _iso(face_figure(P, m), polygon(4)):
            return f"face figure of subridge {fp.vertices} is not a quadrilateral"
    return True


def _no_point_meet(P, prof, rep) -> Conclusion:
    pts = _pairs_of_rank(P, 0)
    return True if not pts else f"facets {pts[0].i},{pts[0].j} meet in vertex {pts[0].vertices}"


def _subridge_struct(P, prof, rep) -> Conclusion:
    d = P.dim
    nbrs = neighbour_masks(P)
    masks = P.facet_masks
    for fp in _pairs_of_rank(P, d - 3):
        S = bitset.from_iter(fp.vertices)
        g1, g2 = masks[fp.i], masks[fp.j]
        if S.bit_count() != d - 2:
            return f"subridge {fp.vertices} is not a simplex"
        if not (_is_simple_facet(P, g1) and _is_simple_facet(P, g2)):
            return f"facets {fp.i},{fp.j} meeting in a subridge are not both simple"
        for v in fp.vertices:
            if nbrs[v] & ~(g1 | g2):
                return f"subridge vertex {v} has a neighbour outside both facets"
            if prof.excesses[v] != 1:
                return f"subridge vertex {v} has excess {prof.excesses[v]}"
        for v in prof.nonsimple:
            if not (g1 | g2) >> v & 1:
                return f"nonsimple vertex {v} lies outside facets {fp.i},{fp.j}"
            if prof.excesses[v] != 1:
                return f"nonsimple vertex {v} has excess {prof.excesses[v]}"
    return True


# -- the catalogue -----------------------------------------------------------------------


def _hyp_xi(f: Callable[[int, int], bool]) -> Predicate:
    return lambda P, prof, rep: f(P.dim, prof.xi)


def _semisimple_nonsimple(P, prof, rep) -> bool:
    return rep.is_semisimple and not rep.is_simple


def builtin_checks() -> List[TheoremCheck]:
    T = TheoremCheck
    return [
        T("EXC-LOWER", "a nonsimple d-polytope has excess at least d-2",
          _hyp_xi(lambda d, x: x > 0), lambda P, p, r: p.xi >= P.dim - 2),
        T("EXC-PARITY", "excess is even in even dimension",
          _hyp_xi(lambda d, x: d % 2 == 0), lambda P, p, r: p.xi % 2 == 0),
        T("EXC-GAP-LOW", "no excess in [1, d-3]",
          _hyp_xi(lambda d, x: x > 0 and d >= 4), lambda P, p, r: not _within(p.xi, 1, P.dim - 3)),
        T("EXC-GAP-HIGH", "no excess in [d+3, 2d-7]",
          _hyp_xi(lambda d, x: x > 0 and d >= 10),
          lambda P, p, r: not _within(p.xi, P.dim + 3, 2 * P.dim - 7)),
        T("NSV-NEIGHBOURS", "a vertex of excess k has at least d-k-2 nonsimple neighbours",
          _hyp_xi(lambda d, x: x > 0), _nsv_neighbours),
        T("FACETPAIR", "a j-dimensional facet meet forces excess d-2-j at its vertices",
          lambda P, p, r: any(fp.rank >= 0 for fp in facet_intersection_spectrum(P)), _facet_pair),
        T("SEMI-MIN4", "nonsimple vertices of a semisimple polytope have excess at least 4",
          _semisimple_nonsimple,
          lambda P, p, r: all(p.excesses[v] >= 4 for v in p.nonsimple)),
        T("SEMI-K", "semisimple with k nonsimple vertices: excess 2(d-k-2) each, f0 >= 3d-2k-3",
          _semisimple_nonsimple, _semi_k),
        T("SEMI-TWO", "semisimple with two or more nonsimple vertices: excess at least 4d-16",
          lambda P, p, r: _semisimple_nonsimple(P, p, r) and len(p.nonsimple) >= 2,
          lambda P, p, r: p.xi >= 4 * P.dim - 16),
        T("SIMPLE-F0", "simple f0 lies in {d+1, 2d, 3d-3, 3d-1} or is at least 4d-8",
          lambda P, p, r: r.is_simple, _simple_f0),
        T("SIMPLE-CAT", "simple with f0 < 3d is in the small catalogue",
          lambda P, p, r: P.dim >= 3 and r.is_simple and P.n_vertices < 3 * P.dim,
          _simple_cat),
        T("SK-SMALL", "super-Kirkman with at most d+4 vertices is a simplex",
          lambda P, p, r: r.is_super_kirkman and P.n_vertices <= P.dim + 4, _sk_small),
        T("SK-D5", "super-Kirkman with d+5 vertices is a multifold pyramid over delta(2,2)",
          lambda P, p, r: r.is_super_kirkman and P.n_vertices == P.dim + 5, _sk_d5),
        T("SK-D6", "no super-Kirkman polytope has d+6 vertices",
          lambda P, p, r: r.is_super_kirkman, lambda P, p, r: P.n_vertices != P.dim + 6),
        T("XI-D-2", "excess d-2: one vertex of excess d-2 or a simplex face of d-2 excess-1 vertices",
          _hyp_xi(lambda d, x: x == d - 2 and x > 0), _xi_d_minus_2),
        T("XI-D-1", "excess d-1 occurs only for d in {3, 5}",
          _hyp_xi(lambda d, x: x == d - 1), lambda P, p, r: P.dim in (3, 5)),
        T("XI-D", "excess d with d >= 7: f0 in {d+2, 2d+1} or >= 3d, d adjacent excess-1 vertices",
          _hyp_xi(lambda d, x: x == d and d >= 7), _xi_d),
        T("XI-D5", "excess 5 in dimension 5: five excess-1 vertices, f0 in {7, 11} or odd >= 15",
          _hyp_xi(lambda d, x: d == 5 and x == 5), _xi_d5),
        T("XI-D+1", "excess d+1 occurs only for d in {3, 5, 7}",
          _hyp_xi(lambda d, x: x == d + 1), lambda P, p, r: P.dim in (3, 5, 7)),
        T("XI-D+2", "excess d+2 with d >= 9 is 2-neighbourly with d+2 vertices",
          _hyp_xi(lambda d, x: x == d + 2 and d >= 9), _xi_d_plus_2),
        T("XI-2D-6", "excess 2d-6 with d >= 9: nonsimple vertices alike, forming a face",
          _hyp_xi(lambda d, x: x == 2 * d - 6 and d >= 9), _xi_2d_6),
        T("NO-POINT-MEET", "excess in [d-1, 2d-6]: no two facets meet in one vertex",
          _hyp_xi(lambda d, x: _within(x, d - 1, 2 * d - 6)), _no_point_meet),
        T("SUBRIDGE-STRUCT", "excess in [d-1, 2d-7]: subridge meets are simplices of excess-1 vertices",
          lambda P, p, r: _within(p.xi, P.dim - 1, 2 * P.dim - 7) and bool(_pairs_of_rank(P, P.dim - 3)),
          _subridge_struct),
    ]


CHECK_IDS = tuple(c.id for c in builtin_checks())
MUST_HIT = ("XI-2D-6", "XI-D+2")


def select_checks(ids: Optional[Iterable[str]] = None) -> List[TheoremCheck]:
    checks = builtin_checks()
    if ids is None:
        return checks
    wanted = list(ids)
    known = {c.id: c for c in checks}
    missing = [i for i in wanted if i not in known]
    if missing:
        raise InputError(f"unknown check(s): {', '.join(missing)}")
    return [known[i] for i in wanted]


# -- corpus generation ----------------------------------------------------------------------

LEAVES = ("simplex", "polygon", "cyclic", "delta", "M", "J")
COMBINATORS = ("pyramid", "prism", "product", "free_join", "wedge", "truncate", "stack", "glue")
DEFAULT_WEIGHTS: Dict[str, float] = {
    "simplex": 3, "polygon": 2, "cyclic": 2, "delta": 2, "M": 2, "J": 2,
    "pyramid": 3, "prism": 3, "product": 1, "free_join": 1,
    "wedge": 2, "truncate": 2, "stack": 2, "glue": 2,
}


@dataclass(frozen=True)
class CorpusSpec:
    seed: int
    count: int
    max_dim: int = 12
    max_vertices: int = 48
    weights: Optional[Dict[str, float]] = None
    min_dim: int = 3
    max_faces: int = 2**14
    include_exemplars: bool = True

    def resolved_weights(self) -> Dict[str, float]:
        w = dict(DEFAULT_WEIGHTS)
        if self.weights:
            unknown = set(self.weights) - set(w)
            if unknown:
                raise InputError(f"unknown construction weight(s): {sorted(unknown)}")
            w.update(self.weights)
        if any(v < 0 for v in w.values()):
            raise InputError("weights must be non-negative")
        if not any(w[k] > 0 for k in LEAVES):
            raise InputError("at least one leaf constructor needs positive weight")
        return w

    def validate(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.count < 0:
            raise InputError("count must be non-negative")
        if not 1 <= self.min_dim <= self.max_dim:
            raise InputError("need 1 <= min_dim <= max_dim")
        if self.max_vertices < 2:
            raise InputError("max_vertices must be at least 2")
        self.resolved_weights()

    def to_dict(self) -> dict:
        return {"seed": self.seed, "count": self.count, "max_dim": self.max_dim,
                "max_vertices": self.max_vertices, "min_dim": self.min_dim,
                "max_faces": self.max_faces, "include_exemplars": self.include_exemplars,
                "weights": self.resolved_weights()}


@dataclass
class Corpus:
    spec: CorpusSpec
    members: List[Tuple[IncidencePolytope, dsl.Call]]
    rejections: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def polytopes(self) -> List[IncidencePolytope]:
        return [P for P, _ in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def exemplar_expressions(max_dim: int = 12, min_dim: int = 3) -> List[str]:
    """Named families, in a fixed order, covering the structured hypotheses."""
    out = []
    for d in range(min_dim, max_dim + 1):
        out.append(f"simplex({d})")
        out += [f"M({k},{d - k})" for k in range(2, d)]
        out.append(f"J({d})")
        out += [f"delta({a},{d - a})" for a in range(1, d // 2 + 1)]
        out.append(f"glue(simplex({d}),facet(0),simplex({d}),facet(0))")
        out.append(f"stack(prism(simplex({d - 1})),face({','.join(map(str, range(d)))}))")
        out.append(f"cyclic({d},{d + 2})")
        if d >= 5:
            out.append(f"pyramid(delta(2,{d - 3}))")
            out.append(f"prism(M(2,{d - 3}))")
            out.append(f"pyramid(delta(2,2),{d - 4})")
        if d >= 4:
            out.append(f"pyramid(J({d - 1}))")
            out.append(f"pyramid(polygon(5),{d - 2})")
            out.append(f"prism(pyramid(delta(2,2),{d - 5}))" if d >= 6 else f"prism(delta(1,{d - 2}))")
    out.append("glue(J(7),facet(9),simplex(7),facet(0))")
    out.append(f"wedge(J(4),face({','.join(map(str, _j4_pentagon()))}))")
    return out


def _j4_pentagon() -> Tuple[int, ...]:
    from .constructions import j_poly
    from .lattice import face_lattice
    J = j_poly(4)
    return next(tuple(bitset.members(m)) for m in face_lattice(J).masks(2) if m.bit_count() == 5)


class _Reject(Exception):
    pass


def _names(e: dsl.Call) -> set:
    out = {e.name}
    for a in e.args:
        if isinstance(a, dsl.Call):
            out |= _names(a)
    return out


class _Generator:
    def __init__(self, spec: CorpusSpec):
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.w = spec.resolved_weights()

    def _fits(self, P: IncidencePolytope) -> None:
        if P.dim > self.spec.max_dim or P.n_vertices > self.spec.max_vertices:
            raise _Reject("exceeds dimension or vertex cap")

    def _eval(self, e: dsl.Call) -> IncidencePolytope:
        try:
            P = dsl.evaluate(e)
        except ResourceLimitError as exc:
            raise _Reject(f"resource: {exc}") from None
        except PolytopeError as exc:
            raise _Reject(f"invalid: {exc}") from None
        self._fits(P)
        return P

    def leaf(self) -> Tuple[dsl.Call, IncidencePolytope]:
        r = self.rng
        names = [n for n in LEAVES if self.w[n] > 0]
        name = r.choices(names, [self.w[n] for n in names])[0]
        if name == "simplex":
            args = (r.randint(1, 8),)
        elif name == "polygon":
            args = (r.randint(3, 9),)
        elif name == "cyclic":
            d = r.randint(2, 7)
            args = (d, r.randint(d + 1, d + 4))
        elif name == "delta":
            m = r.randint(1, 3)
            args = (m, r.randint(m, 4))
        elif name == "M":
            args = (r.randint(2, 5), r.randint(0, 4))
        else:
            args = (r.randint(2, 6),)
        e = dsl.Call(name, args)
        return e, self._eval(e)

    def _facet_selector(self, P: IncidencePolytope, simplex_only: bool = False):
        choices = [i for i, f in enumerate(P.facets)
                   if not simplex_only or len(f) == P.dim]
        if not choices:
            raise _Reject("no simplex facet")
        return dsl.Selector("facet", (self.rng.choice(choices),))

    def _face_selector(self, P: IncidencePolytope, allow_facet: bool):
        r = self.rng
        kinds = ["vertex", "edge", "face"] + (["facet"] if allow_facet else [])
        kind = r.choices(kinds, [4, 3, 2, 2][:len(kinds)])[0]
        if kind == "vertex":
            return dsl.Selector("vertex", (r.randrange(P.n_vertices),))
        if kind == "facet":
            return self._facet_selector(P)
        edges = graph(P)
        if kind == "edge" or P.dim < 3:
            return dsl.Selector("edge", r.choice(edges))
        # grow an edge into a face of rank 2 .. d-2 by closing with neighbours
        u, v = r.choice(edges)
        m = P.closure_mask((1 << u) | (1 << v))
        target = r.randint(2, max(2, P.dim - 2))
        nbrs = neighbour_masks(P)
        for _ in range(target - 1):
            near = 0
            for w in bitset.members(m):
                near |= nbrs[w]
            near &= ~m
            if not near:
                break
            w = r.choice(bitset.to_list(near))
            grown = P.closure_mask(m | (1 << w))
            if grown == P.full_mask:
                break
            m = grown
        return dsl.Selector("face", tuple(bitset.members(m)))

    def sample(self, depth: int = 0) -> Tuple[dsl.Call, IncidencePolytope]:
        r = self.rng
        ops = [n for n in COMBINATORS if self.w[n] > 0]
        p_internal = (0.65, 0.45, 0.3)[depth] if depth < 3 else 0.0
        if not ops or r.random() >= p_internal:
            return self.leaf()
        name = r.choices(ops, [self.w[n] for n in ops])[0]
        e1, P = self.sample(depth + 1)
        if name == "pyramid":
            k = r.choices((1, 2, 3), (5, 2, 1))[0]
            e = dsl.Call("pyramid", (e1,) if k == 1 else (e1, k))
        elif name == "prism":
            e = dsl.Call("prism", (e1,))
        elif name in ("product", "free_join"):
            e2, _ = self.sample(depth + 1)
            e = dsl.Call(name, (e1, e2))
        elif name == "wedge":
            e = dsl.Call("wedge", (e1, self._face_selector(P, allow_facet=True)))
        elif name == "truncate":
            e = dsl.Call("truncate", (e1, self._face_selector(P, allow_facet=False)))
        elif name == "stack":
            e = dsl.Call("stack", (e1, self._facet_selector(P, simplex_only=True)))
        else:
            e = self._glue(e1, P)
        return e, self._eval(e)

    def _glue(self, e1: dsl.Call, P1: IncidencePolytope) -> dsl.Call:
        r = self.rng
        d = P1.dim
        s1 = self._facet_selector(P1, simplex_only=True)
        partners = [f"simplex({d})", f"prism(simplex({d - 1}))", f"J({d})", f"M({d - 1},1)",
                    f"stack(simplex({d}),facet(0))"]
        e2 = dsl.parse(r.choice(partners))
        P2 = self._eval(e2)
        s2 = self._facet_selector(P2, simplex_only=True)
        args: List[dsl.Arg] = [e1, s1, e2, s2]
        F1 = P1.facet_masks[s1.values[0]]
        F2 = P2.facet_masks[s2.values[0]]
        f2 = bitset.to_list(F2)
        if r.random() < 0.4:
            perm = f2[:]
            r.shuffle(perm)
            args.append(dsl.MapOption(tuple(perm)))
            pairing = dict(zip(perm, bitset.to_list(F1)))
        else:
            pairing = dict(zip(f2, bitset.to_list(F1)))
        if r.random() < 0.25:
            merge = self._merge_pair(P1, F1, P2, F2, pairing)
            if merge:
                args.append(dsl.MergeOption((merge,)))
        return dsl.Call("glue", tuple(args))

    def _merge_pair(self, P1, F1, P2, F2, pairing):
        d = P1.dim
        opts = []
        for i, g1 in enumerate(P1.facet_masks):
            r1 = g1 & F1
            if g1 == F1 or r1.bit_count() != d - 1:
                continue
            for j, g2 in enumerate(P2.facet_masks):
                r2 = g2 & F2
                if g2 == F2 or r2.bit_count() != d - 1:
                    continue
                if bitset.from_iter(pairing[v] for v in bitset.members(r2)) == r1:
                    opts.append((i, j))
        return self.rng.choice(opts) if opts else None


def generate_corpus(spec: CorpusSpec) -> Corpus:
    """Deterministic corpus of sanity-passing constructed polytopes."""
    spec.validate()
    gen = _Generator(spec)
    corpus = Corpus(spec, [])
    seen = set()

    def admit(e: dsl.Call, P: IncidencePolytope) -> None:
        text = dsl.to_text(e)
        if text in seen:
            corpus.rejections.append((text, "duplicate"))
            return
        if not spec.min_dim <= P.dim <= spec.max_dim or P.n_vertices > spec.max_vertices:
            corpus.rejections.append((text, "outside dimension or vertex range"))
            return
        try:
            report = sanity_check(P, max_faces=spec.max_faces)
        except ResourceLimitError as exc:
            corpus.rejections.append((text, f"resource: {exc}"))
            return
        if not report.ok:
            corpus.rejections.append((text, f"sanity: {report.summary()}"))
            return
        seen.add(text)
        corpus.members.append((P, e))

    if spec.include_exemplars:
        w = spec.resolved_weights()
        for text in exemplar_expressions(spec.max_dim, spec.min_dim):
            if len(corpus) >= spec.count:
                break
            e = dsl.parse(text)
            if any(w.get(n, 1) <= 0 for n in _names(e) if n in w):
                continue
            try:
                P = gen._eval(e)
            except _Reject as exc:
                corpus.rejections.append((text, str(exc)))
                continue
            admit(e, P)

    attempts = 0
    limit = 200 * max(spec.count, 1)
    while len(corpus) < spec.count:
        attempts += 1
        if attempts > limit:
            raise ResourceLimitError(
                f"could not fill the corpus: {len(corpus)} of {spec.count} after {limit} attempts")
        try:
            e, P = gen.sample()
        except _Reject as exc:
            corpus.rejections.append(("?", str(exc)))
            continue
        admit(e, P)
    return corpus


# -- running the suite ----------------------------------------------------------------------


@dataclass
class CheckTally:
    id: str
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    witnesses: List[str] = field(default_factory=list)
    details: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"id": self.id, "pass": self.passed, "fail": self.failed,
                "vacuous": self.vacuous, "witnesses": list(self.witnesses)}


@dataclass
class SuiteReport:
    corpus_fingerprint: str
    size: int
    checks: List[CheckTally]
    must_hit: Tuple[str, ...] = ()
    observations: Dict[str, object] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.checks)

    @property
    def vacuous_must_hit(self) -> List[str]:
        return [t.id for t in self.checks if t.id in self.must_hit and t.passed + t.failed == 0]

    @property
    def ok(self) -> bool:
        return self.failures == 0 and not self.vacuous_must_hit

    def tally(self, check_id: str) -> CheckTally:
        for t in self.checks:
            if t.id == check_id:
                return t
        raise KeyError(check_id)

    def to_dict(self) -> dict:
        return {"corpus_fingerprint": self.corpus_fingerprint,
                "size": self.size,
                "checks": [t.to_dict() for t in self.checks],
                "must_hit_vacuous": self.vacuous_must_hit,
                "observations": self.observations}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def lines(self) -> List[str]:
        out = []
        for t in self.checks:
            status = "FAIL" if t.failed else ("vacuous" if t.passed == 0 else "ok")
            out.append(f"{t.id:<16} {status:<8} pass={t.passed} fail={t.failed} vacuous={t.vacuous}")
            for w, why in zip(t.witnesses, t.details):
                out.append(f"    witness: {w}  ({why})")
        for cid in self.vacuous_must_hit:
            out.append(f"{cid} is vacuous on every member but must be exercised")
        return out


def fingerprint(provenances: Sequence[str]) -> str:
    h = hashlib.sha256()
    for p in provenances:
        h.update(p.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def _incidence_key(P: IncidencePolytope) -> tuple:
    return (P.dim, P.n_vertices, P.facets)


def _strip_pyramids(P: IncidencePolytope) -> IncidencePolytope:
    while P.dim >= 2:
        full = P.full_mask
        base = next((g for g in P.facet_masks if (full & ~g).bit_count() == 1), None)
        if base is None:
            break
        P = sub_polytope(P, base)
    return P


def _observe(obs: Counter, P: IncidencePolytope, prof: ExcessProfile, rep: StructureReport) -> None:
    d, xi = P.dim, prof.xi
    if xi == 2 * d - 5:
        obs[f"xi=2d-5 at d={d}"] += 1
        if d not in (3, 5, 7):
            obs["xi=2d-5 outside d in {3,5,7}"] += 1
    if xi > 0:
        comps = rep.nonsimple_subgraph.component_count
        obs["nonsimple subgraph connected" if comps == 1 else "nonsimple subgraph disconnected"] += 1
        if comps > 1 and xi == 2 * d - 4:
            obs["disconnected at xi=2d-4"] += 1
    if rep.is_semisimple and not rep.is_simple:
        obs["semisimple nonsimple"] += 1
        base = _strip_pyramids(P)
        if not any(t.startswith("Delta(") for t in family_tags(base)):
            obs["semisimple nonsimple beyond pyramids over delta"] += 1


def run_suite(corpus: Union[Corpus, Iterable[IncidencePolytope]],
              checks: Optional[Sequence[TheoremCheck]] = None,
              must_hit: Sequence[str] = ()) -> SuiteReport:
    """Evaluate every check on every member.

    Members must pass :func:`sanity_check`; a member that does not raises
    :class:`InputError` before any check runs.  Analyses are shared between
    members with identical incidences.
    """
    members = corpus.polytopes if isinstance(corpus, Corpus) else list(corpus)
    checks = list(checks) if checks is not None else builtin_checks()
    for P in members:
        if not P._cache.get("sane"):
            report = sanity_check(P)
            if not report.ok:
                raise InputError(f"{P.provenance or 'member'} fails the sanity gate: "
                                 f"{report.summary()}")
    tallies = [CheckTally(c.id) for c in checks]
    memo: Dict[tuple, List[Verdict]] = {}
    obs: Counter = Counter()
    for P in members:
        key = _incidence_key(P)
        verdicts = memo.get(key)
        if verdicts is None:
            prof = excess_profile(P)
            rep = classify(P)
            verdicts = [c.evaluate(P, prof, rep) for c in checks]
            memo[key] = verdicts
            _observe(obs, P, prof, rep)
        for t, v in zip(tallies, verdicts):
            if v.outcome is Outcome.PASS:
                t.passed += 1
            elif v.outcome is Outcome.VACUOUS:
                t.vacuous += 1
            else:
                t.failed += 1
                t.witnesses.append(P.provenance or "?")
                t.details.append(v.detail)
    observations = {k: obs[k] for k in sorted(obs)}
    observations["asserted members"] = sum(
        P.realizability is Realizability.ASSERTED for P in members)
    return SuiteReport(fingerprint([P.provenance or "?" for P in members]), len(members),
                       tallies, tuple(must_hit), observations)


DEFAULT_CORPUS = CorpusSpec(seed=0xC0FFEE, count=2000, max_dim=12)
