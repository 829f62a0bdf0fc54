"""Excess degrees, facet-pair spectra and structural classification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from . import bitset
from . import constructions as C
from .canonical import DEFAULT_NODE_BUDGET, canonical_form, invariants
from .errors import InputError, NonPolytopalError, PolytopeError
from .lattice import IncidencePolytope, degrees, face_rank, graph, neighbour_masks


@dataclass(frozen=True)
class ExcessProfile:
    dim: int
    degrees: Tuple[int, ...]
    excesses: Tuple[int, ...]
    xi: int
    nonsimple: Tuple[int, ...]

    @property
    def nonsimple_mask(self) -> int:
        return bitset.from_iter(self.nonsimple)

    def to_dict(self) -> dict:
        return {"xi": self.xi, "degrees": list(self.degrees),
                "excesses": list(self.excesses), "nonsimple": list(self.nonsimple)}


def excess_profile(P: IncidencePolytope) -> ExcessProfile:
    cached = P._cache.get("excess")
    if cached is not None:
        return cached
    d = P.dim
    degs = tuple(degrees(P))
    exc = tuple(k - d for k in degs)
    xi = sum(exc)
    identity = 2 * len(graph(P)) - d * P.n_vertices
    if xi != identity or min(exc, default=0) < 0:
        raise PolytopeError(f"excess bookkeeping broken: sum {xi}, 2f1-d*f0 {identity}")
    prof = ExcessProfile(d, degs, exc, xi, tuple(v for v, e in enumerate(exc) if e > 0))
    P._cache["excess"] = prof
    return prof


@dataclass(frozen=True)
class FacetPair:
    i: int
    j: int
    vertices: Tuple[int, ...]
    rank: int


def facet_intersection_spectrum(P: IncidencePolytope) -> List[FacetPair]:
    """Every unordered facet pair with the rank of their common face (-1 if disjoint)."""
    cached = P._cache.get("spectrum")
    if cached is not None:
        return cached
    masks = P.facet_masks
    out = []
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            m = masks[i] & masks[j]
            if m == 0:
                out.append(FacetPair(i, j, (), -1))
                continue
            if P.closure_mask(m) != m:
                raise NonPolytopalError(
                    f"facets {i} and {j} meet in {bitset.to_list(m)}, which is not a face")
            out.append(FacetPair(i, j, tuple(bitset.members(m)), face_rank(P, m)))
    P._cache["spectrum"] = out
    return out


@dataclass(frozen=True)
class NonsimpleStructure:
    vertices: Tuple[int, ...]
    same_degree: bool
    component_count: int
    is_face: bool
    is_missing_face: bool
    is_phantom_simplex: bool

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "same_degree": self.same_degree,
                "component_count": self.component_count, "is_face": self.is_face,
                "is_missing_face": self.is_missing_face,
                "is_phantom_simplex": self.is_phantom_simplex}


def _components(mask: int, nbrs) -> int:
    count = 0
    left = mask
    while left:
        count += 1
        frontier = left & -left
        seen = frontier
        while frontier:
            grow = 0
            for v in bitset.members(frontier):
                grow |= nbrs[v]
            frontier = grow & mask & ~seen
            seen |= frontier
        left &= ~seen
    return count


def is_simplex_face(P: IncidencePolytope, m: int) -> bool:
    return P.closure_mask(m) == m and (m == 0 or face_rank(P, m) == m.bit_count() - 1)


def is_missing_face(P: IncidencePolytope, m: int) -> bool:
    """``m`` is not a face but every proper subset is.

    Every proper subset is a face exactly when each subset missing one
    element is a simplex face, since all subsets of a simplex face are faces.
    """
    if m.bit_count() < 2 or P.closure_mask(m) == m:
        return False
    return all(is_simplex_face(P, m & ~(1 << v)) for v in bitset.members(m))


def nonsimple_structure(P: IncidencePolytope) -> NonsimpleStructure:
    prof = excess_profile(P)
    nbrs = neighbour_masks(P)
    N = prof.nonsimple_mask
    face = P.closure_mask(N) == N
    clique = all(N & ~nbrs[v] == 1 << v for v in prof.nonsimple)
    return NonsimpleStructure(
        vertices=prof.nonsimple,
        same_degree=len({prof.degrees[v] for v in prof.nonsimple}) <= 1,
        component_count=_components(N, nbrs),
        is_face=face,
        is_missing_face=is_missing_face(P, N),
        is_phantom_simplex=bool(N) and clique and not face,
    )


@dataclass(frozen=True)
class StructureReport:
    facet_pair_dims: Tuple[Tuple[Tuple[int, int], int], ...]
    is_simple: bool
    is_semisimple: bool
    is_super_kirkman: bool
    is_2_neighbourly: bool
    is_pyramidal: bool
    nonsimple_subgraph: NonsimpleStructure

    def to_dict(self) -> dict:
        return {
            "facet_pair_dims": [[i, j, r] for (i, j), r in self.facet_pair_dims],
            "is_simple": self.is_simple,
            "is_semisimple": self.is_semisimple,
            "is_super_kirkman": self.is_super_kirkman,
            "is_2_neighbourly": self.is_2_neighbourly,
            "is_pyramidal": self.is_pyramidal,
            "nonsimple_subgraph": self.nonsimple_subgraph.to_dict(),
        }


def classify(P: IncidencePolytope) -> StructureReport:
    cached = P._cache.get("structure")
    if cached is not None:
        return cached
    if P.dim < 2:
        raise InputError("classification needs dimension at least 2")
    d = P.dim
    spectrum = facet_intersection_spectrum(P)
    ranks = {fp.rank for fp in spectrum}
    n = P.n_vertices
    full = P.full_mask
    report = StructureReport(
        facet_pair_dims=tuple(((fp.i, fp.j), fp.rank) for fp in spectrum),
        is_simple=excess_profile(P).xi == 0,
        is_semisimple=ranks <= {-1, d - 2},
        is_super_kirkman=ranks <= {d - 2},
        is_2_neighbourly=len(graph(P)) == n * (n - 1) // 2,
        is_pyramidal=any((full & ~g).bit_count() == 1 for g in P.facet_masks),
        nonsimple_subgraph=nonsimple_structure(P),
    )
    P._cache["structure"] = report
    return report


# -- family identification ----------------------------------------------------------

UNKNOWN = "Unknown"


@lru_cache(maxsize=None)
def _template(tag: str) -> IncidencePolytope:
    return _BUILDERS[tag.split("(")[0]](tag)


def _args(tag: str) -> List[int]:
    inner = tag[tag.index("(") + 1:-1] if "(" in tag else ""
    return [int(x) for x in inner.split(",") if x]


_BUILDERS: Dict[str, Callable[[str], IncidencePolytope]] = {
    "Simplex": lambda t: C.simplex(*_args(t)),
    "Polygon": lambda t: C.polygon(*_args(t)),
    "Delta": lambda t: C.delta(*_args(t)),
    "M": lambda t: C.m_poly(*_args(t)),
    "FiveWedge": lambda t: C.wedge(C.polygon(5), C.FaceSelector.edge(0, 1)),
    "J": lambda t: C.j_poly(*_args(t)),
    "Cube": lambda t: C.prism(C.polygon(4)),
    "CappedPrism": lambda t: _capped_prism(*_args(t)),
}


def _capped_prism(d: int) -> IncidencePolytope:
    base = C.prism(C.simplex(d - 1))
    return C.stack(base, C.FaceSelector.face(range(d)))


def candidate_tags(d: int, f0: int) -> List[str]:
    """Catalogue entries with dimension ``d`` and ``f0`` vertices, in precedence order."""
    tags = []
    if f0 == d + 1:
        tags.append(f"Simplex({d})")
    if d == 2 and f0 >= 3:
        tags.append(f"Polygon({f0})")
    for a in range(1, d // 2 + 1):
        if (a + 1) * (d - a + 1) == f0:
            tags.append(f"Delta({a},{d - a})")
    k = f0 - d
    if 2 <= k <= d and d - k >= 1:
        tags.append(f"M({k},{d - k})")
    if d == 3 and f0 == 8:
        tags.append("FiveWedge")
    if d >= 3 and f0 == 3 * d - 1:
        tags.append(f"J({d})")
    if d == 3 and f0 == 8:
        tags.append("Cube")
    if d >= 2 and f0 == 2 * d + 1:
        tags.append(f"CappedPrism({d})")
    return tags


def family_tags(P: IncidencePolytope, node_budget: int = DEFAULT_NODE_BUDGET) -> List[str]:
    """All catalogue entries isomorphic to ``P`` (usually zero or one)."""
    out = []
    for tag in candidate_tags(P.dim, P.n_vertices):
        T = _template(tag)
        if invariants(T) == invariants(P) and \
                canonical_form(T, node_budget) == canonical_form(P, node_budget):
            out.append(tag)
    return out


def identify_family(P: IncidencePolytope, node_budget: int = DEFAULT_NODE_BUDGET) -> str:
    tags = family_tags(P, node_budget)
    return tags[0] if tags else UNKNOWN


# -- combined report -------------------------------------------------------------------


def analysis_dict(P: IncidencePolytope, family: Optional[str] = None) -> dict:
    from .lattice import f_vector
    prof = excess_profile(P)
    out = {"provenance": P.provenance, "dim": P.dim, "f_vector": f_vector(P),
           "excess": prof.to_dict()}
    if P.dim >= 2:
        out["structure"] = classify(P).to_dict()
    if family is not None:
        out["family"] = family
    return out
