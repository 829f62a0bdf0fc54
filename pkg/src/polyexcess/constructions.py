"""Polytope families and operations as rules on vertex-facet incidences.

Every function returns a new :class:`IncidencePolytope` whose ``provenance``
is the construction expression in the DSL's canonical syntax.  Vertex
numbering conventions (relied on by face selectors):

* ``pyramid``/``free_join``: vertices of the first operand keep their
  indices, the second operand's vertices follow.
* ``prism``: base copy ``0..n-1``, top copy ``n..2n-1``.
* ``product``: vertex ``(i, j)`` has index ``i * n_Q + j``.
* ``wedge``: the first copy keeps the original indices; second copies of
  the vertices outside the wedged face follow in increasing order.
* ``truncate``: surviving vertices are renumbered in order, then one vertex
  per cut edge ``(u, w)`` in lexicographic order.
* ``glue``/``stack``: the first operand keeps its indices, vertices of the
  second operand outside the glued facet follow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import bitset
from math import comb

from . import lattice
from .errors import InputError, ResourceLimitError
from .lattice import IncidencePolytope, Realizability, dual, face_rank, graph
from .sanity import require_sane

__all__ = [
    "FaceSelector", "SelectorKind", "simplex", "polygon", "cyclic", "product",
    "free_join", "pyramid", "prism", "delta", "m_poly", "j_poly", "wedge",
    "truncate", "glue", "stack", "dual", "segment", "point",
]


class SelectorKind(enum.Enum):
    BY_VERTEX_SET = "face"
    FACET_INDEX = "facet"
    VERTEX_INDEX = "vertex"
    EDGE_PAIR = "edge"


@dataclass(frozen=True)
class FaceSelector:
    """Names a face of an operand; resolved against that operand."""

    kind: SelectorKind
    payload: Tuple[int, ...]

    @classmethod
    def facet(cls, i: int) -> "FaceSelector":
        return cls(SelectorKind.FACET_INDEX, (i,))

    @classmethod
    def vertex(cls, i: int) -> "FaceSelector":
        return cls(SelectorKind.VERTEX_INDEX, (i,))

    @classmethod
    def edge(cls, i: int, j: int) -> "FaceSelector":
        return cls(SelectorKind.EDGE_PAIR, (i, j))

    @classmethod
    def face(cls, vertices: Iterable[int]) -> "FaceSelector":
        return cls(SelectorKind.BY_VERTEX_SET, tuple(sorted(set(vertices))))

    def text(self) -> str:
        return f"{self.kind.value}({','.join(map(str, self.payload))})"

    def resolve(self, P: IncidencePolytope) -> int:
        """Vertex mask of the selected face; :class:`InputError` if none."""
        kind, args = self.kind, self.payload
        if kind is SelectorKind.FACET_INDEX:
            (i,) = args
            if not 0 <= i < len(P.facets):
                raise InputError(f"facet({i}) out of range: polytope has {len(P.facets)} facets")
            return P.facet_masks[i]
        m = P.mask(args)
        if kind is SelectorKind.VERTEX_INDEX:
            return m
        if kind is SelectorKind.EDGE_PAIR:
            if len(set(args)) != 2 or P.closure_mask(m) != m:
                raise InputError(f"edge{args} is not an edge")
            return m
        if P.closure_mask(m) != m:
            raise InputError(f"face({','.join(map(str, args))}) is not a closed vertex set")
        return m


Selector = Union[FaceSelector, Iterable[int]]


def _selector(sel: Selector) -> FaceSelector:
    return sel if isinstance(sel, FaceSelector) else FaceSelector.face(sel)


def _prov(P: IncidencePolytope) -> str:
    return P.provenance or "?"


def _real(*ps: IncidencePolytope) -> Realizability:
    if any(p.realizability is Realizability.ASSERTED for p in ps):
        return Realizability.ASSERTED
    return Realizability.CONSTRUCTED


def _facets_for_join(P: IncidencePolytope) -> List[int]:
    # the empty face plays the role of the facet of a point
    return list(P.facet_masks) if P.dim > 0 else [0]


def _check_size(n: int) -> None:
    # refuse before allocating anything proportional to n
    if n > lattice.MAX_VERTICES:
        raise ResourceLimitError(f"{n} vertices exceeds the cap of {lattice.MAX_VERTICES}")


def _make(dim, n, masks, prov, real=Realizability.CONSTRUCTED) -> IncidencePolytope:
    facets = tuple(tuple(bitset.members(m)) for m in masks)
    return IncidencePolytope(dim, n, facets, realizability=real, provenance=prov)


# -- leaves ---------------------------------------------------------------------


def simplex(d: int) -> IncidencePolytope:
    if d < 0:
        raise InputError("simplex needs d >= 0")
    _check_size(d + 1)
    n = d + 1
    full = (1 << n) - 1
    masks = [full ^ (1 << i) for i in range(n)] if d > 0 else []
    return _make(d, n, masks, f"simplex({d})")


def point() -> IncidencePolytope:
    return simplex(0)


def segment() -> IncidencePolytope:
    return simplex(1)


def polygon(n: int) -> IncidencePolytope:
    if n < 3:
        raise InputError("polygon needs at least 3 vertices")
    _check_size(n)
    masks = [(1 << i) | (1 << ((i + 1) % n)) for i in range(n)]
    return _make(2, n, masks, f"polygon({n})")


def _gale_subsets(d: int, n: int) -> List[int]:
    """d-subsets of range(n) in which every interior block has even length."""
    out = []

    def walk(i: int, chosen: int, count: int, block: int, touches_start: bool):
        if count > d:
            return
        if i == n:
            if count == d:
                out.append(chosen)
            return
        if n - i < d - count:
            return
        walk(i + 1, chosen | (1 << i), count + 1, block + 1, touches_start if block else i == 0)
        if block and not touches_start and block % 2:
            return
        walk(i + 1, chosen, count, 0, False)

    walk(0, 0, 0, 0, False)
    return out


def cyclic(d: int, n: int) -> IncidencePolytope:
    """Cyclic polytope with facets from Gale's evenness condition."""
    if d < 2 or n < d + 1:
        raise InputError("cyclic(d, n) needs n >= d + 1 >= 3")
    _check_size(n)
    h = d // 2
    count = n * comb(n - h, h) // (n - h) if d % 2 == 0 else 2 * comb(n - h - 1, h)
    if count > lattice.MAX_FACES:
        raise ResourceLimitError(f"cyclic({d},{n}) has {count} facets, over the face cap")
    return _make(d, n, _gale_subsets(d, n), f"cyclic({d},{n})")


# -- products and joins ------------------------------------------------------------


def product(P: IncidencePolytope, Q: IncidencePolytope) -> IncidencePolytope:
    if P.dim < 1 or Q.dim < 1:
        raise InputError("product needs both factors of dimension at least 1")
    _check_size(P.n_vertices * Q.n_vertices)
    nq = Q.n_vertices
    full_q = (1 << nq) - 1
    stride_rows = [full_q << (i * nq) for i in range(P.n_vertices)]
    masks = []
    for f in P.facets:
        m = 0
        for i in f:
            m |= stride_rows[i]
        masks.append(m)
    for g in Q.facet_masks:
        m = 0
        for i in range(P.n_vertices):
            m |= g << (i * nq)
        masks.append(m)
    return _make(P.dim + Q.dim, P.n_vertices * nq, masks,
                 f"product({_prov(P)},{_prov(Q)})", _real(P, Q))


def free_join(P: IncidencePolytope, Q: IncidencePolytope) -> IncidencePolytope:
    n = P.n_vertices
    vp = (1 << n) - 1
    vq = ((1 << Q.n_vertices) - 1) << n
    masks = [vp | (g << n) for g in _facets_for_join(Q)]
    masks += [f | vq for f in _facets_for_join(P)]
    return _make(P.dim + Q.dim + 1, n + Q.n_vertices, masks,
                 f"free_join({_prov(P)},{_prov(Q)})", _real(P, Q))


def pyramid(P: IncidencePolytope, k: int = 1) -> IncidencePolytope:
    """k-fold pyramid; the apexes are vertices ``n .. n+k-1``."""
    if k < 1:
        raise InputError("pyramid needs k >= 1")
    _check_size(P.n_vertices + k)
    out = free_join(P, simplex(k - 1))
    suffix = "" if k == 1 else f",{k}"
    return out.with_provenance(f"pyramid({_prov(P)}{suffix})")


def prism(P: IncidencePolytope) -> IncidencePolytope:
    if P.dim < 1:
        raise InputError("prism needs dimension at least 1")
    n = P.n_vertices
    _check_size(2 * n)
    base = (1 << n) - 1
    masks = [base, base << n] + [g | (g << n) for g in P.facet_masks]
    return _make(P.dim + 1, 2 * n, masks, f"prism({_prov(P)})", _real(P))


def delta(m: int, n: int) -> IncidencePolytope:
    """Product of an m-simplex and an n-simplex."""
    if m < 1 or n < 1:
        raise InputError("delta(m, n) needs m, n >= 1")
    _check_size((m + 1) * (n + 1))
    return product(simplex(m), simplex(n)).with_provenance(f"delta({m},{n})")


def m_poly(k: int, m: int) -> IncidencePolytope:
    """(m)-fold pyramid over the simplicial k-prism; dimension k + m."""
    if k < 1 or m < 0:
        raise InputError("M(k, m) needs k >= 1 and m >= 0")
    _check_size(2 * k + m)
    base = prism(simplex(k - 1))
    out = pyramid(base, m) if m else base
    return out.with_provenance(f"M({k},{m})")


def j_poly(d: int) -> IncidencePolytope:
    """Simplicial d-prism with vertex 0 truncated."""
    if d < 2:
        raise InputError("J(d) needs d >= 2")
    _check_size(3 * d - 1)
    out = truncate(prism(simplex(d - 1)), FaceSelector.vertex(0))
    return out.with_provenance(f"J({d})")


# -- face operations ---------------------------------------------------------------


def _proper_face(P: IncidencePolytope, sel: Selector) -> Tuple[FaceSelector, int]:
    fs = _selector(sel)
    m = fs.resolve(P)
    if m == 0 or m == P.full_mask:
        raise InputError(f"{fs.text()} is not a proper nonempty face")
    return fs, m


def wedge(P: IncidencePolytope, sel: Selector) -> IncidencePolytope:
    """Wedge over a proper face: two copies of ``P`` meeting in that face."""
    fs, F = _proper_face(P, sel)
    n = P.n_vertices
    outside = [v for v in range(n) if not F >> v & 1]
    twin = {v: n + i for i, v in enumerate(outside)}

    def doubled(mask: int) -> int:
        m = mask
        for v in bitset.members(mask & ~F):
            m |= 1 << twin[v]
        return m

    masks = [P.full_mask, doubled(P.full_mask) & ~(P.full_mask & ~F)]
    for g in P.facet_masks:
        if g != F:
            masks.append(doubled(g))
    return _make(P.dim + 1, n + len(outside), masks,
                 f"wedge({_prov(P)},{fs.text()})", _real(P))


def truncate(P: IncidencePolytope, sel: Selector) -> IncidencePolytope:
    """Cut off a proper face with a hyperplane separating it from the rest."""
    fs, F = _proper_face(P, sel)
    kept = [v for v in range(P.n_vertices) if not F >> v & 1]
    index = {v: i for i, v in enumerate(kept)}
    cuts = sorted((u, w) if F >> u & 1 else (w, u)
                  for u, w in graph(P) if (F >> u & 1) != (F >> w & 1))
    base = len(kept)
    masks = [((1 << len(cuts)) - 1) << base]
    for g in P.facet_masks:
        if g & ~F == 0:
            continue
        m = 0
        for v in bitset.members(g & ~F):
            m |= 1 << index[v]
        for i, (u, w) in enumerate(cuts):
            if g >> u & 1 and g >> w & 1:
                m |= 1 << (base + i)
        masks.append(m)
    masks = [m for m in masks if not any(m != o and m & o == m for o in masks)]
    return _make(P.dim, base + len(cuts), masks,
                 f"truncate({_prov(P)},{fs.text()})", _real(P))


def _simplex_facet(P: IncidencePolytope, sel: Selector, which: str) -> Tuple[FaceSelector, int]:
    fs = _selector(sel)
    m = fs.resolve(P)
    if m not in P.facet_masks:
        raise InputError(f"{which}: {fs.text()} is not a facet")
    if m.bit_count() != P.dim:
        raise InputError(f"{which}: {fs.text()} is not a simplex facet")
    return fs, m


def glue(P1: IncidencePolytope, sel1: Selector, P2: IncidencePolytope, sel2: Selector,
         mapping: Optional[Sequence[int]] = None,
         merges: Sequence[Tuple[int, int]] = ()) -> IncidencePolytope:
    """Graph-connected sum of two d-polytopes along simplex facets.

    ``mapping[i]`` is the vertex of the second facet identified with the
    i-th smallest vertex of the first.  Each merge ``(i, j)`` joins facet
    ``i`` of ``P1`` and facet ``j`` of ``P2`` into one facet; both must meet
    the glued simplex in corresponding ridges of it.  The result is flagged
    asserted and must pass the sanity checks.
    """
    d = P1.dim
    if P2.dim != d or d < 2:
        raise InputError("glue needs two polytopes of the same dimension d >= 2")
    fs1, F1 = _simplex_facet(P1, sel1, "first facet")
    fs2, F2 = _simplex_facet(P2, sel2, "second facet")
    f1_verts = bitset.to_list(F1)
    f2_verts = bitset.to_list(F2)
    if mapping is None:
        pairing = dict(zip(f2_verts, f1_verts))
    else:
        mapping = list(mapping)
        if sorted(mapping) != f2_verts:
            raise InputError(f"map {mapping} is not a bijection onto {f2_verts}")
        pairing = {y: x for x, y in zip(f1_verts, mapping)}
    n1 = P1.n_vertices
    extra = [v for v in range(P2.n_vertices) if not F2 >> v & 1]
    image = {v: n1 + i for i, v in enumerate(extra)}
    image.update(pairing)

    def carry(mask: int) -> int:
        m = 0
        for v in bitset.members(mask):
            m |= 1 << image[v]
        return m

    used1, used2 = set(), set()
    merged = []
    for i, j in merges:
        if not (0 <= i < len(P1.facets) and 0 <= j < len(P2.facets)):
            raise InputError(f"merge ({i},{j}) refers to a missing facet")
        g1, g2 = P1.facet_masks[i], P2.facet_masks[j]
        if g1 == F1 or g2 == F2 or i in used1 or j in used2:
            raise InputError(f"merge ({i},{j}) reuses a facet or the glued facet")
        r1, r2 = g1 & F1, carry(g2 & F2)
        if r1 != r2 or r1.bit_count() != d - 1:
            raise InputError(f"merge ({i},{j}): facets do not share a ridge of the glued simplex")
        used1.add(i)
        used2.add(j)
        merged.append(g1 | carry(g2))
    masks = [g for i, g in enumerate(P1.facet_masks) if g != F1 and i not in used1]
    masks += [carry(g) for j, g in enumerate(P2.facet_masks) if g != F2 and j not in used2]
    masks += merged

    text = f"glue({_prov(P1)},{fs1.text()},{_prov(P2)},{fs2.text()}"
    if mapping is not None:
        text += f",map=[{','.join(map(str, mapping))}]"
    if merges:
        text += ",merge=[" + ",".join(f"({i},{j})" for i, j in merges) + "]"
    out = _make(d, n1 + len(extra), masks, text + ")", Realizability.ASSERTED)
    return require_sane(out)


def stack(P: IncidencePolytope, sel: Selector) -> IncidencePolytope:
    """Stack a new vertex (index ``n``) beyond a simplex facet."""
    if P.dim < 2:
        raise InputError("stack needs dimension at least 2")
    fs, F = _simplex_facet(P, sel, "stack")
    apex = 1 << P.n_vertices
    masks = [g for g in P.facet_masks if g != F]
    masks += [(F ^ (1 << v)) | apex for v in bitset.members(F)]
    return _make(P.dim, P.n_vertices + 1, masks, f"stack({_prov(P)},{fs.text()})", _real(P))
