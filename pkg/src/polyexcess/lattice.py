"""Polytopes given by vertex-facet incidences, and their face lattices.

A polytope is stored purely combinatorially: a claimed dimension, a vertex
count and a list of facets, each facet being a set of vertex indices.  Every
other face is recovered as a closed set of the closure operator
``S -> intersection of the facets containing S``.

Vertex sets are Python ints used as bitsets (see :mod:`polyexcess.bitset`).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import bitset
from .errors import InputError, NonPolytopalError, ResourceLimitError

#: Defaults for the resource caps.  Callers may pass their own values.
MAX_VERTICES = 64
MAX_FACES = 2**20

VertexSet = Union[int, Iterable[int]]


class Realizability(enum.Enum):
    CONSTRUCTED = "constructed"
    ASSERTED = "asserted"


def _as_mask(n: int, vertices: VertexSet) -> int:
    if isinstance(vertices, int):
        mask = vertices
        if mask < 0 or mask >> n:
            raise InputError(f"vertex mask {mask:#x} out of range for {n} vertices")
        return mask
    mask = 0
    for v in vertices:
        if not isinstance(v, int) or v < 0 or v >= n:
            raise InputError(f"vertex index {v!r} out of range 0..{n - 1}")
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class IncidencePolytope:
    """A polytope described by its dimension and facet vertex sets.

    Facets are normalised on construction: each facet is a sorted tuple and
    the facet list is sorted lexicographically.  Duplicates are kept so that
    :func:`polyexcess.sanity.sanity_check` can report them.
    """

    dim: int
    n_vertices: int
    facets: Tuple[Tuple[int, ...], ...]
    vertex_labels: Optional[Tuple[str, ...]] = None
    realizability: Realizability = Realizability.CONSTRUCTED
    provenance: Optional[str] = field(default=None, compare=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 0:
            raise InputError(f"dimension must be a non-negative integer, got {self.dim!r}")
        if not isinstance(self.n_vertices, int) or self.n_vertices < 1:
            raise InputError(f"need at least one vertex, got {self.n_vertices!r}")
        if self.n_vertices > MAX_VERTICES:
            raise ResourceLimitError(
                f"{self.n_vertices} vertices exceeds the cap of {MAX_VERTICES}")
        normalised = []
        for facet in self.facets:
            verts = sorted(set(facet))
            if len(verts) != len(tuple(facet)):
                raise InputError(f"facet {list(facet)} repeats a vertex")
            for v in verts:
                if not isinstance(v, int) or not 0 <= v < self.n_vertices:
                    raise InputError(f"facet vertex {v!r} out of range 0..{self.n_vertices - 1}")
            normalised.append(tuple(verts))
        normalised.sort()
        object.__setattr__(self, "facets", tuple(normalised))
        if self.vertex_labels is not None:
            labels = tuple(str(s) for s in self.vertex_labels)
            if len(labels) != self.n_vertices:
                raise InputError("vertex_labels must have one entry per vertex")
            object.__setattr__(self, "vertex_labels", labels)
        if not isinstance(self.realizability, Realizability):
            object.__setattr__(self, "realizability", Realizability(self.realizability))

    # -- masks ---------------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n_vertices) - 1

    @property
    def facet_masks(self) -> Tuple[int, ...]:
        masks = self._cache.get("facet_masks")
        if masks is None:
            masks = tuple(bitset.from_iter(f) for f in self.facets)
            self._cache["facet_masks"] = masks
        return masks

    @property
    def vertex_facets(self) -> Tuple[int, ...]:
        """Per vertex, the bitmask of facet indices containing it."""
        vf = self._cache.get("vertex_facets")
        if vf is None:
            acc = [0] * self.n_vertices
            for i, facet in enumerate(self.facets):
                for v in facet:
                    acc[v] |= 1 << i
            vf = tuple(acc)
            self._cache["vertex_facets"] = vf
        return vf

    def mask(self, vertices: VertexSet) -> int:
        return _as_mask(self.n_vertices, vertices)

    def closure_mask(self, mask: int) -> int:
        if self.dim == 0:
            return mask
        acc = self.full_mask
        for g in self.facet_masks:
            if mask & g == mask:
                acc &= g
        return acc

    def with_provenance(self, text: Optional[str]) -> "IncidencePolytope":
        return replace(self, provenance=text)

    def __str__(self):
        tag = self.provenance or "polytope"
        return f"{tag} [d={self.dim}, f0={self.n_vertices}, facets={len(self.facets)}]"


def closure(P: IncidencePolytope, S: VertexSet) -> frozenset:
    """Smallest face containing ``S``; the full vertex set if no facet does."""
    return frozenset(bitset.members(P.closure_mask(P.mask(S))))


def is_face(P: IncidencePolytope, S: VertexSet) -> bool:
    m = P.mask(S)
    return P.closure_mask(m) == m


# -- face lattice ------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    vertices: frozenset
    rank: int


@dataclass(frozen=True)
class FaceLattice:
    """All faces of a polytope, graded by rank, with the Hasse diagram.

    ``faces_by_rank[r + 1]`` lists the rank ``r`` faces (as masks) in
    lexicographic order, for ``r`` from -1 to ``dim``.
    """

    dim: int
    faces_by_rank: Tuple[Tuple[int, ...], ...]
    rank_of: Dict[int, int]
    up: Dict[int, Tuple[int, ...]]
    down: Dict[int, Tuple[int, ...]]

    @property
    def f_vector(self) -> List[int]:
        return [len(self.faces_by_rank[r + 1]) for r in range(self.dim)]

    def masks(self, rank: int) -> Tuple[int, ...]:
        return self.faces_by_rank[rank + 1]

    def faces(self, rank: int) -> List[Face]:
        return [Face(frozenset(bitset.members(m)), rank) for m in self.masks(rank)]

    def all_faces(self) -> List[Face]:
        return [f for r in range(-1, self.dim + 1) for f in self.faces(r)]

    def rank(self, vertices) -> int:
        m = vertices if isinstance(vertices, int) else bitset.from_iter(vertices)
        try:
            return self.rank_of[m]
        except KeyError:
            raise InputError(f"{bitset.to_list(m)} is not a face") from None

    def covers(self, vertices) -> List[frozenset]:
        """Faces covering the given face in the Hasse diagram."""
        m = vertices if isinstance(vertices, int) else bitset.from_iter(vertices)
        return [frozenset(bitset.members(x)) for x in self.up[m]]

    def __len__(self):
        return len(self.rank_of)


def _maximal(cands: Iterable[int]) -> List[int]:
    kept: List[int] = []
    for c in sorted(set(cands), key=lambda x: -x.bit_count()):
        if all(c & k != c for k in kept):
            kept.append(c)
    return kept


_CHUNK = 256


def _enumerate_covers(top: int, facets: Sequence[int], max_faces: int):
    """Cover relation of the closed sets reachable from ``top``.

    A face's maximal proper subfaces are the inclusion-maximal sets among its
    intersections with the facets.  Masks fit in 64 bits, so one level of
    the search is processed as a numpy block.  Returns parallel uint64
    arrays ``(upper, lower)`` with ``upper[i]`` covering ``lower[i]``.
    """
    fac = np.array(facets, dtype=np.uint64)
    level = [top]
    seen = {top}
    uppers, lowers = [], []
    while level:
        nxt: List[int] = []
        for start in range(0, len(level), _CHUNK):
            block = np.array(level[start:start + _CHUNK], dtype=np.uint64)[:, None]
            cand = block & fac[None, :]
            proper = cand != block
            # zeroing improper candidates stops them dominating anything
            cand *= proper
            a = cand[:, :, None]
            b = cand[:, None, :]
            strict = ((a & b) == a) & (a != b)
            rows, cols = np.nonzero(proper & ~strict.any(axis=2))
            vals = cand[rows, cols]
            # several facets can cut out the same subface; keep one edge each
            order = np.lexsort((vals, rows))
            rows, vals = rows[order], vals[order]
            first = np.ones(len(rows), dtype=bool)
            first[1:] = (rows[1:] != rows[:-1]) | (vals[1:] != vals[:-1])
            rows, vals = rows[first], vals[first]
            uppers.append(block[rows, 0])
            lowers.append(vals)
            fresh = set(vals.tolist())
            fresh -= seen
            seen |= fresh
            nxt.extend(sorted(fresh))
            if len(seen) > max_faces:
                raise ResourceLimitError(f"face lattice exceeds the cap of {max_faces} faces")
        level = nxt
    return np.concatenate(uppers), np.concatenate(lowers)


@dataclass
class _Raw:
    """Unchecked lattice data: sorted face masks and the cover edges by index."""

    faces: np.ndarray
    parent: np.ndarray
    child: np.ndarray
    rank: np.ndarray
    problems: Dict[str, List[str]]

    @property
    def rank_of(self) -> Dict[int, int]:
        return dict(zip(self.faces.tolist(), self.rank.tolist()))


def _longest_chains(size: int, parent: np.ndarray, child: np.ndarray):
    """Rank of every face as the longest chain up from a face with no subface.

    Returns the ranks and the parents whose covers have unequal ranks.
    """
    rank = np.full(size, -1, dtype=np.int64)
    if not len(parent):
        return rank, np.zeros(0, dtype=np.int64)
    order = np.argsort(parent, kind="stable")
    ps, cs = parent[order], child[order]
    starts = np.flatnonzero(np.r_[True, ps[1:] != ps[:-1]])
    heads = ps[starts]
    # a chain has at most size faces, so this many relaxations suffice
    for _ in range(size + 1):
        new = np.full(size, -1, dtype=np.int64)
        new[heads] = np.maximum.reduceat(rank[cs], starts) + 1
        if np.array_equal(new, rank):
            break
        rank = new
    low = np.minimum.reduceat(rank[cs], starts)
    return rank, heads[low + 1 != rank[heads]]


def _lattice_raw(P: IncidencePolytope, max_faces: int) -> _Raw:
    """Enumerate closed sets top-down through their maximal proper subfaces.

    ``problems`` in the result maps a check name ('graded', 'atoms',
    'coatoms', 'diamond') to messages.
    """
    top = P.full_mask
    if P.dim == 0:
        problems = {} if P.n_vertices == 1 and not P.facets else {
            "graded": ["a 0-polytope is a single vertex with no facets"]}
        one = np.ones(1, dtype=np.int64)
        return _Raw(np.array([0, top], dtype=np.uint64), one, 0 * one,
                    np.array([-1, 0], dtype=np.int64), problems)
    facets = P.facet_masks
    uppers, lowers = _enumerate_covers(top, facets, max_faces)
    faces = np.unique(np.concatenate([uppers, lowers, np.array([top], dtype=np.uint64)]))
    size = len(faces)
    parent = np.searchsorted(faces, uppers).astype(np.int64)
    child = np.searchsorted(faces, lowers).astype(np.int64)
    rank, uneven = _longest_chains(size, parent, child)
    fl = faces.tolist()

    problems: Dict[str, List[str]] = {}

    def note(kind: str, msg: str) -> None:
        problems.setdefault(kind, []).append(msg)

    has_sub = np.zeros(size, dtype=bool)
    has_sub[parent] = True
    for i in np.flatnonzero(~has_sub).tolist():
        if fl[i]:
            note("graded", f"{bitset.to_list(fl[i])} has no proper subface (bottom must be empty)")
    for i in sorted(uneven.tolist(), key=lambda i: (fl[i].bit_count(), fl[i])):
        note("graded", f"covers of {bitset.to_list(fl[i])} have unequal ranks")
    if fl[0] != 0:
        note("graded", "empty set is not a face")
    if rank[-1] != P.dim:
        note("graded", f"longest chain gives dimension {rank[-1]}, claimed {P.dim}")
    for i in np.flatnonzero(rank == 0).tolist():
        if fl[i].bit_count() != 1:
            note("atoms", f"rank-0 face {bitset.to_list(fl[i])} is not a singleton")
    singles = np.array([1 << v for v in range(P.n_vertices)], dtype=np.uint64)
    at = np.minimum(np.searchsorted(faces, singles), size - 1)
    for v in np.flatnonzero((faces[at] != singles) | (rank[at] != 0)).tolist():
        note("atoms", f"vertex {v} is not a rank-0 face")
    if set(faces[child[parent == size - 1]].tolist()) != set(facets):
        note("coatoms", "coatoms differ from the facet list")

    bad = _diamond_violations(size, parent, child)
    if bad:
        x, z, c = min(((fl[x], fl[z], c) for x, z, c in bad),
                      key=lambda t: (t[0].bit_count(), t[1].bit_count(), t))
        problems["diamond"] = [
            f"{len(bad)} rank-2 intervals without exactly two middle faces, e.g. "
            f"[{bitset.to_list(x)}, {bitset.to_list(z)}] has {c}"]
    return _Raw(faces, parent, child, rank, problems)


def _diamond_violations(size: int, parent: np.ndarray, child: np.ndarray):
    """Index pairs two cover steps apart whose interval has other than two middle faces."""
    # parents of each face are contiguous once edges are sorted by child
    up_of = parent[np.argsort(child, kind="stable")]
    deg = np.bincount(child, minlength=size)
    start = np.cumsum(deg) - deg
    reps = deg[parent]
    total = int(reps.sum())
    if total == 0:
        return []
    offset = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
    hi = up_of[np.repeat(start[parent], reps) + offset]
    lo = np.repeat(child, reps)
    keys, counts = np.unique(lo * size + hi, return_counts=True)
    wrong = counts != 2
    return [(k // size, k % size, int(c))
            for k, c in zip(keys[wrong].tolist(), counts[wrong].tolist())]


_REV8 = np.array([int(f"{b:08b}"[::-1], 2) for b in range(256)], dtype=np.uint8)


def _bit_reversed(masks: np.ndarray) -> np.ndarray:
    """Reverse all 64 bits of each mask (vector form of :func:`bitset.antichain_key`)."""
    as_bytes = _REV8[masks.astype("<u8").view(np.uint8).reshape(-1, 8)[:, ::-1]]
    return np.ascontiguousarray(as_bytes).view("<u8").reshape(-1)


def _grouped(keys: np.ndarray, vals: List[int], size: int, fl: List[int]):
    counts = np.bincount(keys, minlength=size)
    bounds = np.concatenate([[0], np.cumsum(counts)]).tolist()
    return {fl[i]: tuple(vals[bounds[i]:bounds[i + 1]]) for i in range(size)}


def _assemble(P: IncidencePolytope, raw: _Raw) -> FaceLattice:
    faces, parent, child, rank = raw.faces, raw.parent, raw.child, raw.rank
    size = len(faces)
    # within a rank, descending bit reversal is lexicographic order of members
    perm = np.lexsort((~_bit_reversed(faces), rank))
    pos = np.empty(size, dtype=np.int64)
    pos[perm] = np.arange(size)
    fl = faces.tolist()
    by_rank = np.bincount(rank + 1, minlength=P.dim + 2)
    ordered = faces[perm].tolist()
    cuts = np.concatenate([[0], np.cumsum(by_rank)]).tolist()
    rows = tuple(tuple(ordered[cuts[r]:cuts[r + 1]]) for r in range(P.dim + 2))
    down_order = np.lexsort((pos[child], parent))
    up_order = np.lexsort((pos[parent], child))
    return FaceLattice(
        dim=P.dim,
        faces_by_rank=rows,
        rank_of=raw.rank_of,
        up=_grouped(child[up_order], faces[parent[up_order]].tolist(), size, fl),
        down=_grouped(parent[down_order], faces[child[down_order]].tolist(), size, fl),
    )


def incidence_problems(P: IncidencePolytope) -> List[str]:
    """Violations of the structural invariants of an incidence polytope."""
    out = []
    d, n = P.dim, P.n_vertices
    if d == 0:
        if n != 1 or P.facets:
            out.append("a 0-polytope must be one vertex with no facets")
        return out
    if d == 1 and (n != 2 or sorted(P.facets) != [(0,), (1,)]):
        out.append("a 1-polytope must be two vertices with two singleton facets")
    masks = P.facet_masks
    if len(set(masks)) != len(masks):
        out.append("duplicate facet")
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            if i != j and a != b and a & b == a:
                out.append(f"facet {list(P.facets[i])} is contained in {list(P.facets[j])}")
                break
    for v, fm in enumerate(P.vertex_facets):
        if fm.bit_count() < d:
            out.append(f"vertex {v} lies in {fm.bit_count()} < {d} facets")
    for f in P.facets:
        if len(f) < d:
            out.append(f"facet {list(f)} has fewer than {d} vertices")
    union = 0
    inter = P.full_mask
    for m in masks:
        union |= m
        inter &= m
    if union != P.full_mask:
        out.append("some vertex lies in no facet")
    if inter:
        out.append(f"vertices {bitset.to_list(inter)} lie in every facet")
    return out


def face_lattice(P: IncidencePolytope, max_faces: Optional[int] = None) -> FaceLattice:
    """Face lattice of ``P``; raises :class:`NonPolytopalError` if malformed."""
    cap = MAX_FACES if max_faces is None else max_faces
    cached = P._cache.get("lattice")
    if cached is not None:
        return cached
    issues = incidence_problems(P)
    if issues:
        raise NonPolytopalError("; ".join(issues))
    raw = _lattice_raw(P, cap)
    if raw.problems:
        raise NonPolytopalError("; ".join(m for msgs in raw.problems.values() for m in msgs))
    lat = _assemble(P, raw)
    P._cache["lattice"] = lat
    return lat


def f_vector(P: IncidencePolytope) -> List[int]:
    return face_lattice(P).f_vector


def face_rank(P: IncidencePolytope, face: VertexSet) -> int:
    """Rank of a face, from the cached lattice when available.

    Without a lattice the rank is found by walking down a chain of largest
    proper facet intersections, which is a maximal chain in a graded lattice.
    """
    m = P.mask(face)
    lat = P._cache.get("lattice")
    if lat is not None:
        try:
            return lat.rank_of[m]
        except KeyError:
            raise InputError(f"{bitset.to_list(m)} is not a face") from None
    if P.closure_mask(m) != m:
        raise InputError(f"{bitset.to_list(m)} is not a face")
    return _rank_walk(P, m)


def _rank_walk(P: IncidencePolytope, m: int) -> int:
    memo = P._cache.setdefault("rank_memo", {0: -1})
    chain = []
    cur = m
    while cur not in memo:
        if cur.bit_count() == 1:
            memo[cur] = 0
            break
        chain.append(cur)
        best = 0
        for g in P.facet_masks:
            x = cur & g
            if x != cur and x.bit_count() > best.bit_count():
                best = x
        cur = best
    r = memo[cur]
    for face in reversed(chain):
        r += 1
        memo[face] = r
    return memo[m]


# -- graph -------------------------------------------------------------------


def _edges_by_criterion(P: IncidencePolytope) -> List[Tuple[int, int]]:
    """{u,v} is an edge iff its common facets are not all shared by a third vertex."""
    vf = P.vertex_facets
    n = P.n_vertices
    if P.dim == 0:
        return []
    edges = []
    for u in range(n):
        fu = vf[u]
        for v in range(u + 1, n):
            common = fu & vf[v]
            if any(common & vf[w] == common for w in range(n) if w != u and w != v):
                continue
            edges.append((u, v))
    return edges


def graph(P: IncidencePolytope) -> List[Tuple[int, int]]:
    """Sorted edge list ``(u, v)`` with ``u < v``."""
    edges = P._cache.get("edges")
    if edges is None:
        lat = P._cache.get("lattice")
        if lat is not None and P.dim >= 1:
            src = lat.masks(1) if P.dim >= 1 else ()
            edges = sorted(tuple(bitset.members(m)) for m in src if m.bit_count() == 2)
        else:
            edges = _edges_by_criterion(P)
        P._cache["edges"] = edges
    return list(edges)


def neighbour_masks(P: IncidencePolytope) -> Tuple[int, ...]:
    nb = P._cache.get("neighbours")
    if nb is None:
        acc = [0] * P.n_vertices
        for u, v in graph(P):
            acc[u] |= 1 << v
            acc[v] |= 1 << u
        nb = tuple(acc)
        P._cache["neighbours"] = nb
    return nb


def degrees(P: IncidencePolytope) -> List[int]:
    return [m.bit_count() for m in neighbour_masks(P)]


# -- derived polytopes --------------------------------------------------------


def _wrap(text: Optional[str]) -> str:
    return text if text else "?"


def dual(P: IncidencePolytope) -> IncidencePolytope:
    """Vertices of the dual are the facets of ``P`` and vice versa."""
    if P.dim < 1:
        raise InputError("dual needs dimension at least 1")
    facets = [tuple(bitset.members(vf)) for vf in P.vertex_facets]
    return IncidencePolytope(P.dim, len(P.facets), tuple(facets),
                             realizability=P.realizability,
                             provenance=f"dual({_wrap(P.provenance)})")


def vertex_figure(P: IncidencePolytope, v: int) -> IncidencePolytope:
    """The (d-1)-polytope whose vertices are the edges at ``v``."""
    if not isinstance(v, int) or not 0 <= v < P.n_vertices:
        raise InputError(f"vertex {v!r} out of range")
    if P.dim < 1:
        raise InputError("vertex figure needs dimension at least 1")
    nbrs = bitset.to_list(neighbour_masks(P)[v])
    index = {u: i for i, u in enumerate(nbrs)}
    facets = []
    if P.dim > 1:
        bit = 1 << v
        for g, verts in zip(P.facet_masks, P.facets):
            if g & bit:
                facets.append(tuple(index[u] for u in verts if u in index))
    return IncidencePolytope(P.dim - 1, len(nbrs), tuple(facets),
                             realizability=P.realizability)


def face_covers(P: IncidencePolytope, m: int) -> List[int]:
    """Faces covering the face ``m`` (minimal closures of ``m`` plus a vertex)."""
    lat = P._cache.get("lattice")
    if lat is not None and m in lat.up:
        return list(lat.up[m])
    cands = {P.closure_mask(m | (1 << w)) for w in range(P.n_vertices) if not m >> w & 1}
    minimal = []
    for c in sorted(cands, key=int.bit_count):
        if all(k & c != k for k in minimal):
            minimal.append(c)
    return sorted(minimal, key=bitset.antichain_key)


def face_figure(P: IncidencePolytope, face: VertexSet) -> IncidencePolytope:
    """Polytope of the lattice interval above a proper nonempty face.

    Vertices correspond to the faces covering ``face``, facets to the facets
    of ``P`` containing it.
    """
    m = P.mask(face)
    if m == 0 or m == P.full_mask:
        raise InputError("face figure needs a proper nonempty face")
    if P.closure_mask(m) != m:
        raise InputError(f"{bitset.to_list(m)} is not a face")
    k = face_rank(P, m)
    covers = face_covers(P, m)
    dim = P.dim - k - 1
    facets = []
    if dim > 0:
        for g in P.facet_masks:
            if g & m == m:
                facets.append(tuple(i for i, c in enumerate(covers) if c & g == c))
    return IncidencePolytope(dim, len(covers), tuple(facets), realizability=P.realizability)


def sub_polytope(P: IncidencePolytope, face: VertexSet) -> IncidencePolytope:
    """A face of ``P`` as a polytope in its own right (vertices renumbered)."""
    m = P.mask(face)
    if P.closure_mask(m) != m or m == 0:
        raise InputError(f"{bitset.to_list(m)} is not a nonempty face")
    k = face_rank(P, m)
    verts = bitset.to_list(m)
    index = {v: i for i, v in enumerate(verts)}
    if k == 0:
        return IncidencePolytope(0, 1, ())
    subs = _maximal(m & g for g in P.facet_masks if m & g != m)
    facets = tuple(tuple(index[v] for v in bitset.members(s)) for s in subs)
    return IncidencePolytope(k, len(verts), facets)


# -- file format --------------------------------------------------------------


def to_dict(P: IncidencePolytope) -> dict:
    out = {"dim": P.dim, "n_vertices": P.n_vertices}
    if P.vertex_labels is not None:
        out["vertex_labels"] = list(P.vertex_labels)
    out["facets"] = [list(f) for f in P.facets]
    out["realizability"] = P.realizability.value
    if P.provenance is not None:
        out["provenance"] = P.provenance
    return out


def from_dict(data: dict) -> IncidencePolytope:
    try:
        return IncidencePolytope(
            dim=data["dim"],
            n_vertices=data["n_vertices"],
            facets=tuple(tuple(f) for f in data["facets"]),
            vertex_labels=data.get("vertex_labels"),
            realizability=Realizability(data.get("realizability", "constructed")),
            provenance=data.get("provenance"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed polytope record: {exc}") from exc


def dumps(P: IncidencePolytope) -> str:
    return json.dumps(to_dict(P)) + "\n"


def loads(text: str) -> IncidencePolytope:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("polytope record must be a JSON object")
    return from_dict(data)


def save(P: IncidencePolytope, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(P), encoding="utf-8")


def load(path: Union[str, Path]) -> IncidencePolytope:
    return loads(Path(path).read_text(encoding="utf-8"))


def from_facets(dim: int, facets: Sequence[Iterable[int]], n_vertices: Optional[int] = None,
                **kwargs) -> IncidencePolytope:
    """Convenience constructor inferring the vertex count from the facets."""
    facets = [tuple(f) for f in facets]
    if n_vertices is None:
        n_vertices = 1 + max((v for f in facets for v in f), default=0)
    return IncidencePolytope(dim, n_vertices, tuple(facets), **kwargs)
